#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace nlc::verify {

struct Point {
    double u = 0.0;
    double v = 0.0;
};

struct Window {
    double u_lo = -1.0, u_hi = 1.0;
    double v_lo = -1.0, v_hi = 1.0;

    bool empty() const { return !(u_hi > u_lo) || !(v_hi > v_lo); }
    /// Larger side length; vertex tolerances scale with it.
    double scale() const;
};

struct LevelSetOptions {
    std::size_t grid_u = 256;  // cells along u, >= 32
    std::size_t grid_v = 256;  // cells along v, >= 32
    bool newton_polish = false;
    std::optional<Point> initial;
};

/// One connected piece of the level set, as an ordered chain of vertices.
struct LevelSetPolyline {
    std::vector<Point> vertices;
    bool closed = false;
    bool inside_stripe = false;           // every vertex within |u| <= sqrt(2E) (one cell of slack)
    bool contains_initial_point = false;  // the given initial point lies on this piece

    bool accessible() const { return inside_stripe && contains_initial_point; }
};

/// Marching squares with linear edge interpolation for f(u, v) = 0.
/// Saddle cells are split by the cell-centre average.
std::vector<std::vector<Point>> marching_squares(const std::function<double(double, double)>& f, const Window& w,
                                                 std::size_t grid_u, std::size_t grid_v, std::vector<bool>* closed,
                                                 bool newton_polish = false);

/// psi_{E,B}(u, v) = K over the window, with stripe and initial-point flags.
/// An empty window gives an empty list; grids below 32x32 throw std::invalid_argument.
std::vector<LevelSetPolyline> level_set(double E, double B, double K, const Window& w, const LevelSetOptions& opt = {});

}  // namespace nlc::verify

#include "nlc/levelset.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <stdexcept>

#include "nlc/systems/maxwell_bloch.hpp"

namespace nlc::verify {

double Window::scale() const { return std::max(u_hi - u_lo, v_hi - v_lo); }

std::vector<std::vector<Point>> marching_squares(const std::function<double(double, double)>& f, const Window& w,
                                                 std::size_t nu, std::size_t nv, std::vector<bool>* closed,
                                                 bool newton_polish) {
    std::vector<std::vector<Point>> chains;
    if (closed) closed->clear();
    if (w.empty()) return chains;
    if (nu < 32 || nv < 32) throw std::invalid_argument("level-set grid must be at least 32x32");

    const double du = (w.u_hi - w.u_lo) / static_cast<double>(nu);
    const double dv = (w.v_hi - w.v_lo) / static_cast<double>(nv);
    auto u_at = [&](std::size_t i) { return i == nu ? w.u_hi : w.u_lo + du * static_cast<double>(i); };
    auto v_at = [&](std::size_t j) { return j == nv ? w.v_hi : w.v_lo + dv * static_cast<double>(j); };

    std::vector<double> val((nu + 1) * (nv + 1));
    auto F = [&](std::size_t i, std::size_t j) -> double& { return val[j * (nu + 1) + i]; };
    for (std::size_t j = 0; j <= nv; ++j)
        for (std::size_t i = 0; i <= nu; ++i) F(i, j) = f(u_at(i), v_at(j));

    // Edge ids: horizontal edges first, then vertical.
    const std::size_t n_h = nu * (nv + 1);
    auto h_edge = [&](std::size_t i, std::size_t j) { return j * nu + i; };
    auto v_edge = [&](std::size_t i, std::size_t j) { return n_h + j * (nu + 1) + i; };
    const std::size_t n_edges = n_h + (nu + 1) * nv;

    std::vector<long> vertex_of(n_edges, -1);
    std::vector<Point> vertices;
    std::vector<std::array<long, 2>> adj;

    auto above = [](double x) { return x >= 0.0; };
    auto crossing = [&](std::size_t edge) -> long {
        if (vertex_of[edge] >= 0) return vertex_of[edge];
        std::size_t ia, ja, ib, jb;
        if (edge < n_h) {
            ja = jb = edge / nu;
            ia = edge % nu;
            ib = ia + 1;
        } else {
            const std::size_t e = edge - n_h;
            ia = ib = e % (nu + 1);
            ja = e / (nu + 1);
            jb = ja + 1;
        }
        const double fa = F(ia, ja), fb = F(ib, jb);
        const double s = fa / (fa - fb);
        Point p{u_at(ia) + s * (u_at(ib) - u_at(ia)), v_at(ja) + s * (v_at(jb) - v_at(ja))};
        if (newton_polish) {
            const double hu = 1e-7 * w.scale(), hv = 1e-7 * w.scale();
            const double fp = f(p.u, p.v);
            const double gu = (f(p.u + hu, p.v) - f(p.u - hu, p.v)) / (2 * hu);
            const double gv = (f(p.u, p.v + hv) - f(p.u, p.v - hv)) / (2 * hv);
            const double g2 = gu * gu + gv * gv;
            if (g2 > 0.0) {
                const Point q{p.u - fp * gu / g2, p.v - fp * gv / g2};
                // Keep the polished point near its edge.
                if (std::abs(q.u - p.u) <= du && std::abs(q.v - p.v) <= dv) p = q;
            }
        }
        vertex_of[edge] = static_cast<long>(vertices.size());
        vertices.push_back(p);
        adj.push_back({-1, -1});
        return vertex_of[edge];
    };
    auto link = [&](std::size_t ea, std::size_t eb) {
        const long a = crossing(ea), b = crossing(eb);
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            auto& slot = adj[static_cast<std::size_t>(x)];
            if (slot[0] < 0) slot[0] = y;
            else slot[1] = y;
        }
    };

    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < nu; ++i) {
            const double f00 = F(i, j), f10 = F(i + 1, j), f11 = F(i + 1, j + 1), f01 = F(i, j + 1);
            const bool b00 = above(f00), b10 = above(f10), b11 = above(f11), b01 = above(f01);
            std::vector<std::size_t> cut;
            const std::size_t bottom = h_edge(i, j), right = v_edge(i + 1, j), top = h_edge(i, j + 1), left = v_edge(i, j);
            if (b00 != b10) cut.push_back(bottom);
            if (b10 != b11) cut.push_back(right);
            if (b11 != b01) cut.push_back(top);
            if (b01 != b00) cut.push_back(left);
            if (cut.size() == 2) {
                link(cut[0], cut[1]);
            } else if (cut.size() == 4) {
                const bool centre = above(0.25 * (f00 + f10 + f11 + f01));
                if (centre == b00) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(bottom, left);
                    link(right, top);
                }
            }
        }
    }

    std::vector<bool> seen(vertices.size(), false);
    auto walk = [&](std::size_t start, bool is_closed) {
        std::vector<Point> chain;
        long prev = -1, cur = static_cast<long>(start);
        while (cur >= 0 && !seen[static_cast<std::size_t>(cur)]) {
            seen[static_cast<std::size_t>(cur)] = true;
            chain.push_back(vertices[static_cast<std::size_t>(cur)]);
            const auto& nb = adj[static_cast<std::size_t>(cur)];
            const long next = nb[0] != prev ? nb[0] : nb[1];
            prev = cur;
            cur = next;
        }
        if (is_closed && !chain.empty()) chain.push_back(chain.front());
        chains.push_back(std::move(chain));
        if (closed) closed->push_back(is_closed);
    };
    for (std::size_t v = 0; v < vertices.size(); ++v)
        if (!seen[v] && (adj[v][0] < 0 || adj[v][1] < 0)) walk(v, false);
    for (std::size_t v = 0; v < vertices.size(); ++v)
        if (!seen[v]) walk(v, true);
    return chains;
}

namespace {

double distance_to_chain(const Point& p, const std::vector<Point>& chain) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const Point& a = chain[i];
        const Point& b = i + 1 < chain.size() ? chain[i + 1] : chain[i];
        const double eu = b.u - a.u, ev = b.v - a.v;
        const double len2 = eu * eu + ev * ev;
        double s = len2 > 0.0 ? ((p.u - a.u) * eu + (p.v - a.v) * ev) / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        best = std::min(best, std::hypot(p.u - (a.u + s * eu), p.v - (a.v + s * ev)));
    }
    return best;
}

}  // namespace

std::vector<LevelSetPolyline> level_set(double E, double B, double K, const Window& w, const LevelSetOptions& opt) {
    std::vector<LevelSetPolyline> out;
    if (w.empty()) return out;
    std::vector<bool> closed;
    const auto chains = marching_squares([&](double u, double v) { return systems::mb_psi(E, B, u, v) - K; }, w,
                                         opt.grid_u, opt.grid_v, &closed, opt.newton_polish);
    const double du = (w.u_hi - w.u_lo) / static_cast<double>(opt.grid_u);
    const double dv = (w.v_hi - w.v_lo) / static_cast<double>(opt.grid_v);
    const double stripe = std::sqrt(std::max(0.0, 2.0 * E));
    for (std::size_t c = 0; c < chains.size(); ++c) {
        LevelSetPolyline pl;
        pl.vertices = chains[c];
        pl.closed = closed[c];
        pl.inside_stripe = std::all_of(pl.vertices.begin(), pl.vertices.end(),
                                       [&](const Point& p) { return std::abs(p.u) <= stripe + du; });
        if (opt.initial) pl.contains_initial_point = distance_to_chain(*opt.initial, pl.vertices) <= 2.0 * std::hypot(du, dv);
        out.push_back(std::move(pl));
    }
    return out;
}

}  // namespace nlc::verify

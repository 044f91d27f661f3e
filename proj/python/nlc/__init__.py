"""Nonlocal constants of motion: simulation, verification suites and level sets."""

from ._nlc import (
    ConfigError,
    criteria_for,
    first_integrals,
    level_set,
    phi,
    psi,
    run_suite,
    simulate,
)


def simulate_kw(scenario="", **overrides):
    """simulate() with overrides as keyword arguments; dots in keys become '__'."""
    def text(v):
        if isinstance(v, (list, tuple)):
            return ",".join(repr(float(x)) for x in v)
        return str(v)

    keys = {k.replace("__", "."): text(v) for k, v in overrides.items()}
    return simulate(scenario, keys)


__all__ = [
    "ConfigError",
    "criteria_for",
    "first_integrals",
    "level_set",
    "phi",
    "psi",
    "run_suite",
    "simulate",
    "simulate_kw",
]

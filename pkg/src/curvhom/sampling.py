"""Reproducible random draws used by the verification suite and tests.

Random members of the canonical family 0.5*|x|^2 + theta(x1) keep the
coefficients of theta small enough that |theta''| < 1 on [-1, 1]^p, so the
positive-definiteness hypothesis holds at every sampled point.
"""

from __future__ import annotations

from .field import canonical_f, parse_field
from .geometry import Point

#: Default seed for every randomized run (CLI flag and CURVHOM_SEED override).
DEFAULT_SEED = 1729


def random_theta_source(rng, scale=0.08):
    a, b, c, d = (float(v) for v in rng.uniform(-scale, scale, 4))
    return f"{a!r}*sin(x1)+{b!r}*cos(x1)+{c!r}*x1^2+{d!r}*x1^3"


def random_theta(rng, scale=0.08):
    return parse_field(random_theta_source(rng, scale), 1)


def random_canonical_field(rng, p, scale=0.08):
    return canonical_f(random_theta(rng, scale), p)


def random_point(rng, p, box=1.0):
    return Point.of(rng.uniform(-box, box, p), rng.uniform(-box, box, p))

"""The curvature-homogeneity obstruction alpha.

alpha(P) is the sum of the squared components of nabla R over an admissible
basis at P.  It does not depend on which admissible basis is used, and on a
locally homogeneous space it is constant; a grid scan that finds alpha
varying therefore certifies the metric is NOT locally homogeneous.  The
converse direction is never claimed: a constant scan is reported as
inconclusive.

For the family 0.5*|x|^2 + theta(x1) the invariant has the closed form

    alpha = 4 (p-1) theta'''(x1)^2 / (1 + theta''(x1))^3,

which the brute-force five-index sum must reproduce.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import expr, frames, geometry
from .errors import DomainError, HypothesisError
from .field import jet3

#: Relative spread above which a scan verdict is "not locally homogeneous".
CONSTANCY_THRESHOLD = 1e-6

#: Floor for the spread denominator so that all-zero scans report spread 0.
SPREAD_FLOOR = 1e-12

VERDICT_NOT_HOMOGENEOUS = "NOT locally homogeneous (alpha non-constant)"
VERDICT_INCONCLUSIVE = "inconclusive (alpha constant on sampled set)"


def alpha(field, point, basis=None):
    """Brute-force invariant: square-sum of nabla R over an admissible basis."""
    if basis is None:
        basis = frames.admissible_basis(field, point)
    u = basis.x_parts
    t = geometry.nabla_curvature(field, point)
    tb = np.einsum("abcde,ai,bj,ck,dl,en->ijkln", t, u, u, u, u, u,
                   optimize=True)
    return float(np.sum(tb * tb))


def alpha_closed_form(theta, x1, p):
    """4 (p-1) theta'''^2 / (1 + theta'')^3 for the canonical family."""
    if expr.max_var_index(theta.root) > 1:
        raise ValueError("theta must depend on x1 only")
    at = np.zeros(theta.p)
    at[0] = x1
    jet = jet3(theta, at)
    t2 = jet.hess[0, 0]
    t3 = jet.third[0, 0, 0]
    denom = 1.0 + t2
    if denom <= 0.0:
        raise HypothesisError(
            f"1 + theta''(x1) = {denom:.6g} must be positive "
            f"(got x1={float(x1)!r})"
        )
    return 4.0 * (p - 1) * t3 * t3 / denom**3


def relative_spread(values, floor=SPREAD_FLOOR):
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return 0.0
    lo, hi = values.min(), values.max()
    return float((hi - lo) / max(np.abs(values).max(), floor))


@dataclass(frozen=True)
class AlphaScan:
    grid: tuple                 # per-axis (start, stop, count)
    points: np.ndarray          # (n, p) evaluated x-points
    alphas: np.ndarray          # (n,)
    threshold: float = CONSTANCY_THRESHOLD
    skipped: list = dataclass_field(default_factory=list)  # (x-point, reason)

    @property
    def summary(self):
        if len(self.alphas) == 0:
            return {"min": None, "max": None, "spread": 0.0,
                    "verdict": VERDICT_INCONCLUSIVE,
                    "skipped": len(self.skipped)}
        spread = relative_spread(self.alphas)
        verdict = (VERDICT_NOT_HOMOGENEOUS if spread > self.threshold
                   else VERDICT_INCONCLUSIVE)
        return {
            "min": float(self.alphas.min()),
            "max": float(self.alphas.max()),
            "spread": spread,
            "verdict": verdict,
            "skipped": len(self.skipped),
        }

    @property
    def verdict(self):
        return self.summary["verdict"]


def grid_points(grid, p):
    """Cartesian grid over the x-axes: ``grid`` is a sequence of
    (start, stop, count) triples, one per leading axis; remaining axes are
    pinned at 0.  Ordering is lexicographic with x1 outermost."""
    grid = tuple(grid)
    if len(grid) > p:
        raise ValueError(f"grid specifies {len(grid)} axes but p={p}")
    axes = []
    for start, stop, count in grid:
        if count < 1:
            raise ValueError("grid counts must be >= 1")
        axes.append(np.linspace(start, stop, count))
    axes.extend(np.zeros(1) for _ in range(p - len(grid)))
    return np.array([list(combo) for combo in itertools.product(*axes)])


def scan_alpha(field, grid, threshold=CONSTANCY_THRESHOLD):
    """Evaluate alpha over a grid.  Points where the hypothesis fails or the
    field leaves its domain are recorded and skipped, never fatal.  The
    result is independent of evaluation order."""
    pts = grid_points(grid, field.p)
    kept, alphas, skipped = [], [], []
    for x in pts:
        point = geometry.Point.of(x)
        try:
            alphas.append(alpha(field, point))
            kept.append(x)
        except (DomainError, HypothesisError) as err:
            skipped.append((x.tolist(), str(err)))
    return AlphaScan(
        grid=tuple(tuple(g) for g in grid),
        points=np.array(kept) if kept else np.empty((0, field.p)),
        alphas=np.array(alphas),
        threshold=threshold,
        skipped=skipped,
    )


def scan_csv_lines(scan, p):
    """CSV rows: header x1,...,xp,alpha then one row per evaluated point,
    with round-trip decimal formatting."""
    yield ",".join([f"x{i}" for i in range(1, p + 1)] + ["alpha"])
    for x, a in zip(scan.points, scan.alphas):
        yield ",".join([repr(float(v)) for v in x] + [repr(float(a))])

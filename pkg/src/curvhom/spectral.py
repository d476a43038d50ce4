"""Curvature operators and sampled constancy of their spectral type.

The Jacobi, covariant-derivative (Szabo-type), and skew-symmetric curvature
operators are endomorphisms of the tangent space obtained by contracting R
or nabla R against unit vectors or oriented orthonormal pairs; the
higher-order Jacobi operator of a non-degenerate subspace is the signed sum
of Jacobi operators over an orthonormal basis.

A numerical surrogate for the Jordan normal form fingerprints each operator
by its eigenvalue multiset (quantized at a tolerance, so fingerprint
equality is a true equivalence relation) together with the rank sequence of
its powers.  ``sample_constancy`` draws unit vectors / pairs / bases of a
fixed causal type and counts distinct fingerprints: the positive constancy
claims predict exactly one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import HypothesisError
from .field import jet3

_MAX_RESAMPLE = 10_000

KINDS = (
    "jacobi-spacelike", "jacobi-timelike",
    "szabo-spacelike", "szabo-timelike",
    "skew-spacelike", "skew-timelike",
    "higher-jacobi",
)


def _x_part(vector, p):
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (2 * p,):
        raise ValueError(f"expected a tangent vector of length {2 * p}")
    return vector, vector[:p]


def _lower_to_operator(field, point, lowered):
    """Raise the first index: the operator is g^-1 applied to the lowered
    bilinear form (nonzero only on the xx-block, so the product keeps exact
    zero blocks and exact nilpotency)."""
    return geometry.metric_inverse_at(field, point) @ lowered


def jacobi(field, point, x_vector):
    """J(X): g(J(X)U, V) = R(U, X, X, V)."""
    p = field.p
    _, a = _x_part(x_vector, p)
    r = geometry.curvature_gauss(jet3(field, point.x).hess)
    lowered = np.zeros((2 * p, 2 * p))
    lowered[:p, :p] = np.einsum("ujkv,j,k->uv", r, a, a)
    return _lower_to_operator(field, point, lowered)


def szabo(field, point, x_vector):
    """S(X): g(S(X)U, V) = nabla R(U, X, X, V; X)."""
    p = field.p
    _, a = _x_part(x_vector, p)
    t = geometry.nabla_curvature(field, point)
    lowered = np.zeros((2 * p, 2 * p))
    lowered[:p, :p] = np.einsum("ujkvn,j,k,n->uv", t, a, a, a)
    return _lower_to_operator(field, point, lowered)


def skew_curv(field, point, y_vector, z_vector, tol=1e-10):
    """Skew-symmetric curvature operator of the oriented plane spanned by an
    orthonormal pair {Y, Z} (both spacelike or both timelike)."""
    p = field.p
    g = geometry.metric_at(field, point)
    y, ya = _x_part(y_vector, p)
    z, za = _x_part(z_vector, p)
    gyy = y @ g @ y
    gzz = z @ g @ z
    gyz = y @ g @ z
    if abs(abs(gyy) - 1) > tol or abs(abs(gzz) - 1) > tol or abs(gyz) > tol \
            or gyy * gzz < 0:
        raise HypothesisError(
            "skew operator needs an orthonormal pair of a definite causal "
            f"type: g(Y,Y)={gyy:.3g}, g(Z,Z)={gzz:.3g}, g(Y,Z)={gyz:.3g}"
        )
    r = geometry.curvature_gauss(jet3(field, point.x).hess)
    lowered = np.zeros((2 * p, 2 * p))
    lowered[:p, :p] = np.einsum("ijuv,i,j->uv", r, ya, za)
    return _lower_to_operator(field, point, lowered)


def higher_jacobi(field, point, vectors, tol=1e-8):
    """Signed sum of Jacobi operators over a g-orthonormal basis of a
    non-degenerate subspace; well defined independently of the basis."""
    p = field.p
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    g = geometry.metric_at(field, point)
    gram = vectors @ g @ vectors.T
    signs = np.sign(np.diag(gram))
    off = gram - np.diag(np.diag(gram))
    if np.abs(off).max() > tol or np.abs(np.abs(np.diag(gram)) - 1).max() > tol:
        raise HypothesisError(
            "higher-order Jacobi operator needs a g-orthonormal basis "
            f"(gram residual {np.abs(off).max():.3g}, "
            f"norms {np.diag(gram)})"
        )
    total = np.zeros((2 * p, 2 * p))
    for sign, vec in zip(signs, vectors):
        total = total + sign * jacobi(field, point, vec)
    return total


@dataclass(frozen=True)
class Fingerprint:
    """Quantized eigenvalue set plus rank sequence of operator powers."""

    eigen_keys: tuple      # sorted ((round(re/tol), round(im/tol)), ...)
    rank_sequence: tuple   # rank(A^0), rank(A^1), ... until stabilization
    eig_tol: float

    @property
    def eigenvalues(self):
        return [(k[0] * self.eig_tol, k[1] * self.eig_tol)
                for k in self.eigen_keys]

    def as_dict(self):
        return {"eigenvalues": [list(e) for e in self.eigenvalues],
                "rank_sequence": list(self.rank_sequence)}


def _rank(matrix, rtol):
    sv = np.linalg.svd(matrix, compute_uv=False)
    top = sv[0] if len(sv) else 0.0
    if top == 0.0:
        return 0
    return int((sv > rtol * top).sum())


def fingerprint(operator, eig_tol=1e-7, rank_rtol=1e-8):
    operator = np.asarray(operator, dtype=np.float64)
    n = operator.shape[0]
    eigs = np.linalg.eigvals(operator)
    keys = sorted({
        (int(round(e.real / eig_tol)) or 0, int(round(e.imag / eig_tol)) or 0)
        for e in eigs
    })
    ranks = [n]
    power = operator.copy()
    while True:
        r = _rank(power, rank_rtol)
        if r == ranks[-1]:
            break
        ranks.append(r)
        if r == 0:
            break
        power = power @ operator
    return Fingerprint(eigen_keys=tuple(keys), rank_sequence=tuple(ranks),
                       eig_tol=eig_tol)


def sample_unit_vector(rng, grad, sign):
    """Unit spacelike (+1) / timelike (-1) vector: x-part uniform on the
    sphere, y-part rescaled so that (grad.a)^2 + 2 a.b hits the target; the
    scaling is resampled when its linear coefficient nearly vanishes (the
    null y-distribution makes naive normalization impossible)."""
    p = len(grad)
    for _ in range(_MAX_RESAMPLE):
        a = rng.standard_normal(p)
        norm = np.linalg.norm(a)
        if norm < 1e-12:
            continue
        a = a / norm
        b = rng.standard_normal(p)
        linear = 2.0 * (a @ b)
        if abs(linear) < 1e-12:
            continue
        scale = (sign - (grad @ a) ** 2) / linear
        return np.concatenate([a, scale * b])
    raise RuntimeError("unit-vector sampling failed to converge")


def _g_product(g, u, v):
    return float(u @ g @ v)


def sample_orthonormal_pair(rng, g, grad, sign):
    first = sample_unit_vector(rng, grad, sign)
    for _ in range(_MAX_RESAMPLE):
        cand = sample_unit_vector(rng, grad, sign)
        w = cand - (_g_product(g, cand, first) / sign) * first
        q = _g_product(g, w, w)
        if abs(q) < 1e-8 or np.sign(q) != sign:
            continue
        return first, w / np.sqrt(abs(q))
    raise RuntimeError("orthonormal-pair sampling failed to converge")


def sample_orthonormal_basis(rng, g, r, s):
    """Greedy g-orthonormal basis with r spacelike then s timelike vectors,
    spanning a non-degenerate subspace of type (r, s)."""
    n = g.shape[0]
    accepted = []
    signs = []
    for target in [1.0] * r + [-1.0] * s:
        for _ in range(_MAX_RESAMPLE):
            cand = rng.standard_normal(n)
            w = cand
            for sign, vec in zip(signs, accepted):
                w = w - (_g_product(g, w, vec) / sign) * vec
            q = _g_product(g, w, w)
            if abs(q) < 1e-8 or np.sign(q) != target:
                continue
            accepted.append(w / np.sqrt(abs(q)))
            signs.append(target)
            break
        else:
            raise RuntimeError("orthonormal-basis sampling failed to converge")
    return np.array(accepted)


@dataclass(frozen=True)
class ConstancyReport:
    kind: str
    n: int
    seed: int
    rs: tuple | None
    fingerprints: tuple  # ((Fingerprint, count), ...) by decreasing count

    @property
    def num_distinct(self):
        return len(self.fingerprints)

    def as_dict(self):
        return {
            "kind": self.kind if self.rs is None
            else f"{self.kind}({self.rs[0]},{self.rs[1]})",
            "n": self.n,
            "seed": self.seed,
            "num_distinct_fingerprints": self.num_distinct,
            "fingerprints": [
                {"count": count, **fp.as_dict()}
                for fp, count in self.fingerprints
            ],
        }


def sample_constancy(kind, field, point, n, seed, rs=None, eig_tol=1e-7,
                     rank_rtol=1e-8):
    """Draw n objects of the requested causal type, fingerprint the induced
    operators, and report the distinct fingerprints.  Seeding is per-sample
    (spawned child streams) so the report is reproducible and order
    independent."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if kind == "higher-jacobi":
        if rs is None:
            raise ValueError("higher-jacobi needs the subspace type rs=(r, s)")
        r, s = rs
        if r < 0 or s < 0 or r + s < 1 or r + s > 2 * field.p:
            raise ValueError(f"invalid subspace type {rs!r}")
    geometry.require_positive_definite(field, point)

    sign = 1.0 if kind.endswith("spacelike") else -1.0
    g = geometry.metric_at(field, point)
    grad = jet3(field, point.x).grad

    counts = {}
    order = []
    for child in np.random.SeedSequence(seed).spawn(n):
        rng = np.random.default_rng(child)
        if kind.startswith("jacobi"):
            op = jacobi(field, point, sample_unit_vector(rng, grad, sign))
        elif kind.startswith("szabo"):
            op = szabo(field, point, sample_unit_vector(rng, grad, sign))
        elif kind.startswith("skew"):
            y, z = sample_orthonormal_pair(rng, g, grad, sign)
            op = skew_curv(field, point, y, z)
        else:
            basis = sample_orthonormal_basis(rng, g, rs[0], rs[1])
            op = higher_jacobi(field, point, basis)
        fp = fingerprint(op, eig_tol=eig_tol, rank_rtol=rank_rtol)
        if fp not in counts:
            order.append(fp)
        counts[fp] = counts.get(fp, 0) + 1

    ranked = tuple(sorted(
        ((fp, counts[fp]) for fp in order),
        key=lambda item: (-item[1], item[0].eigen_keys, item[0].rank_sequence),
    ))
    return ConstancyReport(kind=kind, n=n, seed=seed,
                           rs=tuple(rs) if rs is not None else None,
                           fingerprints=ranked)

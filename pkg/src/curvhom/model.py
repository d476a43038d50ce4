"""Abstract algebraic curvature tensors of the form R_phi.

A symmetric bilinear form phi induces

    R_phi(v1, v2, v3, v4) = phi(v1,v4) phi(v2,v3) - phi(v1,v3) phi(v2,v4),

which has the curvature symmetries.  For positive definite phi on a space of
dimension >= 3 the form is recoverable from its tensor (this fails in
dimension 2, where only det(phi) survives -- see ``dim2_counterexample``).
Recovery parameterizes phi by a lower-triangular factor and minimizes the
build residual by Levenberg-Marquardt, seeded from the diagonal estimates

    d_i = sqrt(R_ijji * R_ikki / R_jkkj)

valid near a definite R_phi, where R_ijji = lambda_i lambda_j in a basis
diagonalizing phi.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import least_squares

from .errors import HypothesisError
from .geometry import is_positive_definite


def build_R_phi(phi):
    phi = np.asarray(phi, dtype=np.float64)
    if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
        raise ValueError("phi must be a square matrix")
    if not np.array_equal(phi, phi.T):
        raise ValueError("phi must be symmetric")
    return np.einsum("il,jk->ijkl", phi, phi) - np.einsum("ik,jl->ijkl", phi, phi)


def check_act_symmetries(r, tol=1e-12):
    """Report the violations of the algebraic curvature tensor symmetries."""
    r = np.asarray(r, dtype=np.float64)
    anti = np.abs(r + np.einsum("jikl->ijkl", r)).max()
    pair = np.abs(r - np.einsum("klij->ijkl", r)).max()
    bianchi = np.abs(
        r + np.einsum("jkil->ijkl", r) + np.einsum("kijl->ijkl", r)
    ).max()
    report = {
        "antisymmetry": float(anti),
        "pair_swap": float(pair),
        "bianchi": float(bianchi),
        "tol": float(tol),
    }
    report["passed"] = bool(anti < tol and pair < tol and bianchi < tol)
    return report


def _phi_from_lower(params, r_dim):
    t = np.zeros((r_dim, r_dim))
    t[np.tril_indices(r_dim)] = params
    return t @ t.T


def recover_phi(r, residual_tol=1e-4):
    """Recover a positive definite phi with build_R_phi(phi) ~= r.

    Raises for dimension <= 2 (non-unique) and when the best residual stays
    above ``residual_tol`` times the tensor scale (input not of R_phi form).
    """
    r = np.asarray(r, dtype=np.float64)
    r_dim = r.shape[0]
    if r.shape != (r_dim,) * 4:
        raise ValueError("expected a rank-4 tensor with equal axes")
    if r_dim <= 2:
        raise HypothesisError(
            "recovery needs dimension >= 3; in dimension <= 2 distinct "
            "definite forms produce the same tensor"
        )

    scale = max(np.abs(r).max(), 1e-30)
    diag = np.empty(r_dim)
    for i in range(r_dim):
        j, k = [m for m in range(r_dim) if m != i][:2]
        num = r[i, j, j, i] * r[i, k, k, i]
        den = r[j, k, k, j]
        diag[i] = np.sqrt(num / den) if den != 0 and num / den > 0 else 1.0

    t0 = np.diag(np.sqrt(diag))
    x0 = t0[np.tril_indices(r_dim)]

    def residual(params):
        return (build_R_phi(_phi_from_lower(params, r_dim)) - r).ravel()

    fit = least_squares(residual, x0, method="lm", xtol=1e-15, ftol=1e-15)
    best = np.abs(fit.fun).max()
    if best > residual_tol * scale:
        raise HypothesisError(
            f"input is not of R_phi form: residual {best:.3e} exceeds "
            f"{residual_tol:.1e} * scale"
        )
    phi = _phi_from_lower(fit.x, r_dim)
    return 0.5 * (phi + phi.T)


def dim2_counterexample():
    """Two distinct positive definite forms on R^2 with identical tensors:
    in dimension 2 the only independent component is R_1221 = det(phi)."""
    phi1 = np.diag([1.0, 1.0])
    phi2 = np.diag([2.0, 0.5])
    return phi1, phi2


def model_space(p):
    """The common pointwise model: hyperbolic pairing (u_i, v_j) = delta_ij
    on a 2p-dimensional space with curvature delta*delta - delta*delta on
    the u-block and zero on every slot touching a v."""
    if p < 1:
        raise ValueError("p must be >= 1")
    inner = np.zeros((2 * p, 2 * p))
    inner[:p, p:] = np.eye(p)
    inner[p:, :p] = np.eye(p)
    eye = np.eye(p)
    r = np.zeros((2 * p,) * 4)
    r[:p, :p, :p, :p] = (np.einsum("il,jk->ijkl", eye, eye)
                         - np.einsum("ik,jl->ijkl", eye, eye))
    return inner, r


def model_dump(p):
    """JSON-ready dump of the model space (same schema as the geometry dump,
    keyed by the model dimension r = 2p)."""
    inner, r = model_space(p)
    return {"r": 2 * p, "metric": inner.tolist(), "R": r.tolist()}


def random_spd(rng, r_dim, lo=0.5, hi=2.0):
    """Well-conditioned random positive definite form (eigenvalues in
    [lo, hi], random orthogonal eigenbasis)."""
    m = rng.standard_normal((r_dim, r_dim))
    q, rr = np.linalg.qr(m)
    q = q @ np.diag(np.where(np.diag(rr) < 0, -1.0, 1.0))
    lam = rng.uniform(lo, hi, r_dim)
    phi = (q * lam) @ q.T
    return 0.5 * (phi + phi.T)


__all__ = [
    "build_R_phi", "check_act_symmetries", "recover_phi",
    "dim2_counterexample", "model_space", "model_dump", "random_spd",
    "is_positive_definite",
]

"""The compiled kernel and the pure-Python fallback must be exact twins."""

import numpy as np
import pytest

from curvhom import backends
from curvhom.errors import DomainError
from curvhom.field import parse_field

BATTERY = [
    ("0.5*(x1^2+x2^2+x3^2)", 3),
    ("0.5*(x1^2+x2^2+x3^2)+0.5*sin(x1)", 3),
    ("sin(x1)*cos(x2)+exp(0.3*x3)/(1+x1^2)", 3),
    ("log(2+x1)+x2^3*x1-x3/(x1-5)", 3),
    ("x1^-2+cos(x2^2)", 2),
    ("exp(sin(x1))-x1^5/120", 1),
    ("(x1+x2)*(x3+x4)-x1*x2*x3*x4", 4),
]

HAS_COMPILED = "compiled" in backends.available_backends()

needs_compiled = pytest.mark.skipif(
    not HAS_COMPILED, reason="compiled kernel not built"
)


def _points(p, n=7):
    rng = np.random.default_rng(11 + p)
    return rng.uniform(0.1, 0.9, (n, p))


@needs_compiled
@pytest.mark.parametrize("source,p", BATTERY)
def test_values_bit_identical(source, p):
    f = parse_field(source, p)
    xs = _points(p)
    a = backends.eval_values(f.program, xs, backend="compiled")
    b = backends.eval_values(f.program, xs, backend="pure")
    assert np.array_equal(a, b)


@needs_compiled
@pytest.mark.parametrize("source,p", BATTERY)
def test_jets_bit_identical(source, p):
    f = parse_field(source, p)
    for x in _points(p, 4):
        va, ga, ha, ta = backends.eval_jet3(f.program, x, backend="compiled")
        vb, gb, hb, tb = backends.eval_jet3(f.program, x, backend="pure")
        assert va == vb
        assert np.array_equal(ga, gb)
        assert np.array_equal(ha, hb)
        assert np.array_equal(ta, tb)


@pytest.mark.parametrize("backend", backends.available_backends())
def test_domain_errors_raise(backend):
    f = parse_field("log(x1)", 1)
    with pytest.raises(DomainError):
        backends.eval_value(f.program, np.array([-1.0]), backend=backend)
    g = parse_field("1/x1", 1)
    with pytest.raises(DomainError):
        backends.eval_jet3(g.program, np.array([0.0]), backend=backend)
    h = parse_field("x1^-1", 1)
    with pytest.raises(DomainError):
        backends.eval_jet3(h.program, np.array([0.0]), backend=backend)


@pytest.mark.parametrize("backend", backends.available_backends())
def test_jet_symmetry_exact(backend):
    f = parse_field(BATTERY[2][0], 3)
    _, _, hess, third = backends.eval_jet3(
        f.program, np.array([0.3, -0.7, 0.2]), backend=backend
    )
    assert np.array_equal(hess, hess.T)
    for perm in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]:
        assert np.array_equal(third, third.transpose(perm))


def test_forcing_unknown_backend_rejected():
    f = parse_field("x1", 1)
    with pytest.raises(ValueError):
        backends.eval_value(f.program, np.array([1.0]), backend="gpu")

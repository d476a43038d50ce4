import math

import numpy as np
import pytest

from curvhom.errors import DomainError
from curvhom.field import (
    canonical_f, jet3, jet3_fd, jet_deviation, jet_scale, jets_agree,
    parse_field,
)
from curvhom.sampling import random_canonical_field, random_point

F0 = parse_field("0.5*(x1^2+x2^2+x3^2)", 3)


def test_jet_quadratic_exact():
    j = jet3(F0, [1.0, 2.0, 0.0])
    assert j.value == 2.5
    assert np.array_equal(j.grad, [1.0, 2.0, 0.0])
    assert np.array_equal(j.hess, np.eye(3))
    assert not j.third.any()


def test_jet_with_sin_term():
    # hand differentiation: grad (0.5,0,0), hess = I, third_111 = -0.5 at 0
    f = parse_field("0.5*(x1^2+x2^2+x3^2)+0.5*sin(x1)", 3)
    j = jet3(f, np.zeros(3))
    assert np.allclose(j.grad, [0.5, 0.0, 0.0], atol=1e-15)
    assert np.allclose(j.hess, np.eye(3), atol=1e-15)
    expected = np.zeros((3, 3, 3))
    expected[0, 0, 0] = -0.5
    assert np.allclose(j.third, expected, atol=1e-15)
    jf = jet3_fd(f, np.zeros(3), h=1e-3)
    assert jets_agree(j, jf)


def test_degree2_third_identically_zero():
    rng = np.random.default_rng(5)
    for _ in range(5):
        j = jet3(F0, rng.uniform(-3, 3, 3))
        assert not j.third.any()


def test_fd_hessian_close_to_identity():
    jf = jet3_fd(F0, [1.0, 2.0, 0.0], h=1e-3)
    assert np.abs(jf.hess - np.eye(3)).max() < 1e-6


def test_fd_third_from_sin():
    f = parse_field("0.5*(x1^2+x2^2+x3^2)+0.5*sin(x1)", 3)
    jf = jet3_fd(f, np.zeros(3), h=1e-2)
    assert abs(jf.third[0, 0, 0] + 0.5) < 1e-4


def test_fd_constant_field():
    f = parse_field("1", 3)
    jf = jet3_fd(f, [0.3, 0.4, 0.5])
    assert np.abs(jf.grad).max() < 1e-12
    assert np.abs(jf.hess).max() < 1e-12
    assert np.abs(jf.third).max() < 1e-12


def test_jet_symmetries_exact():
    f = parse_field("sin(x1*x2)+exp(x3)*x1-log(3+x2)", 3)
    j = jet3(f, [0.4, -0.9, 0.2])
    assert np.array_equal(j.hess, j.hess.T)
    for perm in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]:
        assert np.array_equal(j.third, j.third.transpose(perm))


def test_cubic_taylor_reproduces_field():
    # degree <= 3 polynomials: the jet is the whole field
    f = parse_field("1+x1-2*x2+0.5*x1^2+x1*x2*x3-x3^3/3+x2^2*x1", 3)
    rng = np.random.default_rng(8)
    x0 = rng.uniform(-1, 1, 3)
    j = jet3(f, x0)
    for _ in range(5):
        x1 = rng.uniform(-1, 1, 3)
        d = x1 - x0
        taylor = (j.value + j.grad @ d + 0.5 * d @ j.hess @ d
                  + np.einsum("ijk,i,j,k->", j.third, d, d, d) / 6.0)
        assert abs(taylor - f.value(x1)) < 1e-12


def test_fd_agreement_on_random_canonical_draws():
    rng = np.random.default_rng(13)
    for _ in range(25):
        f = random_canonical_field(rng, 3)
        pt = random_point(rng, 3)
        exact = jet3(f, pt.x)
        approx = jet3_fd(f, pt.x, h=1e-3)
        dev = jet_deviation(exact, approx) / max(1.0, jet_scale(exact, approx))
        assert dev < 1e-5


def test_fd_agreement_on_rough_rational_field():
    # fifth derivatives of the rational part are large; the O(h^2) contract
    # still holds but at a correspondingly larger constant
    f = parse_field("sin(x1)*cos(x2)+exp(0.3*x3)/(1+x1^2)", 3)
    exact = jet3(f, [0.3, -0.7, 0.2])
    approx = jet3_fd(f, [0.3, -0.7, 0.2], h=1e-3)
    assert jets_agree(exact, approx, rtol=1e-4)


def test_domain_violation_log():
    f = parse_field("log(x1)", 1)
    with pytest.raises(DomainError):
        jet3(f, [-2.0])
    assert abs(jet3(f, [math.e]).value - 1.0) < 1e-15


def test_domain_violation_division():
    f = parse_field("1/(x1-1)", 1)
    with pytest.raises(DomainError):
        jet3(f, [1.0])


def test_fd_stencil_domain_violation():
    f = parse_field("log(x1)", 1)
    with pytest.raises(DomainError):
        jet3_fd(f, [1e-4], h=1e-3)  # stencil crosses zero


def test_overflow_is_domain_error():
    f = parse_field("exp(exp(x1))", 1)
    with pytest.raises(DomainError):
        jet3(f, [8.0])


def test_canonical_f_theta_zero():
    f = canonical_f(parse_field("0", 1), 3)
    rng = np.random.default_rng(2)
    for _ in range(3):
        j = jet3(f, rng.uniform(-2, 2, 3))
        assert np.array_equal(j.hess, np.eye(3))


def test_canonical_f_hessian_shift():
    f = canonical_f(parse_field("0.5*sin(x1)", 1), 3)
    j = jet3(f, [math.pi / 2, 0.0, 0.0])
    assert np.allclose(np.diag(j.hess), [0.5, 1.0, 1.0], atol=1e-15)
    assert np.abs(j.hess - np.diag(np.diag(j.hess))).max() == 0.0


def test_canonical_f_rejects_theta_in_other_variables():
    theta = parse_field("x2", 3)
    with pytest.raises(ValueError):
        canonical_f(theta, 3)


def test_point_length_checked():
    with pytest.raises(ValueError):
        jet3(F0, [1.0, 2.0])


def test_fieldspec_construction_validated():
    from curvhom.expr import Var
    from curvhom.field import FieldSpec
    with pytest.raises(ValueError):
        FieldSpec(p=0, root=Var(1))
    with pytest.raises(ValueError):
        FieldSpec(p=2, root=Var(3))
    with pytest.raises(ValueError):
        canonical_f(parse_field("0", 1), 0)

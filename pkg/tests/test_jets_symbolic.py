"""Cross-validate exact jets against symbolic differentiation.

Independent of both the Taylor-mode propagation rules and the
finite-difference stencils: the expression is rebuilt as a sympy tree,
differentiated symbolically, and evaluated at high precision.
"""

import numpy as np
import pytest

from curvhom import expr
from curvhom.field import jet3, parse_field

sympy = pytest.importorskip("sympy")

FIELDS = [
    ("0.5*(x1^2+x2^2+x3^2)+0.5*sin(x1)", 3, [0.3, -0.2, 0.7]),
    ("sin(x1)*cos(x2)+exp(0.3*x3)/(1+x1^2)", 3, [0.3, -0.7, 0.2]),
    ("x1/(4+x2^2)-log(2+x3)", 3, [0.9, -0.4, 0.1]),
    ("x1^-2+cos(x2^2)*x1", 2, [1.3, 0.6]),
    ("exp(sin(x1))/(2-cos(x1))", 1, [0.8]),
    ("(x1-x2)^3/(x1+x2)", 2, [0.7, 0.2]),
    ("-x1^4+2*x2/x1-x1*log(x1)", 2, [0.5, -1.1]),
]


def to_sympy(node, symbols):
    if isinstance(node, expr.Const):
        return sympy.Float(node.value, 30)
    if isinstance(node, expr.Var):
        return symbols[node.index - 1]
    if isinstance(node, expr.Add):
        return to_sympy(node.left, symbols) + to_sympy(node.right, symbols)
    if isinstance(node, expr.Sub):
        return to_sympy(node.left, symbols) - to_sympy(node.right, symbols)
    if isinstance(node, expr.Mul):
        return to_sympy(node.left, symbols) * to_sympy(node.right, symbols)
    if isinstance(node, expr.Div):
        return to_sympy(node.left, symbols) / to_sympy(node.right, symbols)
    if isinstance(node, expr.Pow):
        return to_sympy(node.base, symbols) ** node.exponent
    if isinstance(node, expr.Neg):
        return -to_sympy(node.operand, symbols)
    return getattr(sympy, node.func)(to_sympy(node.arg, symbols))


@pytest.mark.parametrize("source,p,x", FIELDS)
def test_jets_match_symbolic_derivatives(source, p, x):
    field = parse_field(source, p)
    symbols = sympy.symbols(f"s1:{p + 1}")
    tree = to_sympy(field.root, symbols)
    subs = dict(zip(symbols, [sympy.Float(v, 30) for v in x]))

    jet = jet3(field, x)
    scale = max(1.0, abs(jet.value), np.abs(jet.grad).max(),
                np.abs(jet.hess).max(), np.abs(jet.third).max())
    tol = 1e-12 * scale

    assert abs(jet.value - float(tree.subs(subs))) < tol
    for i in range(p):
        di = sympy.diff(tree, symbols[i])
        assert abs(jet.grad[i] - float(di.subs(subs))) < tol
        for j in range(i, p):
            dij = sympy.diff(di, symbols[j])
            assert abs(jet.hess[i, j] - float(dij.subs(subs))) < tol
            for k in range(j, p):
                dijk = sympy.diff(dij, symbols[k])
                assert abs(jet.third[i, j, k] - float(dijk.subs(subs))) < tol

"""curvhom: balanced-signature metrics built from a scalar field.

The metric g_f on R^{2p} pairs x- and y-coordinate directions hyperbolically
and carries the field's gradient products on the x-block.  The package
evaluates g_f, its curvature and covariant derivative exactly (two
independent routes), constructs the admissible frames that put metric and
curvature into a common normal form at every point, computes the invariant
alpha that obstructs local homogeneity, and fingerprints the associated
spectral operators.
"""

from .errors import CurvhomError, DomainError, ExprSyntaxError, HypothesisError
from .field import (
    FieldSpec, Jet3, canonical_f, jet3, jet3_fd, jets_agree, parse_field,
)
from .frames import AdmissibleBasis, admissible_basis, homogeneity_map, is_admissible, random_admissible
from .geometry import (
    Point, SecondFF, christoffel, curvature_gauss, curvature_levi_civita,
    embed_and_normal, metric_at, nabla_curvature, second_ff,
)
from .invariant import AlphaScan, alpha, alpha_closed_form, scan_alpha
from .model import (
    build_R_phi, check_act_symmetries, dim2_counterexample, model_space,
    recover_phi,
)
from .spectral import (
    Fingerprint, fingerprint, higher_jacobi, jacobi, sample_constancy,
    skew_curv, szabo,
)

__version__ = "0.1.0"

"""Exact constant-term verification for q-Dyson and q-Morris type identities.

Everything is exact: arbitrary-precision integers, Laurent polynomials in q,
canonical rational functions, and exact rational interpolation.  The hot
expansion kernels run through a compiled extension when available and fall
back to pure Python otherwise (see qmorris._core.backend_name).
"""

from ._core import backend_name
from .closed_forms import (
    ParamSet,
    dyson_rhs,
    gauss_binom,
    morris_rhs,
    prop52_lhs,
    prop52_rhs,
    q_factorial,
    qbinomial_theorem_finite,
    qdyson_rhs,
    vanishing_sets,
)
from .ct_engine import (
    ImproperBranch,
    InterpolatedPoly,
    PositiveDegree,
    RecursionCertificate,
    aomoto_expansion_check,
    classify_ktuple,
    classify_monomial,
    ct_direct,
    ct_iterated_pf,
    ct_recursion,
    ct_value_at,
    interp_in_qa,
    mprime_at,
    pf_ct_step,
)
from .exact_arith import QPoly, QRat, qpoly_eval, qpoly_mul, qrat_normalize
from .kernels import (
    AtomicFactor,
    ChainState,
    DuplicateFactor,
    FactorProduct,
    MalformedChain,
    NotPolynomial,
    apply_E,
    build_hk_kernel,
    build_Q,
    build_Q_chain,
    build_qdyson_kernel,
    cancel,
    degree_in,
    detect_zero,
    expand,
    pochhammer,
)
from .laurent import MultiLaurent, ml_coeff, ml_ct_var, ml_mul_op, ml_subst

__version__ = "0.1.0"

__all__ = [
    "AtomicFactor",
    "ChainState",
    "DuplicateFactor",
    "FactorProduct",
    "ImproperBranch",
    "InterpolatedPoly",
    "MalformedChain",
    "MultiLaurent",
    "NotPolynomial",
    "ParamSet",
    "PositiveDegree",
    "QPoly",
    "QRat",
    "RecursionCertificate",
    "aomoto_expansion_check",
    "apply_E",
    "backend_name",
    "build_Q",
    "build_Q_chain",
    "build_hk_kernel",
    "build_qdyson_kernel",
    "cancel",
    "classify_ktuple",
    "classify_monomial",
    "ct_direct",
    "ct_iterated_pf",
    "ct_recursion",
    "ct_value_at",
    "degree_in",
    "detect_zero",
    "dyson_rhs",
    "expand",
    "gauss_binom",
    "interp_in_qa",
    "ml_coeff",
    "ml_ct_var",
    "ml_mul_op",
    "ml_subst",
    "morris_rhs",
    "mprime_at",
    "pf_ct_step",
    "pochhammer",
    "prop52_lhs",
    "prop52_rhs",
    "q_factorial",
    "qbinomial_theorem_finite",
    "qdyson_rhs",
    "qpoly_eval",
    "qpoly_mul",
    "qrat_normalize",
    "vanishing_sets",
]

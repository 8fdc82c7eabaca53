"""Co-semi-analytic functors on a finite window.

Evaluate contravariant functors from injection coefficients, verify the
characterizing conditions on tabulated functors, extract coefficients and
transformations back, and compose with semi-analytic functors.
"""

from .coeff import (
    InjCoeff,
    InjNat,
    SurCoeff,
    act_inj,
    act_sur,
    builtin_inj_coeff,
    builtin_sur_coeff,
    validate_inj_coeff,
    validate_inj_nat,
)
from .cosan import (
    CosanElem,
    apply_nat,
    canonicalize_pair,
    cosan_map,
    evaluate,
    normalize_general_pair,
    tabulate_cosan,
    tabulate_nat,
)
from .finset import FinFun, classify, compose, epi_mono_factorize
from .san import SanElem, san_evaluate, san_map, strength
from .tabular import CheckReport, TabFunctor, TabNat, validate_tab_functor
from .verify import (
    boolean_hom_check,
    check_cocone_colimit,
    check_phi_iso,
    check_pullback_preservation,
    check_semicartesian,
    extract_coefficients,
    extract_nat,
)

__version__ = "0.1.0"

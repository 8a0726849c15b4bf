"""Exact motivic zeta functions of Hilbert schemes of points."""

from mzeta.coeff_ring import (
    L,
    ONE,
    ZERO,
    CompletedClass,
    GrothClass,
    LaurentPoly,
    cc_add,
    cc_mul,
    gc_add,
    gc_eq,
    gc_mul,
    gc_sub,
    specialize_L,
    to_completed,
)
from mzeta.errors import MZetaError
from mzeta.hilbert_zeta import (
    IntegralSequence,
    ModelData,
    Partition,
    conductor_hilb,
    explint_coeff,
    goettsche_coeff,
    hilb_class,
    hilb_zeta,
    motivic_integral,
    n_tilde,
    ord_hilb_point,
    ord_weak_neron,
    partitions,
)
from mzeta.monodromy import (
    ExponentSet,
    check_hilb_monodromy,
    check_monodromy,
    eigen_exponents_hilb,
    product_zeta,
    sumset,
)
from mzeta.power_structure import SymTables, TruncSeries, power_series, sigma_series, sym, sym_completed
from mzeta.rational_series import (
    DenFactor,
    PartialFractions,
    PoleSet,
    RationalSeries,
    base_change,
    common_period,
    hadamard,
    partial_fractions,
    poles,
    quotient_series,
    rs_add,
    rs_eq,
    rs_expand,
    rs_mul,
    sym_series,
)

__version__ = "0.1.0"

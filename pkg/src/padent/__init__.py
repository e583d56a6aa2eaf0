"""Exact computation of multiplicative Euler characteristics, p-adic
determinants, p-adic R-torsion and entropy for algebraic Z^N-actions."""

from .entropy import (
    CompareReport,
    EntropyLevel,
    EntropyReport,
    ExpansivenessError,
    PrincipalFactorReport,
    classical_entropy_periodic,
    entropy_compare,
    mahler_measure,
    padic_entropy,
    padic_r_torsion,
    principal_factor_report,
)
from .expansive import (
    ExpansivenessVerdict,
    check_classical_n1,
    check_finite_module_padic,
    check_principal_padic,
    torus_sample_min,
)
from .intmat import det_bareiss, det_crt, exact_determinant, smith_normal_form
from .laurent import (
    LaurentMatrix,
    LaurentPoly,
    ParseError,
    TruncatedPoly,
    det_symbolic,
    parse_matrix,
    parse_poly,
)
from .logdet import (
    NotAUnitError,
    SingularLevelError,
    UnitDecomposition,
    decompose_unit,
    logdet_limit_estimate,
    logdet_matrix,
    logdet_scalar,
    tr_log_one_unit,
)
from .padic import (
    ComponentDecomposition,
    ConvergenceReport,
    PadicNumber,
    PrecisionError,
    component_decomposition,
    limit_checker,
    padic_exp,
    padic_log,
    verify_one_unit_asymptotics,
    teichmuller,
)
from .quotients import (
    FiniteIndexSubgroup,
    FreeResolution,
    HomologySummary,
    InfiniteHomologyError,
    IntegerComplex,
    action_matrix,
    complex_from_resolution,
    diagonal_sequence,
    diagonal_subgroup,
    enumerate_quotient,
    euler_characteristic,
    fixed_points_count,
    homology,
    koszul_resolution,
    parse_sequence_spec,
    principal_resolution,
    subgroup_from_matrix,
)
from .torsion import (
    NotAcyclicError,
    TorsionReport,
    chain_contraction_rational,
    random_acyclic_complex,
    torsion_rational,
    verify_torsion_identity,
)

__version__ = "0.1.0"

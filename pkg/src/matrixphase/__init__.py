"""Matrix-valued relativistic phase-space transport.

Clifford algebra representations, exact polynomial/plane-wave symbol
fields, three bracket structures with a terminating star product, matrix
Hamiltonians, transport solvers, plane-wave spinor oracles, and
star-eigenvalue residual evaluation.
"""

from .clifford import (
    METRIC,
    GammaRep,
    GammaSet,
    SpinorTransform,
    algebra_reports,
    anticommutator,
    build_gamma_set,
    commutator,
    dirac_adjoint,
    gamma_set_from_matrices,
    mat_exp,
    spin_transform,
)
from .errors import (
    CFLError,
    ConsistencyError,
    GridError,
    MatrixPhaseError,
    TermBudgetError,
)
from .polyfield import (
    Field,
    P_VARS,
    PhasePoint,
    X_VARS,
    constant_field,
    coordinate_field,
    plane_wave_field,
    random_field,
    zero_field,
)
from .gridfield import (
    AxisSpec,
    GridField,
    GridSpec,
    grid_derivative,
    read_gridfield,
    sample_to_grid,
    write_gridfield,
)
from .report import ClaimReport, read_reports, write_reports
from .brackets import (
    BracketKind,
    StarResult,
    apply_bracket,
    axiom_suite,
    extended_bracket,
    fd_bracket,
    leading_expansion_check,
    moyal_bracket,
    poisson_bracket,
    star_product,
)
from .hamiltonians import (
    GaugePotential,
    PhysParams,
    energy_projectors,
    field_tensor,
    k_em,
    k_free,
    kcal_em,
    kcal_free,
    landau_potential,
    mass_shell_check,
    random_onshell_momentum,
    slash,
    zero_potential,
)
from .dynamics import (
    EvolutionReport,
    covariance_check,
    em_transport_step,
    evolve_anticomm,
    evolve_em,
    evolve_free,
    evolve_landau_moyal,
    free_propagator,
    observables,
    residual_free,
    residual_free_grid,
)
from .dirac_oracle import (
    PlaneWaveSolution,
    SpinorField,
    anticomm_residual,
    hermiticity_lemma_checks,
    make_solution,
    psi_field,
    solve_spinor,
    wbar_field,
)
from .stargen import (
    StargenCase,
    case_from_dict,
    hamiltonian_field,
    landau_stargen_residual,
    moyal_zero_bracket_check,
    onshell_points,
    projector_field,
    stargen_report,
    stargen_residual,
)

__version__ = "0.1.0"

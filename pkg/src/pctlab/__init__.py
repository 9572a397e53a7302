"""pctlab: coordinate-transformation toolkit for variable-mass radial
Schrodinger problems, with closed-form spectra and an independent
grid verifier."""

from .errors import (
    ComplexIndexError,
    DomainError,
    NoBoundStateError,
    NumericalError,
    PctlabError,
    PoleError,
    UnsupportedBranchError,
    ValidationError,
)
from .model import (
    ClosedFormSolution,
    MassFamily,
    MassProfile,
    Parity,
    QuantumNumbers,
    VerificationReport,
    degeneracy_ladder,
    ell_d,
)
from .pct import (
    PctMap,
    effective_potential_q,
    lambda_eff,
    pct_map,
    q_domain,
    r_of_z,
    u_d,
    u_d_power_law,
    u_tilde_gm2,
    z_of_r,
)
from .spectra import (
    CaseId,
    CaseSpec,
    Flag,
    closed_form_energy,
    closed_form_wavefunction,
    make_case,
    reference_energy,
    spiked_reduction_check,
    target_potential,
)
from .verify import (
    DEFAULT_TOLERANCES,
    Grid,
    Tolerances,
    TridiagonalOperator,
    build_grid,
    check_degeneracy,
    discretize,
    eigen_lowest,
    residual_norm,
    sturm_count,
    verify_energy,
    verify_sweep,
)

__version__ = "0.1.0"

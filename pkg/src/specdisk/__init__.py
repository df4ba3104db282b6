"""Gershgorin-disk spectral bounds for periodic traveling waves of dispersive PDEs."""
from .dispersion import (
    DispersionRelation,
    Family,
    MeanMode,
    SpectralProblem,
    omega,
    omega_prime,
    weight,
)
from .disks import (
    ComponentReport,
    GershgorinDisk,
    TailBound,
    adjacent_disjoint,
    all_disjoint_sufficient,
    components,
    disk,
    tail_index_bound,
)
from .elliptic import elliptic_K, jacobi_cn
from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    NotApplicableError,
    SpecdiskError,
    TailError,
    WindowError,
)
from .hill import HillMatrix, SpectrumResult, assemble, eigenvalues, solve, sweep, trusted_band
from .potentials import (
    BBMCnoidal,
    BORational,
    KawaharaCnQuartic,
    MKdVCnoidal,
    PeriodicPotential,
    ZeroPotential,
    bo_fourier_coefficient,
    bo_l1_norm,
    build_potential,
    kawahara_example,
    make_problem,
    stationary_residual,
)
from .verify import (
    Check,
    VerificationReport,
    certify_imaginary,
    check_containment,
    check_counts,
    check_symmetry,
    homotopy_trace,
)

__version__ = "0.1.0"

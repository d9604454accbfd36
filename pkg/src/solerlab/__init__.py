"""solerlab: a numerical laboratory for solitary-wave stability of the
cubic nonlinear Dirac (Soler) equation in three space dimensions.

Capabilities: radial ground-state profiles by shooting, rational-Chebyshev
collocation on the half line, assembly of the per-channel linearization
operators (including bi-frequency effective orders), eigenvalue
classification against discretization artifacts, frequency sweeps with
bifurcation refinement, and the SU(1,1) symmetry charges.
"""

from .profile import (
    SolverOptions, SolitonProfile, ProfileError, NoConvergenceError,
    BlowUpError, solve_profile, evaluate_profile, profile_residual,
    save_profile_csv, load_profile_csv, ProfileCache,
)
from .grid import HalfLineGrid, build_grid, resample
from .operators import (
    ChannelSpec, LinearOperator, assemble_L00, assemble_L0, assemble_V,
    assemble_A00, assemble_A, assemble_channel, symmetrized_matrix,
    dump_operator, load_operator,
)
from .spectra import (
    Tolerances, SpectrumRecord, EigensolverError, compute_spectrum, classify,
    residual_check, solve_channel, record_to_json, save_spectrum_json,
    load_spectrum_json, channel_fields,
)
from .sweep import (
    BifurcationEvent, SweepResult, MissingPitchforkError, sweep,
    detect_events, stability_report, omega_p_curve, save_sweep_csv,
    load_sweep_csv, save_events_json, load_events_json,
)
from .charges import (
    SpinorField, SU11Element, make_bifrequency, apply_su11,
    conjugate_spinor, scalar_density, is_attracting, charges, energy,
    energy_density, charge_table, save_charge_table_csv,
)

__version__ = "0.1.0"

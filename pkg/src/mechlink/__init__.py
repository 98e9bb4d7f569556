"""Quantum-correlation distribution between remote mechanical oscillators.

Two independent optomechanical cavities are driven by the arms of a
two-mode squeezed vacuum; the radiation-pressure interaction transduces
the optical correlations into entanglement and Gaussian discord between
the two movable mirrors, which can in turn be read out onto ancillary
light modes.  The package builds the linearized Langevin drift/diffusion
model, solves for the periodic steady state by harmonic balance, and
quantifies the resulting Gaussian correlations.
"""

__version__ = "0.1.0"

from .constants import HBAR, KB, C_LIGHT
from .params import (PhysicalParams, DerivedParams, InvalidParameterError,
                     derive, load_config, thermal_occupancy, with_point,
                     REFERENCE_PARAMS)
from .dynamics import (BASIS_LABELS, DiffusionSpec, StabilityReport,
                       build_drift, build_diffusion, check_stability,
                       symplectic_form)
from .steady_state import (PeriodicSteadyState, StabilityError,
                           solve_lyapunov, solve_harmonic, solve_periodic,
                           propagate, spectral_oracle,
                           extract_mechanical, extract_optical,
                           cm_to_json, cm_from_json)
from .measures import (UnphysicalStateError, symplectic_eigenvalues,
                       log_negativity, gaussian_discord, validate_physical,
                       tmsv_covariance)
from .pipeline import CorrelationResult, evaluate_point, prepare_steady_state
from .readout import (ReadoutConfig, InputOutputPoint, readout_propagate,
                      io_curve, linear_fit)
from .sweep import SweepAxis, SweepSpec, SweepResult, run_sweep, write_csv

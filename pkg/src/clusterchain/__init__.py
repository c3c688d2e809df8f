"""Exact solution toolkit for periodic cluster-type spin chains.

The package solves the transverse-field generalized cluster chain

    H = J sum_j sigma^x_j (sigma^z_{j+1} ... sigma^z_{j+m-1}) sigma^x_{j+m}
        - h sum_j sigma^z_j

on a ring of N sites by mapping it to free fermions, and computes ground
states, degeneracies, low-energy spectra, block entanglement entropies and
three-/four-part conditional mutual information.  A brute-force exact
diagonalization oracle (``oracle_ed``) provides independent ground truth for
every production quantity at small N.

Modules
-------
model
    Model parameters, parity sectors and the quadratic fermion forms.
freefermion
    BdG diagonalization, parity-constrained ground states, low spectra.
correlations
    Majorana correlation matrices (closed form at h=0, numeric otherwise).
entanglement
    Block entropies, ring partitions and conditional mutual information.
analytics
    Closed-form entropy predictions and critical finite-size scaling fits.
oracle_ed
    Bitmask exact diagonalization of the spin Hamiltonian (N <= 14).
cli
    Command-line sweeps with deterministic CSV/JSON output.
"""

from .model import ModelParams, Sector, QuadraticForm, build_quadratic_form, momentum_grid, bogoliubov_coefficients
from .freefermion import (
    BdGSolution,
    GroundStateInfo,
    diagonalize,
    vacuum_parity,
    sector_ground,
    ground_state,
    low_spectrum,
    degeneracy_count,
)
from .correlations import (
    MajoranaCorrelation,
    gr_closed_form_oddodd,
    gr_closed_form_other,
    correlation_matrix,
    reduced_gamma,
)
from .entanglement import Partition, EntropyResult, entropy_from_gamma, block_entropy, make_partition, cmi
from .analytics import ClosedFormEntropy, ScalingFit, closed_form_entropy_oddodd, entropy_bounds_check, scaling_fit

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "Sector",
    "QuadraticForm",
    "build_quadratic_form",
    "momentum_grid",
    "bogoliubov_coefficients",
    "BdGSolution",
    "GroundStateInfo",
    "diagonalize",
    "vacuum_parity",
    "sector_ground",
    "ground_state",
    "low_spectrum",
    "degeneracy_count",
    "MajoranaCorrelation",
    "gr_closed_form_oddodd",
    "gr_closed_form_other",
    "correlation_matrix",
    "reduced_gamma",
    "Partition",
    "EntropyResult",
    "entropy_from_gamma",
    "block_entropy",
    "make_partition",
    "cmi",
    "ClosedFormEntropy",
    "ScalingFit",
    "closed_form_entropy_oddodd",
    "entropy_bounds_check",
    "scaling_fit",
    "__version__",
]

"""Model definition and fermionic representations.

The model lives on a periodic chain of ``N`` spin-1/2 sites,

    H = J sum_j sigma^x_j (sigma^z_{j+1} ... sigma^z_{j+m-1}) sigma^x_{j+m}
        - h sum_j sigma^z_j ,

with all site arithmetic mod N.  A Jordan-Wigner transformation
(``sigma^z_j = 2 n_j - 1``) maps each cluster term onto a range-``m``
fermion bond, up to a global-parity factor on the ``m`` bonds that cross
the boundary.  Restricting to a fixed fermion-parity sector replaces that
operator factor by its eigenvalue, so each sector Hamiltonian is strictly
quadratic:

* PLUS sector  (odd fermion number, ``P_z = -1``): periodic fermions,
* MINUS sector (even fermion number, ``P_z = +1``): anti-periodic fermions.

This module holds the parameter container, the sector bookkeeping, and the
construction of the real-space quadratic forms; momentum-space closed forms
at h = 0 are provided as independent cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "ModelParams",
    "Sector",
    "QuadraticForm",
    "build_quadratic_form",
    "momentum_grid",
    "bogoliubov_coefficients",
]


class Sector(Enum):
    """Fermion-parity sector of the Jordan-Wigner representation.

    PLUS is the sector with periodic fermion boundary conditions; only
    states with an odd number of fermions are physical there.  MINUS has
    anti-periodic fermions and requires an even fermion number.
    """

    PLUS = "plus"
    MINUS = "minus"

    @property
    def required_parity(self) -> int:
        """Fermion-number parity (+1 even / -1 odd) of physical states."""
        return -1 if self is Sector.PLUS else +1

    @property
    def boundary_sign(self) -> float:
        """Sign carried by the m boundary-crossing bonds relative to bulk.

        +1 for PLUS (periodic fermion ring), -1 for MINUS (anti-periodic).
        The convention is pinned by parity-resolved agreement with exact
        diagonalization (see tests/test_oracle_ed.py).
        """
        return +1.0 if self is Sector.PLUS else -1.0


@dataclass(frozen=True)
class ModelParams:
    """Physical instance of the cluster chain plus numerical tolerances.

    Parameters
    ----------
    n_sites : int
        Ring length N (positive).
    range_ : int
        Interaction range m of the cluster term, 1 <= m < N.
    coupling : float
        Cluster coupling J (nonzero); the critical field is h = J.
    field : float
        Transverse field strength h >= 0.
    degeneracy_tol : float, optional
        Energy window for counting degenerate many-body levels.  Defaults
        to ``1e-8 * max(|J|, h, 1) * N``, growing mildly with system size
        to track eigensolver error.
    entropy_clip : float
        Correlation-matrix eigenvalues within this distance above 1 in
        magnitude are clipped; larger excesses are treated as errors.
    """

    n_sites: int
    range_: int
    coupling: float = 1.0
    field: float = 0.0
    degeneracy_tol: float | None = None
    entropy_clip: float = 1e-9

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        if not 1 <= self.range_ < self.n_sites:
            raise ValueError(
                f"range_ must satisfy 1 <= m < N, got m={self.range_}, N={self.n_sites}"
            )
        if self.coupling == 0:
            raise ValueError("coupling J must be nonzero")
        if self.field < 0:
            raise ValueError(f"field h must be >= 0, got {self.field}")
        if self.degeneracy_tol is None:
            scale = max(abs(self.coupling), self.field, 1.0)
            object.__setattr__(self, "degeneracy_tol", 1e-8 * scale * self.n_sites)
        if self.degeneracy_tol <= 0 or self.entropy_clip <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def n_parity(self) -> int:
        return self.n_sites % 2

    @property
    def m_parity(self) -> int:
        return self.range_ % 2


@dataclass(frozen=True)
class QuadraticForm:
    """Real-space quadratic fermion Hamiltonian of one parity sector.

    Represents  H = sum_jk [ hopping_jk c^dag_j c_k
                             + (pairing_jk c^dag_j c^dag_k + h.c.)/1 ] + constant
    in the standard convention where ``hopping`` is symmetric (it multiplies
    c^dag_i c_j summed over both orderings, diagonal = chemical potential)
    and ``pairing`` is antisymmetric.

    Internally everything is generated from the coupling matrix T of the
    Majorana-like bilinear  H = sum_jk T_jk (c^dag_j - c_j)(c^dag_k + c_k),
    which is the natural form for this model: hopping = T + T^T,
    pairing = T - T^T, constant = -tr T.
    """

    hopping: np.ndarray
    pairing: np.ndarray
    sector: Sector
    constant: float
    coupling_matrix: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        hop = np.asarray(self.hopping, dtype=float)
        pair = np.asarray(self.pairing, dtype=float)
        if hop.shape != pair.shape or hop.ndim != 2 or hop.shape[0] != hop.shape[1]:
            raise ValueError("hopping and pairing must be square matrices of equal shape")
        if np.abs(hop - hop.T).max() > 1e-12 * max(1.0, np.abs(hop).max()):
            raise ValueError("hopping matrix must be symmetric")
        if np.abs(pair + pair.T).max() > 1e-12 * max(1.0, np.abs(pair).max()):
            raise ValueError("pairing matrix must be antisymmetric")
        object.__setattr__(self, "hopping", hop)
        object.__setattr__(self, "pairing", pair)
        if self.coupling_matrix is None:
            object.__setattr__(self, "coupling_matrix", 0.5 * (hop + pair))

    @property
    def n_sites(self) -> int:
        return self.hopping.shape[0]


def build_quadratic_form(params: ModelParams, sector: Sector) -> QuadraticForm:
    """Construct the quadratic fermion form of one parity sector.

    Every bond (j, j+m) carries amplitude ``(-1)^(m-1) J`` in the
    (c^dag - c)(c^dag + c) structure; the m bonds that wrap around the
    boundary are additionally multiplied by ``sector.boundary_sign``
    (periodic for PLUS, anti-periodic for MINUS).  The transverse field
    contributes ``-h`` on the diagonal of the coupling matrix, i.e.
    ``-2h`` on the hopping diagonal and ``+hN`` to the constant.

    Parameters
    ----------
    params : ModelParams
    sector : Sector

    Returns
    -------
    QuadraticForm
    """
    n, m = params.n_sites, params.range_
    t = params.coupling * (-1.0) ** (m - 1)
    T = np.zeros((n, n))
    for j in range(n):
        k = j + m
        if k < n:
            T[j, k] += t
        else:
            T[j, k - n] += t * sector.boundary_sign
    T[np.diag_indices(n)] += -params.field
    hopping = T + T.T
    pairing = T - T.T
    constant = -float(np.trace(T))
    return QuadraticForm(hopping=hopping, pairing=pairing, sector=sector,
                         constant=constant, coupling_matrix=T)


def momentum_grid(n_sites: int, sector: Sector) -> np.ndarray:
    """Quantized momenta of one sector, sorted ascending in (-pi, pi].

    The PLUS (periodic) grid consists of the even multiples of pi/N, the
    MINUS (anti-periodic) grid of the odd multiples; each contains exactly
    N values and the two grids are disjoint.

    Parameters
    ----------
    n_sites : int
        Ring length, >= 2.
    sector : Sector

    Returns
    -------
    numpy.ndarray
        N momenta in (-pi, pi], ascending.
    """
    if n_sites < 2:
        raise ValueError("n_sites must be >= 2")
    if sector is Sector.PLUS:
        ints = np.arange(-2 * ((n_sites - 1) // 2), n_sites + 1, 2)
    else:
        ints = np.arange(-(2 * (n_sites // 2) - 1), n_sites + 1, 2)
    q = ints * (np.pi / n_sites)
    q = q[(q > -np.pi) & (q <= np.pi + 1e-15)]
    assert len(q) == n_sites
    return np.sort(q)


def bogoliubov_coefficients(q: float, m: int) -> tuple[float, float, float]:
    """Bogoliubov coefficients (u^2, v^2, uv) at momentum q for range m.

    Valid at h = 0, where the quasiparticle rotation depends only on the
    phase m*q:

        u^2 = (1 - (-1)^m cos mq) / 2,
        v^2 = (1 + (-1)^m cos mq) / 2,
        uv  = -(-1)^m sin(mq) / 2.

    The 1/2 in ``uv`` is forced by normalization u^2 + v^2 = 1 together
    with (uv)^2 = u^2 v^2.

    Parameters
    ----------
    q : float
        Momentum in (-pi, pi].
    m : int
        Interaction range.

    Returns
    -------
    (u_sq, v_sq, uv) : tuple of float
    """
    if not (-np.pi - 1e-12 < q <= np.pi + 1e-12):
        raise ValueError(f"momentum q must lie in (-pi, pi], got {q}")
    s = (-1.0) ** m
    u_sq = 0.5 * (1.0 - s * np.cos(m * q))
    v_sq = 0.5 * (1.0 + s * np.cos(m * q))
    uv = -0.5 * s * np.sin(m * q)
    return float(u_sq), float(v_sq), float(uv)

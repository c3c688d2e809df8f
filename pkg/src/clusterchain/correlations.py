"""Ground-state Majorana correlation matrices.

All Gaussian-state entropies derive from the two-point functions

    g_r = < (c^dag_j - c_j)(c^dag_{j+r} + c_{j+r}) >,

collected into an N x N matrix ``C`` with ``C[j, k] = g_{k-j}`` and then
into the real antisymmetric 2N x 2N matrix ``Gamma`` whose 2x2 blocks are

    Pi_r = [[0, -g_r], [g_{-r}, 0]].

At h = 0 the correlations have closed forms: a pure delta
``g_r = (-1)^m delta_{-r, m}`` for the generic ground states, plus a
uniform ``2/N`` background for the odd-N odd-m representative with the
zero-momentum quasiparticle occupied.  For general fields the matrix is
computed numerically from the BdG factors: the vacuum gives
``<y_j x_k> = -(left right^T)_{jk}`` and each occupied quasiparticle adds
``+2 u u'^T``-type rank-one corrections (a sign flip of that mode's
contribution).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .freefermion import GroundStateInfo
from .model import ModelParams, Sector

__all__ = [
    "MajoranaCorrelation",
    "gr_closed_form_oddodd",
    "gr_closed_form_other",
    "correlation_matrix",
    "reduced_gamma",
]


@dataclass(frozen=True)
class MajoranaCorrelation:
    """2N x 2N antisymmetric ground-state correlation matrix.

    Attributes
    ----------
    matrix : numpy.ndarray
        The Gamma matrix in site-major interleaved layout: rows/columns
        (2j, 2j+1) are the two Majorana flavors of site j, so a contiguous
        block of l sites is the leading 2l x 2l submatrix (after offset).
    n_sites : int
    source : str
        Provenance tag: ``closed_form_oddodd``, ``closed_form_other`` or
        ``numeric_bdg``.
    gmat : numpy.ndarray
        The underlying N x N matrix with ``gmat[j, k] = g_{k-j}``; the
        singular values of its subblocks are the nu spectrum used for
        entropies (kept because it is much cheaper to decompose than the
        equivalent Gamma subblocks).
    """

    matrix: np.ndarray
    n_sites: int
    source: str
    gmat: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.shape != (2 * self.n_sites, 2 * self.n_sites):
            raise ValueError("matrix must be 2N x 2N")
        if np.abs(mat + mat.T).max() > 1e-12:
            raise ValueError("correlation matrix must be antisymmetric")


def _check_displacement(n_sites: int, r: int) -> None:
    if not (-n_sites / 2 < r <= n_sites / 2):
        raise ValueError(
            f"displacement r must lie in (-N/2, N/2], got r={r} for N={n_sites}"
        )


def gr_closed_form_oddodd(params: ModelParams, r: int) -> float:
    """Closed-form g_r for the odd-N, odd-m, h=0 representative state.

    For the zero-momentum-occupied state the correlation acquires a
    uniform long-range background on top of the delta:

        g_r = (-1)^m delta_{-r, m} + 2/N.

    Parameters
    ----------
    params : ModelParams
        Must have N odd, m odd, h = 0.
    r : int
        Ring displacement in (-N/2, N/2].
    """
    n, m = params.n_sites, params.range_
    if n % 2 == 0 or m % 2 == 0 or params.field != 0:
        raise ValueError("closed form requires N odd, m odd, h = 0")
    _check_displacement(n, r)
    delta = 1.0 if (r + m) % n == 0 else 0.0
    return (-1.0) ** m * delta + 2.0 / n


def gr_closed_form_other(params: ModelParams, r: int) -> float:
    """Closed-form g_r for the h=0 ground states of all other parities.

    g_r = (-1)^m delta_{-r, m}; valid whenever (N, m) is not odd-odd.

    Parameters
    ----------
    params : ModelParams
        Must have h = 0 and not (N odd and m odd).
    r : int
        Ring displacement in (-N/2, N/2].
    """
    n, m = params.n_sites, params.range_
    if params.field != 0 or (n % 2 == 1 and m % 2 == 1):
        raise ValueError("closed form requires h = 0 and not (N odd, m odd)")
    _check_displacement(n, r)
    delta = 1.0 if (r + m) % n == 0 else 0.0
    return (-1.0) ** m * delta


def _gamma_from_gmat(gmat: np.ndarray) -> np.ndarray:
    n = gmat.shape[0]
    gamma = np.zeros((2 * n, 2 * n))
    gamma[0::2, 1::2] = -gmat
    gamma[1::2, 0::2] = gmat.T
    return gamma


def correlation_matrix(params: ModelParams, state: GroundStateInfo) -> MajoranaCorrelation:
    """Assemble the full 2N x 2N Majorana correlation matrix of a state.

    Uses the h=0 closed forms when they apply to the given state
    (tagged ``closed_form_*``), otherwise the numeric BdG construction
    from the stored solution and occupied-mode wavefunctions
    (tagged ``numeric_bdg``).

    Parameters
    ----------
    params : ModelParams
    state : GroundStateInfo
        Must have been produced by :mod:`clusterchain.freefermion` for the
        same parameters.
    """
    n = params.n_sites
    if state.params is None or state.solution is None:
        raise ValueError("state carries no BdG data; produce it via freefermion")
    if state.params.n_sites != n or state.params.range_ != params.range_:
        raise ValueError("state/params dimension mismatch")

    source = "numeric_bdg"
    gmat = None
    if params.field == 0 and state.sector is Sector.PLUS:
        if state.state_label == "c0^dag|phi+>":
            m = params.range_
            gmat = np.full((n, n), 2.0 / n)
            for j in range(n):
                gmat[j, (j - m) % n] += (-1.0) ** m
            source = "closed_form_oddodd"
        elif not state.occupied_modes:
            m = params.range_
            gmat = np.zeros((n, n))
            for j in range(n):
                gmat[j, (j - m) % n] = (-1.0) ** m
            source = "closed_form_other"
    if gmat is None:
        sol = state.solution
        # vacuum: <y_j x_k> = -(R W^T)_{jk}; occupied modes flip their sign
        G = -sol.left @ sol.right.T
        if state.occupied_modes:
            G = G + 2.0 * state.mode_left @ state.mode_right.T
        gmat = G.T  # reorient so gmat[j, k] = g_{k-j}
    return MajoranaCorrelation(
        matrix=_gamma_from_gmat(gmat), n_sites=n, source=source, gmat=gmat
    )


def reduced_gamma(corr: MajoranaCorrelation, sites) -> np.ndarray:
    """Reduced correlation matrix of an arbitrary site subset.

    Extracts the rows/columns of both Majorana flavors for each selected
    site, preserving the 2x2 block layout; for a contiguous run of l sites
    this is exactly the l-block Toeplitz matrix.

    Parameters
    ----------
    corr : MajoranaCorrelation
    sites : sequence of int
        Site indices in [0, N), no duplicates; order is preserved.

    Returns
    -------
    numpy.ndarray
        2|sites| x 2|sites| real antisymmetric matrix.
    """
    sites = list(sites)
    if not sites:
        raise ValueError("sites must be nonempty")
    if len(set(sites)) != len(sites):
        raise ValueError("duplicate site indices")
    if min(sites) < 0 or max(sites) >= corr.n_sites:
        raise ValueError(f"site indices must lie in [0, {corr.n_sites})")
    idx = np.array([[2 * s, 2 * s + 1] for s in sites]).ravel()
    return corr.matrix[np.ix_(idx, idx)]

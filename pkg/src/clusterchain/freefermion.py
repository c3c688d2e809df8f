"""BdG diagonalization and parity-constrained ground-state selection.

The sector Hamiltonians are written as  H = sum_jk T_jk y_j x_k  with
``y_j = c^dag_j - c_j`` and ``x_j = c^dag_j + c_j``.  An SVD
``T = R diag(s) W^T`` brings this to quasiparticle form with energies
``eps_k = 2 s_k`` and vacuum energy ``-sum_k s_k``; the vacuum fermion
parity is the sign of ``det(R) det(W)``.  Physical states of a sector must
carry ``sector.required_parity``, so when the Bogoliubov vacuum has the
wrong parity the lowest quasiparticle is occupied on top of it.

At h = 0 all quasiparticle energies are exactly 2|J| (a flat band) and the
lowest level is massively degenerate; in that case the occupied mode is
resolved to the translation-invariant zero-momentum (PLUS) or
pi-momentum (MINUS, odd N) combination, which is the representative whose
correlations take the known closed forms.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, QuadraticForm, Sector, build_quadratic_form, momentum_grid

__all__ = [
    "BdGSolution",
    "GroundStateInfo",
    "diagonalize",
    "vacuum_parity",
    "sector_ground",
    "ground_state",
    "low_spectrum",
    "degeneracy_count",
]

#: single-particle energies below this are treated as exact zero modes
_ZERO_MODE_TOL = 1e-12


@dataclass(frozen=True)
class BdGSolution:
    """Diagonalized quadratic form of one parity sector.

    Attributes
    ----------
    energies : numpy.ndarray
        N single-quasiparticle energies, ascending, >= 0 (values below
        1e-12 clipped to exactly 0).
    transform : numpy.ndarray
        2N x 2N real orthogonal Bogoliubov rotation in the site-major
        interleaved Majorana layout (per-site slots: y-type then x-type).
        Its determinant is the vacuum fermion parity.
    vacuum_energy : float
        Energy of the Bogoliubov vacuum, including the scalar constant of
        the quadratic form.
    vacuum_parity : int
        Fermion-number parity (+1/-1) of the Bogoliubov vacuum.
    sector : Sector
    left, right : numpy.ndarray
        N x N orthogonal factors of the coupling matrix SVD
        ``T = left diag(s) right^T``, columns aligned with ``energies``.
        They carry the mode wavefunctions needed downstream for
        correlation matrices.
    """

    energies: np.ndarray
    transform: np.ndarray
    vacuum_energy: float
    vacuum_parity: int
    sector: Sector
    left: np.ndarray = field(repr=False, default=None)
    right: np.ndarray = field(repr=False, default=None)

    @property
    def n_sites(self) -> int:
        return len(self.energies)


@dataclass(frozen=True)
class GroundStateInfo:
    """Lowest parity-valid state of a sector (or of the full model).

    ``occupied_modes`` lists quasiparticle indices occupied on top of the
    Bogoliubov vacuum (empty when the vacuum itself has the right parity).
    When the occupied level is degenerate the actual mode is a specific
    combination within the degenerate subspace; ``mode_left``/``mode_right``
    store its wavefunctions so correlation matrices can be rebuilt without
    re-deriving the choice.
    """

    energy: float
    sector: Sector
    occupied_modes: tuple[int, ...]
    state_label: str
    degeneracy: int
    params: ModelParams = field(repr=False, default=None)
    solution: BdGSolution = field(repr=False, default=None)
    mode_left: np.ndarray = field(repr=False, default=None)
    mode_right: np.ndarray = field(repr=False, default=None)


def _fourier_factorization(form: QuadraticForm):
    """Exact SVD of the (twisted-)circulant coupling matrix via its momenta.

    The coupling matrix of the translation-invariant ring commutes with the
    sector-twisted shift, so its singular triplets are momentum combinations
    with analytically known phases: the complex eigenvalue at momentum q is
    ``lambda_q = sum_k T[0, k] exp(i q k)`` and contributes singular value
    ``|lambda_q|`` with the left/right phase offset ``arg(lambda_q)``.
    Building the factors this way (instead of a numerical SVD) pins down
    the otherwise arbitrary left/right pairing inside degenerate singular
    clusters.  In particular the exact zero modes at the critical field get
    the phase-0 pairing, which is the limit of the unique gapped ground
    state as the critical point is approached from below.

    Returns (s, R, W) with ``T = R diag(s) W^T`` (columns in grid order,
    not sorted), or None when T lacks the circulant structure.
    """
    T = form.coupling_matrix
    n = T.shape[0]
    row = T[0]
    scale = max(np.abs(row).max(), 1.0)
    ztol = 1e-12 * scale
    k = np.arange(n)
    s = np.empty(n)
    R = np.empty((n, n))
    W = np.empty((n, n))
    col = 0
    for q in momentum_grid(n, form.sector):
        if q < -1e-12:
            continue  # handled together with its +q partner
        lam = complex(np.sum(row * np.exp(1j * q * k)))
        if abs(q) < 1e-12 or abs(q - np.pi) < 1e-12:
            # self-conjugate momentum: a real eigenvector
            v = np.cos(q * k) / np.sqrt(n)
            a = lam.real
            sign = -1.0 if a < -ztol else 1.0
            s[col] = abs(a)
            W[:, col] = v
            R[:, col] = sign * v
            col += 1
        else:
            # +-q pair: T acts on (cos, sin) as |lambda| times a rotation
            c = np.cos(q * k) * np.sqrt(2.0 / n)
            d = np.sin(q * k) * np.sqrt(2.0 / n)
            rho = abs(lam)
            if rho < ztol:
                ca, cb = 1.0, 0.0
            else:
                ca, cb = lam.real / rho, lam.imag / rho
            s[col] = s[col + 1] = rho
            W[:, col] = c
            W[:, col + 1] = d
            R[:, col] = ca * c - cb * d
            R[:, col + 1] = cb * c + ca * d
            col += 2
    if col != n:
        return None
    # spot-check the factorization on random vectors (cheap, O(N^2))
    rng = np.random.default_rng(0)
    probe = rng.normal(size=(n, 2))
    if not np.allclose(R @ (s[:, None] * (W.T @ probe)), T @ probe,
                       atol=1e-10 * scale * n):
        return None
    return s, R, W


def diagonalize(form: QuadraticForm) -> BdGSolution:
    """Diagonalize a sector quadratic form into quasiparticles.

    The translation-invariant coupling matrices of this model are factored
    analytically through their momentum modes (see
    :func:`_fourier_factorization`), which makes the mode basis -- and
    hence the ground-state correlations -- deterministic even when the
    single-particle spectrum is degenerate or has exact zero modes.  A
    generic quadratic form falls back to a numerical SVD.

    Parameters
    ----------
    form : QuadraticForm

    Returns
    -------
    BdGSolution

    Raises
    ------
    numpy.linalg.LinAlgError
        If the fallback SVD fails to converge (pathological input).
    """
    T = form.coupling_matrix
    n = T.shape[0]
    built = _fourier_factorization(form)
    if built is not None:
        s, R, W = built
    else:
        R, s, Wt = np.linalg.svd(T)
        W = Wt.T
    # ascending energy order
    order = np.argsort(s, kind="stable")
    s = s[order]
    R = R[:, order]
    W = W[:, order]
    energies = 2.0 * s
    energies[energies < _ZERO_MODE_TOL] = 0.0
    parity = int(round(np.sign(np.linalg.det(R)) * np.sign(np.linalg.det(W))))
    # interleaved Majorana layout: row/col 2j = y-slot, 2j+1 = x-slot of site j
    transform = np.zeros((2 * n, 2 * n))
    transform[0::2, 0::2] = R
    transform[1::2, 1::2] = W
    # the coupling bilinear sum_k s_k (2 n_k - 1) is the complete sector
    # Hamiltonian (form.constant = -tr T is the scalar part of its
    # hopping/pairing split, not an extra offset)
    vac = float(-s.sum())
    return BdGSolution(
        energies=energies,
        transform=transform,
        vacuum_energy=vac,
        vacuum_parity=parity,
        sector=form.sector,
        left=R,
        right=W,
    )


def vacuum_parity(solution: BdGSolution) -> int:
    """Fermion-number parity of the Bogoliubov vacuum.

    Computed as the sign of the determinant of the 2N x 2N orthogonal
    transform (+1 = even).
    """
    det = np.linalg.det(solution.transform)
    return int(round(np.sign(det)))


def _occupation_choice(sol: BdGSolution, params: ModelParams) -> tuple[np.ndarray, np.ndarray, int, str]:
    """Pick the quasiparticle to occupy when the vacuum parity is wrong.

    Returns (u, v, index, tag): the left/right wavefunctions of the
    occupied mode, the index of the energy level used, and a label tag.
    Within a degenerate lowest level the momentum-definite combination is
    selected: the uniform (q=0) vector for PLUS, the staggered (q=pi)
    vector for MINUS at odd N.  Both are exact singular vectors of the
    circulant coupling matrix whenever they overlap the degenerate
    subspace at all.
    """
    n = sol.n_sites
    s = sol.energies / 2.0
    smin = s[0]
    tie = max(params.degeneracy_tol, 1e-9 * max(abs(params.coupling), params.field, 1.0))
    cluster = np.where(s < smin + tie)[0]
    if sol.sector is Sector.PLUS:
        special = np.full(n, 1.0 / np.sqrt(n))
        tag = "q=0"
    else:
        special = np.array([(-1.0) ** j for j in range(n)]) / np.sqrt(n)
        tag = "q=pi"
    o = sol.left[:, cluster].T @ special
    norm = np.linalg.norm(o)
    if norm > 1e-9:
        o = o / norm
    else:
        # degenerate subspace orthogonal to the momentum-definite vector
        # (does not occur for the physical ground states of this model);
        # fall back to the raw lowest mode
        o = np.zeros(len(cluster))
        o[0] = 1.0
        tag = "lowest"
    u = sol.left[:, cluster] @ o
    v = sol.right[:, cluster] @ o
    return u, v, int(cluster[0]), tag


def sector_ground(params: ModelParams, sector: Sector) -> GroundStateInfo:
    """Lowest-energy state of one sector satisfying its parity constraint.

    Returns the Bogoliubov vacuum when its fermion parity matches
    ``sector.required_parity``, otherwise the vacuum with the single
    lowest quasiparticle occupied (momentum-resolved within a degenerate
    level, see module docstring).

    The returned info does not fill ``degeneracy`` across sectors; use
    :func:`ground_state` for the global count.
    """
    sol = diagonalize(build_quadratic_form(params, sector))
    base = "|phi+>" if sector is Sector.PLUS else "|phi->"
    if sol.vacuum_parity == sector.required_parity:
        return GroundStateInfo(
            energy=sol.vacuum_energy,
            sector=sector,
            occupied_modes=(),
            state_label=base,
            degeneracy=1,
            params=params,
            solution=sol,
        )
    u, v, idx, tag = _occupation_choice(sol, params)
    if sector is Sector.PLUS and tag == "q=0":
        label = "c0^dag|phi+>"
    elif sector is Sector.MINUS and tag == "q=pi":
        # occupying the pi quasiparticle of the reference vacuum produces
        # the parity-valid anti-periodic vacuum state
        label = "|phi->"
    else:
        label = f"eta^dag({tag}){base}"
    return GroundStateInfo(
        energy=sol.vacuum_energy + sol.energies[idx],
        sector=sector,
        occupied_modes=(idx,),
        state_label=label,
        degeneracy=1,
        params=params,
        solution=sol,
        mode_left=u[:, None],
        mode_right=v[:, None],
    )


def ground_state(params: ModelParams) -> GroundStateInfo:
    """Global ground state across both parity sectors.

    Ties within ``degeneracy_tol`` are broken in favor of PLUS, whose
    representative is the translation-invariant state with known
    closed-form correlations.  ``degeneracy`` counts all many-body states
    of either sector within ``degeneracy_tol`` of the minimum.
    """
    gp = sector_ground(params, Sector.PLUS)
    gm = sector_ground(params, Sector.MINUS)
    best = gp if gp.energy <= gm.energy + params.degeneracy_tol else gm
    deg = degeneracy_count(params)
    return GroundStateInfo(
        energy=best.energy,
        sector=best.sector,
        occupied_modes=best.occupied_modes,
        state_label=best.state_label,
        degeneracy=deg,
        params=params,
        solution=best.solution,
        mode_left=best.mode_left,
        mode_right=best.mode_right,
    )


def _subset_sums_ascending(eps: np.ndarray):
    """Yield (sum, n_occupied mod 2) over all occupation subsets, ascending.

    Classic best-first enumeration of k-smallest subset sums: states are
    (sum, last index, size); successors extend by the next energy or swap
    the last energy for the next.  Requires ``eps`` sorted ascending and
    nonnegative, which BdG energies are.
    """
    n = len(eps)
    yield 0.0, 0
    if n == 0:
        return
    heap = [(float(eps[0]), 0, 1)]
    while heap:
        total, i, size = heapq.heappop(heap)
        yield total, size & 1
        if i + 1 < n:
            heapq.heappush(heap, (total + float(eps[i + 1]), i + 1, size + 1))
            heapq.heappush(heap, (total - float(eps[i]) + float(eps[i + 1]), i + 1, size))


def low_spectrum(params: ModelParams, k: int) -> np.ndarray:
    """k lowest many-body energies of the full spin model, ascending.

    For each sector the parity-valid quasiparticle occupation subsets are
    enumerated in ascending total energy by a best-first frontier search;
    the two sector streams are then merged.  The result is a prefix of the
    list for any larger k.

    Parameters
    ----------
    params : ModelParams
    k : int
        Number of energies, 1 <= k <= 2^N.

    Returns
    -------
    numpy.ndarray of length k
    """
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    n = params.n_sites
    k = min(k, 1 << n)
    out = []
    for sector in (Sector.PLUS, Sector.MINUS):
        sol = diagonalize(build_quadratic_form(params, sector))
        vac_even = sol.vacuum_parity == +1
        want_even = sector.required_parity == +1
        got = []
        for total, size_parity in _subset_sums_ascending(sol.energies):
            subset_even = size_parity == 0
            if (vac_even == subset_even) == want_even:
                got.append(sol.vacuum_energy + total)
                if len(got) >= k:
                    break
        out.extend(got)
    out.sort()
    return np.array(out[:k])


def degeneracy_count(params: ModelParams) -> int:
    """Number of many-body states within ``degeneracy_tol`` of the minimum."""
    k = 16
    limit = 1 << params.n_sites
    while True:
        spect = low_spectrum(params, k)
        count = int((spect < spect[0] + params.degeneracy_tol).sum())
        if count < len(spect) or len(spect) >= limit:
            return count
        k *= 4

"""Block entropies and conditional mutual information on the ring.

Entropies of Gaussian states follow from the reduced Majorana correlation
matrix: its eigenvalues come in pairs +-i*nu with nu in [0, 1], and

    S = sum_pairs H2((1 + nu)/2)            (bits),

where H2 is the binary entropy.  For the canonical two-flavor layout used
throughout this package the nu values are simply the singular values of
the inter-flavor subblock, which is much cheaper than diagonalizing the
full antisymmetric matrix; a generic antisymmetric matrix falls back to a
Hermitian eigendecomposition of i*Gamma.

The conditional mutual information S_AB + S_BC - S_B - S_ABC is evaluated
on near-equal contiguous arc partitions of the ring (3 or 4 arcs); with 4
arcs the fourth arc D is excluded, making the quantity sensitive to
long-range entanglement between disconnected regions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlations import MajoranaCorrelation, correlation_matrix, reduced_gamma
from .freefermion import GroundStateInfo
from .model import ModelParams

__all__ = [
    "Partition",
    "EntropyResult",
    "entropy_from_gamma",
    "block_entropy",
    "make_partition",
    "cmi",
    "entropy_of_sites",
]


@dataclass(frozen=True)
class Partition:
    """Ordered contiguous arc partition of the ring.

    Attributes
    ----------
    blocks : tuple of (start, length)
        3 or 4 arcs, consecutive on the ring starting at site 0, lengths
        summing to N.
    n_sites : int
    """

    blocks: tuple[tuple[int, int], ...]
    n_sites: int

    def __post_init__(self):
        if len(self.blocks) not in (3, 4):
            raise ValueError("partition must have 3 or 4 arcs")
        covered = []
        for start, length in self.blocks:
            if length <= 0:
                raise ValueError("arc lengths must be positive")
            covered.extend((start + i) % self.n_sites for i in range(length))
        if sorted(covered) != list(range(self.n_sites)):
            raise ValueError("arcs must cover the ring exactly once")

    @property
    def labels(self) -> tuple[str, ...]:
        return ("A", "B", "C", "D")[: len(self.blocks)]

    def sites(self, index: int) -> list[int]:
        """Site indices of arc `index` (0 = A, 1 = B, ...)."""
        start, length = self.blocks[index]
        return [(start + i) % self.n_sites for i in range(length)]


@dataclass(frozen=True)
class EntropyResult:
    """Entropy of one region together with its correlation spectrum.

    ``nu_spectrum`` holds the 2l eigenvalue magnitudes (each nu appears
    twice, once per +-i*nu pair), sorted ascending, clipped to [0, 1].
    ``region`` records the site indices the entropy refers to.
    """

    value: float
    nu_spectrum: np.ndarray
    region: tuple[int, ...]


def _binary_entropy(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 0.0, 1.0)
    out = np.zeros_like(p)
    mask = (p > 0) & (p < 1)
    pm = p[mask]
    out[mask] = -pm * np.log2(pm) - (1 - pm) * np.log2(1 - pm)
    return out


def _nu_values(gamma: np.ndarray, clip: float) -> np.ndarray:
    """Eigenvalue magnitudes nu (2l values) of an antisymmetric matrix."""
    dim = gamma.shape[0]
    if dim % 2 == 0:
        # canonical two-flavor layout: zero diagonal-flavor blocks mean the
        # nu values are the singular values of the inter-flavor block
        even_even = gamma[0::2, 0::2]
        odd_odd = gamma[1::2, 1::2]
        if np.abs(even_even).max(initial=0.0) == 0.0 and np.abs(odd_odd).max(initial=0.0) == 0.0:
            sv = np.linalg.svd(gamma[0::2, 1::2], compute_uv=False)
            nu = np.concatenate([sv, sv])
        else:
            nu = np.abs(np.linalg.eigvalsh(1j * gamma))
    else:
        nu = np.abs(np.linalg.eigvalsh(1j * gamma))
    if nu.max(initial=0.0) > 1.0 + clip:
        raise ValueError(
            f"correlation eigenvalue magnitude {nu.max():.3e} exceeds 1 + {clip:.1e}; "
            "invalid correlation matrix"
        )
    return np.sort(np.clip(nu, 0.0, 1.0))


def entropy_from_gamma(gamma: np.ndarray, entropy_clip: float = 1e-9,
                       region: tuple[int, ...] = ()) -> EntropyResult:
    """Von Neumann entropy (bits) of a reduced Majorana correlation matrix.

    Parameters
    ----------
    gamma : numpy.ndarray
        Real antisymmetric matrix (2l x 2l for l fermion modes).
    entropy_clip : float
        Eigenvalue magnitudes within this distance above 1 are clipped;
        anything larger raises ValueError.
    region : tuple of int, optional
        Site descriptor stored on the result.

    Returns
    -------
    EntropyResult
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise ValueError("gamma must be square")
    if np.abs(gamma + gamma.T).max(initial=0.0) > 1e-10:
        raise ValueError("gamma must be antisymmetric")
    nu = _nu_values(gamma, entropy_clip)
    # each +-i*nu pair contributes H2((1+nu)/2); summing the symmetric H2
    # over all 2l unsigned values double-counts, hence the 1/2
    value = float(0.5 * _binary_entropy((1.0 + nu) / 2.0).sum())
    return EntropyResult(value=value, nu_spectrum=nu, region=tuple(region))


def entropy_of_sites(corr: MajoranaCorrelation, sites,
                     entropy_clip: float = 1e-9) -> EntropyResult:
    """Entropy of an arbitrary site subset of a correlation matrix."""
    gamma = reduced_gamma(corr, sites)
    return entropy_from_gamma(gamma, entropy_clip, region=tuple(sites))


def block_entropy(params: ModelParams, state: GroundStateInfo, l: int,
                  offset: int = 0, corr: MajoranaCorrelation | None = None) -> EntropyResult:
    """Entropy of the contiguous block of ``l`` sites starting at ``offset``.

    Parameters
    ----------
    params : ModelParams
    state : GroundStateInfo
        State whose correlations are used (from :mod:`freefermion`).
    l : int
        Block length, m <= l <= N - 1.
    offset : int
        First site of the block (wraps around the ring).
    corr : MajoranaCorrelation, optional
        Precomputed correlation matrix of the state; pass it when sweeping
        many blocks of the same state to avoid rebuilding.
    """
    n = params.n_sites
    if not params.range_ <= l <= n - 1:
        raise ValueError(f"block length must satisfy m <= l <= N-1, got l={l}")
    if not 0 <= offset < n:
        raise ValueError(f"offset must lie in [0, N), got {offset}")
    if corr is None:
        corr = correlation_matrix(params, state)
    sites = [(offset + i) % n for i in range(l)]
    return entropy_of_sites(corr, sites, params.entropy_clip)


def make_partition(n_sites: int, n_parts: int) -> Partition:
    """Near-equal contiguous arc partition anchored at site 0.

    Arc lengths are floor(N/p), with the remainder distributed one site
    per arc starting from the LAST arc and moving backward, e.g.
    N=25 -> (8, 8, 9) for 3 parts and (6, 6, 6, 7) for 4 parts.
    """
    if n_parts not in (3, 4):
        raise ValueError("n_parts must be 3 or 4")
    if n_sites < n_parts:
        raise ValueError("need at least one site per arc")
    base = n_sites // n_parts
    lengths = [base] * n_parts
    for i in range(n_sites - base * n_parts):
        lengths[n_parts - 1 - i] += 1
    blocks, start = [], 0
    for length in lengths:
        blocks.append((start, length))
        start += length
    return Partition(blocks=tuple(blocks), n_sites=n_sites)


def cmi(params: ModelParams, state: GroundStateInfo, partition: Partition,
        corr: MajoranaCorrelation | None = None) -> float:
    """Conditional mutual information S_AB + S_BC - S_B - S_ABC (bits).

    With a 3-arc partition A u B u C is the full ring; with 4 arcs the
    last arc D is left out, so the quantity probes entanglement between
    the disconnected regions A and C conditioned on B.
    """
    if partition.n_sites != params.n_sites:
        raise ValueError("partition size does not match params")
    if corr is None:
        corr = correlation_matrix(params, state)
    a, b, c = partition.sites(0), partition.sites(1), partition.sites(2)
    clip = params.entropy_clip
    s_ab = entropy_of_sites(corr, a + b, clip).value
    s_bc = entropy_of_sites(corr, b + c, clip).value
    s_b = entropy_of_sites(corr, b, clip).value
    s_abc = entropy_of_sites(corr, a + b + c, clip).value
    return s_ab + s_bc - s_b - s_abc

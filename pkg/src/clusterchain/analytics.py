"""Closed-form entropy predictions and critical scaling fits.

For the odd-N odd-m ground-state representative at h = 0, the reduced
correlation matrix of a contiguous block of l sites has an eigenvalue
spectrum known in closed form: 2(m-1) zeros, 2(l-m-1) unit values, and
two +- pairs at

    v1, v2 = sqrt( [4(a^2 + b - a) + 1 +- (1 - 2a) x] / 2 ),
    x = sqrt( 4(a^2 + 2b - a) + 1 ),        a = l/N,  b = m/N,

giving the block entropy

    S_l = m - 1 + H2((1 + v1)/2) + H2((1 + v2)/2)      (bits).

At criticality (h = J) the closed forms no longer apply; half-chain
entropies are generated numerically and fitted to S = slope * log2(N) +
intercept, whose slope approaches m/6, i.e. central charge c = m/2 via
c = 3 * slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entanglement import EntropyResult

__all__ = [
    "ClosedFormEntropy",
    "ScalingFit",
    "closed_form_entropy_oddodd",
    "entropy_bounds_check",
    "scaling_fit",
]


def _h2(p: float) -> float:
    out = 0.0
    if 0.0 < p < 1.0:
        out -= p * math.log2(p) + (1 - p) * math.log2(1 - p)
    return out


@dataclass(frozen=True)
class ClosedFormEntropy:
    """Closed-form block entropy data for the odd-odd h=0 representative.

    alpha = l/N, beta = m/N; x, v1, v2 are the auxiliary quantities of the
    correlation-spectrum closed form; entropy is in bits.
    """

    alpha: float
    beta: float
    x: float
    v1: float
    v2: float
    entropy: float

    def __post_init__(self):
        if not 0.0 < self.beta <= self.alpha <= 0.5 + 1e-12:
            raise ValueError("requires 0 < beta <= alpha <= 1/2")
        for v in (self.v1, self.v2):
            if not -1e-12 <= v <= 1.0 + 1e-12:
                raise ValueError("v1, v2 must lie in [0, 1]")


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of half-chain entropy against log2(N).

    central_charge = 3 * slope (periodic critical chain convention, under
    which a slope of m/6 corresponds to c = m/2).
    """

    slope: float
    intercept: float
    residual: float
    points: tuple[tuple[int, float], ...]
    central_charge: float


def closed_form_entropy_oddodd(n_sites: int, l: int, m: int) -> ClosedFormEntropy:
    """Closed-form block entropy for the odd-N odd-m h=0 representative.

    Parameters
    ----------
    n_sites : int
        Ring length N (odd).
    l : int
        Block length with m <= l <= (N-1)/2.
    m : int
        Interaction range (odd).

    Returns
    -------
    ClosedFormEntropy
    """
    if n_sites % 2 == 0 or m % 2 == 0:
        raise ValueError("closed form requires N odd and m odd")
    if not m <= l <= (n_sites - 1) // 2:
        raise ValueError(f"requires m <= l <= (N-1)/2, got l={l}")
    a = l / n_sites
    b = m / n_sites
    x = math.sqrt(4.0 * (a * a + 2.0 * b - a) + 1.0)
    base = 4.0 * (a * a + b - a) + 1.0
    v1 = math.sqrt(max(0.5 * (base + (1.0 - 2.0 * a) * x), 0.0))
    v2 = math.sqrt(max(0.5 * (base - (1.0 - 2.0 * a) * x), 0.0))
    v1 = min(v1, 1.0)
    v2 = min(v2, 1.0)
    entropy = (m - 1) + _h2((1.0 + v1) / 2.0) + _h2((1.0 + v2) / 2.0)
    return ClosedFormEntropy(alpha=a, beta=b, x=x, v1=v1, v2=v2, entropy=entropy)


def entropy_bounds_check(results: list[EntropyResult], m: int,
                         n_sites: int | None = None,
                         tol: float = 1e-9) -> list[tuple[int, bool]]:
    """Check block entropies against the odd-odd plateau bounds.

    In the large-N limit the block entropy of the odd-odd h=0 state obeys
    m <= S_l <= m + 1.  At finite N the lower edge is approached from
    below: the minimum over the valid l range is attained at l = m, where
    S = m - 1 + H2(1/2 + m/N) < m by an O((m/N)^2) amount.  When
    ``n_sites`` is given, that exact finite-size minimum is used as the
    lower bound; otherwise the asymptotic bound m is used.

    Parameters
    ----------
    results : list of EntropyResult
        Block entropies; each result's region holds the l sites of its
        block, so the block length is inferred as len(region).
    m : int
        Interaction range.
    n_sites : int, optional
        Ring length, enabling the sharp finite-size lower bound.
    tol : float
        Slack added on both sides.

    Returns
    -------
    list of (l, passed) pairs, one per result.
    """
    if n_sites is not None:
        lower = (m - 1) + _h2(0.5 + m / n_sites) - tol
    else:
        lower = m - tol
    upper = m + 1 + tol
    report = []
    for res in results:
        l = len(res.region)
        report.append((l, bool(lower <= res.value <= upper)))
    return report


def scaling_fit(points) -> ScalingFit:
    """Ordinary least squares of half-chain entropy against log2(N).

    Parameters
    ----------
    points : sequence of (N, S_half)
        At least 4 points with distinct N.

    Returns
    -------
    ScalingFit
    """
    pts = [(int(n), float(s)) for n, s in points]
    ns = [p[0] for p in pts]
    if len(pts) < 4:
        raise ValueError("need at least 4 points")
    if len(set(ns)) < 2:
        raise ValueError("degenerate design: N values must be distinct")
    x = np.log2(np.array(ns, dtype=float))
    y = np.array([p[1] for p in pts])
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    return ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        residual=rms,
        points=tuple(pts),
        central_charge=float(3.0 * slope),
    )

"""Brute-force exact diagonalization oracle (N <= 14).

Everything here works on the full 2^N spin Hilbert space with bitmask
kernels: basis state ``s`` has bit j equal to the fermion occupation of
site j under the Jordan-Wigner convention ``sigma^z_j = 2 n_j - 1``.
Pauli strings act by bit flips and diagonal signs, so Hamiltonian
application never materializes a matrix unless asked for.

The module provides ground truth for energies, degeneracies, fermion
parities and subset entropies, independent of the free-fermion machinery.
For entropy comparisons on degenerate manifolds the ED ground state must
be *matched* to the free-fermion representative: the manifold is projected
onto the required fermion parity and, if still degenerate, onto the
cluster vector whose Majorana correlators agree with the production state
(selected through the parent functional of the Gaussian state).

``ed_subset_entropy`` offers two partial traces: the plain spin one
(bit-partition of the tensor product) and a fermionic one that includes
the Jordan-Wigner reordering signs.  They coincide for contiguous regions
but differ for disconnected regions, where only the fermionic version
matches Gaussian correlation-matrix entropies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .freefermion import GroundStateInfo
from .model import ModelParams

__all__ = [
    "SpinOperatorSpec",
    "cluster_field_spec",
    "build_hamiltonian",
    "dense_hamiltonian",
    "ed_spectrum",
    "parity_spectra",
    "ed_subset_entropy",
    "ed_matched_state",
    "fermion_parity_diagonal",
    "majorana_pair_expectation",
]

_MAX_SITES = 14
_DENSE_LIMIT = 11  # full dense diagonalization up to this N


@dataclass(frozen=True)
class SpinOperatorSpec:
    """Sum of Pauli strings: terms are (coefficient, ((site, axis), ...)).

    Axes are 'x', 'y', 'z'; site indices in [0, N).  N <= 14.
    """

    n_sites: int
    terms: tuple[tuple[float, tuple[tuple[int, str], ...]], ...]

    def __post_init__(self):
        if self.n_sites > _MAX_SITES:
            raise ValueError(f"n_sites must be <= {_MAX_SITES} (memory guard)")
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        for coeff, factors in self.terms:
            for site, axis in factors:
                if not 0 <= site < self.n_sites:
                    raise ValueError(f"site {site} out of range [0, {self.n_sites})")
                if axis not in ("x", "y", "z"):
                    raise ValueError(f"invalid axis {axis!r}")


def cluster_field_spec(params: ModelParams) -> SpinOperatorSpec:
    """Pauli-string form of the cluster chain with transverse field."""
    n, m = params.n_sites, params.range_
    terms = []
    for j in range(n):
        factors = [(j, "x")]
        factors += [((j + 1 + t) % n, "z") for t in range(m - 1)]
        factors += [((j + m) % n, "x")]
        terms.append((params.coupling, tuple(factors)))
    for j in range(n):
        terms.append((-params.field, ((j, "z"),)))
    return SpinOperatorSpec(n_sites=n, terms=tuple(terms))


def _bits(n_sites: int) -> np.ndarray:
    s = np.arange(1 << n_sites)
    return (s[:, None] >> np.arange(n_sites)[None, :]) & 1


def _term_kernels(spec: SpinOperatorSpec):
    """Per-term (flip_mask, amplitude array) pairs; complex iff y present."""
    bits = _bits(spec.n_sites)
    kernels = []
    for coeff, factors in spec.terms:
        flip = 0
        amp = np.full(1 << spec.n_sites, float(coeff), dtype=complex)
        for site, axis in factors:
            b = bits[:, site]
            if axis == "z":
                amp *= 2 * b - 1
            elif axis == "x":
                flip ^= 1 << site
            else:  # y: |b> -> i(1-2b)|1-b>
                flip ^= 1 << site
                amp *= 1j * (1 - 2 * b)
        if np.abs(amp.imag).max(initial=0.0) == 0.0:
            amp = amp.real.copy()
        kernels.append((flip, amp))
    return kernels


def build_hamiltonian(spec: SpinOperatorSpec) -> LinearOperator:
    """Matrix-free operator applying the Pauli-string sum to state vectors."""
    dim = 1 << spec.n_sites
    kernels = _term_kernels(spec)
    s = np.arange(dim)
    targets = [s ^ flip for flip, _ in kernels]
    is_complex = any(np.iscomplexobj(amp) for _, amp in kernels)
    dtype = complex if is_complex else float

    def matvec(v):
        v = np.asarray(v).reshape(dim)
        out = np.zeros(dim, dtype=np.result_type(v.dtype, dtype))
        for tgt, (_, amp) in zip(targets, kernels):
            out[tgt] += amp * v
        return out

    return LinearOperator((dim, dim), matvec=matvec, rmatvec=matvec, dtype=np.dtype(dtype))


def dense_hamiltonian(spec: SpinOperatorSpec) -> np.ndarray:
    """Dense matrix of the Pauli-string sum (use only for small N)."""
    dim = 1 << spec.n_sites
    kernels = _term_kernels(spec)
    is_complex = any(np.iscomplexobj(amp) for _, amp in kernels)
    H = np.zeros((dim, dim), dtype=complex if is_complex else float)
    s = np.arange(dim)
    for flip, amp in kernels:
        H[s ^ flip, s] += amp
    return H


def fermion_parity_diagonal(n_sites: int) -> np.ndarray:
    """Diagonal of the fermion-number parity operator, (-1)^(sum n_j)."""
    return (-1.0) ** _bits(n_sites).sum(axis=1)


def ed_spectrum(spec: SpinOperatorSpec, k: int, return_vectors: bool = False):
    """k lowest eigenvalues (ascending), dense for small N, Krylov above.

    Parameters
    ----------
    spec : SpinOperatorSpec
    k : int
        1 <= k <= 64 for the iterative path.
    return_vectors : bool
        Also return the corresponding eigenvectors as columns.

    Raises
    ------
    RuntimeError
        If the iterative eigensolver fails to converge.
    """
    if k < 1:
        raise ValueError("k must be positive")
    dim = 1 << spec.n_sites
    k = min(k, dim)
    if spec.n_sites <= _DENSE_LIMIT:
        H = dense_hamiltonian(spec)
        if return_vectors:
            w, v = np.linalg.eigh(H)
            return w[:k], v[:, :k]
        return np.linalg.eigvalsh(H)[:k]
    if k > 64:
        raise ValueError("iterative path supports k <= 64")
    op = build_hamiltonian(spec)
    ncv = min(dim - 1, max(4 * k + 8, 64))
    try:
        w, v = eigsh(op, k=k, which="SA", ncv=ncv, maxiter=5000)
    except ArpackNoConvergence as exc:
        raise RuntimeError(
            f"eigensolver did not converge (N={spec.n_sites}, k={k}): {exc}"
        ) from exc
    order = np.argsort(w)
    if return_vectors:
        return w[order], v[:, order]
    return w[order]


def parity_spectra(spec: SpinOperatorSpec):
    """Full spectra of the odd and even fermion-parity blocks (dense).

    Returns (E_odd, E_even), each sorted ascending.  Exact degeneracy
    counting at N <= 12 relies on this blocked dense path: each block has
    dimension 2^(N-1), and the Hamiltonian commutes with fermion parity.
    """
    if spec.n_sites > 13:
        raise ValueError("blocked dense spectra limited to N <= 13")
    H = dense_hamiltonian(spec)
    pz = fermion_parity_diagonal(spec.n_sites)
    odd = np.where(pz < 0)[0]
    even = np.where(pz > 0)[0]
    e_odd = np.linalg.eigvalsh(H[np.ix_(odd, odd)])
    e_even = np.linalg.eigvalsh(H[np.ix_(even, even)])
    return np.sort(e_odd), np.sort(e_even)


def ed_subset_entropy(state: np.ndarray, sites, fermionic: bool = False) -> float:
    """Entanglement entropy (bits) of a site subset of a pure state.

    Parameters
    ----------
    state : numpy.ndarray
        Normalized vector over the 2^N basis.
    sites : sequence of int
        Subset A, |A| <= 12, indices in [0, N).
    fermionic : bool
        If True, include the Jordan-Wigner reordering signs so the result
        is the entropy of the *fermion-mode* subset.  Identical to the
        spin entropy for contiguous A; required for disconnected A when
        comparing against Gaussian correlation-matrix entropies.

    Returns
    -------
    float
    """
    state = np.asarray(state)
    n = int(round(np.log2(len(state))))
    if 1 << n != len(state):
        raise ValueError("state length must be a power of two")
    if abs(np.linalg.norm(state) - 1.0) > 1e-10:
        raise ValueError("state must be normalized")
    sites = list(sites)
    if len(sites) > 12:
        raise ValueError("subset too large (|A| <= 12)")
    if len(set(sites)) != len(sites) or any(not 0 <= j < n for j in sites):
        raise ValueError("invalid site subset")

    if fermionic:
        bits = _bits(n)
        comp = [j for j in range(n) if j not in sites]
        # reorder the creation-operator product from site order to
        # (A..., complement...) order: one sign per occupied pair (a, b)
        # with a in A, b in complement, b < a
        sign = np.ones(len(state))
        for a in sites:
            for b in comp:
                if b < a:
                    sign *= (-1.0) ** (bits[:, a] * bits[:, b])
        ia = np.zeros(len(state), dtype=int)
        for t, a in enumerate(sites):
            ia |= bits[:, a] << t
        ib = np.zeros(len(state), dtype=int)
        for t, b in enumerate(comp):
            ib |= bits[:, b] << t
        mat = np.zeros((1 << len(sites), 1 << len(comp)), dtype=state.dtype)
        mat[ia, ib] = sign * state
    else:
        psi = state.reshape((2,) * n)
        # axis i of the reshape corresponds to site n-1-i
        keep = [n - 1 - j for j in sites]
        rest = [a for a in range(n) if a not in keep]
        mat = np.transpose(psi, keep + rest).reshape(1 << len(sites), -1)
    sv = np.linalg.svd(mat, compute_uv=False)
    p = sv**2
    p = p[p > 1e-14]
    return float(-(p * np.log2(p)).sum())


def _translation_permutation(n_sites: int) -> np.ndarray:
    """Basis permutation of the one-site translation j -> j+1."""
    s = np.arange(1 << n_sites)
    return ((s << 1) | (s >> (n_sites - 1))) & ((1 << n_sites) - 1)


def _apply_majorana(vec: np.ndarray, site: int, bits: np.ndarray,
                    flavor: str) -> np.ndarray:
    """Apply a JW Majorana to state vectors (columns if 2-D).

    flavor 'x' is ``c^dag + c``: flip the bit with the string sign
    ``(-1)^(sum_{l<site} n_l)``; flavor 'y' is ``c^dag - c``: same with an
    extra (-1) when annihilating (bit set).
    """
    amp = (-1.0) ** bits[:, :site].sum(axis=1)
    if flavor == "y":
        amp = amp * (1.0 - 2.0 * bits[:, site])
    idx = np.arange(vec.shape[0]) ^ (1 << site)
    out = np.zeros_like(vec)
    if vec.ndim == 2:
        out[idx] = amp[:, None] * vec
    else:
        out[idx] = amp * vec
    return out


def majorana_pair_expectation(state: np.ndarray, j: int, k: int) -> float:
    """<state| (c^dag_j - c_j)(c^dag_k + c_k) |state> via JW bit kernels."""
    n = int(round(np.log2(len(state))))
    bits = _bits(n)
    v = np.asarray(state, dtype=float)
    return float(v @ _apply_majorana(_apply_majorana(v, k, bits, "x"), j, bits, "y"))


def ed_matched_state(params: ModelParams, state: GroundStateInfo,
                     gmat: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """ED ground state matched to a free-fermion representative.

    Diagonalizes the fermion-parity block required by ``state.sector``,
    takes its ground cluster within ``degeneracy_tol``, and — when the
    cluster is still degenerate — selects within it the vector maximizing
    ``sum_jk <y_j x_k> g_{jk}`` against the production correlations
    (supply ``gmat`` = the production ``g`` matrix to enable this; with a
    one-dimensional cluster it is not needed).  That functional is the
    negated parent Hamiltonian of the Gaussian state, so it is uniquely
    maximized by the production state itself whenever the cluster contains
    it; unlike correlator sampling it remains well-defined when several
    cluster states share a translation eigenvalue.  Without ``gmat`` the
    fallback is the real translation eigenvector of the cluster.

    Returns
    -------
    (energy, vector) : the block ground energy and the matched normalized
    vector over the full 2^N basis.
    """
    spec = cluster_field_spec(params)
    n = params.n_sites
    H = dense_hamiltonian(spec)
    pz = fermion_parity_diagonal(n)
    req = state.sector.required_parity
    block = np.where(pz == req)[0]
    w, v = np.linalg.eigh(H[np.ix_(block, block)])
    cluster = np.where(w < w[0] + params.degeneracy_tol)[0]
    vecs = np.zeros((1 << n, len(cluster)))
    vecs[block, :] = v[:, cluster]
    if len(cluster) == 1:
        return float(w[0]), vecs[:, 0]

    if gmat is None:
        perm = _translation_permutation(n)
        tmat = vecs.T @ vecs[perm, :]
        lam, q = np.linalg.eig(tmat)
        for i in range(len(lam)):
            if abs(lam[i].imag) < 1e-8:  # momentum 0 or pi states are real
                cand = np.real(vecs @ q[:, i])
                norm = np.linalg.norm(cand)
                if norm > 1e-8:
                    return float(w[0]), cand / norm
        return float(w[0]), vecs[:, 0]

    # project the parent functional sum_jk g <y_j x_k> onto the cluster and
    # take its top eigenvector; production stores the correlators
    # transposed (gmat[j, k] = <y_k x_j>)
    bits = _bits(n)
    d = len(cluster)
    mat = np.zeros((d, d))
    for j in range(n):
        for k in range(n):
            g = gmat[k, j]
            if abs(g) < 1e-14:
                continue
            applied = _apply_majorana(_apply_majorana(vecs, k, bits, "x"), j, bits, "y")
            mat += g * (vecs.T @ applied)
    ev, evec = np.linalg.eigh(0.5 * (mat + mat.T))
    vec = vecs @ evec[:, -1]
    return float(w[0]), vec / np.linalg.norm(vec)

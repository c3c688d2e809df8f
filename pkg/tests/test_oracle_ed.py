import numpy as np
import pytest

from clusterchain.analytics import closed_form_entropy_oddodd
from clusterchain.correlations import correlation_matrix
from clusterchain.entanglement import entropy_of_sites
from clusterchain.freefermion import ground_state, sector_ground
from clusterchain.model import ModelParams, Sector
from clusterchain.oracle_ed import (
    SpinOperatorSpec,
    build_hamiltonian,
    cluster_field_spec,
    dense_hamiltonian,
    ed_matched_state,
    ed_spectrum,
    ed_subset_entropy,
    fermion_parity_diagonal,
    parity_spectra,
)


class TestSpec:
    def test_rejects_large_n(self):
        with pytest.raises(ValueError):
            SpinOperatorSpec(n_sites=15, terms=())

    def test_rejects_bad_terms(self):
        with pytest.raises(ValueError):
            SpinOperatorSpec(n_sites=4, terms=((1.0, ((4, "x"),)),))
        with pytest.raises(ValueError):
            SpinOperatorSpec(n_sites=4, terms=((1.0, ((0, "w"),)),))

    def test_cluster_spec_term_count(self):
        spec = cluster_field_spec(ModelParams(8, 3, field=0.5))
        assert len(spec.terms) == 16  # N cluster + N field terms


class TestBuildHamiltonian:
    def test_two_site_ising(self):
        # N=2, m=1: both bonds act on the same pair, H = 2J sigma^x sigma^x
        H = dense_hamiltonian(cluster_field_spec(ModelParams(2, 1)))
        w = np.linalg.eigvalsh(H)
        assert np.allclose(w, [-2, -2, 2, 2])

    def test_hermitian_on_random_vectors(self):
        spec = SpinOperatorSpec(
            n_sites=6,
            terms=(
                (0.7, ((0, "x"), (1, "z"), (2, "x"))),
                (-0.4, ((3, "y"), (4, "y"))),
                (1.1, ((5, "z"),)),
            ),
        )
        op = build_hamiltonian(spec)
        rng = np.random.default_rng(3)
        for _ in range(5):
            u = rng.normal(size=64) + 1j * rng.normal(size=64)
            v = rng.normal(size=64) + 1j * rng.normal(size=64)
            lhs = np.vdot(u, op.matvec(v))
            rhs = np.vdot(op.matvec(u), v)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_matvec_matches_dense(self):
        spec = cluster_field_spec(ModelParams(7, 3, field=0.9))
        H = dense_hamiltonian(spec)
        op = build_hamiltonian(spec)
        rng = np.random.default_rng(11)
        v = rng.normal(size=128)
        assert np.allclose(op.matvec(v), H @ v, atol=1e-12)


class TestSpectrum:
    def test_degeneracy_2n(self):
        w = ed_spectrum(cluster_field_spec(ModelParams(9, 3)), 20)
        assert (w < w[0] + 1e-8).sum() == 18

    def test_gapped_below_critical_even_m(self):
        w = ed_spectrum(cluster_field_spec(ModelParams(10, 4, field=0.5)), 2)
        assert w[1] - w[0] > 0.1

    def test_gapped_paramagnet(self):
        w = ed_spectrum(cluster_field_spec(ModelParams(8, 3, field=1.8)), 2)
        assert w[1] - w[0] > 0.1

    def test_iterative_matches_dense(self):
        # N=12 exercises the Krylov path; compare against blocked dense
        p = ModelParams(12, 2, field=0.8)
        w = ed_spectrum(cluster_field_spec(p), 6)
        e_odd, e_even = parity_spectra(cluster_field_spec(p))
        ed = np.sort(np.concatenate([e_odd, e_even]))[:6]
        assert np.abs(w - ed).max() < 1e-8

    def test_parity_labels_match_sectors(self):
        # sector minima agree with the parity-blocked ED spectra
        for n, m, h in [(7, 3, 0.0), (8, 4, 0.3), (9, 2, 1.0)]:
            p = ModelParams(n, m, field=h)
            e_odd, e_even = parity_spectra(cluster_field_spec(p))
            assert sector_ground(p, Sector.PLUS).energy == pytest.approx(e_odd[0], abs=1e-10)
            assert sector_ground(p, Sector.MINUS).energy == pytest.approx(e_even[0], abs=1e-10)


class TestSubsetEntropy:
    def test_product_state(self):
        v = np.zeros(16)
        v[5] = 1.0
        assert ed_subset_entropy(v, [0, 2]) == pytest.approx(0.0, abs=1e-12)

    def test_bell_pair(self):
        v = np.zeros(4)
        v[0] = v[3] = 1 / np.sqrt(2)
        assert ed_subset_entropy(v, [0]) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            ed_subset_entropy(np.ones(4), [0])

    def test_fermionic_equals_spin_contiguous(self):
        p = ModelParams(9, 3, field=0.5)
        st = ground_state(p)
        _, vec = ed_matched_state(p, st, gmat=correlation_matrix(p, st).gmat)
        for sites in ([0, 1, 2], [3, 4, 5, 6]):
            spin = ed_subset_entropy(vec, sites)
            ferm = ed_subset_entropy(vec, sites, fermionic=True)
            assert spin == pytest.approx(ferm, abs=1e-10)

    def test_fermionic_matches_gaussian_disconnected(self):
        # disconnected subsets: only the fermion-mode partial trace can
        # agree with the correlation-matrix entropy
        p = ModelParams(9, 3, field=0.5)
        st = ground_state(p)
        corr = correlation_matrix(p, st)
        _, vec = ed_matched_state(p, st, gmat=corr.gmat)
        sites = [0, 1, 2, 5, 6]
        gauss = entropy_of_sites(corr, sites).value
        ferm = ed_subset_entropy(vec, sites, fermionic=True)
        assert ferm == pytest.approx(gauss, abs=1e-10)

    def test_block_matches_closed_form(self):
        p = ModelParams(9, 3)
        st = ground_state(p)
        _, vec = ed_matched_state(p, st, gmat=correlation_matrix(p, st).gmat)
        s = ed_subset_entropy(vec, [0, 1, 2])
        assert s == pytest.approx(closed_form_entropy_oddodd(9, 3, 3).entropy, abs=1e-8)


class TestManifoldEntropyEquality:
    def test_definite_parity_states_agree(self):
        # both parity sectors of the h=0 odd-odd manifold give the same
        # block entropies
        p = ModelParams(9, 3)
        spec = cluster_field_spec(p)
        H = dense_hamiltonian(spec)
        pz = fermion_parity_diagonal(9)
        values = {}
        for req in (-1, +1):
            block = np.where(pz == req)[0]
            w, v = np.linalg.eigh(H[np.ix_(block, block)])
            cluster = np.where(w < w[0] + 1e-8)[0]
            vecs = np.zeros((512, len(cluster)))
            vecs[block] = v[:, cluster]
            # translation-definite combinations within the cluster
            from clusterchain.oracle_ed import _translation_permutation
            perm = _translation_permutation(9)
            tmat = vecs.T @ vecs[perm]
            lam, q = np.linalg.eig(tmat)
            idx = np.argmin(np.abs(lam - 1.0))
            vec = np.real(vecs @ q[:, idx])
            vec /= np.linalg.norm(vec)
            values[req] = ed_subset_entropy(vec, [0, 1, 2])
        assert values[-1] == pytest.approx(values[+1], abs=1e-8)

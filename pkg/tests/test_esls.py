from itertools import product

import numpy as np
import pytest

from difflink.diffusion import ATCCombiner, run_network
from difflink.esls import (ESLSCombiner, NeighborhoodTooLarge, SubsetCandidate, bitmask,
                           enumerate_subsets, esls_combine, esls_node_update, select_best,
                           subset_error, subset_weights)
from difflink.topology import NetworkTopology, generate_random_geometric, metropolis_weights

from conftest import make_path, standalone_lms


def bitmask_oracle(neighbors):
    n = len(neighbors)
    return {frozenset(neighbors[j] for j in range(n) if b >> j & 1) for b in range(1, 2**n)}


class TestEnumerate:
    def test_singleton(self):
        assert enumerate_subsets([4]) == [(4,)]

    @pytest.mark.parametrize("nb", [[0, 1, 2], [1, 3, 4, 7, 9]])
    def test_against_bitmask_oracle(self, nb):
        subsets = enumerate_subsets(nb)
        assert len(subsets) == 2 ** len(nb) - 1
        assert len(set(subsets)) == len(subsets)
        assert {frozenset(s) for s in subsets} == bitmask_oracle(nb)

    def test_order_size_then_lexicographic(self):
        assert enumerate_subsets([0, 1, 2]) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2),
                                                (0, 1, 2)]

    def test_require(self):
        assert all(1 in s for s in enumerate_subsets([0, 1, 2], require=1))
        assert len(enumerate_subsets([0, 1, 2], require=1)) == 4

    def test_cap(self):
        with pytest.raises(NeighborhoodTooLarge):
            enumerate_subsets(range(13))


class TestSubsetError:
    def test_full_set_equals_atc_error(self, rng):
        row = np.array([0.5, 0.25, 0.25])
        psis = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        x = rng.standard_normal(4) + 0j
        atc = np.sum(row[:, None] * psis, axis=0)
        np.testing.assert_allclose(subset_error((0, 1, 2), row, psis, x, 1.5),
                                   1.5 - np.sum(np.conj(atc) * x), rtol=1e-14)

    def test_perfect_estimate(self):
        w0 = np.array([0.3 - 0.2j, 1.0])
        x = np.array([1 + 1j, -0.5])
        d = np.sum(np.conj(w0) * x)
        psis = np.array([w0 + 1, w0])
        assert subset_error((1,), [0.5, 0.5], psis, x, d) == 0

    def test_hand_case(self):
        # weights (0.25, 0.5) renormalise to (1/3, 2/3); estimate 1/3 + 2 = 7/3;
        # error 5 - 2 * 7/3 = 1/3
        psis = {1: np.array([1.0]), 2: np.array([3.0])}
        row = np.array([0.25, 0.25, 0.5])
        np.testing.assert_allclose(subset_error((1, 2), row, psis, np.array([2.0]), 5.0),
                                   1 / 3, rtol=1e-15)
        # raw weights: estimate 0.25 + 1.5 = 1.75, error 5 - 3.5 = 1.5
        np.testing.assert_allclose(subset_error((1, 2), row, psis, np.array([2.0]), 5.0,
                                                renormalize=False), 1.5, rtol=1e-15)

    def test_zero_mass(self):
        with pytest.raises(ValueError):
            subset_weights((1,), [1.0, 0.0])


class TestSelect:
    def test_single(self):
        c = SubsetCandidate((0,), np.ones(1), 0.4)
        assert select_best([c]) is c

    def test_zero_error_wins(self):
        cands = [SubsetCandidate((0,), np.ones(1), 0.1), SubsetCandidate((1,), np.ones(1), 0j)]
        assert select_best(cands).members == (1,)

    def test_tie_goes_to_earlier(self):
        cands = [SubsetCandidate((0,), np.ones(1), 0.2),
                 SubsetCandidate((0, 1), np.ones(2) / 2, -0.2)]
        assert select_best(cands).members == (0,)

    def test_full_set_and_singleton(self, rng):
        psis = rng.standard_normal((3, 2))
        full = SubsetCandidate((0, 1, 2), np.array([0.2, 0.3, 0.5]))
        np.testing.assert_allclose(esls_combine(full, psis), full.weights @ psis, rtol=1e-15)
        np.testing.assert_array_equal(esls_combine(SubsetCandidate((2,), np.ones(1)), psis),
                                      psis[2])


class TestCombiner:
    def test_single_node_is_lms(self):
        path = make_path(n_nodes=1, filter_len=4, iterations=60, runs=2)
        topo = NetworkTopology.empty(1)
        c = metropolis_weights(topo)
        res = run_network(path, ESLSCombiner(topo, c), 0.045)
        atc = run_network(path, ATCCombiner(topo, c), 0.045)
        np.testing.assert_array_equal(res.final_omega, atc.final_omega)
        np.testing.assert_array_equal(res.final_omega[:, 0], standalone_lms(path, 0.045)[:, -1])

    def test_matches_node_reference(self):
        topo = generate_random_geometric(5, 0.6, 2)
        c = metropolis_weights(topo)
        path = make_path(n_nodes=5, filter_len=3, iterations=1, runs=3)
        comb = ESLSCombiner(topo, c)
        rng = np.random.default_rng(0)
        psi = rng.standard_normal((3, 5, 3)) + 1j * rng.standard_normal((3, 5, 3))
        x = path.regressors(0)
        d = path.measurements[:, 0]
        out = comb.step(0, psi, x, d)
        for r, k in product(range(3), range(5)):
            ref, _, _ = esls_node_update(k, topo, c, psi[r], x[r, k], d[r, k])
            np.testing.assert_allclose(out[r, k], ref, rtol=1e-13, atol=1e-15)

    def test_trace_bitmasks(self):
        topo = NetworkTopology.chain(3)
        comb = ESLSCombiner(topo, metropolis_weights(topo), trace=True)
        run_network(make_path(n_nodes=3, iterations=5, runs=1), comb, 0.05)
        assert len(comb.trace) == 15
        allowed = {0: {1, 2, 3}, 1: set(range(1, 8)), 2: {2, 4, 6}}
        for _, k, mask in comb.trace:
            assert mask in allowed[k]
        assert bitmask((0, 2)) == 5

    def test_require_self(self):
        topo = NetworkTopology.complete(3)
        comb = ESLSCombiner(topo, metropolis_weights(topo), require_self=True, trace=True)
        run_network(make_path(n_nodes=3, iterations=20, runs=1), comb, 0.05)
        assert all(mask >> k & 1 for _, k, mask in comb.trace)

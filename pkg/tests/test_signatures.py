import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kcanon import oracle
from kcanon.errors import BudgetExhaustedError, NonFiniteError
from kcanon.graph import Graph, relabel
from kcanon.signatures import (
    all_edge_signatures,
    all_node_signatures,
    canonical_labeling,
    find_isomorphism,
    fingerprint,
    iso_screen,
    orbit_partition,
    quantize,
    verify_mapping,
    IsoVerdict,
)

from conftest import complete, cycle, path, random_permutation, star


def grid(frac, tol=1e-8):
    """Expected grid units of an exact rational value."""
    return round(Fraction(frac) / Fraction(tol))


class TestQuantize:
    def test_snap(self):
        assert quantize(0.333333333007, 1e-8) == pytest.approx(0.33333333, abs=1e-15)

    @given(st.floats(-1e6, 1e6), st.sampled_from([1e-8, 1e-6, 0.5]))
    def test_odd_symmetry(self, x, tol):
        assert quantize(-x, tol) == -quantize(x, tol)

    def test_zero_is_positive_zero(self):
        assert math.copysign(1.0, quantize(-1e-12)) == 1.0

    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), float("-inf")])
    def test_non_finite(self, bad):
        with pytest.raises(NonFiniteError):
            quantize(bad)

    def test_symmetric_solves_quantize_identically(self):
        # K3 is vertex-transitive: node 1 under (1,2) and node 2 under (2,3)
        # sit in the same electrical position.
        from kcanon.solver import build_system, solve_pair

        system = build_system(complete(3))
        v12 = solve_pair(system, 1, 2).v
        v23 = solve_pair(system, 2, 3).v
        assert quantize(v12[0]) == quantize(v23[1])


THIRD = grid(Fraction(1, 3))
TWO_THIRDS = grid(Fraction(2, 3))
ONE = grid(1)


class TestNodeSignatures:
    def test_lengths_and_sorted(self):
        for g in (path(3), cycle(4), star(3)):
            for sig in all_node_signatures(g):
                assert len(sig.values) == g.n * (g.n - 1)
                assert list(sig.values) == sorted(sig.values)

    def test_negation_symmetric(self):
        for sig in all_node_signatures(cycle(5)):
            assert sorted(-x for x in sig.values) == list(sig.values)

    def test_k3_all_identical(self):
        sigs = all_node_signatures(complete(3))
        assert sigs[0].values == sigs[1].values == sigs[2].values

    def test_p3_frozen(self):
        # From the exact solves of all three pairs of the path 1-2-3.
        sigs = {s.node: s.values for s in all_node_signatures(path(3))}
        assert sigs[2] == (-THIRD, -THIRD, 0, 0, THIRD, THIRD)
        expected_end = (-ONE, -TWO_THIRDS, -THIRD, THIRD, TWO_THIRDS, ONE)
        assert sigs[1] == expected_end
        assert sigs[3] == expected_end

    def test_star_two_classes(self):
        sigs = all_node_signatures(star(3))
        center, leaves = sigs[0].values, {s.values for s in sigs[1:]}
        assert len(leaves) == 1
        assert center not in leaves


class TestEdgeSignatures:
    def test_p2_single_edge(self):
        (sig,) = all_edge_signatures(path(2))
        assert sig.values == (-ONE, ONE)

    def test_k3_edge_transitive(self):
        sigs = all_edge_signatures(complete(3))
        assert len({s.values for s in sigs}) == 1

    def test_p3_edges_share_signature(self):
        sigs = all_edge_signatures(path(3))
        assert sigs[0].values == sigs[1].values

    def test_orientation_independent(self):
        g1 = Graph(3, [(1, 2, 1.0), (2, 3, 1.0)])
        g2 = Graph(3, [(2, 1, 1.0), (3, 2, 1.0)])
        assert [s.values for s in all_edge_signatures(g1)] == [
            s.values for s in all_edge_signatures(g2)
        ]


class TestOrbitPartition:
    def test_p3(self):
        assert orbit_partition(path(3)).classes == ((1, 3), (2,))

    def test_k3(self):
        assert orbit_partition(complete(3)).classes == ((1, 2, 3),)

    def test_c6_with_chord(self):
        g = Graph(6, [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 5, 1.0),
                      (5, 6, 1.0), (6, 1, 1.0), (1, 4, 1.0)])
        part = sorted(orbit_partition(g).classes)
        assert part == [(1, 4), (2, 3, 5, 6)]
        report = oracle.brute_force_automorphisms(g)
        assert sorted(report.orbits) == part

    def test_classes_cover_nodes(self):
        g = cycle(7)
        part = orbit_partition(g)
        assert sorted(x for cls in part.classes for x in cls) == list(range(1, 8))


class TestFingerprint:
    def test_label_invariance(self, rng):
        g = Graph(6, [(1, 2, 0.5), (2, 3, 1.0), (3, 4, 2.0), (4, 5, 1.0),
                      (5, 6, 1.0), (6, 1, 1.0), (2, 5, 3.0)])
        ref = fingerprint(g).to_json()
        for _ in range(10):
            h = relabel(g, random_permutation(6, rng))
            assert fingerprint(h).to_json() == ref

    def test_p4_vs_star_differ(self):
        assert fingerprint(path(4)).digest() != fingerprint(star(3)).digest()

    def test_nonisomorphic_trees_same_degree_sequence(self):
        # Two trees on 6 nodes, both with degree sequence (1,1,1,2,2,3).
        t1 = Graph(6, [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 5, 1.0), (2, 6, 1.0)])
        t2 = Graph(6, [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 6, 1.0)])
        assert t1.degree_sequence() == t2.degree_sequence()
        assert oracle.brute_force_isomorphic(t1, t2) is None
        assert fingerprint(t1).digest() != fingerprint(t2).digest()

    def test_counts(self):
        fp = fingerprint(cycle(5))
        assert len(fp.node_part) == 5
        assert len(fp.edge_part) == 5

    def test_json_is_canonical(self):
        fp = fingerprint(path(4))
        assert fp.to_json() == fingerprint(path(4)).to_json()


class TestFindIsomorphism:
    def test_identity(self):
        g = cycle(4)
        mapping = find_isomorphism(g, g)
        assert mapping is not None
        assert verify_mapping(g, g, mapping)

    def test_k3_any_bijection(self):
        mapping = find_isomorphism(complete(3), complete(3))
        assert verify_mapping(complete(3), complete(3), mapping)

    def test_random_tree_relabeling(self, rng):
        t = oracle.random_tree(9, rng)
        perm = random_permutation(9, rng)
        h = relabel(t, perm)
        mapping = find_isomorphism(t, h)
        assert mapping is not None
        assert verify_mapping(t, h, mapping)

    def test_budget_exhaustion_raises(self):
        g = cycle(6)
        with pytest.raises(BudgetExhaustedError):
            find_isomorphism(g, g, node_budget=1)


class TestIsoScreen:
    def test_relabeled_c4(self, rng):
        g = cycle(4)
        h = relabel(g, random_permutation(4, rng))
        verdict = iso_screen(g, h)
        assert verdict.kind == IsoVerdict.ISOMORPHIC
        assert verify_mapping(g, h, verdict.mapping)

    def test_c6_vs_p6_edge_count(self):
        verdict = iso_screen(cycle(6), path(6))
        assert verdict.kind == IsoVerdict.DISTINCT

    def test_same_degree_sequence_distinct(self, rng):
        # Find two degree-matched non-isomorphic graphs on 8 nodes.
        while True:
            g = oracle.random_connected_graph(8, rng)
            h = oracle.random_connected_graph(8, rng)
            if g.degree_sequence() != h.degree_sequence():
                continue
            if oracle.brute_force_isomorphic(g, h) is None:
                break
        assert iso_screen(g, h).kind == IsoVerdict.DISTINCT

    def test_budget_one_gives_possible(self, rng):
        g = cycle(6)
        h = relabel(g, random_permutation(6, rng))
        verdict = iso_screen(g, h, node_budget=1)
        assert verdict.kind == IsoVerdict.POSSIBLE


class TestCanonicalLabeling:
    def test_p3_all_labelings_one_form(self):
        import itertools

        forms = set()
        for ids in itertools.permutations([1, 2, 3]):
            perm = {old: new for old, new in zip([1, 2, 3], ids)}
            lab = canonical_labeling(relabel(path(3), perm))
            assert lab.certified
            forms.add(lab.form)
        assert len(forms) == 1

    def test_k3(self):
        lab = canonical_labeling(complete(3))
        assert lab.certified
        assert lab.form == (1.0, 1.0, 1.0)

    def test_caterpillar_stable_under_relabeling(self, rng):
        g = Graph(7, [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 5, 1.0),
                      (2, 6, 1.0), (4, 7, 1.0)])
        ref = canonical_labeling(g)
        assert ref.certified
        for _ in range(100):
            h = relabel(g, random_permutation(7, rng))
            lab = canonical_labeling(h)
            assert lab.certified
            assert lab.form == ref.form
            assert lab.digest() == ref.digest()

    def test_budget_exhaustion_flags_uncertified(self):
        lab = canonical_labeling(cycle(6), budget=1)
        assert not lab.certified
        assert len(lab.order) == 6

    def test_order_is_permutation(self):
        lab = canonical_labeling(cycle(5))
        assert sorted(lab.order) == [1, 2, 3, 4, 5]

import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from lieposet.errors import CycleError, PosetLoadError, SizeError
from lieposet.poset import (
    CANONICAL_BOUND,
    Poset,
    are_isomorphic_bruteforce,
    canonical_form,
    close_transitively,
    covering_relations,
    extremal_data,
    height,
    is_connected,
    is_filter,
    is_ideal,
    linear_extension,
)


@st.composite
def random_posets(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    bits = n * (n - 1) // 2
    mask = draw(st.integers(min_value=0, max_value=(1 << bits) - 1))
    ids = [str(i) for i in range(1, n + 1)]
    pairs = []
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if mask >> k & 1:
                pairs.append((ids[i], ids[j]))
            k += 1
    return Poset.from_pairs(pairs, elements=ids)


class TestClosure:
    def test_example_relations(self):
        got = close_transitively({("1", "2"), ("2", "3"), ("2", "4")})
        assert got == {("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4")}

    def test_empty(self):
        assert close_transitively(set()) == frozenset()

    def test_antisymmetry_violation(self):
        with pytest.raises(CycleError):
            close_transitively({("1", "2"), ("2", "1")})

    def test_longer_cycle(self):
        with pytest.raises(CycleError):
            close_transitively({("1", "2"), ("2", "3"), ("3", "1")})

    @given(random_posets())
    def test_idempotent(self, poset):
        once = close_transitively(poset.strict_relation)
        assert close_transitively(once) == once == poset.strict_relation


class TestCovering:
    def test_example(self, example1):
        assert covering_relations(example1) == {("1", "2"), ("2", "3"), ("2", "4")}

    def test_antichain(self):
        assert covering_relations(Poset.antichain(2)) == frozenset()

    def test_chain_drops_transitive_edge(self, chain3):
        assert covering_relations(chain3) == {("1", "2"), ("2", "3")}

    @given(random_posets())
    def test_closure_of_covers_recovers_relation(self, poset):
        assert close_transitively(covering_relations(poset)) == poset.strict_relation


class TestExtremal:
    def test_example(self, example1):
        data = extremal_data(example1)
        assert data.ext == {"1", "3", "4"}
        assert data.rel_ext == {("1", "3"), ("1", "4")}

    def test_singleton(self):
        data = extremal_data(Poset(["p"], []))
        assert data.minimals == data.maximals == {"p"}
        assert data.rel_ext == frozenset()

    def test_catalog_p3(self):
        from lieposet.toral import ToralPairId, catalog

        poset, _ = catalog(ToralPairId("P3"))
        data = extremal_data(poset)
        assert data.ext == {"p1", "p5", "p6"}
        assert data.rel_ext == {("p1", "p5"), ("p1", "p6")}


class TestHeight:
    def test_example(self, example1):
        assert height(example1) == 2

    def test_antichain(self, antichain3):
        assert height(antichain3) == 0

    @pytest.mark.parametrize("n", [4, 5, 6, 9])
    def test_p4_family(self, n):
        from lieposet.toral import ToralPairId, catalog

        poset, _ = catalog(ToralPairId("P4", n))
        assert height(poset) == n - 2


class TestIdealFilter:
    def test_example_ideal(self, example1):
        assert is_ideal(example1, {"1", "2"})
        assert not is_filter(example1, {"1", "2"})

    def test_example_filter(self, example1):
        assert is_filter(example1, {"3", "4"})
        assert not is_ideal(example1, {"3", "4"})

    def test_empty_is_both(self, example1):
        assert is_ideal(example1, set())
        assert is_filter(example1, set())

    @given(random_posets(), st.data())
    def test_duality(self, poset, data):
        subset = {e for e in poset.elements if data.draw(st.booleans())}
        assert is_ideal(poset, subset) == is_filter(poset.dual(), subset)


class TestConnectivity:
    def test_example(self, example1):
        assert is_connected(example1)

    def test_two_chains(self):
        poset = Poset.from_pairs([("1", "2"), ("3", "4")])
        assert not is_connected(poset)

    def test_figure_sequence_result(self):
        from lieposet.toral import FIGURE4_TEXT, build_sequence, parse_sequence

        result = build_sequence(parse_sequence(FIGURE4_TEXT))
        assert is_connected(result.poset)


class TestCanonicalForm:
    def test_relabeling_invariance(self, example1):
        relabeled = example1.relabel({"1": "d", "2": "c", "3": "b", "4": "a"})
        assert canonical_form(example1) == canonical_form(relabeled)

    def test_chain_vs_antichain(self):
        assert canonical_form(Poset.chain(3)) != canonical_form(Poset.antichain(3))

    def test_size_bound(self):
        with pytest.raises(SizeError):
            canonical_form(Poset.antichain(CANONICAL_BOUND + 1))

    def test_labeled_4_element_count(self):
        # independent oracle: enumerate all irreflexive relations on 4 labeled
        # points, keep the antisymmetric transitive ones, count classes
        ids = ["1", "2", "3", "4"]
        ordered = [(a, b) for a in ids for b in ids if a != b]
        labeled = []
        for mask in range(1 << len(ordered)):
            pairs = {ordered[k] for k in range(len(ordered)) if mask >> k & 1}
            if any((b, a) in pairs for a, b in pairs):
                continue
            if any((a, c) not in pairs
                   for a, b in pairs for b2, c in pairs if b == b2 and a != c):
                continue
            labeled.append(pairs)
        assert len(labeled) == 219
        forms = {canonical_form(Poset(ids, p, _closed=True)) for p in labeled}
        assert len(forms) == 16

    def test_matches_bruteforce_isomorphism_up_to_5(self):
        from lieposet.scan import iter_classes

        reps = [p for n in range(1, 6) for _, p in iter_classes(n)]
        for a, b in itertools.combinations(reps, 2):
            assert not are_isomorphic_bruteforce(a, b)
            assert canonical_form(a) != canonical_form(b) or len(a) != len(b)

    @given(random_posets(max_n=5), st.randoms(use_true_random=False))
    @settings(max_examples=40)
    def test_permutation_invariance(self, poset, rnd):
        shuffled = list(poset.elements)
        rnd.shuffle(shuffled)
        mapping = dict(zip(poset.elements, shuffled))
        assert canonical_form(poset) == canonical_form(poset.relabel(mapping))


class TestSerialization:
    def test_round_trip(self, tmp_path, example1):
        path = tmp_path / "poset.json"
        example1.save(path)
        assert Poset.load(path) == example1

    def test_generating_set_is_closed_on_load(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({
            "elements": ["a", "b", "c"],
            "relations": [["a", "b"], ["b", "c"], ["a", "b"]],  # duplicate ignored
        }))
        poset = Poset.load(path)
        assert poset.less("a", "c")

    def test_unknown_element_is_load_error(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"elements": ["a"], "relations": [["a", "zz"]]}))
        with pytest.raises(PosetLoadError):
            Poset.load(path)


class TestLinearExtension:
    @given(random_posets())
    def test_respects_order(self, poset):
        order = linear_extension(poset)
        pos = {e: i for i, e in enumerate(order)}
        assert all(pos[p] < pos[q] for p, q in poset.strict_relation)

import pytest
from hypothesis import given, settings, strategies as st

from lieposet.poset import Poset, height
from lieposet.topology import (
    SimplicialComplex,
    betti_numbers,
    order_complex,
    verify_wedge,
)
from lieposet.toral import (
    ConstructionStep,
    ConstructionSequence,
    ToralPairId,
    build_sequence,
    catalog,
    index_by_formula,
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


def e1_instance():
    """Smallest valid index-raising attachment: grow the poset once, then E1.

    A fresh pair seed has a unique minimal element comparable to everything,
    so an incomparable (minimal, maximal) target pair only exists after one
    prior attachment.
    """
    seq = ConstructionSequence(
        seed=ToralPairId("P2"),
        steps=(
            ConstructionStep(ToralPairId("P2"), "A1", (("b", "q3"),)),
            ConstructionStep(ToralPairId("P2"), "E1", (("a", "q5"), ("b", "q4"))),
        ),
    )
    return build_sequence(seq)


class TestOrderComplex:
    def test_example_two_triangles(self, example1):
        complex_ = order_complex(example1)
        assert complex_.faces_by_dim[2] == [("1", "2", "3"), ("1", "2", "4")]
        assert complex_.face_counts == (4, 5, 2)
        assert ("1", "2") in complex_.faces_by_dim[1]

    def test_antichain_vertices_only(self, antichain3):
        complex_ = order_complex(antichain3)
        assert complex_.face_counts == (3,)

    @pytest.mark.parametrize("n", [4, 5, 7])
    def test_p4_is_two_simplices_glued(self, n):
        # maximal faces: the long chain (n−1 vertices) and the side chain
        # through the extra top (⌊n/2⌋+1 vertices)
        poset, _ = catalog(ToralPairId("P4", n))
        complex_ = order_complex(poset)
        sizes = sorted(len(f) for k in range(complex_.dimension + 1)
                       for f in complex_.faces_by_dim[k]
                       if _is_facet(complex_, f))
        assert sizes == sorted([n - 1, n // 2 + 1])

    @given(random_posets(max_n=5))
    @settings(max_examples=30)
    def test_faces_are_chains(self, poset):
        complex_ = order_complex(poset)
        for bucket in complex_.faces_by_dim:
            for face in bucket:
                assert all(poset.comparable(a, b) for a in face for b in face)


def _is_facet(complex_, face):
    face_set = set(face)
    k = len(face)
    for bucket in complex_.faces_by_dim[k:]:
        for other in bucket:
            if face_set < set(other):
                return False
    return True


class TestBetti:
    def test_example_contractible_witness(self, example1):
        report = betti_numbers(order_complex(example1), max_dim=2)
        assert list(report.betti) == [1, 0, 0]
        assert report.euler == 1

    def test_hollow_triangle_is_a_circle(self):
        circle = SimplicialComplex.from_faces([("a", "b"), ("b", "c"), ("a", "c")])
        report = betti_numbers(circle, max_dim=1)
        assert list(report.betti) == [1, 1]
        assert report.euler == 0

    def test_e1_poset_has_one_loop(self):
        result = e1_instance()
        assert index_by_formula(result.poset) == 1
        report = betti_numbers(order_complex(result.poset), max_dim=2)
        assert list(report.betti) == [1, 1, 0]

    def test_two_components(self):
        poset = Poset.from_pairs([("1", "2"), ("3", "4")])
        report = betti_numbers(order_complex(poset), max_dim=1)
        assert list(report.betti) == [2, 0]

    @given(random_posets(max_n=5))
    @settings(max_examples=30, deadline=None)
    def test_euler_poincare(self, poset):
        complex_ = order_complex(poset)
        report = betti_numbers(complex_, max_dim=complex_.dimension)
        alternating = sum((-1) ** i * b for i, b in enumerate(report.betti))
        assert alternating == report.euler


class TestVerifyWedge:
    def test_figure_sequence_poset(self):
        from lieposet.toral import FIGURE4_TEXT, parse_sequence

        result = build_sequence(parse_sequence(FIGURE4_TEXT))
        assert verify_wedge(result.poset, 0)

    def test_catalog_p3_contractible(self):
        poset, _ = catalog(ToralPairId("P3"))
        assert verify_wedge(poset, 0)

    def test_e1_instance(self):
        result = e1_instance()
        assert verify_wedge(result.poset, 1)
        assert not verify_wedge(result.poset, 0)

    def test_catalog_pairs_contractible(self):
        for pid in (ToralPairId("P1"), ToralPairId("P2*"), ToralPairId("P4", 6),
                    ToralPairId("P5", 2), ToralPairId("P5*", 3)):
            poset, _ = catalog(pid)
            assert verify_wedge(poset, 0), pid.label()


class TestHeightInteraction:
    @given(random_posets(max_n=5))
    @settings(max_examples=30)
    def test_complex_dimension_is_height(self, poset):
        assert order_complex(poset).dimension == height(poset)

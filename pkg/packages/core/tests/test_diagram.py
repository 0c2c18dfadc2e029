from collections import Counter

import pytest
import sympy

from packages.core.khoma.diagram import (
    COLOR_A,
    COLOR_B,
    admissible_coloring,
    braid_closure,
    mirror,
    parse_braid,
    parse_pd,
    traversal,
)
from packages.core.khoma.eop import a_coefficients
from packages.core.khoma.errors import InputError
from packages.core.khoma.jones import jones_polynomial

from conftest import SMALL_KNOTS, braid, knot


class TestParseBraid:
    def test_signed_letters(self):
        b = parse_braid("2: -1 -1 -1")
        assert b.strands == 2
        assert b.letters == (-1, -1, -1)
        assert b.writhe == -3

    def test_identity(self):
        b = parse_braid("2:")
        assert b.strands == 2
        assert b.letters == ()
        assert b.text == "2:"

    def test_three_strands(self):
        assert parse_braid("3: 1 2 1").letters == (1, 2, 1)

    def test_aliases(self):
        b = parse_braid("s1 S2 s1^-1 s2'")
        assert b.strands == 3
        assert b.letters == (1, -2, -1, -2)

    def test_alias_with_strand_count(self):
        assert parse_braid("4: s1 s1").strands == 4

    @pytest.mark.parametrize("text", ["", "2: 2", "2: x", "0:", "two: 1", "2: 0", "s0"])
    def test_rejects(self, text):
        with pytest.raises(InputError):
            parse_braid(text)

    def test_permutation(self):
        assert parse_braid("3: 1 2").permutation == [3, 1, 2]
        assert parse_braid("2: 1 1").cycles() == [[1], [2]]


class TestBraidClosure:
    def test_trefoil(self, trefoil_braid):
        assert trefoil_braid.n_crossings == 3
        assert trefoil_braid.is_knot
        assert trefoil_braid.writhe == -3

    def test_hopf(self):
        assert braid("2: 1 1").n_components == 2

    def test_unlink(self):
        d = braid("2:")
        assert d.n_crossings == 0
        assert d.n_components == 2
        assert d.free_loops == (1, 2)

    @pytest.mark.parametrize(
        "text", ["2: -1 -1 -1", "2: 1 1", "3: 1 -2 1 -2", "4: 1 3", "3: 1", "3: 1 2 1 2"]
    )
    def test_components_are_cycles(self, text):
        b = parse_braid(text)
        assert braid_closure(b).n_components == len(b.cycles())

    def test_crossing_order_is_word_order(self):
        d = braid("3: 1 -2")
        assert [c.sign for c in d.crossings] == [1, -1]
        assert [c.index for c in d.crossings] == [0, 1]


class TestParsePD:
    def test_trefoil(self, trefoil, trefoil_braid):
        assert trefoil.n_crossings == 3
        assert trefoil.is_knot
        assert all(c.sign == -1 for c in trefoil.crossings)
        assert sympy.expand(jones_polynomial(trefoil) - jones_polynomial(trefoil_braid)) == 0

    def test_kink(self, kink):
        assert kink.n_crossings == 1
        assert kink.is_knot
        assert kink.crossings[0].sign == 1

    def test_roundtrip_through_pd(self, trefoil):
        again = parse_pd(trefoil.to_pd())
        assert [c.sign for c in again.crossings] == [c.sign for c in trefoil.crossings]

    @pytest.mark.parametrize(
        "code",
        [
            [[1, 2, 3, 4], [1, 1, 2, 3]],
            [[1, 2, 3]],
            [[0, 1, 1, 0]],
        ],
    )
    def test_rejects_bad_labels(self, code):
        with pytest.raises(InputError):
            parse_pd(code)

    def test_rejects_empty(self):
        with pytest.raises(InputError):
            parse_pd([])

    def test_figure_eight_is_amphichiral_by_jones(self):
        d = knot("4_1")
        assert d.writhe == 0
        assert sympy.expand(jones_polynomial(d) - jones_polynomial(mirror(d))) == 0


class TestColoring:
    def test_alternating_on_braids(self, trefoil_braid):
        theta = admissible_coloring(trefoil_braid, 1)
        assert theta.theta(1) == COLOR_A
        assert theta.theta(2) == COLOR_B
        assert all(theta.epsilon(c.p1) == 1 for c in trefoil_braid.crossings)

    def test_crossingless(self, unknot):
        assert admissible_coloring(unknot).colors == {1: COLOR_A}

    @pytest.mark.parametrize("name", SMALL_KNOTS + ["hopf", "6_1"])
    def test_admissible(self, name):
        d = knot(name)
        theta = admissible_coloring(d)
        assert theta.is_admissible_for(d)
        assert theta.theta(d.canonical_basepoint) == COLOR_A

    @pytest.mark.parametrize("name", ["3_1", "4_1", "5_2"])
    def test_other_class_gives_swap(self, name):
        d = knot(name)
        theta = admissible_coloring(d)
        other = next(e for e in d.edges if theta.theta(e) == COLOR_B)
        assert admissible_coloring(d, other) == theta.swapped()
        assert theta.swapped().is_admissible_for(d)

    def test_unknown_edge(self, trefoil):
        with pytest.raises(InputError):
            admissible_coloring(trefoil, 99)


class TestTraversal:
    def test_trefoil(self, trefoil_braid):
        walk = traversal(trefoil_braid, 0, 1)
        assert len(walk.passes) == 6
        assert Counter(walk.crossings) == {0: 2, 1: 2, 2: 2}

    def test_unknot(self, unknot):
        assert traversal(unknot, 0).passes == ()

    def test_hopf_component(self, hopf):
        walk = traversal(hopf, 0)
        assert len(walk.passes) == 2
        assert sorted(walk.crossings) == [0, 1]

    @pytest.mark.parametrize("name", SMALL_KNOTS + ["6_1", "7_1"])
    def test_knot_signed_steps_cancel(self, name):
        d = knot(name)
        walk = traversal(d, 0)
        assert Counter(walk.crossings) == {c: 2 for c in range(d.n_crossings)}
        total = Counter()
        for p in walk.passes:
            total[p.crossing] += p.sign
        assert all(v == 0 for v in total.values())

    def test_basepoint_off_component(self, hopf):
        foreign = hopf.components[1][0]
        with pytest.raises(InputError):
            traversal(hopf, 0, foreign)

    def test_no_such_component(self, trefoil):
        with pytest.raises(InputError):
            traversal(trefoil, 1)


class TestMirror:
    def test_trefoil_braid(self, trefoil_braid):
        m = mirror(trefoil_braid)
        assert all(c.sign == 1 for c in m.crossings)
        positive = braid("2: 1 1 1")
        assert sympy.expand(jones_polynomial(m) - jones_polynomial(positive)) == 0

    @pytest.mark.parametrize("name", SMALL_KNOTS + ["hopf"])
    def test_involution(self, name):
        d = knot(name)
        twice = mirror(mirror(d))
        assert twice.crossings == d.crossings
        assert twice.free_loops == d.free_loops
        assert twice.name == d.name

    @pytest.mark.parametrize("name", SMALL_KNOTS)
    def test_writhe(self, name):
        d = knot(name)
        assert mirror(d).writhe == -d.writhe

    def test_names(self, trefoil):
        assert mirror(trefoil).name == "m(3_1)"


def test_parallel_strands_coefficient(hopf):
    # both strands leave the first crossing into the second: -2 chi_0 chi_1
    assert a_coefficients(hopf) == {(0, 1): -2}

import random

import pytest

from packages.core.khoma.algebra import QQ, CoefficientRing, prime_field
from packages.core.khoma.complex import COLLAPSED, build_ckh, build_reduced, simplify, x_action
from packages.core.khoma.diagram import admissible_coloring, braid_closure, mirror
from packages.core.khoma.eop import (
    E_BIDEGREE,
    a_coefficients,
    chi,
    e_operator_braid,
    e_operator_traversal,
    xi_component,
    y_specialized_differential,
)
from packages.core.khoma.errors import InputError, UnsupportedError
from packages.core.khoma.homology import homology, induced_map
from packages.core.khoma.table import torus_braid

from conftest import braid, decompose, knot

KNOTS = ["3_1", "4_1", "5_1", "5_2", "6_1", "7_1"]

# closures with one component, two to four strands
KNOT_BRAIDS = [
    "2: -1 -1 -1",
    "3: 1 -2 1 -2",
    "2: 1 1 1 1 1",
    "3: 1 1 1 2 -1 2",
    "4: 1 1 2 -1 -3 2 -3",
    "2: 1 1 1 1 1 1 1",
]


@pytest.fixture(params=["kink", "3_1", "4_1"])
def small_complex(request, kink):
    d = kink if request.param == "kink" else knot(request.param)
    return build_ckh(d, QQ)


class TestDotSliding:
    def test_homotopy_relation(self, small_complex):
        C = small_complex
        theta = admissible_coloring(C.diagram)
        for c in C.diagram.crossings:
            hat = chi(C, c.index, theta).hat
            bracket = hat.commutator(C.differential)
            forward = x_action(C, theta, c.p1).matrix - x_action(C, theta, c.q2).matrix
            other = x_action(C, theta, c.p2).matrix - x_action(C, theta, c.q1).matrix
            assert bracket == forward
            assert bracket == -other

    def test_bidegree(self, small_complex):
        h = chi(small_complex, 0)
        assert h.chi.bidegree == (-1, 2)
        h.chi.check_homogeneous(small_complex)

    def test_squares_and_anticommutes(self):
        C = build_ckh(knot("4_1"), QQ)
        hats = [chi(C, c).chi for c in range(C.diagram.n_crossings)]
        for a in hats:
            assert (a @ a).is_zero()
        for k, a in enumerate(hats):
            for b in hats[k + 1 :]:
                assert ((a @ b) + (b @ a)).is_zero()

    def test_sign_follows_coloring(self, trefoil):
        C = build_ckh(trefoil, QQ)
        theta = admissible_coloring(trefoil)
        plain = chi(C, 1, theta)
        flipped = chi(C, 1, theta.swapped())
        assert plain.epsilon == -flipped.epsilon
        assert plain.hat.matrix == -flipped.hat.matrix

    def test_reduced_restriction(self, trefoil):
        C = build_reduced(trefoil, QQ)
        h = chi(C, 0)
        assert h.chi.matrix.rows == C.size

    def test_no_such_crossing(self, trefoil):
        with pytest.raises(InputError):
            chi(build_ckh(trefoil, QQ), 7)


class TestXi:
    @pytest.mark.parametrize("name", ["3_1", "4_1", "5_2"])
    def test_vanishes_on_knots(self, name):
        C = build_ckh(knot(name), QQ)
        assert xi_component(C, 0).is_zero()

    def test_hopf_components_are_chain_maps(self, hopf):
        C = build_ckh(hopf, QQ)
        for k in range(2):
            xi = xi_component(C, k)
            assert not xi.is_zero()
            assert xi.is_chain_map(C)


class TestEOperator:
    @pytest.mark.parametrize("name", ["3_1", "4_1", "5_2"])
    def test_chain_map_of_bidegree(self, name):
        C = build_ckh(knot(name), QQ)
        e = e_operator_traversal(C).map
        assert e.bidegree == E_BIDEGREE == (-2, 4)
        assert e.is_chain_map(C)
        e.check_homogeneous(C)

    def test_reduced_chain_map(self, trefoil):
        C = build_reduced(trefoil, QQ)
        assert e_operator_traversal(C).map.is_chain_map(C)

    @pytest.mark.parametrize("mirrored", [False, True])
    @pytest.mark.parametrize("name", KNOTS)
    def test_coloring_independent(self, name, mirrored):
        d = mirror(knot(name)) if mirrored else knot(name)
        C = build_ckh(d, QQ)
        theta = admissible_coloring(d)
        e = e_operator_traversal(C, coloring=theta).map
        assert e_operator_traversal(C, coloring=theta.swapped()).map.matrix == e.matrix

    def test_coloring_independent_decomposition(self, trefoil):
        theta = admissible_coloring(trefoil)
        assert decompose(trefoil, coloring=theta.swapped()) == decompose(trefoil, coloring=theta)

    @pytest.mark.parametrize("mirrored", [False, True])
    @pytest.mark.parametrize("text", KNOT_BRAIDS)
    def test_braid_formula_matches_traversal(self, text, mirrored):
        if mirrored:
            strands, letters = text.split(":")
            text = strands + ":" + "".join(f" {-int(x)}" for x in letters.split())
        C = build_ckh(braid(text), QQ)
        by_pairs = e_operator_braid(C)
        walked = e_operator_traversal(C, basepoint=1)
        assert by_pairs.formula == "braid"
        assert by_pairs.map.matrix == walked.map.matrix

    def test_braid_formula_on_torus_closure(self):
        C = build_ckh(braid_closure(torus_braid(2)), QQ)
        assert e_operator_braid(C).map.matrix == e_operator_traversal(C, basepoint=1).map.matrix

    def test_braid_formula_needs_braid(self, trefoil):
        with pytest.raises(UnsupportedError):
            e_operator_braid(build_ckh(trefoil, QQ))
        with pytest.raises(UnsupportedError):
            a_coefficients(trefoil)

    def test_links_are_unsupported(self, hopf):
        with pytest.raises(UnsupportedError):
            e_operator_traversal(build_ckh(hopf, QQ))

    def test_one_crossing_unknot_is_killed(self):
        C = build_ckh(braid("2: -1"), QQ)
        e = e_operator_traversal(C).map
        small, (e_small,) = simplify(C, [e])
        assert induced_map(homology(small), e_small).matrix.is_zero()

    def test_trefoil_single_block(self, trefoil):
        C = build_ckh(trefoil, QQ)
        e = e_operator_traversal(C).map
        small, (e_small,) = simplify(C, [e])
        blocks = induced_map(homology(small), e_small).blocks()
        assert list(blocks) == [((0, 1), (-2, 5))]
        ((value,),) = blocks[((0, 1), (-2, 5))]
        assert value != 0


class TestYSpecialization:
    @pytest.mark.parametrize("seed", range(3))
    @pytest.mark.parametrize("text", ["2: 1 1", "2: 1 1 1 1", "3: 1 1 2 2", "3: 1 -2 1 -2 1 -2"])
    def test_squares_to_zero_on_links(self, text, seed):
        rng = random.Random(seed)
        f7 = prime_field(7)
        link = braid(text)
        C = build_ckh(link, f7)
        D = y_specialized_differential(C, [rng.randrange(7) for _ in range(link.n_components)])
        assert D.mode == COLLAPSED
        assert (D.differential @ D.differential).is_zero()

    @pytest.mark.parametrize("weights", [["1/2", "-3", "2"], ["0", "0", "5"]])
    def test_squares_to_zero_over_rationals(self, weights):
        C = build_ckh(braid("3: 1 1 2 2"), QQ)
        D = y_specialized_differential(C, weights)
        assert (D.differential @ D.differential).is_zero()

    def test_knot_differential_is_unchanged(self, trefoil):
        C = build_ckh(trefoil, QQ)
        D = y_specialized_differential(C, [3])
        assert D.differential == C.differential

    def test_weight_arity(self, trefoil):
        with pytest.raises(InputError):
            y_specialized_differential(build_ckh(trefoil, QQ), [1, 2])

    def test_needs_graded_theory(self, hopf):
        C = build_ckh(hopf, CoefficientRing.parse("Q", h=1))
        with pytest.raises(UnsupportedError):
            y_specialized_differential(C, [1, 0])

"""
Coefficient rings, A_{h,t}, sparse linear algebra and Smith forms
"""

import random
from collections import Counter
from fractions import Fraction

import pytest

from packages.core.khoma.algebra import (
    ONE,
    QQ,
    ZZ,
    X,
    CoefficientRing,
    EchelonBasis,
    FrobeniusAlgebra,
    SparseMatrix,
    graded_snf,
    prime_field,
    rank,
    rank_kernel_image,
    smith_normal_form,
    string_counts_by_rank,
    verify_smith,
)
from packages.core.khoma.errors import (
    InputError,
    InternalError,
    NotNilpotentError,
    UnsupportedError,
)


class TestCoefficientRing:
    def test_parse_labels(self):
        assert CoefficientRing.parse("Q").name == "Q"
        assert CoefficientRing.parse("z").name == "Z"
        assert CoefficientRing.parse("F2").name == "F2"
        assert CoefficientRing.parse("Fp", prime=5).name == "F5"

    @pytest.mark.parametrize("label", ["R", "F4", "F", "Q7"])
    def test_parse_rejects(self, label):
        with pytest.raises(InputError):
            CoefficientRing.parse(label)

    def test_prime_field_arithmetic(self):
        f7 = prime_field(7)
        assert f7.convert(Fraction(1, 2)) == 4
        assert f7.convert(-1) == 6
        assert f7.mul(f7.inverse(3), 3) == 1
        assert f7.is_zero(14)

    def test_integers(self):
        assert not ZZ.is_field
        assert ZZ.inverse(-1) == -1
        with pytest.raises(UnsupportedError):
            ZZ.inverse(2)
        with pytest.raises(InputError):
            ZZ.convert(Fraction(1, 2))

    def test_rationals_are_exact(self):
        assert QQ.add(Fraction(1, 3), Fraction(2, 3)) == 1
        assert isinstance(QQ.convert(2), Fraction)


class TestFrobeniusAlgebra:
    def test_khovanov_products(self):
        A = FrobeniusAlgebra(QQ)
        assert A.multiply({X: 1}, {X: 1}) == {}
        assert A.multiply({ONE: 1}, {X: 1}) == {X: 1}
        assert A.comultiply({ONE: 1}) == {(X, ONE): 1, (ONE, X): 1}
        assert A.comultiply({X: 1}) == {(X, X): 1}

    def test_deformed_products(self):
        lee = FrobeniusAlgebra(CoefficientRing.parse("Q", t=1))
        assert lee.multiply({X: 1}, {X: 1}) == {ONE: 1}
        bn = FrobeniusAlgebra(CoefficientRing.parse("Q", h=1))
        assert bn.comultiply({ONE: 1}) == {(X, ONE): 1, (ONE, X): 1, (ONE, ONE): -1}

    def test_counit(self):
        A = FrobeniusAlgebra(QQ)
        assert A.counit({ONE: 1}) == 0
        assert A.counit({X: 1, ONE: 5}) == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_axioms_random_parameters(self, seed):
        rng = random.Random(seed)
        ring = prime_field(5, h=rng.randrange(5), t=rng.randrange(5))
        A = FrobeniusAlgebra(ring)
        basis = [ONE, X]
        for a in basis:
            for b in basis:
                for c in basis:
                    left = A.multiply(A.multiply({a: 1}, {b: 1}), {c: 1})
                    right = A.multiply({a: 1}, A.multiply({b: 1}, {c: 1}))
                    assert left == right
                # Delta o m = (m (x) id) o (id (x) Delta)
                assert A.comultiply(A.multiply({a: 1}, {b: 1})) == A.multiply_first(
                    A.comultiply_second({(a, b): 1})
                )
            # (eps (x) id) Delta = id
            back = {}
            for (l1, l2), coef in A.comultiply({a: 1}).items():
                value = ring.mul(coef, A.counit({l1: 1}))
                back[l2] = ring.add(back.get(l2, 0), value)
            assert {k: v for k, v in back.items() if v} == {a: 1}


class TestSparseMatrix:
    def test_no_stored_zeros(self):
        m = SparseMatrix.from_dense(QQ, [[1, 0], [2, 3]])
        assert m.nnz == 3
        assert (m - m).is_zero()
        assert (m - m).nnz == 0

    def test_product_and_transpose(self):
        m = SparseMatrix.from_dense(QQ, [[1, 2], [3, 4]])
        assert (m @ SparseMatrix.identity(2, QQ)) == m
        assert m.transpose().to_dense() == [[1, 3], [2, 4]]
        assert (m @ m).to_dense() == [[7, 10], [15, 22]]

    def test_apply(self):
        m = SparseMatrix.from_dense(QQ, [[1, 2], [3, 4]])
        assert m.apply({0: 1, 1: -1}) == {0: -1, 1: -1}


class TestRankKernelImage:
    def test_zero_matrix(self):
        dec = rank_kernel_image(SparseMatrix.zeros(3, 3, QQ))
        assert dec.rank == 0
        assert len(dec.kernel) == 3

    def test_identity(self):
        dec = rank_kernel_image(SparseMatrix.identity(2, QQ))
        assert dec.rank == 2
        assert dec.kernel == []

    def test_proportional_rows(self):
        m = SparseMatrix.from_dense(QQ, [[1, 2], [2, 4]])
        dec = rank_kernel_image(m)
        assert dec.rank == 1
        (k,) = dec.kernel
        assert m.apply(k) == {}
        solution = dec.lift({0: 1, 1: 2})
        assert solution is not None
        assert m.apply(solution) == {0: 1, 1: 2}
        assert dec.lift({0: 1}) is None

    def test_rank_over_f2(self):
        f2 = prime_field(2)
        assert rank(SparseMatrix.from_dense(f2, [[1, 1], [1, 1]])) == 1
        assert rank(SparseMatrix.from_dense(QQ, [[1, 1], [1, -1]])) == 2

    def test_rank_agrees_with_decomposition(self):
        m = SparseMatrix.from_dense(QQ, [[1, 2, 0, 3], [0, 0, 1, 1], [1, 2, 1, 4]])
        dec = rank_kernel_image(m)
        assert rank(m) == dec.rank == 2
        assert dec.image_columns == [0, 2]
        assert [sorted(k) for k in dec.kernel] == [[0, 1], [0, 2, 3]]

    def test_echelon_needs_field(self):
        with pytest.raises(UnsupportedError):
            EchelonBasis(ZZ)

    def test_echelon_relation(self):
        basis = EchelonBasis(QQ)
        assert basis.insert({0: 1, 1: 1}, "u") is None
        assert basis.insert({1: 1}, "v") is None
        relation = basis.insert({0: 2, 1: 3}, "w")
        assert relation == {"w": 1, "u": -2, "v": -1}


class TestIntegerSmithForm:
    def test_small(self):
        snf = smith_normal_form([[2, 4], [6, 8]])
        assert snf.diagonal == [2, 4]
        assert verify_smith([[2, 4], [6, 8]], snf)

    def test_classic(self):
        m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        snf = smith_normal_form(m)
        assert snf.diagonal == [2, 6, 12]
        assert snf.torsion == [2, 6, 12]
        assert snf.rank == 3
        assert verify_smith(m, snf)

    def test_rectangular_and_unimodular(self):
        m = [[1, 2, 3], [4, 5, 6]]
        snf = smith_normal_form(m)
        assert snf.diagonal == [1, 3]
        assert verify_smith(m, snf)

    def test_empty(self):
        snf = smith_normal_form([], rows=0, cols=3)
        assert snf.rank == 0


def _jordan(ring, chains):
    """Nilpotent matrix from chains [(start_q, [entries...])], basis ordered chain by chain."""
    grading = []
    columns = {}
    for start, entries in chains:
        base = len(grading)
        grading.extend(start + 4 * k for k in range(len(entries) + 1))
        for k, value in enumerate(entries):
            columns[base + k] = {base + k + 1: value}
    n = len(grading)
    return SparseMatrix(n, n, ring, columns), grading


class TestGradedSNF:
    def test_zero_action(self):
        A = SparseMatrix.zeros(3, 3, QQ)
        result = graded_snf(A, [0, 4, 8])
        assert result.strings == [(0, 1), (4, 1), (8, 1)]
        assert result.exponents == [1, 1, 1]

    def test_single_jordan_block(self):
        A, grading = _jordan(QQ, [(0, [1])])
        assert graded_snf(A, grading).strings == [(0, 2)]

    def test_unit_pivot_taken_first(self):
        # eI - A = [[e, 0], [-1, e]]: the degree-0 entry at (1, 0) beats both e's
        A, grading = _jordan(QQ, [(0, [1])])
        result = graded_snf(A, grading)
        assert result.exponents == [0, 2]
        assert result.P[0][0].is_zero

    def test_two_chains_from_listed_blocks(self):
        A, grading = _jordan(QQ, [(6, [-6, 4, -2]), (12, [-4, 2])])
        result = graded_snf(A, grading)
        assert result.strings == [(6, 4), (12, 3)]
        assert Counter(result.strings) == string_counts_by_rank(A, grading)

    def test_generators_span_strings(self):
        A, grading = _jordan(QQ, [(0, [1, 1]), (4, [])])
        result = graded_snf(A, grading)
        assert result.strings == [(0, 3), (4, 1)]
        for g in result.generators:
            power = dict(g.vector)
            for _ in range(g.length - 1):
                power = A.apply(power)
            assert power
            assert A.apply(power) == {}

    def test_rank_oracle_mixed(self):
        A, grading = _jordan(prime_field(7), [(0, [3, 5]), (4, [])])
        assert string_counts_by_rank(A, grading) == Counter({(0, 3): 1, (4, 1): 1})

    def test_not_nilpotent(self):
        A = SparseMatrix.identity(1, QQ)
        with pytest.raises(NotNilpotentError):
            graded_snf(A, [0])

    def test_inhomogeneous(self):
        A = SparseMatrix(2, 2, QQ, {0: {1: 1}})
        with pytest.raises(InternalError):
            graded_snf(A, [0, 2])

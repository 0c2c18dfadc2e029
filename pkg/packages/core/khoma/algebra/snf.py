"""
Smith normal forms

- smith_normal_form: integer matrices, with unimodular transforms U M V = D
- graded_snf: eI - A over k[e] for a graded nilpotent A, using only
  grading-preserving row and column operations; the e-power diagonal entries
  are the string lengths and P^{-1} gives homogeneous generator lifts
- string_counts_by_rank: the independent rank-formula count of strings
"""

from collections import Counter
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel, ConfigDict

from ..errors import InternalError, NotNilpotentError, ensure
from .linalg import SparseMatrix, Vector, add_scaled, rank
from .ring import CoefficientRing

IntMatrix = List[List[int]]


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul(a: IntMatrix, b: IntMatrix, inner: int) -> IntMatrix:
    rows = len(a)
    cols = len(b[0]) if b else 0
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(rows)
    ]


class IntegerSmithForm(BaseModel):
    """U * M * V = D with U, V unimodular; inverses kept alongside"""

    model_config = ConfigDict(frozen=True)

    diagonal: List[int]
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def torsion(self) -> List[int]:
        return [d for d in self.diagonal if d not in (0, 1)]


class _SmithWorker:
    """Row/column operations on a dense integer matrix, mirrored on the transforms"""

    def __init__(self, matrix: IntMatrix, rows: int, cols: int):
        self.A = [list(r) for r in matrix]
        self.m = rows
        self.n = cols
        self.U = _identity(rows)
        self.U_inv = _identity(rows)
        self.V = _identity(cols)
        self.V_inv = _identity(cols)

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        for M in (self.A, self.U):
            M[i], M[j] = M[j], M[i]
        for row in self.U_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for M in (self.A, self.V):
            for row in M:
                row[i], row[j] = row[j], row[i]
        self.V_inv[i], self.V_inv[j] = self.V_inv[j], self.V_inv[i]

    def add_row(self, target: int, source: int, q: int) -> None:
        """row_target += q * row_source"""
        for M in (self.A, self.U):
            M[target] = [a + q * b for a, b in zip(M[target], M[source])]
        for row in self.U_inv:
            row[source] -= q * row[target]

    def add_col(self, target: int, source: int, q: int) -> None:
        """col_target += q * col_source"""
        for M in (self.A, self.V):
            for row in M:
                row[target] += q * row[source]
        self.V_inv[source] = [a - q * b for a, b in zip(self.V_inv[source], self.V_inv[target])]

    def negate_row(self, i: int) -> None:
        for M in (self.A, self.U):
            M[i] = [-a for a in M[i]]
        for row in self.U_inv:
            row[i] = -row[i]


def smith_normal_form(
    matrix: IntMatrix, rows: Optional[int] = None, cols: Optional[int] = None
) -> IntegerSmithForm:
    """
    Smith normal form of an integer matrix

    Args:
        matrix: dense rows x cols integer matrix
        rows, cols: shape, needed only when the matrix has no rows or columns

    Returns:
        IntegerSmithForm with U * matrix * V = D and d_1 | d_2 | ... on the diagonal
    """
    m = len(matrix) if rows is None else rows
    n = (len(matrix[0]) if matrix else 0) if cols is None else cols
    w = _SmithWorker(matrix, m, n)
    A = w.A
    for t in range(min(m, n)):
        while True:
            best: Optional[Tuple[int, int, int]] = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] != 0 and (best is None or abs(A[i][j]) < best[0]):
                        best = (abs(A[i][j]), i, j)
            if best is None:
                break
            _, bi, bj = best
            w.swap_rows(t, bi)
            w.swap_cols(t, bj)
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    w.add_row(i, t, -(A[i][t] // A[t][t]))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    w.add_col(j, t, -(A[t][j] // A[t][t]))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            stray = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if stray is None:
                break
            w.add_row(t, stray, 1)
        if best is None:
            break
        if A[t][t] < 0:
            w.negate_row(t)
    diagonal = [A[i][i] for i in range(min(m, n))]
    return IntegerSmithForm(diagonal=diagonal, D=A, U=w.U, V=w.V, U_inv=w.U_inv, V_inv=w.V_inv)


def verify_smith(matrix: IntMatrix, snf: IntegerSmithForm) -> bool:
    m = len(snf.U)
    n = len(snf.V)
    if m == 0 or n == 0:
        return True
    left = _matmul(snf.U, matrix, m)
    return _matmul(left, snf.V, n) == snf.D


# --------------------------------------------------------------------- graded


E = sympy.Symbol("e")

PolyMatrix = List[List[sympy.Poly]]


class GeneratorLift(BaseModel):
    """A homogeneous generator of one cyclic summand k[e]/(e^length)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: int
    length: int
    vector: Dict[int, Any]


class GradedSNFResult(BaseModel):
    """
    P (eI - A) Q = diag(1, ..., 1, e^{l_1}, e^{l_2}, ...), l_1 <= l_2 <= ...
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    exponents: List[int]
    P: PolyMatrix
    Q: PolyMatrix
    P_inv: PolyMatrix
    Q_inv: PolyMatrix
    generators: List[GeneratorLift]

    @property
    def diagonal(self) -> List[sympy.Expr]:
        return [E**k for k in self.exponents]

    @property
    def strings(self) -> List[Tuple[int, int]]:
        """(q_start, length) for every non-trivial summand"""
        return [(g.q, g.length) for g in self.generators]


class _PolyWorker:
    def __init__(self, M: PolyMatrix, n: int, zero: sympy.Poly, one: sympy.Poly):
        self.M = M
        self.n = n

        def ident() -> PolyMatrix:
            return [[one if i == j else zero for j in range(n)] for i in range(n)]

        self.P = ident()
        self.P_inv = ident()
        self.Q = ident()
        self.Q_inv = ident()

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        for X in (self.M, self.P):
            X[i], X[j] = X[j], X[i]
        for row in self.P_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for X in (self.M, self.Q):
            for row in X:
                row[i], row[j] = row[j], row[i]
        self.Q_inv[i], self.Q_inv[j] = self.Q_inv[j], self.Q_inv[i]

    def scale_row(self, i: int, c: sympy.Poly, c_inv: sympy.Poly) -> None:
        for X in (self.M, self.P):
            X[i] = [c * a for a in X[i]]
        for row in self.P_inv:
            row[i] = row[i] * c_inv

    def add_row(self, target: int, source: int, q: sympy.Poly) -> None:
        for X in (self.M, self.P):
            X[target] = [a + q * b for a, b in zip(X[target], X[source])]
        for row in self.P_inv:
            row[source] = row[source] - row[target] * q

    def add_col(self, target: int, source: int, q: sympy.Poly) -> None:
        for X in (self.M, self.Q):
            for row in X:
                row[target] = row[target] + q * row[source]
        self.Q_inv[source] = [a - q * b for a, b in zip(self.Q_inv[source], self.Q_inv[target])]


def _is_nilpotent(A: SparseMatrix) -> bool:
    power = A
    for _ in range(A.rows):
        if power.is_zero():
            return True
        power = power @ A
    return power.is_zero()


def _poly_matmul(a: PolyMatrix, b: PolyMatrix, zero: sympy.Poly) -> PolyMatrix:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(len(b[0])):
            acc = zero
            for k in range(len(b)):
                if not a[i][k].is_zero and not b[k][j].is_zero:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def graded_snf(
    A: SparseMatrix,
    grading: Sequence[int],
    step: int = 4,
    verify: bool = True,
) -> GradedSNFResult:
    """
    Graded Smith normal form of eI - A over k[e]

    Args:
        A: square matrix of a nilpotent endomorphism over a field, raising the
           grading by ``step`` (entry (r, c) nonzero only if grading[r] = grading[c] + step)
        grading: q-grading of each basis vector
        step: degree of e in the tracked grading
        verify: check P (eI - A) Q = D by multiplication

    Each step pivots on a nonzero entry of minimum e-degree in the remaining
    block; ties go to the lexicographically smallest (row, col). Every entry
    met during elimination must be a monomial in e.

    Returns:
        GradedSNFResult; its generators give the e-string decomposition
    """
    ring: CoefficientRing = A.ring
    n = A.rows
    ensure(A.cols == n and len(grading) == n, "graded_snf needs a square matrix with one grade per row")
    if not _is_nilpotent(A):
        raise NotNilpotentError("e-action is not nilpotent")
    for c, col in A.columns.items():
        for r in col:
            if grading[r] != grading[c] + step:
                raise InternalError(
                    f"e-action is not homogeneous: entry ({r}, {c}) maps q={grading[c]} to q={grading[r]}"
                )

    kw = ring.sympy_domain_kwargs()
    zero = sympy.Poly(0, E, **kw)
    one = sympy.Poly(1, E, **kw)
    e_poly = sympy.Poly(E, E, **kw)

    original: PolyMatrix = [[zero] * n for _ in range(n)]
    for i in range(n):
        original[i][i] = e_poly
    for c, col in A.columns.items():
        for r, v in col.items():
            original[r][c] = original[r][c] - sympy.Poly(ring.to_sympy(v), E, **kw)

    w = _PolyWorker([list(r) for r in original], n, zero, one)
    M = w.M
    exponents: List[int] = []
    for t in range(n):
        pivot: Optional[Tuple[int, int, int]] = None
        for i in range(t, n):
            for j in range(t, n):
                if M[i][j].is_zero:
                    continue
                if len(M[i][j].terms()) != 1:
                    raise NotNilpotentError(f"non-monomial entry {M[i][j].as_expr()} in graded elimination")
                key = (M[i][j].degree(), i, j)
                if pivot is None or key < pivot:
                    pivot = key
        ensure(pivot is not None, "eI - A lost rank during graded elimination")
        deg, pi, pj = pivot
        w.swap_rows(t, pi)
        w.swap_cols(t, pj)
        lc = ring.from_sympy(M[t][t].LC())
        inv = ring.inverse(lc)
        w.scale_row(
            t, sympy.Poly(ring.to_sympy(inv), E, **kw), sympy.Poly(ring.to_sympy(lc), E, **kw)
        )
        for i in range(t + 1, n):
            if not M[i][t].is_zero:
                w.add_row(i, t, -M[i][t].exquo(M[t][t]))
        for j in range(t + 1, n):
            if not M[t][j].is_zero:
                w.add_col(j, t, -M[t][j].exquo(M[t][t]))
        exponents.append(deg)

    if verify:
        product = _poly_matmul(_poly_matmul(w.P, original, zero), w.Q, zero)
        for i in range(n):
            for j in range(n):
                expected = sympy.Poly(E ** exponents[i], E, **kw) if i == j else zero
                if product[i][j] != expected:
                    raise InternalError("graded SNF identity P (eI - A) Q = D failed")

    generators: List[GeneratorLift] = []
    for t, l in enumerate(exponents):
        if l == 0:
            continue
        generators.append(_generator_lift(A, grading, w.P_inv, t, l, ring))
    generators.sort(key=lambda g: (g.q, g.length))
    return GradedSNFResult(
        exponents=exponents, P=w.P, Q=w.Q, P_inv=w.P_inv, Q_inv=w.Q_inv, generators=generators
    )


def _generator_lift(
    A: SparseMatrix,
    grading: Sequence[int],
    P_inv: PolyMatrix,
    t: int,
    length: int,
    ring: CoefficientRing,
) -> GeneratorLift:
    """z = phi(P^{-1} e_t): apply each polynomial entry to its basis vector through A."""
    degrees = set()
    vector: Vector = {}
    for j in range(len(P_inv)):
        entry = P_inv[j][t]
        if entry.is_zero:
            continue
        coeffs = entry.all_coeffs()[::-1]
        if not ring.is_zero(ring.from_sympy(coeffs[0])):
            degrees.add(grading[j])
        power: Vector = {j: ring.one}
        for k, c in enumerate(coeffs):
            if k:
                power = A.apply(power)
            add_scaled(ring, vector, power, ring.from_sympy(c))
    ensure(len(degrees) == 1, f"generator grading is ambiguous or missing: {sorted(degrees)}")
    return GeneratorLift(q=degrees.pop(), length=length, vector=vector)


def string_counts_by_rank(A: SparseMatrix, grading: Sequence[int], step: int = 4) -> Counter:
    """
    Count strings (q_start, length) from ranks of powers of A on graded pieces

        N_{=l}(q) = r_{l-1}(q) - r_l(q) - r_l(q - step) + r_{l+1}(q - step)

    where r_l(q) is the rank of A^l restricted to the degree-q piece (r_0 = dimension).
    """
    n = A.rows
    by_degree: Dict[int, List[int]] = {}
    for idx, q in enumerate(grading):
        by_degree.setdefault(q, []).append(idx)

    powers = [SparseMatrix.identity(n, A.ring)]
    while not powers[-1].is_zero():
        powers.append(powers[-1] @ A)
    max_len = len(powers)

    def r(l: int, q: int) -> int:
        cols = by_degree.get(q)
        if not cols or l >= max_len:
            return 0
        return rank(powers[l].submatrix(list(range(n)), cols))

    counts: Counter = Counter()
    for q in by_degree:
        for l in range(1, max_len + 1):
            value = r(l - 1, q) - r(l, q) - r(l, q - step) + r(l + 1, q - step)
            if value:
                counts[(q, l)] = value
    return counts

"""
Sparse exact linear algebra

SparseMatrix stores columns as dicts {row: value}; zeros are never stored.
EchelonBasis is an incremental sparse Gaussian elimination over a field that
remembers how every reduced vector was combined from the inserted ones, which
is what kernels, images, lifts and homology projections are built from.
"""

import heapq
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from ..errors import InternalError, UnsupportedError
from .ring import CoefficientRing

Vector = Dict[Any, Any]


def add_scaled(ring: CoefficientRing, target: Vector, source: Vector, coef: Any) -> None:
    """target += coef * source, in place, dropping zeros."""
    if ring.is_zero(coef):
        return
    for key, val in source.items():
        new = ring.add(target.get(key, ring.zero), ring.mul(coef, val))
        if ring.is_zero(new):
            target.pop(key, None)
        else:
            target[key] = new


class SparseMatrix:
    """A rows x cols matrix over a coefficient ring, stored by columns"""

    def __init__(
        self,
        rows: int,
        cols: int,
        ring: CoefficientRing,
        columns: Optional[Dict[int, Dict[int, Any]]] = None,
    ):
        self.rows = rows
        self.cols = cols
        self.ring = ring
        self.columns: Dict[int, Dict[int, Any]] = {}
        if columns:
            for j, col in columns.items():
                for i, v in col.items():
                    self.add_to(i, j, v)

    # ------------------------------------------------------------ construction

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: CoefficientRing) -> "SparseMatrix":
        return cls(rows, cols, ring)

    @classmethod
    def identity(cls, n: int, ring: CoefficientRing) -> "SparseMatrix":
        return cls(n, n, ring, {j: {j: ring.one} for j in range(n)})

    @classmethod
    def from_dense(cls, ring: CoefficientRing, data: Sequence[Sequence[Any]]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        m = cls(rows, cols, ring)
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                m.add_to(i, j, ring.convert(v))
        return m

    @classmethod
    def from_triplets(
        cls, rows: int, cols: int, ring: CoefficientRing, triplets: Iterable[Tuple[int, int, Any]]
    ) -> "SparseMatrix":
        m = cls(rows, cols, ring)
        for i, j, v in triplets:
            m.add_to(i, j, v)
        return m

    # ------------------------------------------------------------------ access

    def get(self, i: int, j: int) -> Any:
        return self.columns.get(j, {}).get(i, self.ring.zero)

    def set(self, i: int, j: int, value: Any) -> None:
        value = self.ring.normalize(value)
        col = self.columns.setdefault(j, {})
        if self.ring.is_zero(value):
            col.pop(i, None)
            if not col:
                del self.columns[j]
        else:
            col[i] = value

    def add_to(self, i: int, j: int, value: Any) -> None:
        if self.ring.is_zero(value):
            return
        self.set(i, j, self.get(i, j) + value)

    def column(self, j: int) -> Dict[int, Any]:
        return self.columns.get(j, {})

    def row_dicts(self) -> Dict[int, Dict[int, Any]]:
        out: Dict[int, Dict[int, Any]] = {}
        for j, col in self.columns.items():
            for i, v in col.items():
                out.setdefault(i, {})[j] = v
        return out

    def triplets(self) -> List[Tuple[int, int, Any]]:
        return sorted((i, j, v) for j, col in self.columns.items() for i, v in col.items())

    @property
    def nnz(self) -> int:
        return sum(len(col) for col in self.columns.values())

    def is_zero(self) -> bool:
        return not self.columns

    def to_dense(self) -> List[List[Any]]:
        out = [[self.ring.zero] * self.cols for _ in range(self.rows)]
        for j, col in self.columns.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    # -------------------------------------------------------------- arithmetic

    def copy(self) -> "SparseMatrix":
        m = SparseMatrix(self.rows, self.cols, self.ring)
        m.columns = {j: dict(col) for j, col in self.columns.items()}
        return m

    def transpose(self) -> "SparseMatrix":
        m = SparseMatrix(self.cols, self.rows, self.ring)
        m.columns = self.row_dicts()
        return m

    def scale(self, c: Any) -> "SparseMatrix":
        m = SparseMatrix(self.rows, self.cols, self.ring)
        for j, col in self.columns.items():
            for i, v in col.items():
                m.add_to(i, j, self.ring.mul(c, v))
        return m

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check_shape(other)
        m = self.copy()
        for j, col in other.columns.items():
            target = m.columns.setdefault(j, {})
            add_scaled(self.ring, target, col, self.ring.one)
            if not target:
                del m.columns[j]
        return m

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(self.ring.convert(-1))

    def __neg__(self) -> "SparseMatrix":
        return self.scale(self.ring.convert(-1))

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise InternalError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        m = SparseMatrix(self.rows, other.cols, self.ring)
        for j, col in other.columns.items():
            acc: Dict[int, Any] = {}
            for k, v in col.items():
                left = self.columns.get(k)
                if left:
                    add_scaled(self.ring, acc, left, v)
            if acc:
                m.columns[j] = acc
        return m

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for k, v in vec.items():
            left = self.columns.get(k)
            if left:
                add_scaled(self.ring, out, left, v)
        return out

    def submatrix(self, row_ids: Sequence[int], col_ids: Sequence[int]) -> "SparseMatrix":
        """Restrict to the given rows and columns, reindexed in the order given."""
        row_pos = {r: a for a, r in enumerate(row_ids)}
        m = SparseMatrix(len(row_ids), len(col_ids), self.ring)
        for b, c in enumerate(col_ids):
            for i, v in self.columns.get(c, {}).items():
                a = row_pos.get(i)
                if a is not None:
                    m.columns.setdefault(b, {})[a] = v
        return m

    def _check_shape(self, other: "SparseMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InternalError("shape mismatch in matrix sum")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and (self - other).is_zero()

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz}, ring={self.ring.name})"


class EchelonBasis:
    """
    Incremental reduced echelon form over a field

    Each inserted vector carries a tag. Stored pivot vectors remember the
    combination of tagged inputs they came from, so reductions can be
    expressed back in terms of the inputs.
    """

    def __init__(self, ring: CoefficientRing):
        if not ring.is_field:
            raise UnsupportedError(f"echelon reduction needs a field, got {ring.name}")
        self.ring = ring
        self._pivot_of_row: Dict[Any, int] = {}
        self._vectors: List[Vector] = []
        self._combos: List[Vector] = []
        self._rows: List[Any] = []

    @property
    def rank(self) -> int:
        return len(self._vectors)

    @property
    def pivot_rows(self) -> List[Any]:
        return list(self._rows)

    def reduce(self, vec: Vector) -> Tuple[Vector, Vector]:
        """
        Reduce ``vec`` against the stored pivots

        Returns:
            (residual, combo) with vec = residual + sum(combo[tag] * input[tag])
        """
        r = self.ring
        residual = dict(vec)
        combo: Vector = {}
        heap = [self._pivot_of_row[k] for k in residual if k in self._pivot_of_row]
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            idx = heapq.heappop(heap)
            seen.discard(idx)
            row = self._rows[idx]
            c = residual.get(row)
            if c is None:
                continue
            pvec = self._vectors[idx]
            for k in pvec:
                if k not in residual and k in self._pivot_of_row:
                    other = self._pivot_of_row[k]
                    if other not in seen:
                        heapq.heappush(heap, other)
                        seen.add(other)
            add_scaled(r, residual, pvec, r.neg(c))
            add_scaled(r, combo, self._combos[idx], c)
        return residual, combo

    def insert(self, vec: Vector, tag: Hashable) -> Optional[Vector]:
        """
        Insert a tagged vector

        Returns:
            None if the vector was independent, otherwise the linear relation
            {tag: coef} among inputs (including ``tag`` with coefficient 1)
            that sums to zero.
        """
        r = self.ring
        residual, combo = self.reduce(vec)
        if not residual:
            relation = {k: r.neg(v) for k, v in combo.items()}
            relation[tag] = r.add(relation.get(tag, r.zero), r.one)
            return {k: v for k, v in relation.items() if not r.is_zero(v)}
        row = min(residual)
        inv = r.inverse(residual[row])
        pvec = {k: r.mul(inv, v) for k, v in residual.items()}
        pcombo = {k: r.mul(r.neg(inv), v) for k, v in combo.items()}
        pcombo[tag] = r.add(pcombo.get(tag, r.zero), inv)
        self._pivot_of_row[row] = len(self._vectors)
        self._vectors.append(pvec)
        self._combos.append({k: v for k, v in pcombo.items() if not r.is_zero(v)})
        self._rows.append(row)
        return None

    def solve(self, vec: Vector) -> Optional[Vector]:
        """Express ``vec`` as a combination of inputs, or None if it is not in their span."""
        residual, combo = self.reduce(vec)
        if residual:
            return None
        return combo


class LinearDecomposition:
    """Rank, kernel basis, image basis and a lift solver for one matrix"""

    def __init__(self, matrix: SparseMatrix):
        self.matrix = matrix
        self._basis = EchelonBasis(matrix.ring)
        self.kernel: List[Vector] = []
        self.image_columns: List[int] = []
        for j in range(matrix.cols):
            relation = self._basis.insert(matrix.column(j), j)
            if relation is None:
                self.image_columns.append(j)
            else:
                self.kernel.append(relation)

    @property
    def rank(self) -> int:
        return self._basis.rank

    @property
    def image(self) -> List[Vector]:
        return [dict(self.matrix.column(j)) for j in self.image_columns]

    def lift(self, vec: Vector) -> Optional[Vector]:
        """Find x with M x = vec, or None when vec is outside the column space."""
        return self._basis.solve(vec)


def rank_kernel_image(matrix: SparseMatrix) -> LinearDecomposition:
    """
    Decompose a matrix over a field

    Columns are inserted left to right, so the kernel vectors and
    image_columns come out in column order. Raises UnsupportedError for
    coefficients outside a field.
    """
    return LinearDecomposition(matrix)


def rank(matrix: SparseMatrix) -> int:
    """Rank only; skips the kernel bookkeeping of rank_kernel_image."""
    basis = EchelonBasis(matrix.ring)
    for j in range(matrix.cols):
        col = matrix.columns.get(j)
        if col:
            basis.insert(col, j)
    return basis.rank

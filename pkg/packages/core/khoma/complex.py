"""
Cube-of-resolutions chain complexes

Conventions:
    - the 0-resolution at a crossing is the A-smoothing (oriented at positive
      crossings, unoriented at negative ones); d goes from 0 to 1
    - cube sign of the edge v -> v + e_c is (-1)^(number of 1-bits of v before c)
    - a generator at vertex v with circle labels in {1, X} sits in
          i = |v| - n_minus
          j = #X - #1 - |v| - n_plus + 2 n_minus
      so a dot (X) raises the quantum degree by 2 and the unknot is q^-1 A
"""

import itertools
import json
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .algebra import ONE, X, CoefficientRing, FrobeniusAlgebra, SparseMatrix
from .diagram import ABColoring, LinkDiagram
from .errors import InputError, InternalError, UnsupportedError, ensure
from .utils.logger import get_logger

logger = get_logger()

Vertex = Tuple[int, ...]
Labels = Tuple[int, ...]

BIGRADED = "bigraded"
FILTERED = "filtered"
COLLAPSED = "collapsed"


class Generator(NamedTuple):
    """A decorated resolution (state, one label per circle) with its bidegree"""

    i: int
    j: int
    state: Vertex
    labels: Labels

    @property
    def delta(self) -> int:
        return 2 * self.i + self.j

    def describe(self) -> str:
        bits = "".join(str(b) for b in self.state)
        marks = "".join("X" if lbl == X else "1" for lbl in self.labels)
        return f"{bits or '-'}:{marks}"


class ResolvedState:
    """Circles of one complete resolution; circles are ordered by their smallest edge"""

    def __init__(self, vertex: Vertex, circles: List[Tuple[int, ...]]):
        self.vertex = vertex
        self.circles = circles
        self.circle_of: Dict[int, int] = {e: k for k, circle in enumerate(circles) for e in circle}

    @property
    def n_circles(self) -> int:
        return len(self.circles)

    def __repr__(self) -> str:
        return f"ResolvedState({self.vertex}, circles={self.circles})"


def resolve(diagram: LinkDiagram, vertex: Sequence[int]) -> ResolvedState:
    """Resolve every crossing by its bit and trace the resulting circles."""
    vertex = tuple(vertex)
    if len(vertex) != diagram.n_crossings or any(b not in (0, 1) for b in vertex):
        raise InputError(f"vertex {vertex} needs one 0/1 bit per crossing ({diagram.n_crossings})")
    parent = {e: e for e in diagram.edges}

    def find(e: int) -> int:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for bit, crossing in zip(vertex, diagram.crossings):
        pairs = crossing.zero_pairs() if bit == 0 else crossing.one_pairs()
        for x, y in pairs:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

    groups: Dict[int, List[int]] = {}
    for e in diagram.edges:
        groups.setdefault(find(e), []).append(e)
    circles = sorted(tuple(sorted(g)) for g in groups.values())
    return ResolvedState(vertex, circles)


class _Saddle(NamedTuple):
    """The cobordism on the cube edge v -> v + e_c"""

    merge: bool
    sign: int
    # v-circle -> w-circle for circles away from the saddle
    passive: Tuple[Tuple[int, int], ...]
    # merge: (A, B) in v, (W,) in w; split: (A,) in v, (W1, W2) in w
    v_side: Tuple[int, ...]
    w_side: Tuple[int, ...]
    n_v: int
    n_w: int


class KhovanovCube:
    """Generators and edge maps of the cube of resolutions"""

    def __init__(self, diagram: LinkDiagram, ring: CoefficientRing):
        self.diagram = diagram
        self.ring = ring
        self.algebra = FrobeniusAlgebra(ring)
        self.n = diagram.n_crossings
        self._states: Dict[Vertex, ResolvedState] = {}
        self._saddles: Dict[Tuple[Vertex, int], _Saddle] = {}
        self._generators: Optional[List[Generator]] = None
        self._index: Dict[Tuple[Vertex, Labels], int] = {}

    # --------------------------------------------------------------- states

    def state(self, vertex: Vertex) -> ResolvedState:
        st = self._states.get(vertex)
        if st is None:
            st = resolve(self.diagram, vertex)
            self._states[vertex] = st
        return st

    def vertices(self, height: Optional[int] = None) -> List[Vertex]:
        if height is None:
            verts = list(itertools.product((0, 1), repeat=self.n))
            return sorted(verts, key=lambda v: (sum(v), v))
        out = []
        for ones in itertools.combinations(range(self.n), height):
            v = [0] * self.n
            for k in ones:
                v[k] = 1
            out.append(tuple(v))
        return sorted(out)

    def grading(self, vertex: Vertex, labels: Labels) -> Tuple[int, int]:
        height = sum(vertex)
        xs = sum(1 for lbl in labels if lbl == X)
        ones = len(labels) - xs
        d = self.diagram
        return height - d.n_minus, xs - ones - height - d.n_plus + 2 * d.n_minus

    def generators_at(self, vertex: Vertex) -> List[Generator]:
        st = self.state(vertex)
        out = []
        for labels in itertools.product((ONE, X), repeat=st.n_circles):
            i, j = self.grading(vertex, labels)
            out.append(Generator(i, j, vertex, labels))
        return out

    def generators_in_degree(self, i: int) -> List[Generator]:
        height = i + self.diagram.n_minus
        if not 0 <= height <= self.n:
            return []
        return [g for v in self.vertices(height) for g in self.generators_at(v)]

    @property
    def generators(self) -> List[Generator]:
        if self._generators is None:
            self._build_index()
        return self._generators or []

    def _build_index(self) -> None:
        self._generators = [g for v in self.vertices() for g in self.generators_at(v)]
        self._index = {(g.state, g.labels): k for k, g in enumerate(self._generators)}

    def index_of(self, state: Vertex, labels: Labels) -> int:
        if self._generators is None:
            self._build_index()
        return self._index[(state, labels)]

    # -------------------------------------------------------------- saddles

    def saddle(self, vertex: Vertex, c: int) -> _Saddle:
        """Saddle from ``vertex`` (bit c = 0) to vertex + e_c."""
        key = (vertex, c)
        cached = self._saddles.get(key)
        if cached is not None:
            return cached
        ensure(vertex[c] == 0, f"saddle needs bit {c} of {vertex} to be 0")
        target = vertex[:c] + (1,) + vertex[c + 1 :]
        sv, sw = self.state(vertex), self.state(target)
        images = {
            a: sorted({sw.circle_of[e] for e in circle}) for a, circle in enumerate(sv.circles)
        }
        sign = -1 if sum(vertex[:c]) % 2 else 1
        if sw.n_circles == sv.n_circles - 1:
            preimages: Dict[int, List[int]] = {}
            for a, ws in images.items():
                preimages.setdefault(ws[0], []).append(a)
            (w_merged,) = [w for w, pre in preimages.items() if len(pre) == 2]
            v_side = tuple(preimages[w_merged])
            passive = tuple((a, ws[0]) for a, ws in images.items() if a not in v_side)
            result = _Saddle(True, sign, passive, v_side, (w_merged,), sv.n_circles, sw.n_circles)
        elif sw.n_circles == sv.n_circles + 1:
            (a_split,) = [a for a, ws in images.items() if len(ws) == 2]
            passive = tuple((a, ws[0]) for a, ws in images.items() if a != a_split)
            result = _Saddle(
                False, sign, passive, (a_split,), tuple(images[a_split]), sv.n_circles, sw.n_circles
            )
        else:
            raise InternalError(f"saddle at crossing {c} from {vertex} does not change circle count by one")
        self._saddles[key] = result
        return result

    def d_image(self, gen: Generator) -> Dict[int, Any]:
        """d(gen) as {generator index: coefficient}"""
        out: Dict[int, Any] = {}
        r = self.ring
        for c in range(self.n):
            if gen.state[c] != 0:
                continue
            s = self.saddle(gen.state, c)
            target = gen.state[:c] + (1,) + gen.state[c + 1 :]
            for labels, coef in self._forward(s, gen.labels):
                idx = self.index_of(target, labels)
                out[idx] = r.add(out.get(idx, r.zero), r.mul(coef, r.convert(s.sign)))
        return {k: v for k, v in out.items() if not r.is_zero(v)}

    def chi_image(self, gen: Generator, c: int) -> Dict[int, Any]:
        """chi_c(gen): the saddle at c run backwards, from bit 1 to bit 0, with the cube sign"""
        if gen.state[c] != 1:
            return {}
        source = gen.state[:c] + (0,) + gen.state[c + 1 :]
        s = self.saddle(source, c)
        r = self.ring
        out: Dict[int, Any] = {}
        for labels, coef in self._backward(s, gen.labels):
            idx = self.index_of(source, labels)
            out[idx] = r.add(out.get(idx, r.zero), r.mul(coef, r.convert(s.sign)))
        return {k: v for k, v in out.items() if not r.is_zero(v)}

    def x_image(self, gen: Generator, edge: int, color: str) -> Dict[int, Any]:
        """Multiplication by X (color a) or h - X (color b) on the circle through ``edge``"""
        st = self.state(gen.state)
        k = st.circle_of[edge]
        r = self.ring
        factor = {X: r.one} if color == "a" else {ONE: self.ring.h, X: r.neg(r.one)}
        factor = {lbl: v for lbl, v in factor.items() if not r.is_zero(v)}
        out: Dict[int, Any] = {}
        for lbl, coef in self.algebra.multiply({gen.labels[k]: r.one}, factor).items():
            labels = gen.labels[:k] + (lbl,) + gen.labels[k + 1 :]
            out[self.index_of(gen.state, labels)] = coef
        return out

    def _forward(self, s: _Saddle, labels: Labels) -> Iterable[Tuple[Labels, Any]]:
        base = [ONE] * s.n_w
        for a, w in s.passive:
            base[w] = labels[a]
        if s.merge:
            a, b = s.v_side
            (w,) = s.w_side
            for lbl, coef in self.algebra.multiply_labels(labels[a], labels[b]):
                out = list(base)
                out[w] = lbl
                yield tuple(out), coef
        else:
            (a,) = s.v_side
            w1, w2 = s.w_side
            for (l1, l2), coef in self.algebra.comultiply_label(labels[a]):
                out = list(base)
                out[w1], out[w2] = l1, l2
                yield tuple(out), coef

    def _backward(self, s: _Saddle, labels: Labels) -> Iterable[Tuple[Labels, Any]]:
        base = [ONE] * s.n_v
        for a, w in s.passive:
            base[a] = labels[w]
        if s.merge:
            a, b = s.v_side
            (w,) = s.w_side
            for (l1, l2), coef in self.algebra.comultiply_label(labels[w]):
                out = list(base)
                out[a], out[b] = l1, l2
                yield tuple(out), coef
        else:
            (a,) = s.v_side
            w1, w2 = s.w_side
            for lbl, coef in self.algebra.multiply_labels(labels[w1], labels[w2]):
                out = list(base)
                out[a] = lbl
                yield tuple(out), coef

    def matrix(self, image: Callable[[Generator], Dict[int, Any]]) -> SparseMatrix:
        gens = self.generators
        m = SparseMatrix(len(gens), len(gens), self.ring)
        for col, g in enumerate(gens):
            img = image(g)
            if img:
                m.columns[col] = img
        return m


class ChainComplex:
    """
    A finitely generated complex with a single global differential

    ``mode`` decides what counts as the homological degree and how homology is
    sliced: "bigraded" slices by (i, j), "filtered" by i alone (deformed
    Frobenius parameters), "collapsed" by g = i + j (deformed differentials).
    """

    def __init__(
        self,
        ring: CoefficientRing,
        generators: List[Generator],
        differential: SparseMatrix,
        mode: str = BIGRADED,
        diagram: Optional[LinkDiagram] = None,
        cube: Optional[KhovanovCube] = None,
        reduced: bool = False,
        ambient: Optional["ChainComplex"] = None,
        inclusion: Optional[List[int]] = None,
        basepoint: Optional[int] = None,
    ):
        self.ring = ring
        self.generators = generators
        self.differential = differential
        self.mode = mode
        self.diagram = diagram
        self.cube = cube
        self.reduced = reduced
        self.ambient = ambient
        self.inclusion = inclusion
        self.basepoint = basepoint

    @property
    def size(self) -> int:
        return len(self.generators)

    def degree(self, idx: int) -> int:
        g = self.generators[idx]
        return g.i + g.j if self.mode == COLLAPSED else g.i

    def slice_key(self, idx: int) -> Tuple[int, ...]:
        g = self.generators[idx]
        if self.mode == BIGRADED:
            return (g.i, g.j)
        if self.mode == FILTERED:
            return (g.i,)
        return (g.i + g.j,)

    def degrees(self) -> List[int]:
        return sorted({self.degree(k) for k in range(self.size)})

    def indices(self, degree: int) -> List[int]:
        return [k for k in range(self.size) if self.degree(k) == degree]

    def slices(self) -> Dict[Tuple[int, ...], List[int]]:
        out: Dict[Tuple[int, ...], List[int]] = {}
        for k in range(self.size):
            out.setdefault(self.slice_key(k), []).append(k)
        return dict(sorted(out.items()))

    def block(self, degree: int) -> SparseMatrix:
        """The differential from ``degree`` to ``degree + 1``"""
        return self.differential.submatrix(self.indices(degree + 1), self.indices(degree))

    def verify(self) -> None:
        """Assert d^2 = 0 and that every entry of d raises the degree by one."""
        for col, entries in self.differential.columns.items():
            for row in entries:
                ensure(
                    self.degree(row) == self.degree(col) + 1,
                    f"differential entry {col} -> {row} does not raise the degree by one",
                )
                if self.mode == BIGRADED:
                    ensure(
                        self.generators[row].j == self.generators[col].j,
                        f"differential entry {col} -> {row} is not homogeneous in q",
                    )
        if not (self.differential @ self.differential).is_zero():
            raise InternalError("d^2 != 0")

    def dimensions(self) -> Dict[Tuple[int, ...], int]:
        return {key: len(idx) for key, idx in self.slices().items()}

    def euler_characteristic(self) -> Dict[int, int]:
        """sum_i (-1)^i rank C^{i,j}, per j"""
        out: Dict[int, int] = {}
        for g in self.generators:
            out[g.j] = out.get(g.j, 0) + (-1 if g.i % 2 else 1)
        return {j: v for j, v in sorted(out.items()) if v}

    def to_json(self, indent: Optional[int] = 2) -> str:
        r = self.ring
        payload = {
            "ring": r.name,
            "mode": self.mode,
            "reduced": self.reduced,
            "generators": [
                {"index": k, "i": g.i, "j": g.j, "state": g.describe()}
                for k, g in enumerate(self.generators)
            ],
            "differential": [
                [row, col, r.format(v)] for row, col, v in self.differential.triplets()
            ],
        }
        return json.dumps(payload, indent=indent)

    def __repr__(self) -> str:
        kind = "reduced " if self.reduced else ""
        return f"ChainComplex({kind}{self.mode}, {self.size} generators over {self.ring.name})"


class TrackedMap:
    """An endomorphism (chain map or homotopy) of a complex, stored on the global basis"""

    def __init__(self, name: str, bidegree: Tuple[int, int], matrix: SparseMatrix):
        self.name = name
        self.bidegree = bidegree
        self.matrix = matrix

    @property
    def ring(self) -> CoefficientRing:
        return self.matrix.ring

    def __matmul__(self, other: "TrackedMap") -> "TrackedMap":
        di = (self.bidegree[0] + other.bidegree[0], self.bidegree[1] + other.bidegree[1])
        return TrackedMap(f"{self.name}*{other.name}", di, self.matrix @ other.matrix)

    def __add__(self, other: "TrackedMap") -> "TrackedMap":
        return TrackedMap(self.name, self.bidegree, self.matrix + other.matrix)

    def __sub__(self, other: "TrackedMap") -> "TrackedMap":
        return TrackedMap(self.name, self.bidegree, self.matrix - other.matrix)

    def __neg__(self) -> "TrackedMap":
        return TrackedMap(f"-{self.name}", self.bidegree, -self.matrix)

    def scale(self, c: Any) -> "TrackedMap":
        return TrackedMap(self.name, self.bidegree, self.matrix.scale(self.ring.convert(c)))

    def renamed(self, name: str) -> "TrackedMap":
        return TrackedMap(name, self.bidegree, self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def commutator(self, d: SparseMatrix) -> SparseMatrix:
        """Graded commutator [d, f] = d f - (-1)^{deg f} f d"""
        fd = self.matrix @ d
        df = d @ self.matrix
        return df + fd if self.bidegree[0] % 2 else df - fd

    def is_chain_map(self, complex_: ChainComplex) -> bool:
        return self.commutator(complex_.differential).is_zero()

    def check_homogeneous(self, complex_: ChainComplex) -> None:
        di, dj = self.bidegree
        for col, entries in self.matrix.columns.items():
            src = complex_.generators[col]
            for row in entries:
                tgt = complex_.generators[row]
                ensure(
                    tgt.i - src.i == di and (complex_.mode != BIGRADED or tgt.j - src.j == dj),
                    f"{self.name} entry {col} -> {row} is not of bidegree {self.bidegree}",
                )

    def restrict(self, indices: Sequence[int]) -> "TrackedMap":
        """Restriction to the span of ``indices``, which must be preserved."""
        keep = set(indices)
        for col in indices:
            for row in self.matrix.column(col):
                if row not in keep:
                    raise InternalError(f"{self.name} does not preserve the subcomplex")
        rows = list(indices)
        return TrackedMap(self.name, self.bidegree, self.matrix.submatrix(rows, rows))

    def __repr__(self) -> str:
        return f"TrackedMap({self.name}, bidegree={self.bidegree}, nnz={self.matrix.nnz})"


# ------------------------------------------------------------------ builders


def build_ckh(diagram: LinkDiagram, ring: CoefficientRing, verify: bool = True) -> ChainComplex:
    """The unreduced Khovanov complex of ``diagram`` over A_{h,t}"""
    cube = KhovanovCube(diagram, ring)
    gens = cube.generators
    d = cube.matrix(cube.d_image)
    graded = ring.is_zero(ring.h) and ring.is_zero(ring.t)
    mode = BIGRADED if graded else FILTERED
    complex_ = ChainComplex(ring, gens, d, mode=mode, diagram=diagram, cube=cube)
    logger.debug("built cube", crossings=diagram.n_crossings, generators=len(gens), nnz=d.nnz)
    if verify:
        complex_.verify()
    return complex_


def build_reduced(
    diagram: LinkDiagram,
    ring: CoefficientRing,
    basepoint: Optional[int] = None,
    coloring: Optional[ABColoring] = None,
    ambient: Optional[ChainComplex] = None,
    verify: bool = True,
) -> ChainComplex:
    """
    The reduced complex Im(x_p): generators whose basepoint circle carries X

    Needs t = 0 so that the image of x_p is spanned by basis vectors; the
    basepoint must be colored a when h != 0. Quantum degrees drop by one.
    """
    if not ring.is_zero(ring.t):
        raise UnsupportedError("the reduced theory is only available for t = 0")
    p = diagram.canonical_basepoint if basepoint is None else basepoint
    if p not in diagram.component_of:
        raise InputError(f"basepoint {p} is not an edge of the diagram")
    if coloring is not None and coloring.theta(p) != "a" and not ring.is_zero(ring.h):
        raise UnsupportedError("reduce at a basepoint colored a when h != 0")
    amb = ambient if ambient is not None else build_ckh(diagram, ring, verify=verify)
    cube = amb.cube
    ensure(cube is not None, "reduction needs the cube of the ambient complex")
    keep = [
        k for k, g in enumerate(amb.generators) if g.labels[cube.state(g.state).circle_of[p]] == X
    ]
    gens = [amb.generators[k]._replace(j=amb.generators[k].j - 1) for k in keep]
    restricted = TrackedMap("d", (1, 0), amb.differential).restrict(keep)
    complex_ = ChainComplex(
        ring,
        gens,
        restricted.matrix,
        mode=amb.mode,
        diagram=diagram,
        cube=cube,
        reduced=True,
        ambient=amb,
        inclusion=keep,
        basepoint=p,
    )
    logger.debug("reduced complex", basepoint=p, generators=len(gens))
    if verify:
        complex_.verify()
    return complex_


def x_action(complex_: ChainComplex, coloring: ABColoring, point: int) -> TrackedMap:
    """x_p: X on the circle through ``point`` if theta(point) = a, h - X if b"""
    base = complex_.ambient if complex_.reduced else complex_
    cube = base.cube if base is not None else None
    if cube is None:
        raise UnsupportedError("x_p needs an unsimplified cube complex")
    if point not in cube.diagram.component_of:
        raise InputError(f"point {point} is not an edge of the diagram")
    color = coloring.theta(point)
    m = TrackedMap(f"x_{point}", (0, 2), cube.matrix(lambda g: cube.x_image(g, point, color)))
    return lift_to(complex_, m)


def lift_to(complex_: ChainComplex, ambient_map: TrackedMap) -> TrackedMap:
    """Restrict a map built on the full cube to ``complex_`` (identity for unreduced complexes)."""
    if complex_.reduced:
        ensure(complex_.inclusion is not None, "reduced complex without inclusion data")
        return ambient_map.restrict(complex_.inclusion)
    return ambient_map


# --------------------------------------------------------------- elimination


class _MutableSparse:
    """Square sparse matrix with row and column indexes kept in sync"""

    def __init__(self, ring: CoefficientRing, matrix: Optional[SparseMatrix] = None):
        self.ring = ring
        self.cols: Dict[int, Dict[int, Any]] = {}
        self.rows: Dict[int, Dict[int, Any]] = {}
        if matrix is not None:
            for j, col in matrix.columns.items():
                for i, v in col.items():
                    self.add(i, j, v)

    def add(self, i: int, j: int, v: Any) -> None:
        r = self.ring
        if r.is_zero(v):
            return
        col = self.cols.setdefault(j, {})
        new = r.add(col.get(i, r.zero), v)
        if r.is_zero(new):
            del col[i]
            if not col:
                del self.cols[j]
            row = self.rows[i]
            del row[j]
            if not row:
                del self.rows[i]
        else:
            col[i] = new
            self.rows.setdefault(i, {})[j] = new

    def pop_col(self, j: int) -> Dict[int, Any]:
        col = self.cols.pop(j, {})
        for i in col:
            row = self.rows[i]
            del row[j]
            if not row:
                del self.rows[i]
        return col

    def pop_row(self, i: int) -> Dict[int, Any]:
        row = self.rows.pop(i, {})
        for j in row:
            col = self.cols[j]
            del col[i]
            if not col:
                del self.cols[j]
        return row

    def to_matrix(self, order: Sequence[int]) -> SparseMatrix:
        pos = {k: n for n, k in enumerate(order)}
        m = SparseMatrix(len(order), len(order), self.ring)
        for j, col in self.cols.items():
            if j in pos:
                entries = {pos[i]: v for i, v in col.items() if i in pos}
                if entries:
                    m.columns[pos[j]] = entries
        return m


def _transfer(
    m: _MutableSparse, x: int, y: int, a_inv: Any, b: Dict[int, Any], c: Dict[int, Any]
) -> None:
    """
    m <- pi m iota for the cancellation of the pivot d(x) = a y + c

        iota(r) = r - x a^-1 b_r      (r in the degree of x)
        pi(y)   = -a^-1 c,  pi(x) = 0
    """
    r = m.ring
    col_x = m.pop_col(x)
    m.pop_col(y)
    if col_x:
        for src, b_src in b.items():
            factor = r.neg(r.mul(b_src, a_inv))
            for row, v in col_x.items():
                m.add(row, src, r.mul(factor, v))
    row_y = m.pop_row(y)
    m.pop_row(x)
    if row_y:
        for col, v in row_y.items():
            factor = r.neg(r.mul(v, a_inv))
            for s, c_s in c.items():
                m.add(s, col, r.mul(factor, c_s))


def _eliminate(d: _MutableSparse, maps: List[_MutableSparse], x: int, y: int) -> None:
    r = d.ring
    a = d.cols[x][y]
    a_inv = r.inverse(a)
    b = {src: v for src, v in d.rows[y].items() if src != x}
    c = {tgt: v for tgt, v in d.cols[x].items() if tgt != y}
    for m in maps:
        _transfer(m, x, y, a_inv, b, c)
    _transfer(d, x, y, a_inv, b, c)


def _pick_pivot(d: _MutableSparse, x: int) -> Optional[int]:
    r = d.ring
    best: Optional[Tuple[int, int]] = None
    for y, v in d.cols.get(x, {}).items():
        if r.is_unit(v):
            key = (len(d.rows[y]), y)
            if best is None or key < best:
                best = key
    return None if best is None else best[1]


def _eliminate_all(
    d: _MutableSparse, maps: List[_MutableSparse], alive: set, candidates: Iterable[int]
) -> int:
    count = 0
    pending = sorted(candidates)
    while pending:
        progressed = False
        for x in pending:
            if x not in alive:
                continue
            y = _pick_pivot(d, x)
            if y is None:
                continue
            _eliminate(d, maps, x, y)
            alive.discard(x)
            alive.discard(y)
            count += 1
            progressed = True
        if not progressed:
            break
        pending = sorted(k for k in pending if k in alive and k in d.cols)
    return count


def simplify(
    complex_: ChainComplex,
    tracked: Optional[List[TrackedMap]] = None,
    verify: bool = True,
) -> Tuple[ChainComplex, List[TrackedMap]]:
    """
    Cancel unit entries of the differential until none remain

    Over a field every nonzero entry is cancelled, leaving d = 0 on a
    bigraded complex; over Z only +-1 entries are used. Each tracked map f
    becomes pi f iota, so chain maps stay chain maps and induce the same map
    on homology.
    """
    tracked = tracked or []
    ring = complex_.ring
    d = _MutableSparse(ring, complex_.differential)
    maps = [_MutableSparse(ring, f.matrix) for f in tracked]
    alive = set(range(complex_.size))
    count = _eliminate_all(d, maps, alive, list(d.cols))
    survivors = sorted(alive)
    gens = [complex_.generators[k] for k in survivors]
    out = ChainComplex(
        ring,
        gens,
        d.to_matrix(survivors),
        mode=complex_.mode,
        diagram=complex_.diagram,
        reduced=complex_.reduced,
        basepoint=complex_.basepoint,
    )
    new_maps = [
        TrackedMap(f.name, f.bidegree, m.to_matrix(survivors)) for f, m in zip(tracked, maps)
    ]
    logger.debug("gaussian elimination", pivots=count, before=complex_.size, after=len(gens))
    if verify:
        out.verify()
        for f, original in zip(new_maps, tracked):
            if original.is_chain_map(complex_):
                ensure(f.is_chain_map(out), f"{f.name} stopped being a chain map after elimination")
    return out, new_maps


def simplify_incremental(
    diagram: LinkDiagram,
    ring: CoefficientRing,
    reduced: bool = False,
    basepoint: Optional[int] = None,
    verify: bool = True,
) -> ChainComplex:
    """
    Assemble the cube one homological degree at a time, cancelling after each block

    Only the differential is carried, so the result is good for homology but
    has no cube attached. Generators that survive in the newest degree are
    still plain cube generators, which is what lets the next block be built
    from the cube directly.
    """
    if reduced and not ring.is_zero(ring.t):
        raise UnsupportedError("the reduced theory is only available for t = 0")
    cube = KhovanovCube(diagram, ring)
    p = diagram.canonical_basepoint if basepoint is None else basepoint
    if reduced and p not in diagram.component_of:
        raise InputError(f"basepoint {p} is not an edge of the diagram")

    def wanted(g: Generator) -> bool:
        return not reduced or g.labels[cube.state(g.state).circle_of[p]] == X

    def layer_of(i: int) -> List[int]:
        return [cube.index_of(g.state, g.labels) for g in cube.generators_in_degree(i) if wanted(g)]

    gens = cube.generators
    lo, hi = -diagram.n_minus, diagram.n_plus
    d = _MutableSparse(ring)
    alive: set = set(layer_of(lo))
    total = 0
    for i in range(lo, hi + 1):
        layer = layer_of(i)
        nxt = set(layer_of(i + 1))
        alive.update(nxt)
        for col in layer:
            if col not in alive:
                continue
            for row, v in cube.d_image(gens[col]).items():
                if row in nxt:
                    d.add(row, col, v)
                elif reduced:
                    raise InternalError("the reduced generators do not span a subcomplex")
        total += _eliminate_all(d, [], alive, [k for k in layer if k in alive])
        logger.progress("incremental block", degree=i, alive=len(alive), pivots=total)

    survivors = sorted(alive)
    shift = 1 if reduced else 0
    out_gens = [gens[k]._replace(j=gens[k].j - shift) for k in survivors]
    graded = ring.is_zero(ring.h) and ring.is_zero(ring.t)
    out = ChainComplex(
        ring,
        out_gens,
        d.to_matrix(survivors),
        mode=BIGRADED if graded else FILTERED,
        diagram=diagram,
        reduced=reduced,
        basepoint=p if reduced else None,
    )
    if verify:
        out.verify()
    return out

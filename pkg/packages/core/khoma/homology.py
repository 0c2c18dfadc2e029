"""
Homology with explicit representatives, induced maps and e-string decompositions
"""

import json
import re
from collections import Counter
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .algebra import (
    EchelonBasis,
    LinearDecomposition,
    SparseMatrix,
    graded_snf,
    smith_normal_form,
    string_counts_by_rank,
)
from .algebra.linalg import Vector
from .complex import BIGRADED, ChainComplex, TrackedMap
from .errors import InputError, InternalError, UnsupportedError, ensure
from .utils.logger import get_logger

logger = get_logger()

Key = Tuple[int, ...]


class HomologySlice:
    """Homology in one slice: representatives extend a basis of the boundaries to the cycles"""

    def __init__(
        self,
        key: Key,
        indices: List[int],
        basis: EchelonBasis,
        representatives: List[Vector],
        tags: List[Any],
    ):
        self.key = key
        self.indices = indices
        self.basis = basis
        self.representatives = representatives
        self.tags = tags

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def project(self, vec: Vector) -> Dict[int, Any]:
        """Coordinates of a cycle in the representative basis; boundaries project to zero."""
        residual, combo = self.basis.reduce(vec)
        if residual:
            raise InternalError(f"vector in slice {self.key} is not a cycle")
        out = {}
        for n, tag in enumerate(self.tags):
            if tag in combo:
                out[n] = combo[tag]
        return out


class HomologyPresentation:
    """Homology of a complex over a field, slice by slice"""

    def __init__(self, complex_: ChainComplex, slices: Dict[Key, HomologySlice]):
        self.complex = complex_
        self.ring = complex_.ring
        self.slices = slices
        self.basis: List[Tuple[Key, int]] = [
            (key, n) for key, sl in slices.items() for n in range(sl.dimension)
        ]
        self._position = {b: k for k, b in enumerate(self.basis)}

    @property
    def dimensions(self) -> Dict[Key, int]:
        return {key: sl.dimension for key, sl in self.slices.items() if sl.dimension}

    @property
    def total_dimension(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return len(self.basis)

    def position(self, key: Key, n: int) -> int:
        return self._position[(key, n)]

    def representative(self, k: int) -> Vector:
        key, n = self.basis[k]
        return self.slices[key].representatives[n]

    def project(self, vec: Vector) -> Dict[int, Any]:
        """Homology coordinates (global positions) of a homogeneous cycle"""
        if not vec:
            return {}
        keys = {self.complex.slice_key(idx) for idx in vec}
        ensure(len(keys) == 1, f"cycle spreads over several slices: {sorted(keys)}")
        key = keys.pop()
        if key not in self.slices:
            raise InternalError(f"no homology slice {key}")
        return {self.position(key, n): v for n, v in self.slices[key].project(vec).items()}


def homology(complex_: ChainComplex) -> HomologyPresentation:
    """Homology over a field with deterministic representatives"""
    ring = complex_.ring
    if not ring.is_field:
        raise UnsupportedError("homology() needs field coefficients; use homology_over_z for Z")
    d = complex_.differential
    by_degree: Dict[int, List[int]] = {}
    for k in range(complex_.size):
        by_degree.setdefault(complex_.degree(k), []).append(k)

    slices: Dict[Key, HomologySlice] = {}
    for key, idx in complex_.slices().items():
        deg = complex_.degree(idx[0])
        members = set(idx)
        basis = EchelonBasis(ring)
        for col in by_degree.get(deg - 1, []):
            image = {r: v for r, v in d.column(col).items() if r in members}
            if image:
                basis.insert(image, ("b", col))

        targets = by_degree.get(deg + 1, [])
        outgoing = d.submatrix(targets, idx)
        kernel = LinearDecomposition(outgoing).kernel
        reps: List[Vector] = []
        tags: List[Any] = []
        for n, vec in enumerate(kernel):
            cycle = {idx[local]: v for local, v in vec.items()}
            tag = ("z", n)
            if basis.insert(cycle, tag) is None:
                reps.append(cycle)
                tags.append(tag)
        slices[key] = HomologySlice(key, idx, basis, reps, tags)
    logger.debug("homology", slices=len(slices), total=sum(s.dimension for s in slices.values()))
    return HomologyPresentation(complex_, slices)


class InducedMap:
    """A map on homology, as a square matrix over the homology basis"""

    def __init__(
        self,
        homology_: HomologyPresentation,
        matrix: SparseMatrix,
        name: str,
        bidegree: Tuple[int, int],
    ):
        self.homology = homology_
        self.matrix = matrix
        self.name = name
        self.bidegree = bidegree

    def blocks(self) -> Dict[Tuple[Key, Key], List[List[Any]]]:
        """Dense (target x source) blocks between homology slices"""
        positions: Dict[Key, List[int]] = {}
        for k, (key, _) in enumerate(self.homology.basis):
            positions.setdefault(key, []).append(k)
        found: Dict[Tuple[Key, Key], bool] = {}
        for col, entries in self.matrix.columns.items():
            for row in entries:
                found[(self.homology.basis[row][0], self.homology.basis[col][0])] = True
        out = {}
        for tgt, src in sorted(found, key=lambda p: (p[1], p[0])):
            sub = self.matrix.submatrix(positions[tgt], positions[src])
            out[(src, tgt)] = sub.to_dense()
        return out

    def delta_slices(self) -> Dict[int, Tuple[List[int], SparseMatrix, List[int]]]:
        """delta -> (positions, restricted matrix, q-grading of each position)"""
        groups: Dict[int, List[int]] = {}
        for k, (key, _) in enumerate(self.homology.basis):
            i, j = key
            groups.setdefault(2 * i + j, []).append(k)
        out = {}
        for delta, pos in sorted(groups.items()):
            grading = [self.homology.basis[k][0][1] for k in pos]
            out[delta] = (pos, self.matrix.submatrix(pos, pos), grading)
        return out


def induced_map(homology_: HomologyPresentation, f: TrackedMap, verify: bool = True) -> InducedMap:
    """Matrix of a chain map on homology in the representative basis"""
    complex_ = homology_.complex
    if verify and not f.is_chain_map(complex_):
        raise InternalError(f"{f.name} is not a chain map")
    n = homology_.size
    m = SparseMatrix(n, n, homology_.ring)
    for k in range(n):
        image = f.matrix.apply(homology_.representative(k))
        coords = homology_.project(image)
        if coords:
            m.columns[k] = coords
    return InducedMap(homology_, m, f.name, f.bidegree)


def sl2_hypothesis(homology_: HomologyPresentation) -> bool:
    """True when every bidegree of the homology is at most one-dimensional"""
    return all(dim <= 1 for dim in homology_.dimensions.values())


# ------------------------------------------------------------------- over Z


class IntegerHomologySlice:
    """Free part and torsion of one slice over Z, with free-quotient coordinates"""

    def __init__(
        self,
        key: Key,
        indices: List[int],
        free_rank: int,
        torsion: List[int],
        cycle_test: List[List[int]],
        coords: List[List[int]],
        free_representatives: List[Vector],
    ):
        self.key = key
        self.indices = indices
        self.free_rank = free_rank
        self.torsion = torsion
        self._cycle_test = cycle_test
        self._coords = coords
        self.free_representatives = free_representatives
        self._local = {g: n for n, g in enumerate(indices)}

    def project_free(self, vec: Vector) -> List[int]:
        dense = [0] * len(self.indices)
        for g, v in vec.items():
            dense[self._local[g]] = int(v)
        for row in self._cycle_test:
            if sum(a * b for a, b in zip(row, dense)):
                raise InternalError(f"vector in slice {self.key} is not a cycle")
        return [sum(a * b for a, b in zip(row, dense)) for row in self._coords]


class IntegerHomology:
    def __init__(self, complex_: ChainComplex, slices: Dict[Key, IntegerHomologySlice]):
        self.complex = complex_
        self.slices = slices

    @property
    def ranks(self) -> Dict[Key, int]:
        return {k: s.free_rank for k, s in self.slices.items() if s.free_rank}

    @property
    def torsion(self) -> Dict[Key, List[int]]:
        return {k: s.torsion for k, s in self.slices.items() if s.torsion}

    @property
    def total_rank(self) -> int:
        return sum(s.free_rank for s in self.slices.values())


def _dense(d: SparseMatrix, rows: Sequence[int], cols: Sequence[int]) -> List[List[int]]:
    return [[int(v) for v in row] for row in d.submatrix(rows, cols).to_dense()]


def homology_over_z(complex_: ChainComplex) -> IntegerHomology:
    """
    Free ranks and torsion per slice via integer Smith forms

    With D_out V = U^-1 S the cycles are the last columns of V; boundaries are
    rewritten in those coordinates and put in Smith form once more, whose
    trailing coordinates give the free quotient.
    """
    if complex_.ring.is_field:
        raise UnsupportedError("homology_over_z expects integer coefficients")
    d = complex_.differential
    by_degree: Dict[int, List[int]] = {}
    for k in range(complex_.size):
        by_degree.setdefault(complex_.degree(k), []).append(k)

    slices: Dict[Key, IntegerHomologySlice] = {}
    for key, idx in complex_.slices().items():
        deg = complex_.degree(idx[0])
        m = len(idx)
        targets = by_degree.get(deg + 1, [])
        sources = by_degree.get(deg - 1, [])
        out_snf = smith_normal_form(_dense(d, targets, idx), rows=len(targets), cols=m)
        r1 = out_snf.rank
        cycle_test = out_snf.V_inv[:r1]
        to_cycle = out_snf.V_inv[r1:]
        incoming = _dense(d, idx, sources)
        k = m - r1
        bc = [
            [sum(to_cycle[s][t] * incoming[t][c] for t in range(m)) for c in range(len(sources))]
            for s in range(k)
        ]
        in_snf = smith_normal_form(bc, rows=k, cols=len(sources))
        r2 = in_snf.rank
        torsion = [v for v in in_snf.diagonal[:r2] if v > 1]
        coords = in_snf.U[r2:]
        coords_full = [
            [sum(row[s] * to_cycle[s][t] for s in range(k)) for t in range(m)] for row in coords
        ]
        reps = []
        for t in range(r2, k):
            w = [in_snf.U_inv[s][t] for s in range(k)]
            local = [sum(out_snf.V[x][r1 + s] * w[s] for s in range(k)) for x in range(m)]
            reps.append({idx[x]: v for x, v in enumerate(local) if v})
        slices[key] = IntegerHomologySlice(key, idx, k - r2, torsion, cycle_test, coords_full, reps)
    return IntegerHomology(complex_, slices)


class IntegerMapBlock(BaseModel):
    """One block of an induced map on free homology over Z"""

    source: Tuple[int, ...]
    target: Tuple[int, ...]
    matrix: List[List[int]]

    @property
    def rank(self) -> int:
        if not self.matrix or not self.matrix[0]:
            return 0
        return smith_normal_form(self.matrix).rank


def induced_map_over_z(
    hz: IntegerHomology, f: TrackedMap, verify: bool = True
) -> List[IntegerMapBlock]:
    """Blocks of a chain map on the free quotient of integer homology"""
    complex_ = hz.complex
    if verify and not f.is_chain_map(complex_):
        raise InternalError(f"{f.name} is not a chain map")
    columns: Dict[Tuple[Key, Key], Dict[int, List[int]]] = {}
    for key, sl in hz.slices.items():
        for n, rep in enumerate(sl.free_representatives):
            image = f.matrix.apply(rep)
            if not image:
                continue
            tkeys = {complex_.slice_key(g) for g in image}
            ensure(len(tkeys) == 1, f"{f.name} image spreads over several slices")
            tkey = tkeys.pop()
            coords = hz.slices[tkey].project_free(image)
            if any(coords):
                columns.setdefault((key, tkey), {})[n] = coords
    blocks = []
    for (src, tgt), cols in sorted(columns.items()):
        ncols = hz.slices[src].free_rank
        nrows = hz.slices[tgt].free_rank
        dense = [[cols.get(c, [0] * nrows)[r] for c in range(ncols)] for r in range(nrows)]
        blocks.append(IntegerMapBlock(source=src, target=tgt, matrix=dense))
    return blocks


# --------------------------------------------------------------- e-strings


class EString(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    delta: int
    q: int
    length: int = Field(alias="len", ge=1)

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.delta, self.q, self.length)


class EStringDecomposition(BaseModel):
    """A multiset of strings (delta, q_start, length)"""

    field: str = "Q"
    reduced: bool = False
    strings: List[EString] = Field(default_factory=list)

    def model_post_init(self, __context: Any) -> None:
        self.strings.sort(key=lambda s: s.key)

    @classmethod
    def from_triples(
        cls, triples: Sequence[Tuple[int, int, int]], field: str = "Q", reduced: bool = False
    ) -> "EStringDecomposition":
        return cls(
            field=field,
            reduced=reduced,
            strings=[EString(delta=d, q=q, length=l) for d, q, l in triples],
        )

    @property
    def triples(self) -> List[Tuple[int, int, int]]:
        return [s.key for s in self.strings]

    def counts(self) -> Counter:
        return Counter(self.triples)

    @property
    def total_dimension(self) -> int:
        return sum(s.length for s in self.strings)

    def slice(self, delta: int) -> "EStringDecomposition":
        return EStringDecomposition(
            field=self.field,
            reduced=self.reduced,
            strings=[s for s in self.strings if s.delta == delta],
        )

    def render(self) -> str:
        return render_polynomial(self)

    def to_json(self, indent: Optional[int] = None) -> str:
        payload = {
            "field": self.field,
            "reduced": self.reduced,
            "strings": [{"delta": s.delta, "q": s.q, "len": s.length} for s in self.strings],
        }
        return json.dumps(payload, indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "EStringDecomposition":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed decomposition JSON: {exc}") from exc
        return cls.model_validate(data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EStringDecomposition):
            return NotImplemented
        return self.counts() == other.counts()


def render_polynomial(dec: EStringDecomposition) -> str:
    """'d^i q^j e(l) + ...' sorted by (delta, q, l), repeated terms collected"""
    counts = dec.counts()
    if not counts:
        return "0"
    terms = []
    for (delta, q, length), n in sorted(counts.items()):
        term = f"d^{delta} q^{q} e({length})"
        terms.append(term if n == 1 else f"{n} {term}")
    return " + ".join(terms)


_TERM = re.compile(r"^(?:(\d+) )?d\^(-?\d+) q\^(-?\d+) e\((\d+)\)$")


def parse_polynomial(text: str, field: str = "Q", reduced: bool = False) -> EStringDecomposition:
    """Inverse of render_polynomial"""
    text = text.strip()
    if text == "0":
        return EStringDecomposition(field=field, reduced=reduced)
    triples = []
    for part in text.split(" + "):
        match = _TERM.match(part.strip())
        if not match:
            raise InputError(f"malformed e-string term {part!r}")
        n = int(match.group(1) or 1)
        triples.extend([(int(match.group(2)), int(match.group(3)), int(match.group(4)))] * n)
    return EStringDecomposition.from_triples(triples, field=field, reduced=reduced)


def mirror_predict(dec: EStringDecomposition) -> EStringDecomposition:
    """(delta, q, l) -> (-delta, -q - 4(l - 1), l)"""
    return EStringDecomposition.from_triples(
        [(-d, -q - 4 * (l - 1), l) for d, q, l in dec.triples], field=dec.field, reduced=dec.reduced
    )


def estring_decomposition(
    homology_: HomologyPresentation,
    e_map: InducedMap,
    verify: bool = True,
    check_ranks: bool = True,
) -> EStringDecomposition:
    """Split the homology into k[e]-strings, one delta-slice at a time."""
    ring = homology_.ring
    if not ring.is_field:
        raise UnsupportedError("e-string decompositions need field coefficients")
    if homology_.complex.mode != BIGRADED:
        raise UnsupportedError("e-string decompositions need the bigraded theory (h = t = 0)")
    triples: List[Tuple[int, int, int]] = []
    for delta, (_, A, grading) in e_map.delta_slices().items():
        result = graded_snf(A, grading, verify=verify)
        found = Counter(result.strings)
        if check_ranks:
            oracle = string_counts_by_rank(A, grading)
            if found != oracle:
                raise InternalError(f"Smith form and rank count disagree on delta={delta}: {found} vs {oracle}")
        for q, length in result.strings:
            triples.append((delta, q, length))
        logger.debug(
            "delta slice", delta=delta, dimension=len(grading), strings=len(result.strings)
        )
    reduced = homology_.complex.reduced
    dec = EStringDecomposition.from_triples(triples, field=ring.name, reduced=reduced)
    ensure(
        dec.total_dimension == homology_.total_dimension,
        "string lengths do not add up to the homology",
    )
    return dec


def estring_by_rank(homology_: HomologyPresentation, e_map: InducedMap) -> EStringDecomposition:
    """The same decomposition from ranks of powers of e alone"""
    triples: List[Tuple[int, int, int]] = []
    for delta, (_, A, grading) in e_map.delta_slices().items():
        for (q, length), n in string_counts_by_rank(A, grading).items():
            triples.extend([(delta, q, length)] * n)
    return EStringDecomposition.from_triples(
        triples, field=homology_.ring.name, reduced=homology_.complex.reduced
    )

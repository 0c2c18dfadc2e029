"""
KhovanovService: the computations behind the CLI commands

Resolves links, picks coefficient rings from configuration and runs the
build / simplify / homology / e-operator chain, returning pydantic reports
that render to JSON and parse back.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from .algebra import CoefficientRing, SparseMatrix, rank
from .complex import ChainComplex, build_ckh, build_reduced, simplify, simplify_incremental
from .diagram import LinkDiagram
from .eop import e_operator_braid, e_operator_traversal, y_specialized_differential
from .errors import InputError, UnsupportedError
from .homology import (
    EStringDecomposition,
    estring_decomposition,
    homology,
    homology_over_z,
    induced_map,
    induced_map_over_z,
    sl2_hypothesis,
)
from .table import KnotTable, load_table, resolve_link
from .utils.config import Config, get_config
from .utils.logger import get_logger

logger = get_logger()


class HomologyEntry(BaseModel):
    i: int
    j: int
    rank: int
    torsion: List[int] = Field(default_factory=list)


class HomologyReport(BaseModel):
    """Kh of one link: ranks per bidegree, torsion over Z"""

    link: str
    ring: str
    reduced: bool = False
    entries: List[HomologyEntry] = Field(default_factory=list)

    @property
    def dimensions(self) -> Dict[Tuple[int, int], int]:
        return {(e.i, e.j): e.rank for e in self.entries if e.rank}

    @property
    def torsion(self) -> Dict[Tuple[int, int], List[int]]:
        return {(e.i, e.j): e.torsion for e in self.entries if e.torsion}

    @property
    def total(self) -> int:
        return sum(e.rank for e in self.entries)

    @property
    def sl2_hypothesis(self) -> bool:
        return all(e.rank <= 1 for e in self.entries)


class MapBlock(BaseModel):
    """One block source -> target of a map on homology"""

    source: Tuple[int, int]
    target: Tuple[int, int]
    matrix: List[List[str]]
    rank: int


class EStringReport(BaseModel):
    homology: HomologyReport
    formula: str = "traversal"
    decomposition: Optional[EStringDecomposition] = None
    blocks: List[MapBlock] = Field(default_factory=list)


class SplitEntry(BaseModel):
    g: int
    dim: int


class SplitReport(BaseModel):
    """Homology of d + sum_k w_k xi_k, graded by g = i + j"""

    link: str
    ring: str
    weights: List[str]
    entries: List[SplitEntry] = Field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(e.dim for e in self.entries)


class KhovanovService:
    _instance = None

    def __init__(self, config: Optional[Config] = None, table: Optional[KnotTable] = None):
        self.config = config or get_config()
        self._table = table

    @classmethod
    def get_instance(cls) -> "KhovanovService":
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    # ------------------------------------------------------------- inputs

    @property
    def table(self) -> KnotTable:
        """Built-in knots, extended by the table named in configuration"""
        if self._table is None:
            table = KnotTable.builtin()
            if self.config.table_path:
                table = table.merged(load_table(self.config.table_path))
            self._table = table
        return self._table

    def use_table(self, path: str) -> None:
        self._table = KnotTable.builtin().merged(load_table(path))

    def ring(self, label: Optional[str] = None, prime: Optional[int] = None) -> CoefficientRing:
        compute = self.config.compute
        return CoefficientRing.parse(
            label or compute.coefficients,
            prime=prime or compute.prime,
            h=compute.h,
            t=compute.t,
        )

    def resolve(
        self,
        name: Optional[str] = None,
        braid: Optional[str] = None,
        pd: Optional[Any] = None,
    ) -> LinkDiagram:
        return resolve_link(name=name, braid=braid, pd=pd, table=self.table)

    @staticmethod
    def label(diagram: LinkDiagram) -> str:
        return diagram.name or "link"

    # --------------------------------------------------------- complexes

    def complex(
        self, diagram: LinkDiagram, ring: CoefficientRing, reduced: bool = False
    ) -> ChainComplex:
        verify = self.config.compute.verify
        if reduced:
            return build_reduced(diagram, ring, verify=verify)
        return build_ckh(diagram, ring, verify=verify)

    def simplified(
        self, diagram: LinkDiagram, ring: CoefficientRing, reduced: bool = False
    ) -> ChainComplex:
        """A small complex with the same homology, built degree by degree"""
        verify = self.config.compute.verify
        if not self.config.compute.simplify:
            return self.complex(diagram, ring, reduced)
        return simplify_incremental(diagram, ring, reduced=reduced, verify=verify)

    # ----------------------------------------------------------- homology

    def homology(
        self, diagram: LinkDiagram, ring: CoefficientRing, reduced: bool = False
    ) -> HomologyReport:
        complex_ = self.simplified(diagram, ring, reduced)
        report = self._report(diagram, complex_)
        logger.info(
            "computed homology", link=self.label(diagram), ring=ring.name, total=report.total
        )
        return report

    def _report(self, diagram: LinkDiagram, complex_: ChainComplex) -> HomologyReport:
        ring = complex_.ring
        if ring.is_field:
            dims = homology(complex_).dimensions
            entries = [HomologyEntry(i=i, j=j, rank=n) for (i, j), n in sorted(dims.items())]
        else:
            hz = homology_over_z(complex_)
            entries = [
                HomologyEntry(i=key[0], j=key[1], rank=s.free_rank, torsion=s.torsion)
                for key, s in sorted(hz.slices.items())
                if s.free_rank or s.torsion
            ]
        return HomologyReport(
            link=self.label(diagram), ring=ring.name, reduced=complex_.reduced, entries=entries
        )

    # ------------------------------------------------------------ e-strings

    def estrings(
        self,
        diagram: LinkDiagram,
        ring: CoefficientRing,
        reduced: bool = False,
        show_matrices: bool = False,
        formula: str = "traversal",
    ) -> EStringReport:
        """
        Homology with the e-action

        Over a field the result carries the e-string decomposition; over Z
        the integer blocks of e on the free part (always computed, shown on request).
        """
        verify = self.config.compute.verify
        if not diagram.is_knot:
            raise UnsupportedError(
                f"the e-operator is computed for knots only; this diagram has {diagram.n_components} components"
            )
        full = self.complex(diagram, ring, reduced)
        log = logger.bind(link=self.label(diagram), ring=ring.name, reduced=reduced)
        log.debug("built complex", size=full.size)
        if formula == "braid":
            e = e_operator_braid(full, verify=verify).map
        elif formula == "traversal":
            e = e_operator_traversal(full, verify=verify).map
        else:
            raise InputError(f"unknown e-operator formula {formula!r}")
        small, (e_small,) = simplify(full, [e], verify=verify)
        log.debug("simplified", size=small.size, formula=formula)
        report = self._report(diagram, small)

        blocks: List[MapBlock] = []
        decomposition = None
        if ring.is_field:
            H = homology(small)
            e_h = induced_map(H, e_small, verify=verify)
            decomposition = estring_decomposition(H, e_h, verify=verify)
            if show_matrices:
                for (src, tgt), dense in e_h.blocks().items():
                    m = SparseMatrix.from_dense(ring, dense)
                    blocks.append(
                        MapBlock(
                            source=src,
                            target=tgt,
                            matrix=[[ring.format(v) for v in row] for row in dense],
                            rank=rank(m),
                        )
                    )
            log.info(
                "computed e-strings",
                strings=len(decomposition.strings),
                sl2=sl2_hypothesis(H),
            )
        else:
            hz = homology_over_z(small)
            for block in induced_map_over_z(hz, e_small, verify=verify):
                blocks.append(
                    MapBlock(
                        source=block.source,
                        target=block.target,
                        matrix=[[str(v) for v in row] for row in block.matrix],
                        rank=block.rank,
                    )
                )
            log.info("computed e-matrices", blocks=len(blocks))
        return EStringReport(
            homology=report, formula=formula, decomposition=decomposition, blocks=blocks
        )

    # -------------------------------------------------------------- split

    def split(
        self, diagram: LinkDiagram, ring: CoefficientRing, weights: Sequence[Any]
    ) -> SplitReport:
        """Homology of the Batson-Seed deformation with the given component weights"""
        if not ring.is_field:
            raise UnsupportedError("the deformed homology is computed over fields only")
        verify = self.config.compute.verify
        log = logger.bind(link=self.label(diagram), ring=ring.name)
        full = build_ckh(diagram, ring, verify=verify)
        deformed = y_specialized_differential(full, weights, verify=verify)
        small, _ = simplify(deformed, verify=verify)
        log.debug("simplified deformed complex", size=full.size, remaining=small.size)
        dims = homology(small).dimensions
        report = SplitReport(
            link=self.label(diagram),
            ring=ring.name,
            weights=[ring.format(ring.convert(w)) for w in weights],
            entries=[SplitEntry(g=key[0], dim=n) for key, n in sorted(dims.items())],
        )
        log.info("computed deformed homology", weights=report.weights, total=report.total)
        return report

    # -------------------------------------------------------------- batch

    def run_table(
        self,
        names: Optional[Sequence[str]] = None,
        ring: Optional[CoefficientRing] = None,
        reduced: bool = False,
        jobs: int = 1,
    ) -> List[EStringReport]:
        """e-string decompositions for table knots, in input order"""
        ring = ring or self.ring()
        names = list(names) if names is not None else self.table.names()
        diagrams = [self.resolve(name=n) for n in names]
        knots = [d for d in diagrams if d.is_knot]
        for d in diagrams:
            if not d.is_knot:
                logger.warning("skipping link with several components", link=self.label(d))

        def one(d: LinkDiagram) -> EStringReport:
            return self.estrings(d, ring, reduced=reduced)

        if jobs <= 1:
            return [one(d) for d in knots]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, knots))


def y_weights(text: str, ring: CoefficientRing) -> List[Any]:
    """Parse '0,1' or '0 1' into ring elements"""
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise InputError("no weights given")
    out = []
    for p in parts:
        try:
            out.append(ring.convert(p))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"malformed weight {p!r}") from exc
    return out


__all__ = [
    "EStringReport",
    "HomologyEntry",
    "HomologyReport",
    "KhovanovService",
    "MapBlock",
    "SplitEntry",
    "SplitReport",
    "y_weights",
]

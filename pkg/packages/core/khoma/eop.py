"""
Dot-sliding homotopies and the e-operator

chi_c runs the saddle at crossing c backwards (bit 1 -> bit 0) with the cube
sign of the forward edge; chi_hat_c = eps(p1(c)) chi_c satisfies

    [d, chi_hat_c] = x_{p1(c)} - x_{q2(c)}

Walking a component, a pass that enters c at p1 contributes +chi_hat_c and one
that enters at p2 contributes -chi_hat_c. For a knot the full walk sums to zero
and the ordered pair sum  e = sum_{j < j'} xi_j xi_j'  is a chain map of
bidegree (-2, 4).
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

from .algebra import SparseMatrix
from .complex import BIGRADED, COLLAPSED, ChainComplex, KhovanovCube, TrackedMap, lift_to
from .diagram import (
    ABColoring,
    LinkDiagram,
    Pass,
    admissible_coloring,
    braid_strands,
    follow_strand,
    strand_successor,
    traversal,
)
from .errors import InputError, InternalError, UnsupportedError
from .utils.logger import get_logger

logger = get_logger()

CHI_BIDEGREE = (-1, 2)
E_BIDEGREE = (-2, 4)


class DotSlidingHomotopy:
    """chi_c together with its sign eps(p1(c))"""

    def __init__(self, crossing: int, chi: TrackedMap, epsilon: int):
        self.crossing = crossing
        self.chi = chi
        self.epsilon = epsilon

    @property
    def hat(self) -> TrackedMap:
        return self.chi.scale(self.epsilon).renamed(f"chi_hat_{self.crossing}")


class EOperator:
    """The e-operator of a knot diagram and how it was assembled"""

    def __init__(
        self, map_: TrackedMap, coloring: ABColoring, basepoint: Optional[int], formula: str
    ):
        self.map = map_
        self.coloring = coloring
        self.basepoint = basepoint
        self.formula = formula

    def __repr__(self) -> str:
        return f"EOperator({self.formula}, basepoint={self.basepoint}, nnz={self.map.matrix.nnz})"


def _cube_of(complex_: ChainComplex) -> KhovanovCube:
    base = complex_.ambient if complex_.reduced else complex_
    if base is None or base.cube is None:
        raise UnsupportedError("homotopies need an unsimplified cube complex; simplify afterwards")
    return base.cube


def _coloring(complex_: ChainComplex, coloring: Optional[ABColoring]) -> ABColoring:
    if coloring is not None:
        return coloring
    return admissible_coloring(complex_.diagram, complex_.basepoint)


def chi(
    complex_: ChainComplex, c: int, coloring: Optional[ABColoring] = None
) -> DotSlidingHomotopy:
    """The dot-sliding homotopy at crossing ``c``, restricted to ``complex_``"""
    cube = _cube_of(complex_)
    if not 0 <= c < cube.n:
        raise InputError(f"no crossing {c}; diagram has {cube.n}")
    theta = _coloring(complex_, coloring)
    m = TrackedMap(f"chi_{c}", CHI_BIDEGREE, cube.matrix(lambda g: cube.chi_image(g, c)))
    eps = theta.epsilon(cube.diagram.crossings[c].p1)
    return DotSlidingHomotopy(c, lift_to(complex_, m), eps)


class _HatCache:
    def __init__(self, complex_: ChainComplex, coloring: ABColoring):
        self.complex = complex_
        self.coloring = coloring
        self._hats: Dict[int, TrackedMap] = {}

    def __call__(self, c: int) -> TrackedMap:
        if c not in self._hats:
            self._hats[c] = chi(self.complex, c, self.coloring).hat
        return self._hats[c]

    def signed_sum(self, passes: Sequence[Pass], name: str) -> TrackedMap:
        total = self.zero(CHI_BIDEGREE, name)
        for p in passes:
            hat = self(p.crossing)
            total = total + hat if p.sign > 0 else total - hat
        return total.renamed(name)

    def zero(self, bidegree: Tuple[int, int], name: str) -> TrackedMap:
        n = self.complex.size
        return TrackedMap(name, bidegree, SparseMatrix(n, n, self.complex.ring))


def _ordered_pair_sum(parts: List[TrackedMap], name: str, cache: _HatCache) -> TrackedMap:
    """sum_{j < j'} parts[j] o parts[j'], via suffix sums"""
    total = cache.zero(E_BIDEGREE, name)
    suffix = cache.zero(CHI_BIDEGREE, "suffix")
    for part in reversed(parts):
        if not suffix.is_zero():
            total = total + (part @ suffix)
        suffix = suffix + part
    return total.renamed(name)


def xi_component(
    complex_: ChainComplex,
    component: int,
    coloring: Optional[ABColoring] = None,
    basepoint: Optional[int] = None,
) -> TrackedMap:
    """xi_k: the signed sum of chi_hat over one full walk of component k"""
    theta = _coloring(complex_, coloring)
    walk = traversal(complex_.diagram, component, basepoint)
    return _HatCache(complex_, theta).signed_sum(walk.passes, f"xi_{component}")


def _require_knot(complex_: ChainComplex) -> None:
    if complex_.diagram is None or not complex_.diagram.is_knot:
        n = complex_.diagram.n_components if complex_.diagram else 0
        raise UnsupportedError(f"the e-operator is computed for knots only; this diagram has {n} components")


def _check_chain_map(complex_: ChainComplex, e: TrackedMap) -> None:
    if not e.is_chain_map(complex_):
        raise InternalError(f"{e.name} does not commute with d")


def e_operator_traversal(
    complex_: ChainComplex,
    coloring: Optional[ABColoring] = None,
    basepoint: Optional[int] = None,
    verify: bool = True,
) -> EOperator:
    """e = sum_{j < j'} xi_j xi_j' over the walk of the knot from ``basepoint``"""
    _require_knot(complex_)
    theta = _coloring(complex_, coloring)
    walk = traversal(complex_.diagram, 0, basepoint)
    cache = _HatCache(complex_, theta)
    parts = []
    for p in walk.passes:
        hat = cache(p.crossing)
        parts.append(hat if p.sign > 0 else -hat)
    e = _ordered_pair_sum(parts, "e", cache)
    logger.debug("e-operator by traversal", passes=len(parts), nnz=e.matrix.nnz)
    if verify:
        _check_chain_map(complex_, e)
    return EOperator(e, theta, walk.basepoint, "traversal")


def a_coefficients(diagram: LinkDiagram) -> Dict[Tuple[int, int], int]:
    """
    a_{cc'} for crossings c before c' of a braid closure

    Counts braid strands that leave c and later enter c', with sign
    (+1 for q1 -> p2 and q2 -> p1, -1 for q1 -> p1 and q2 -> p2).
    """
    if diagram.braid is None:
        raise UnsupportedError("the crossing-pair formula needs a braid closure")
    n = diagram.braid.strands
    sign_in = {"p1": 1, "p2": -1}
    entered_through = {"q1": "p2", "q2": "p1"}
    out: Dict[Tuple[int, int], int] = {}
    for c in diagram.crossings:
        for slot in ("q1", "q2"):
            edge = c.end(slot)
            if edge <= n:
                continue
            for p in follow_strand(diagram, edge):
                key = (c.index, p.crossing)
                out[key] = out.get(key, 0) + sign_in[entered_through[slot]] * sign_in[p.slot]
    return {k: v for k, v in out.items() if v}


def e_operator_braid(
    complex_: ChainComplex,
    coloring: Optional[ABColoring] = None,
    verify: bool = True,
) -> EOperator:
    """
    e = sum_{c before c'} a_{cc'} chi_hat_c chi_hat_c'  +  closure correction

    The correction is sum_{j < j'} xi_j xi_j' over the braid strands of the
    knot taken in cycle order from bottom position 1, xi_j being the signed
    pass sum of strand j.
    """
    _require_knot(complex_)
    diagram = complex_.diagram
    if diagram.braid is None:
        raise UnsupportedError("the crossing-pair formula needs a braid closure")
    theta = _coloring(complex_, coloring)
    cache = _HatCache(complex_, theta)

    e = cache.zero(E_BIDEGREE, "e")
    for (c, c2), a in sorted(a_coefficients(diagram).items()):
        e = e + (cache(c) @ cache(c2)).scale(a)

    strands = braid_strands(diagram)
    order: List[int] = []
    k = 1
    while k not in order:
        order.append(k)
        k = strand_successor(diagram, k)
    parts = [cache.signed_sum(strands[k], f"strand_{k}") for k in order]
    e = (e + _ordered_pair_sum(parts, "closure", cache)).renamed("e")
    logger.debug("e-operator by crossing pairs", strands=len(parts), nnz=e.matrix.nnz)
    if verify:
        _check_chain_map(complex_, e)
    return EOperator(e, theta, 1, "braid")


def y_specialized_differential(
    complex_: ChainComplex,
    weights: Sequence[Any],
    coloring: Optional[ABColoring] = None,
    verify: bool = True,
) -> ChainComplex:
    """
    D = d + sum_k w_k xi_k on the same generators

    D raises g = i + j by one, so the result is sliced by g alone.
    """
    diagram = complex_.diagram
    if diagram is None:
        raise UnsupportedError("the deformed differential needs the diagram of the complex")
    if len(weights) != diagram.n_components:
        raise InputError(
            f"got {len(weights)} weights for a diagram with {diagram.n_components} components"
        )
    if complex_.mode != BIGRADED:
        raise UnsupportedError("the deformed differential is built on the graded theory (h = t = 0)")
    ring = complex_.ring
    theta = _coloring(complex_, coloring)
    cache = _HatCache(complex_, theta)
    D = TrackedMap("D", (1, 0), complex_.differential)
    for k, w in enumerate(weights):
        w = ring.convert(w)
        if ring.is_zero(w):
            continue
        walk = traversal(diagram, k)
        D = D + cache.signed_sum(walk.passes, f"xi_{k}").scale(w)
    out = ChainComplex(
        ring,
        list(complex_.generators),
        D.matrix,
        mode=COLLAPSED,
        diagram=diagram,
        cube=complex_.cube,
        reduced=complex_.reduced,
        ambient=complex_.ambient,
        inclusion=complex_.inclusion,
        basepoint=complex_.basepoint,
    )
    logger.debug("deformed differential", weights=[ring.format(ring.convert(w)) for w in weights])
    if verify:
        out.verify()
    return out

"""
Oriented link diagrams

A diagram is a list of crossings plus crossingless loops. Edges are labelled by
positive integers and double as regular points. At every crossing the four ends
are named by their role:

    p1, p2   incoming ends
    q1, q2   outgoing ends (p'1, p'2)

with the strand through the crossing running p1 -> q2 and p2 -> q1. The
oriented resolution joins p1-q1 and p2-q2; the unoriented one joins p1-p2 and
q1-q2.

PD tuples (a, b, c, d) are read counterclockwise from the incoming under-edge a.
The over strand enters at b for a negative crossing and at d for a positive one:

    negative: p1=a, p2=b, q2=c, q1=d
    positive: p1=d, p2=a, q2=b, q1=c
"""

import re
from functools import cached_property
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import InputError, InternalError

SLOT_NAMES = ("p1", "p2", "q1", "q2")

COLOR_A = "a"
COLOR_B = "b"


class BraidWord(BaseModel):
    """A braid on ``strands`` strands; letter i > 0 is sigma_i, i < 0 is sigma_|i|^-1"""

    model_config = ConfigDict(frozen=True)

    strands: int = Field(ge=1)
    letters: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_letters(self) -> "BraidWord":
        for letter in self.letters:
            if letter == 0 or abs(letter) > self.strands - 1:
                raise ValueError(
                    f"braid letter {letter} out of range for {self.strands} strands "
                    f"(allowed 1..{self.strands - 1} up to sign)"
                )
        return self

    @property
    def permutation(self) -> List[int]:
        """perm[k - 1] = top position reached by the strand starting at bottom position k"""
        at = list(range(1, self.strands + 1))
        for letter in self.letters:
            i = abs(letter) - 1
            at[i], at[i + 1] = at[i + 1], at[i]
        perm = [0] * self.strands
        for top, start in enumerate(at, start=1):
            perm[start - 1] = top
        return perm

    def cycles(self) -> List[List[int]]:
        perm = self.permutation
        seen = set()
        out = []
        for k in range(1, self.strands + 1):
            if k in seen:
                continue
            cycle = []
            while k not in seen:
                seen.add(k)
                cycle.append(k)
                k = perm[k - 1]
            out.append(cycle)
        return out

    @property
    def writhe(self) -> int:
        return sum(1 if letter > 0 else -1 for letter in self.letters)

    @property
    def text(self) -> str:
        body = " ".join(str(letter) for letter in self.letters)
        return f"{self.strands}: {body}".rstrip()


class PDCode(BaseModel):
    """Planar diagram code: one counterclockwise 4-tuple per crossing"""

    model_config = ConfigDict(frozen=True)

    crossings: Tuple[Tuple[int, int, int, int], ...]

    @field_validator("crossings", mode="before")
    @classmethod
    def _coerce(cls, value: Iterable[Sequence[int]]) -> Tuple[Tuple[int, int, int, int], ...]:
        out = []
        for k, entry in enumerate(value):
            entry = tuple(entry)
            if len(entry) != 4:
                raise ValueError(f"PD crossing {k} has {len(entry)} labels, expected 4")
            if not all(isinstance(x, int) and not isinstance(x, bool) and x > 0 for x in entry):
                raise ValueError(f"PD crossing {k} must hold positive integer labels: {list(entry)}")
            out.append(entry)
        return tuple(out)

    @model_validator(mode="after")
    def _each_label_twice(self) -> "PDCode":
        counts: Dict[int, int] = {}
        for entry in self.crossings:
            for label in entry:
                counts[label] = counts.get(label, 0) + 1
        bad = sorted(label for label, n in counts.items() if n != 2)
        if bad:
            raise ValueError(f"PD edge labels must occur exactly twice; offending labels: {bad}")
        return self


class Crossing(BaseModel):
    """One crossing with its sign and the edges at its four ends"""

    model_config = ConfigDict(frozen=True)

    index: int
    sign: int
    p1: int
    p2: int
    q1: int
    q2: int

    @field_validator("sign")
    @classmethod
    def _unit_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError(f"crossing sign must be +1 or -1, got {value}")
        return value

    @property
    def pd(self) -> Tuple[int, int, int, int]:
        if self.sign < 0:
            return (self.p1, self.p2, self.q2, self.q1)
        return (self.p2, self.q2, self.q1, self.p1)

    def end(self, slot: str) -> int:
        return getattr(self, slot)

    def exit_after(self, slot: str) -> str:
        """Outgoing end reached by a strand entering at ``slot``"""
        return "q2" if slot == "p1" else "q1"

    @property
    def oriented_pairs(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return (self.p1, self.q1), (self.p2, self.q2)

    @property
    def unoriented_pairs(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return (self.p1, self.p2), (self.q1, self.q2)

    def zero_pairs(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """Edges joined by the 0-resolution (A-smoothing)"""
        return self.oriented_pairs if self.sign > 0 else self.unoriented_pairs

    def one_pairs(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return self.unoriented_pairs if self.sign > 0 else self.oriented_pairs


class Pass(NamedTuple):
    """A traversal step: entering ``crossing`` through ``slot`` along ``edge``"""

    crossing: int
    slot: str
    edge: int

    @property
    def sign(self) -> int:
        return 1 if self.slot == "p1" else -1


class Traversal(BaseModel):
    model_config = ConfigDict(frozen=True)

    component: int
    basepoint: int
    passes: Tuple[Pass, ...]

    @property
    def crossings(self) -> List[int]:
        return [p.crossing for p in self.passes]


class ABColoring(BaseModel):
    """An admissible a/b coloring of the edges"""

    model_config = ConfigDict(frozen=True)

    colors: Dict[int, str]

    def theta(self, edge: int) -> str:
        return self.colors[edge]

    def epsilon(self, edge: int) -> int:
        return 1 if self.colors[edge] == COLOR_A else -1

    def swapped(self) -> "ABColoring":
        flip = {COLOR_A: COLOR_B, COLOR_B: COLOR_A}
        return ABColoring(colors={e: flip[c] for e, c in self.colors.items()})

    def is_admissible_for(self, diagram: "LinkDiagram") -> bool:
        for c in diagram.crossings:
            t = self.colors
            if not (t[c.p1] == t[c.q1] and t[c.p2] == t[c.q2] and t[c.p1] != t[c.p2]):
                return False
        return True


class LinkDiagram(BaseModel):
    """
    An oriented link diagram

    Crossings keep their listing order, which is the order used for cube
    coordinates and for "c before c'" in braid formulas.
    """

    model_config = ConfigDict(frozen=True)

    crossings: Tuple[Crossing, ...] = ()
    free_loops: Tuple[int, ...] = ()
    braid: Optional[BraidWord] = None
    name: Optional[str] = None

    @model_validator(mode="after")
    def _check_ends(self) -> "LinkDiagram":
        heads: Dict[int, int] = {}
        tails: Dict[int, int] = {}
        for k, c in enumerate(self.crossings):
            if c.index != k:
                raise ValueError(f"crossing {k} carries index {c.index}")
            for e in (c.p1, c.p2):
                heads[e] = heads.get(e, 0) + 1
            for e in (c.q1, c.q2):
                tails[e] = tails.get(e, 0) + 1
        edges = set(heads) | set(tails)
        bad = sorted(e for e in edges if heads.get(e) != 1 or tails.get(e) != 1)
        if bad:
            raise ValueError(f"inconsistent orientation on edges {bad}")
        clash = sorted(edges & set(self.free_loops))
        if clash or len(set(self.free_loops)) != len(self.free_loops):
            raise ValueError(f"crossingless loops reuse edge labels: {clash or list(self.free_loops)}")
        return self

    # ----------------------------------------------------------------- lookup

    @cached_property
    def heads(self) -> Dict[int, Tuple[int, str]]:
        """edge -> (crossing, incoming slot) where the edge ends"""
        return {c.end(s): (c.index, s) for c in self.crossings for s in ("p1", "p2")}

    @cached_property
    def tails(self) -> Dict[int, Tuple[int, str]]:
        """edge -> (crossing, outgoing slot) where the edge starts"""
        return {c.end(s): (c.index, s) for c in self.crossings for s in ("q1", "q2")}

    @cached_property
    def edges(self) -> List[int]:
        return sorted(set(self.heads) | set(self.free_loops))

    def next_edge(self, edge: int) -> int:
        if edge not in self.heads:
            return edge
        c, slot = self.heads[edge]
        crossing = self.crossings[c]
        return crossing.end(crossing.exit_after(slot))

    @cached_property
    def components(self) -> List[List[int]]:
        """Edges of each component in orientation order, numbered by first appearance"""
        seen = set()
        out: List[List[int]] = []
        for c in self.crossings:
            for start in c.pd:
                if start in seen:
                    continue
                loop = [start]
                seen.add(start)
                e = self.next_edge(start)
                while e != start:
                    loop.append(e)
                    seen.add(e)
                    e = self.next_edge(e)
                out.append(loop)
        for e in self.free_loops:
            out.append([e])
        return out

    @cached_property
    def component_of(self) -> Dict[int, int]:
        return {e: k for k, loop in enumerate(self.components) for e in loop}

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def is_knot(self) -> bool:
        return self.n_components == 1

    @property
    def canonical_basepoint(self) -> int:
        if self.crossings:
            return self.crossings[0].pd[0]
        if self.free_loops:
            return self.free_loops[0]
        raise InputError("the empty diagram has no basepoint")

    def to_pd(self) -> PDCode:
        if self.free_loops:
            raise InputError("crossingless loops have no PD representation")
        return validated(PDCode, crossings=[c.pd for c in self.crossings])


# ----------------------------------------------------------------- parsing


def validated(model: type, **data: Any) -> Any:
    """Construct a model, reporting validation failures as InputError."""
    try:
        return model(**data)
    except ValidationError as exc:
        first = exc.errors()[0]
        message = str(first.get("msg", exc)).removeprefix("Value error, ")
        raise InputError(message) from exc


_ALIAS = re.compile(r"^([sS])(\d+)(\^-1|\^\{-1\}|')?$")


def parse_braid(text: str) -> BraidWord:
    """
    Parse braid text

    Accepted forms:
        "n: i1 i2 ..."   signed letters, e.g. "2: -1 -1 -1"
        "n:"             the identity braid on n strands
        "s1 s1 s1"       aliases: s<i> is sigma_i; S<i>, s<i>^-1 and s<i>' are inverses;
                         an optional "n:" prefix fixes the strand count
    """
    if not isinstance(text, str) or not text.strip():
        raise InputError("empty braid text")
    head, sep, body = text.partition(":")
    strands: Optional[int] = None
    if sep:
        try:
            strands = int(head.strip())
        except ValueError:
            raise InputError(f"braid strand count must be an integer, got {head.strip()!r}")
        if strands < 1:
            raise InputError(f"braid needs at least one strand, got {strands}")
    else:
        body = head

    letters: List[int] = []
    for token in body.replace(",", " ").split():
        alias = _ALIAS.match(token)
        if alias:
            index = int(alias.group(2))
            inverse = alias.group(1) == "S" or alias.group(3) is not None
            letters.append(-index if inverse else index)
            continue
        try:
            letters.append(int(token))
        except ValueError:
            raise InputError(f"malformed braid token {token!r}")

    if strands is None:
        if not letters:
            raise InputError("braid without a strand count needs at least one letter")
        strands = max(abs(x) for x in letters) + 1
    return validated(BraidWord, strands=strands, letters=tuple(letters))


def braid_closure(braid: BraidWord, name: Optional[str] = None) -> LinkDiagram:
    """
    Close a braid into a link diagram

    Bottom positions carry edge labels 1..n; every letter creates two fresh
    outgoing edges; the top edge at position k is identified with label k.
    Crossings keep word order, bottom to top.
    """
    n = braid.strands
    current = list(range(1, n + 1))
    fresh = n + 1
    raw: List[Tuple[int, int, int, int, int]] = []
    for letter in braid.letters:
        i = abs(letter) - 1
        left, right = current[i], current[i + 1]
        top_left, top_right = fresh, fresh + 1
        fresh += 2
        # strand p1 -> q2 crosses from left to right
        raw.append((1 if letter > 0 else -1, left, right, top_left, top_right))
        current[i], current[i + 1] = top_left, top_right

    closing = {current[k]: k + 1 for k in range(n)}
    relabel = lambda e: closing.get(e, e)  # noqa: E731
    crossings = [
        Crossing(index=k, sign=s, p1=relabel(p1), p2=relabel(p2), q1=relabel(q1), q2=relabel(q2))
        for k, (s, p1, p2, q1, q2) in enumerate(raw)
    ]
    touched = {abs(letter) - 1 for letter in braid.letters}
    touched |= {abs(letter) for letter in braid.letters}
    free = tuple(k + 1 for k in range(n) if k not in touched)
    return validated(
        LinkDiagram, crossings=tuple(crossings), free_loops=free, braid=braid, name=name
    )


def _orient_pd(code: PDCode) -> List[List[str]]:
    """
    Decide, for every slot of every PD tuple, whether the edge there enters or
    leaves the crossing. Under ends are fixed (slot 0 in, slot 2 out); over ends
    follow from the edges they share with other crossings. Components that run
    over every crossing fall back to label succession.
    """
    slots: Dict[int, List[Tuple[int, int]]] = {}
    for c, entry in enumerate(code.crossings):
        for pos, label in enumerate(entry):
            slots.setdefault(label, []).append((c, pos))

    role: Dict[Tuple[int, int], str] = {}
    queue: List[Tuple[int, int]] = []

    def assign(slot: Tuple[int, int], value: str) -> None:
        if slot in role:
            if role[slot] != value:
                raise InputError(f"inconsistent orientation at crossing {slot[0]} position {slot[1]}")
            return
        role[slot] = value
        queue.append(slot)

    def propagate() -> None:
        flip = {"in": "out", "out": "in"}
        while queue:
            c, pos = queue.pop()
            value = role[(c, pos)]
            label = code.crossings[c][pos]
            for other in slots[label]:
                if other != (c, pos):
                    assign(other, flip[value])
            if pos in (1, 3):
                assign((c, 4 - pos), flip[value])

    for c in range(len(code.crossings)):
        assign((c, 0), "in")
        assign((c, 2), "out")
    propagate()

    for c, (a, b, _, d) in enumerate(code.crossings):
        if (c, 1) in role:
            continue
        follows = d == b + 1 or b - d > 1
        assign((c, 1), "in" if follows else "out")
        propagate()

    return [[role[(c, pos)] for pos in range(4)] for c in range(len(code.crossings))]


def parse_pd(code: PDCode | Sequence[Sequence[int]], name: Optional[str] = None) -> LinkDiagram:
    """Build a diagram from a PD code; crossing order is the listing order."""
    if not isinstance(code, PDCode):
        code = validated(PDCode, crossings=code)
    if not code.crossings:
        raise InputError("PD code without crossings; use the braid '1:' for the unknot")
    roles = _orient_pd(code)
    crossings = []
    for k, ((a, b, c, d), role) in enumerate(zip(code.crossings, roles)):
        if role[1] == "in":
            crossings.append(Crossing(index=k, sign=-1, p1=a, p2=b, q2=c, q1=d))
        else:
            crossings.append(Crossing(index=k, sign=1, p1=d, p2=a, q2=b, q1=c))
    return validated(LinkDiagram, crossings=tuple(crossings), name=name)


# ------------------------------------------------------------- combinatorics


def admissible_coloring(diagram: LinkDiagram, base_edge: Optional[int] = None) -> ABColoring:
    """
    Propagate theta(p1) = theta(q1) != theta(p2) = theta(q2) from ``base_edge``

    Pieces of the diagram not connected to the base edge are colored from their
    smallest edge label; crossingless loops are colored a.
    """
    base = diagram.canonical_basepoint if base_edge is None else base_edge
    if base not in diagram.component_of:
        raise InputError(f"edge {base} is not in the diagram")

    links: Dict[int, List[Tuple[int, bool]]] = {e: [] for e in diagram.edges}
    for c in diagram.crossings:
        for x, y, same in ((c.p1, c.q1, True), (c.p2, c.q2, True), (c.p1, c.p2, False)):
            links[x].append((y, same))
            links[y].append((x, same))

    colors: Dict[int, str] = {}
    flip = {COLOR_A: COLOR_B, COLOR_B: COLOR_A}
    for seed in [base] + diagram.edges:
        if seed in colors:
            continue
        colors[seed] = COLOR_A
        stack = [seed]
        while stack:
            e = stack.pop()
            for other, same in links[e]:
                want = colors[e] if same else flip[colors[e]]
                if other in colors:
                    if colors[other] != want:
                        raise InternalError(f"coloring contradiction at edges {e} and {other}")
                    continue
                colors[other] = want
                stack.append(other)
    return ABColoring(colors=colors)


def traversal(diagram: LinkDiagram, component: int, basepoint: Optional[int] = None) -> Traversal:
    """Walk a component once along its orientation, recording every crossing entered."""
    if not 0 <= component < diagram.n_components:
        raise InputError(f"no component {component}; diagram has {diagram.n_components}")
    loop = diagram.components[component]
    start = loop[0] if basepoint is None else basepoint
    if diagram.component_of.get(start) != component:
        raise InputError(f"basepoint {start} does not lie on component {component}")
    passes: List[Pass] = []
    if start in diagram.heads:
        e = start
        while True:
            c, slot = diagram.heads[e]
            passes.append(Pass(crossing=c, slot=slot, edge=e))
            e = diagram.next_edge(e)
            if e == start:
                break
    return Traversal(component=component, basepoint=start, passes=tuple(passes))


def mirror(diagram: LinkDiagram) -> LinkDiagram:
    """
    Mirror image with reversed orientation and reversed crossing order

    Swapping over and under flips every sign; reversing orientation exchanges
    incoming and outgoing ends, so p1 <-> q2 and p2 <-> q1. Applying it twice
    returns the original diagram.
    """
    crossings = tuple(
        Crossing(index=k, sign=-c.sign, p1=c.q2, p2=c.q1, q1=c.p2, q2=c.p1)
        for k, c in enumerate(reversed(diagram.crossings))
    )
    name = None
    if diagram.name:
        inner = diagram.name
        name = inner[2:-1] if inner.startswith("m(") and inner.endswith(")") else f"m({inner})"
    return LinkDiagram(crossings=crossings, free_loops=diagram.free_loops, name=name)


# ------------------------------------------------------------- braid strands


def follow_strand(diagram: LinkDiagram, edge: int, stop_at_closure: bool = True) -> List[Pass]:
    """
    Passes met by the braid strand that starts on ``edge``, bottom to top

    The walk stops when it returns to a closure arc (labels 1..n of a braid
    closure), i.e. at the top of the braid.
    """
    if diagram.braid is None:
        raise InputError("strand data is only available for braid closures")
    n = diagram.braid.strands
    passes: List[Pass] = []
    e = edge
    while e in diagram.heads:
        c, slot = diagram.heads[e]
        passes.append(Pass(crossing=c, slot=slot, edge=e))
        e = diagram.next_edge(e)
        if stop_at_closure and e <= n:
            break
    return passes


def braid_strands(diagram: LinkDiagram) -> Dict[int, List[Pass]]:
    """bottom position -> passes of the strand starting there (empty for untouched positions)"""
    if diagram.braid is None:
        raise InputError("strand data is only available for braid closures")
    return {
        k: (follow_strand(diagram, k) if k in diagram.heads else [])
        for k in range(1, diagram.braid.strands + 1)
    }


def strand_successor(diagram: LinkDiagram, position: int) -> int:
    """Bottom position reached after following the strand from ``position`` through the closure"""
    if diagram.braid is None:
        raise InputError("strand data is only available for braid closures")
    return diagram.braid.permutation[position - 1]

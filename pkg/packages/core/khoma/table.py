"""
Knot tables: the built-in mini-table, JSON-lines ingestion and name resolution
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from .diagram import BraidWord, LinkDiagram, PDCode, braid_closure, mirror, parse_braid, parse_pd
from .errors import InputError
from .utils.logger import get_logger

logger = get_logger()


class TableEntry(BaseModel):
    """One knot of a table: a PD code or a braid word"""

    model_config = ConfigDict(frozen=True)

    name: str
    pd: Optional[PDCode] = None
    braid: Optional[str] = None

    @field_validator("pd", mode="before")
    @classmethod
    def _wrap_pd(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            return {"crossings": value}
        return value

    @model_validator(mode="after")
    def _one_source(self) -> "TableEntry":
        if (self.pd is None) == (self.braid is None):
            raise ValueError(f"table entry {self.name!r} needs exactly one of 'pd' or 'braid'")
        return self

    def diagram(self) -> LinkDiagram:
        if self.pd is not None:
            return parse_pd(self.pd, name=self.name)
        return braid_closure(parse_braid(self.braid), name=self.name)


def _entry(
    name: str, pd: Optional[List[List[int]]] = None, braid: Optional[str] = None
) -> TableEntry:
    return TableEntry(name=name, pd=pd, braid=braid)


BUILTIN: Dict[str, TableEntry] = {
    e.name: e
    for e in (
        _entry("unknot", braid="1:"),
        _entry("3_1", pd=[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]),
        _entry("4_1", pd=[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]),
        _entry("5_1", pd=[[1, 6, 2, 7], [3, 8, 4, 9], [5, 10, 6, 1], [7, 2, 8, 3], [9, 4, 10, 5]]),
        _entry("5_2", pd=[[1, 4, 2, 5], [3, 8, 4, 9], [5, 10, 6, 1], [9, 6, 10, 7], [7, 2, 8, 3]]),
        _entry(
            "6_1",
            pd=[
                [1, 4, 2, 5],
                [7, 10, 8, 11],
                [3, 9, 4, 8],
                [9, 3, 10, 2],
                [5, 12, 6, 1],
                [11, 6, 12, 7],
            ],
        ),
        _entry(
            "7_1",
            pd=[
                [1, 8, 2, 9],
                [3, 10, 4, 11],
                [5, 12, 6, 13],
                [7, 14, 8, 1],
                [9, 2, 10, 3],
                [11, 4, 12, 5],
                [13, 6, 14, 7],
            ],
        ),
        _entry("hopf", braid="2: 1 1"),
    )
}


class KnotTable:
    """An ordered name -> entry index"""

    def __init__(self, entries: Optional[Dict[str, TableEntry]] = None):
        self.entries: Dict[str, TableEntry] = dict(entries or {})

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: str) -> bool:
        return self._lookup(name) is not None

    def names(self) -> List[str]:
        return list(self.entries)

    def _lookup(self, name: str) -> Optional[str]:
        if name in self.entries:
            return name
        folded = [key for key in self.entries if key.casefold() == name.casefold()]
        if len(folded) > 1:
            raise InputError(f"knot name {name!r} is ambiguous: {folded}")
        return folded[0] if folded else None

    def get(self, name: str) -> TableEntry:
        """Exact name first, then a unique case-insensitive match (Hopf -> hopf)"""
        key = self._lookup(name)
        if key is None:
            raise InputError(f"unknown knot {name!r}")
        return self.entries[key]

    def merged(self, other: "KnotTable") -> "KnotTable":
        """Entries of ``other`` override same-named entries here."""
        return KnotTable({**self.entries, **other.entries})

    @classmethod
    def builtin(cls) -> "KnotTable":
        return cls(BUILTIN)


def load_table(path: Union[str, Path]) -> KnotTable:
    """
    Read a JSON-lines table

    Each non-blank line is {"name": ..., "pd": [[a, b, c, d], ...]} or
    {"name": ..., "braid": "n: ..."}; a repeated name is an error.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"table file not found: {path}")
    entries: Dict[str, TableEntry] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                entry = TableEntry.model_validate(json.loads(line))
            except (json.JSONDecodeError, ValidationError) as exc:
                raise InputError(f"{path}:{lineno}: malformed table line ({exc})") from exc
            if entry.name in entries:
                raise InputError(f"{path}:{lineno}: duplicate knot name {entry.name!r}")
            entries[entry.name] = entry
    logger.debug("loaded knot table", path=str(path), knots=len(entries))
    return KnotTable(entries)


def resolve_link(
    name: Optional[str] = None,
    braid: Optional[str] = None,
    pd: Optional[Union[str, Sequence[Sequence[int]]]] = None,
    table: Optional[KnotTable] = None,
) -> LinkDiagram:
    """
    Turn exactly one of a table name, braid text or PD code into a diagram

    Names may be written m(NAME) for the mirror; PD codes may be given as JSON text.
    """
    given = [x is not None for x in (name, braid, pd)]
    if sum(given) != 1:
        raise InputError("give exactly one of a knot name, --braid or --pd")
    if braid is not None:
        return braid_closure(parse_braid(braid), name=braid.strip())
    if pd is not None:
        if isinstance(pd, str):
            try:
                pd = json.loads(pd)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed PD code: {exc}") from exc
        return parse_pd(pd)

    table = table if table is not None else KnotTable.builtin()
    name = name.strip()
    if name.startswith("m(") and name.endswith(")"):
        return mirror(resolve_link(name=name[2:-1], table=table))
    return table.get(name).diagram()


def torus_braid(k: int, positive: bool = False) -> BraidWord:
    """The 2-strand braid sigma_1^{-(2k+1)} (or its positive version) closing to T(2, 2k+1)"""
    if k < 0:
        raise InputError(f"torus family index must be non-negative, got {k}")
    letter = 1 if positive else -1
    return BraidWord(strands=2, letters=tuple([letter] * (2 * k + 1)))

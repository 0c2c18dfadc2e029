import pytest

from packages.core.khoma.algebra import QQ
from packages.core.khoma.complex import build_ckh, build_reduced, simplify
from packages.core.khoma.diagram import braid_closure, parse_braid, parse_pd
from packages.core.khoma.eop import e_operator_traversal
from packages.core.khoma.homology import estring_decomposition, homology, induced_map
from packages.core.khoma.pipeline import KhovanovService
from packages.core.khoma.table import resolve_link
from packages.core.khoma.utils.config import reset_config


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    """Every test sees the default configuration, without a user table."""
    monkeypatch.delenv("KHOMA_TABLE", raising=False)
    monkeypatch.delenv("KHOMA_LOG_LEVEL", raising=False)
    monkeypatch.delenv("KHOMA_LOG_FILE", raising=False)
    reset_config()
    KhovanovService._instance = None
    yield
    reset_config()
    KhovanovService._instance = None


def knot(name):
    return resolve_link(name=name)


def braid(text):
    return braid_closure(parse_braid(text), name=text)


def decompose(diagram, reduced=False, ring=QQ, basepoint=None, coloring=None):
    """Full pipeline: cube, e by traversal, elimination, homology, graded SNF."""
    if reduced:
        full = build_reduced(diagram, ring, basepoint=basepoint)
        e = e_operator_traversal(full, coloring=coloring).map
    else:
        full = build_ckh(diagram, ring)
        e = e_operator_traversal(full, coloring=coloring, basepoint=basepoint).map
    small, (e_small,) = simplify(full, [e])
    H = homology(small)
    return estring_decomposition(H, induced_map(H, e_small))


@pytest.fixture
def trefoil():
    return knot("3_1")


@pytest.fixture
def trefoil_braid():
    return braid("2: -1 -1 -1")


@pytest.fixture
def figure_eight_braid():
    return braid("3: 1 -2 1 -2")


@pytest.fixture
def hopf():
    return knot("hopf")


@pytest.fixture
def unknot():
    return knot("unknot")


@pytest.fixture
def kink():
    """One-crossing unknot"""
    return parse_pd([[1, 1, 2, 2]], name="kink")


@pytest.fixture
def rationals():
    return QQ


SMALL_KNOTS = ["unknot", "3_1", "4_1", "5_1", "5_2"]
BUILTIN_KNOTS = ["unknot", "3_1", "4_1", "5_1", "5_2", "6_1", "7_1"]

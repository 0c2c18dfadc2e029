"""
Kauffman bracket and Jones polynomial, as an independent check on Euler characteristics

Laurent polynomials are kept as {exponent: coefficient} while summing states
and turned into sympy expressions at the end.
"""

from collections import Counter
from itertools import product
from math import comb
from typing import Dict

import sympy

from .complex import ChainComplex, resolve
from .diagram import LinkDiagram

A = sympy.Symbol("A")
q = sympy.Symbol("q")

Laurent = Dict[int, int]


def _state_counts(diagram: LinkDiagram) -> Counter:
    """(number of B-smoothings, loops) over all states"""
    counts: Counter = Counter()
    for vertex in product((0, 1), repeat=diagram.n_crossings):
        counts[(sum(vertex), resolve(diagram, vertex).n_circles)] += 1
    return counts


def _bracket_terms(diagram: LinkDiagram) -> Laurent:
    n = diagram.n_crossings
    out: Counter = Counter()
    for (b, loops), count in _state_counts(diagram).items():
        m = loops - 1
        # (-A^2 - A^-2)^m
        for k in range(m + 1):
            out[n - 2 * b + 2 * (m - k) - 2 * k] += count * (-1) ** m * comb(m, k)
    return {e: c for e, c in out.items() if c}


def _to_sympy(terms: Laurent, var: sympy.Symbol) -> sympy.Expr:
    return sympy.Add(*(c * var**e for e, c in sorted(terms.items())))


def kauffman_bracket(diagram: LinkDiagram) -> sympy.Expr:
    """<D> in A with <O> = 1; bit 0 is the A-smoothing."""
    return _to_sympy(_bracket_terms(diagram), A)


def jones_polynomial(diagram: LinkDiagram, normalized: bool = True) -> sympy.Expr:
    """
    Jones polynomial in q, from (-A^3)^{-w} <D> with A^2 = -q

    normalized=True gives V with V(unknot) = 1; otherwise (q + 1/q) V, which
    is the graded Euler characteristic of the unreduced Khovanov complex.
    """
    w = diagram.writhe
    v: Counter = Counter()
    for e, c in _bracket_terms(diagram).items():
        k = e - 3 * w
        # every exponent is even: n - 3w is
        v[k // 2] += c * (-1) ** (w + k // 2)
    terms = {e: c for e, c in v.items() if c}
    if not normalized:
        shifted: Counter = Counter()
        for e, c in terms.items():
            shifted[e + 1] += c
            shifted[e - 1] += c
        terms = {e: c for e, c in shifted.items() if c}
    return _to_sympy(terms, q)


def euler_polynomial(complex_: ChainComplex) -> sympy.Expr:
    """sum_{i,j} (-1)^i q^j rank C^{i,j}"""
    return _to_sympy(complex_.euler_characteristic(), q)


def matches_jones(complex_: ChainComplex) -> bool:
    """Euler characteristic of ``complex_`` against the bracket of its diagram"""
    expected = jones_polynomial(complex_.diagram, normalized=complex_.reduced)
    return sympy.expand(euler_polynomial(complex_) - expected) == 0

"""
The rank-two Frobenius algebra A_{h,t} = R[X]/(X^2 - hX - t)

Basis labels: ONE = 0 and X = 1. Elements are dicts label -> coefficient,
tensors are dicts (label, label) -> coefficient. Zero coefficients are never stored.
"""

from typing import Any, Dict, List, Tuple

from .ring import CoefficientRing

ONE = 0
X = 1

Element = Dict[int, Any]
Tensor = Dict[Tuple[int, int], Any]


class FrobeniusAlgebra:
    """
    Multiplication, comultiplication and counit of A_{h,t}

        X * X = h X + t
        Delta(1) = X (x) 1 + 1 (x) X - h 1 (x) 1
        Delta(X) = X (x) X + t 1 (x) 1
        eps(1) = 0, eps(X) = 1
    """

    def __init__(self, ring: CoefficientRing):
        self.ring = ring
        self.h = ring.h
        self.t = ring.t
        r = ring
        self._mul: Dict[Tuple[int, int], List[Tuple[int, Any]]] = {
            (ONE, ONE): [(ONE, r.one)],
            (ONE, X): [(X, r.one)],
            (X, ONE): [(X, r.one)],
            (X, X): [(lbl, c) for lbl, c in ((X, self.h), (ONE, self.t)) if not r.is_zero(c)],
        }
        self._comul: Dict[int, List[Tuple[Tuple[int, int], Any]]] = {
            ONE: [
                (key, c)
                for key, c in (((X, ONE), r.one), ((ONE, X), r.one), ((ONE, ONE), r.neg(self.h)))
                if not r.is_zero(c)
            ],
            X: [(key, c) for key, c in (((X, X), r.one), ((ONE, ONE), self.t)) if not r.is_zero(c)],
        }

    # label-level tables, used by the cube builder

    def multiply_labels(self, a: int, b: int) -> List[Tuple[int, Any]]:
        return self._mul[(a, b)]

    def comultiply_label(self, a: int) -> List[Tuple[Tuple[int, int], Any]]:
        return self._comul[a]

    # element-level operations

    def multiply(self, x: Element, y: Element) -> Element:
        r = self.ring
        out: Element = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for lbl, c in self._mul[(a, b)]:
                    out[lbl] = r.add(out.get(lbl, r.zero), r.mul(r.mul(ca, cb), c))
        return {k: v for k, v in out.items() if not r.is_zero(v)}

    def comultiply(self, x: Element) -> Tensor:
        r = self.ring
        out: Tensor = {}
        for a, ca in x.items():
            for key, c in self._comul[a]:
                out[key] = r.add(out.get(key, r.zero), r.mul(ca, c))
        return {k: v for k, v in out.items() if not r.is_zero(v)}

    def counit(self, x: Element) -> Any:
        return self.ring.normalize(x.get(X, self.ring.zero))

    def element(self, one: Any = 0, x: Any = 0) -> Element:
        r = self.ring
        out = {ONE: r.convert(one), X: r.convert(x)}
        return {k: v for k, v in out.items() if not r.is_zero(v)}

    def multiply_tensor_left(self, x: Element, tensor: Tensor) -> Tensor:
        """(x (x) 1) * tensor"""
        r = self.ring
        out: Tensor = {}
        for (a, b), c in tensor.items():
            for lbl, cl in self.multiply(x, {a: c}).items():
                out[(lbl, b)] = r.add(out.get((lbl, b), r.zero), cl)
        return {k: v for k, v in out.items() if not r.is_zero(v)}

    def multiply_tensors(self, s: Tensor, u: Tensor) -> Tensor:
        """Product in A (x) A"""
        r = self.ring
        out: Tensor = {}
        for (a1, b1), c1 in s.items():
            for (a2, b2), c2 in u.items():
                for la, ca in self._mul[(a1, a2)]:
                    for lb, cb in self._mul[(b1, b2)]:
                        val = r.mul(r.mul(c1, c2), r.mul(ca, cb))
                        out[(la, lb)] = r.add(out.get((la, lb), r.zero), val)
        return {k: v for k, v in out.items() if not r.is_zero(v)}

    def multiply_first(self, tensor3: Dict[Tuple[int, int, int], Any]) -> Tensor:
        """(m (x) id) on A (x) A (x) A"""
        r = self.ring
        out: Tensor = {}
        for (a, b, c), coef in tensor3.items():
            for lbl, cl in self._mul[(a, b)]:
                out[(lbl, c)] = r.add(out.get((lbl, c), r.zero), r.mul(coef, cl))
        return {k: v for k, v in out.items() if not r.is_zero(v)}

    def comultiply_second(self, tensor: Tensor) -> Dict[Tuple[int, int, int], Any]:
        """(id (x) Delta) on A (x) A"""
        r = self.ring
        out: Dict[Tuple[int, int, int], Any] = {}
        for (a, b), coef in tensor.items():
            for (l1, l2), cl in self._comul[b]:
                key = (a, l1, l2)
                out[key] = r.add(out.get(key, r.zero), r.mul(coef, cl))
        return {k: v for k, v in out.items() if not r.is_zero(v)}

"""
Exact coefficient rings: Z, Q and prime fields F_p

Elements are plain Python values: int for Z and F_p (reduced into [0, p)),
fractions.Fraction for Q. The ring object does the normalization.
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Optional

import sympy

from ..errors import InputError, UnsupportedError


class RingKind(str, Enum):
    INTEGERS = "Z"
    RATIONALS = "Q"
    PRIME_FIELD = "Fp"


class CoefficientRing:
    """
    A coefficient ring together with the Frobenius parameters (h, t)
    of A_{h,t} = R[X]/(X^2 - hX - t)
    """

    def __init__(self, kind: RingKind, p: Optional[int] = None, h: Any = 0, t: Any = 0):
        self.kind = RingKind(kind)
        if self.kind is RingKind.PRIME_FIELD:
            if p is None or not sympy.isprime(p):
                raise InputError(f"F_p needs a prime p, got {p!r}")
            self.p = int(p)
        else:
            self.p = None
        self.h = self.convert(h)
        self.t = self.convert(t)

    @classmethod
    def parse(cls, label: str, prime: int = 7, h: Any = 0, t: Any = 0) -> "CoefficientRing":
        """
        Parse a coefficient label

        Accepts "Q", "Z", "Fp" (uses ``prime``) and "F<p>" such as "F2" or "F7".
        """
        text = label.strip()
        if text.upper() == "Q":
            return cls(RingKind.RATIONALS, h=h, t=t)
        if text.upper() == "Z":
            return cls(RingKind.INTEGERS, h=h, t=t)
        if text in ("Fp", "FP", "fp"):
            return cls(RingKind.PRIME_FIELD, p=prime, h=h, t=t)
        if text[:1] in ("F", "f") and text[1:].isdigit():
            return cls(RingKind.PRIME_FIELD, p=int(text[1:]), h=h, t=t)
        raise InputError(f"Unsupported coefficient ring: {label!r} (expected Q, Z, Fp or F<p>)")

    # ------------------------------------------------------------------ basics

    @property
    def name(self) -> str:
        if self.kind is RingKind.PRIME_FIELD:
            return f"F{self.p}"
        return self.kind.value

    @property
    def is_field(self) -> bool:
        return self.kind is not RingKind.INTEGERS

    @property
    def zero(self) -> Any:
        return Fraction(0) if self.kind is RingKind.RATIONALS else 0

    @property
    def one(self) -> Any:
        return Fraction(1) if self.kind is RingKind.RATIONALS else 1

    def convert(self, value: Any) -> Any:
        """Coerce an int, Fraction or numeric string into the ring."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.kind is RingKind.RATIONALS:
            return Fraction(value)
        if isinstance(value, Fraction):
            if self.kind is RingKind.INTEGERS:
                if value.denominator != 1:
                    raise InputError(f"{value} is not an integer")
                return int(value)
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        if self.kind is RingKind.PRIME_FIELD:
            return int(value) % self.p
        return int(value)

    def normalize(self, value: Any) -> Any:
        if self.kind is RingKind.PRIME_FIELD:
            return value % self.p
        return value

    def is_zero(self, value: Any) -> bool:
        if self.kind is RingKind.PRIME_FIELD:
            return value % self.p == 0
        return value == 0

    def is_unit(self, value: Any) -> bool:
        if self.kind is RingKind.INTEGERS:
            return value in (1, -1)
        return not self.is_zero(value)

    def inverse(self, value: Any) -> Any:
        if not self.is_unit(value):
            raise UnsupportedError(f"{value} is not invertible in {self.name}")
        if self.kind is RingKind.PRIME_FIELD:
            return pow(int(value), self.p - 2, self.p)
        if self.kind is RingKind.INTEGERS:
            return value
        return 1 / value

    def add(self, a: Any, b: Any) -> Any:
        return self.normalize(a + b)

    def sub(self, a: Any, b: Any) -> Any:
        return self.normalize(a - b)

    def mul(self, a: Any, b: Any) -> Any:
        return self.normalize(a * b)

    def neg(self, a: Any) -> Any:
        return self.normalize(-a)

    def signed(self, a: Any) -> int:
        """Centered integer representative (for display over F_p)."""
        if self.kind is RingKind.PRIME_FIELD:
            a = int(a) % self.p
            return a - self.p if a > self.p // 2 else a
        return a

    def to_sympy(self, value: Any) -> sympy.Expr:
        if isinstance(value, Fraction):
            return sympy.Rational(value.numerator, value.denominator)
        return sympy.Integer(int(value))

    def sympy_domain_kwargs(self) -> dict:
        """Keyword arguments selecting this field as a sympy Poly domain."""
        if self.kind is RingKind.PRIME_FIELD:
            return {"modulus": self.p}
        if self.kind is RingKind.RATIONALS:
            return {"domain": sympy.QQ}
        return {"domain": sympy.ZZ}

    def from_sympy(self, value: Any) -> Any:
        value = sympy.Rational(value)
        return self.convert(Fraction(int(value.p), int(value.q)))

    def format(self, value: Any) -> str:
        return str(self.signed(value))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoefficientRing):
            return NotImplemented
        return (self.kind, self.p, self.h, self.t) == (other.kind, other.p, other.h, other.t)

    def __hash__(self) -> int:
        return hash((self.kind, self.p, self.h, self.t))

    def __repr__(self) -> str:
        return f"CoefficientRing({self.name}, h={self.h}, t={self.t})"


QQ = CoefficientRing(RingKind.RATIONALS)
ZZ = CoefficientRing(RingKind.INTEGERS)


def prime_field(p: int, h: Any = 0, t: Any = 0) -> CoefficientRing:
    return CoefficientRing(RingKind.PRIME_FIELD, p=p, h=h, t=t)

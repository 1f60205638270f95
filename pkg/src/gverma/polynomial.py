"""Integer polynomials in one variable ``q`` with arbitrary-precision coefficients.

Kazhdan-Lusztig data (and everything derived from it) lives in ``Z[q]``.
Graded shifts by half-integral powers are never stored: the parity of a
length difference is tracked separately by the callers.
"""

from __future__ import annotations

from itertools import zip_longest
from typing import Iterable, Sequence


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class IntPoly:
    """An immutable polynomial ``c0 + c1 q + c2 q^2 + ...``.

    The zero polynomial has an empty coefficient tuple; trailing zeros are
    always stripped so that equal polynomials compare and hash equal.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPoly":
        if degree < 0:
            raise ValueError("negative degree")
        return cls([0] * degree + [coeff])

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        """Inverse of :meth:`to_csv`: ``"1,0,2"`` is ``1 + 2q^2``."""
        text = text.strip()
        if not text:
            return ZERO
        return cls(int(part) for part in text.split(","))

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> int:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __call__(self, q: int) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * q + c
        return value

    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def terms(self) -> list[tuple[int, int]]:
        """Nonzero ``(degree, coefficient)`` pairs in increasing degree."""
        return [(k, c) for k, c in enumerate(self.coeffs) if c]

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(a - b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return ZERO
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPoly":
        """Multiply by ``q**k`` (``k >= 0``)."""
        if k < 0:
            raise ValueError("negative shift")
        if not self.coeffs:
            return ZERO
        return IntPoly((0,) * k + self.coeffs)

    # -- comparison / display -----------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in self.terms():
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_csv(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def to_list(self) -> list[int]:
        return list(self.coeffs)


ZERO = IntPoly()
ONE = IntPoly([1])


def poly_sum(polys: Sequence[IntPoly]) -> IntPoly:
    acc: list[int] = []
    for p in polys:
        if len(p.coeffs) > len(acc):
            acc.extend([0] * (len(p.coeffs) - len(acc)))
        for k, c in enumerate(p.coeffs):
            acc[k] += c
    return IntPoly(acc)

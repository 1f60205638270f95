"""Alternating sums of KL polynomials over parabolic subgroups.

For ``x, y`` in ``^IW^J``::

    P^{I,J}_{x,y} = sum_{z in W_J} (-1)^{l(z)} P_{w_I x z, w_I y}
    Q^{I,J}_{x,y} = sum_{z in W_I} (-1)^{l(z)} P_{z w_I x w_0, w_I y w_0}

``Q`` gives graded multiplicities of simples in generalized Verma modules
and ``P`` the inverse matrix.  Both are evaluated term by term.  The
right-hand column element of each sum has a large right descent set
(``-w_0 J`` for ``Q``, and ``I`` after inversion for ``P``), which is what
keeps the underlying column engine small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .kl import KLService, service
from .polynomial import ZERO, IntPoly, poly_sum
from .weyl_group import QuotientSet, WeylElem, WeylGroup, WeylGroupError, as_subset


@dataclass(frozen=True)
class ParaKLKey:
    I: frozenset[int]
    J: frozenset[int]
    x: WeylElem
    y: WeylElem


class ParabolicKL:
    """``P^{I,J}`` and ``Q^{I,J}`` on one double quotient, memoized by position."""

    def __init__(self, group: WeylGroup, I: Iterable[int], J: Iterable[int], kl: KLService | None = None):
        self.group = group
        self.I, self.J = as_subset(I), as_subset(J)
        self.kl = kl if kl is not None else service(group)
        self.quotient: QuotientSet = group.enumerate_quotient(self.I, self.J)
        self.position = {w.img: k for k, w in enumerate(self.quotient)}
        self.wI = group.longest_element(self.I)
        self.wJ = group.longest_element(self.J)
        self.WI = group.parabolic_elements(self.I)
        self.WJ = group.parabolic_elements(self.J)
        self.q_descents = group.minus_w0(self.J)
        self._P: dict[tuple[int, int], IntPoly] = {}
        self._Q: dict[tuple[int, int], IntPoly] = {}

    def __len__(self) -> int:
        return len(self.quotient)

    def _pos(self, w: WeylElem | int) -> int:
        if isinstance(w, int):
            if not 0 <= w < len(self.quotient):
                raise WeylGroupError(f"position {w} out of range")
            return w
        k = self.position.get(w.img)
        if k is None:
            raise WeylGroupError(f"{w} is not in the double quotient for I={sorted(self.I)}, J={sorted(self.J)}")
        return k

    def leq(self, a: int, b: int) -> bool:
        return self.group.bruhat_leq(self.quotient[a], self.quotient[b])

    def P(self, x, y) -> IntPoly:
        """``P^{I,J}_{x,y}``; ``x``, ``y`` given as elements or quotient positions."""
        a, b = self._pos(x), self._pos(y)
        key = (a, b)
        if key not in self._P:
            xe, ye = self.quotient[a], self.quotient[b]
            if xe.length > ye.length or (xe.length == ye.length and a != b):
                self._P[key] = ZERO
            else:
                # P_{u,v} = P_{u^-1,v^-1}; the inverted column has right descents I
                col = (self.wI * ye).inverse()
                base = (self.wI * xe).inverse()
                terms = []
                for z in self.WJ:
                    val = self.kl.P(z.inverse() * base, col, J=self.I)
                    terms.append(val if z.length % 2 == 0 else -val)
                self._P[key] = poly_sum(terms)
        return self._P[key]

    def Q(self, x, y) -> IntPoly:
        """``Q^{I,J}_{x,y}``; nonzero only when ``y <= x``."""
        a, b = self._pos(x), self._pos(y)
        key = (a, b)
        if key not in self._Q:
            xe, ye = self.quotient[a], self.quotient[b]
            if ye.length > xe.length or (xe.length == ye.length and a != b):
                self._Q[key] = ZERO
            else:
                w0 = self.group.w0
                col = self.wI * ye * w0
                base = self.wI * xe * w0
                terms = []
                for z in self.WI:
                    val = self.kl.P(z * base, col, J=self.q_descents)
                    terms.append(val if z.length % 2 == 0 else -val)
                self._Q[key] = poly_sum(terms)
        return self._Q[key]

    def P_matrix(self) -> list[list[IntPoly]]:
        n = len(self)
        return [[self.P(a, b) for b in range(n)] for a in range(n)]

    def Q_matrix(self) -> list[list[IntPoly]]:
        n = len(self)
        return [[self.Q(a, b) for b in range(n)] for a in range(n)]

    def orthogonality_check(self) -> list[tuple[int, int, IntPoly]]:
        """Pairs ``(x, y)`` where the signed sum of ``P_{x,z} Q_{y,z}`` over ``x <= z <= y`` is not ``delta``."""
        n = len(self)
        lengths = self.quotient.lengths
        failures = []
        for a in range(n):
            for b in range(n):
                terms = []
                for c in range(n):
                    if self.leq(a, c) and self.leq(c, b):
                        t = self.P(a, c) * self.Q(b, c)
                        terms.append(t if (lengths[c] + lengths[b]) % 2 == 0 else -t)
                total = poly_sum(terms)
                if total != (1 if a == b else 0):
                    failures.append((a, b, total))
        return failures


_CACHE: dict[tuple, ParabolicKL] = {}


def parabolic(group: WeylGroup, I: Iterable[int], J: Iterable[int]) -> ParabolicKL:
    key = (id(group), as_subset(I), as_subset(J))
    if key not in _CACHE:
        _CACHE[key] = ParabolicKL(group, I, J)
    return _CACHE[key]


def iPJ(key: ParaKLKey) -> IntPoly:
    return parabolic(key.x.group, key.I, key.J).P(key.x, key.y)


def iQJ(key: ParaKLKey) -> IntPoly:
    return parabolic(key.x.group, key.I, key.J).Q(key.x, key.y)


def orthogonality_check(group: WeylGroup, I: Iterable[int], J: Iterable[int]):
    return parabolic(group, I, J).orthogonality_check()


def duality_check(group: WeylGroup, I: Iterable[int], J: Iterable[int], x: WeylElem, y: WeylElem) -> bool:
    """``Q^{I,J}_{x,y} = P^{-w_0 J, I}_{g(x), g(y)}`` with ``g(w) = w_0 w_J w^{-1} w_I``."""
    I, J = as_subset(I), as_subset(J)
    _, gx = group.quotient_bijections(x, I, J)
    _, gy = group.quotient_bijections(y, I, J)
    lhs = parabolic(group, I, J).Q(x, y)
    rhs = parabolic(group, group.minus_w0(J), I).P(gx, gy)
    return lhs == rhs

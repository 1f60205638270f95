"""Finite crystallographic root systems in Bourbaki epsilon-coordinates.

Weights are exact rational vectors in the ambient space (``n+1``
coordinates for ``A_n``, three for ``G_2``, eight for ``E_6``, ``E_7`` and
``E_8``, ``n`` otherwise).  Integral weights also have an integer
"label" form: the tuple of pairings with the simple coroots, which is what
the heavier enumeration code works with.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial, prod
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]

_RANK_OK = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 3,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CartanType:
    series: str
    rank: int

    def __post_init__(self):
        if self.series not in _RANK_OK:
            raise RootSystemError(f"unknown series {self.series!r}")
        if not _RANK_OK[self.series](self.rank):
            raise RootSystemError(f"invalid rank {self.rank} for type {self.series}")

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", text)
        if not m:
            raise RootSystemError(f"cannot parse Cartan type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.series}{self.rank}"


def _vec(*xs) -> Vector:
    return tuple(Fraction(x) for x in xs)


def _unit(n: int, i: int, c=1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def _simple_roots(ct: CartanType) -> list[Vector]:
    n, s = ct.rank, ct.series
    half = Fraction(1, 2)
    if s == "A":
        return [tuple(a - b for a, b in zip(_unit(n + 1, i), _unit(n + 1, i + 1))) for i in range(n)]
    if s in "BCD":
        roots = [tuple(a - b for a, b in zip(_unit(n, i), _unit(n, i + 1))) for i in range(n - 1)]
        if s == "B":
            roots.append(tuple(_unit(n, n - 1)))
        elif s == "C":
            roots.append(tuple(_unit(n, n - 1, 2)))
        else:
            v = _unit(n, n - 1)
            v[n - 2] = Fraction(1)
            roots.append(tuple(v))
        return roots
    if s == "E":
        e8 = [
            _vec(half, -half, -half, -half, -half, -half, -half, half),
            _vec(1, 1, 0, 0, 0, 0, 0, 0),
        ]
        for i in range(6):
            v = [Fraction(0)] * 8
            v[i + 1], v[i] = Fraction(1), Fraction(-1)
            e8.append(tuple(v))
        return e8[:n]
    if s == "F":
        return [
            _vec(0, 1, -1, 0),
            _vec(0, 0, 1, -1),
            _vec(0, 0, 0, 1),
            _vec(half, -half, -half, -half),
        ]
    if s == "G":
        return [_vec(1, -1, 0), _vec(-2, 1, 1)]
    raise RootSystemError(str(ct))  # pragma: no cover


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class Root:
    """A root, with its expansion in simple roots and its coroot in simple coroots."""

    index: int
    coords: Vector
    coeffs: tuple[int, ...]
    coroot_coeffs: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def positive(self) -> bool:
        return self.height > 0


class RootDatum:
    """Immutable root datum for one Cartan type.

    Roots are indexed ``0..N-1`` (positive, ordered by height then
    lexicographically) and ``N..2N-1`` (their negatives, same order).
    Subsets of simple roots are handled as frozensets of 1-based
    Bourbaki indices throughout the package.
    """

    def __init__(self, cartan_type: CartanType):
        self.cartan_type = cartan_type
        self.rank = cartan_type.rank
        self.simple_roots: list[Vector] = _simple_roots(cartan_type)
        self.dim = len(self.simple_roots[0])
        sq = [dot(a, a) for a in self.simple_roots]
        self._sq = sq
        n = self.rank
        # cartan[i][j] = <alpha_i, alpha_j^vee>
        self.cartan = tuple(
            tuple(int(2 * dot(self.simple_roots[i], self.simple_roots[j]) / sq[j]) for j in range(n))
            for i in range(n)
        )
        self._build_roots()

    # -- construction --------------------------------------------------
    def _build_roots(self) -> None:
        n = self.rank
        A = self.cartan
        seen = set()
        frontier = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        seen.update(frontier)
        while frontier:
            nxt = []
            for c in frontier:
                for i in range(n):
                    p = sum(c[j] * A[j][i] for j in range(n))
                    if p == 0:
                        continue
                    d = list(c)
                    d[i] -= p
                    d = tuple(d)
                    if d not in seen:
                        seen.add(d)
                        nxt.append(d)
            frontier = nxt
        pos = sorted((c for c in seen if sum(c) > 0), key=lambda c: (sum(c), tuple(-x for x in c)))
        N = len(pos)
        self.n_pos = N
        roots: list[Root] = []
        all_coeffs = pos + [tuple(-x for x in c) for c in pos]
        for idx, c in enumerate(all_coeffs):
            coords = tuple(
                sum((c[j] * self.simple_roots[j][k] for j in range(n)), Fraction(0)) for k in range(self.dim)
            )
            b2 = dot(coords, coords)
            cor = tuple(int(c[j] * self._sq[j] / b2) for j in range(n))
            roots.append(Root(idx, coords, c, cor))
        self.roots: tuple[Root, ...] = tuple(roots)
        self.root_index = {r.coeffs: r.index for r in roots}
        self._coord_index = {r.coords: r.index for r in roots}

    # -- basic accessors -----------------------------------------------
    @property
    def positive_roots(self) -> tuple[Root, ...]:
        return self.roots[: self.n_pos]

    def negate_index(self, k: int) -> int:
        N = self.n_pos
        return k + N if k < N else k - N

    def root(self, beta) -> Root:
        """Look up a root given as a Root, an index, or epsilon coordinates."""
        if isinstance(beta, Root):
            return beta
        if isinstance(beta, int):
            return self.roots[beta]
        key = tuple(Fraction(x) for x in beta)
        if key not in self._coord_index:
            raise RootSystemError(f"{beta} is not a root of {self.cartan_type}")
        return self.roots[self._coord_index[key]]

    def index_set(self) -> frozenset[int]:
        return frozenset(range(1, self.rank + 1))

    @cached_property
    def rho(self) -> Vector:
        total = [Fraction(0)] * self.dim
        for r in self.positive_roots:
            for k in range(self.dim):
                total[k] += r.coords[k]
        return tuple(x / 2 for x in total)

    @cached_property
    def fundamental_weights(self) -> tuple[Vector, ...]:
        """Fundamental weights (in the span of the roots), 0-based list."""
        import sympy

        A = sympy.Matrix(self.rank, self.rank, lambda i, j: self.cartan[i][j])
        C = A.inv()
        out = []
        for i in range(self.rank):
            v = [Fraction(0)] * self.dim
            for j in range(self.rank):
                cij = Fraction(int(C[i, j].p), int(C[i, j].q))
                if cij:
                    for k in range(self.dim):
                        v[k] += cij * self.simple_roots[j][k]
            out.append(tuple(v))
        return tuple(out)

    def fundamental_weight(self, i: int) -> Vector:
        """Fundamental weight with 1-based Bourbaki index ``i``."""
        return self.fundamental_weights[i - 1]

    # -- weights -------------------------------------------------------
    def weight(self, coords: Iterable) -> Vector:
        w = tuple(Fraction(x) for x in coords)
        if len(w) != self.dim:
            raise RootSystemError(f"weight must have {self.dim} coordinates")
        return w

    def pairing(self, lam: Sequence[Fraction], beta) -> Fraction:
        """Exact value of ``<lam, beta^vee>``."""
        r = self.root(beta)
        return 2 * dot(lam, r.coords) / dot(r.coords, r.coords)

    def reflect(self, lam: Sequence[Fraction], beta) -> Vector:
        r = self.root(beta)
        p = self.pairing(lam, r)
        return tuple(x - p * a for x, a in zip(lam, r.coords))

    def labels(self, lam: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Pairings with the simple coroots."""
        return tuple(self.pairing(lam, i) for i in range(self.rank))

    def int_labels(self, lam: Sequence[Fraction]) -> tuple[int, ...]:
        labels = self.labels(lam)
        if any(x.denominator != 1 for x in labels):
            raise RootSystemError(f"weight {lam} is not integral")
        return tuple(int(x) for x in labels)

    def from_labels(self, labels: Sequence[int]) -> Vector:
        v = [Fraction(0)] * self.dim
        for a, om in zip(labels, self.fundamental_weights):
            if a:
                for k in range(self.dim):
                    v[k] += a * om[k]
        return tuple(v)

    def is_integral(self, lam: Sequence[Fraction]) -> bool:
        return all(x.denominator == 1 for x in self.labels(lam))

    def label_pairing(self, labels: Sequence[int], beta_index: int) -> int:
        """``<lam, beta^vee>`` for an integral weight given by its labels."""
        return sum(c * a for c, a in zip(self.roots[beta_index].coroot_coeffs, labels))

    @staticmethod
    def label_reflect(labels: Sequence[int], i: int, cartan) -> tuple[int, ...]:
        """Apply the simple reflection with 0-based index ``i`` to label coordinates."""
        a = labels[i]
        if a == 0:
            return tuple(labels)
        row = cartan[i]
        return tuple(x - a * r for x, r in zip(labels, row))

    def positive_roots_of(self, I: Iterable[int]) -> list[Root]:
        """Positive roots of the parabolic subsystem spanned by ``I`` (1-based)."""
        I = set(I)
        return [r for r in self.positive_roots if all(c == 0 or (j + 1) in I for j, c in enumerate(r.coeffs))]

    def dominance(self, lam: Sequence[Fraction], I: Iterable[int]) -> str:
        """Classify an integral weight relative to the parabolic subsystem ``Phi_I``.

        Returns ``"dominant"`` (in Lambda_I^+), ``"singular"`` (some root of
        ``Phi_I`` pairs to zero) or ``"other"``.
        """
        if not self.is_integral(lam):
            raise RootSystemError(f"weight {lam} is not integral")
        I = frozenset(I)
        if all(self.pairing(lam, i - 1) > 0 for i in I):
            return "dominant"
        if any(self.pairing(lam, r) == 0 for r in self.positive_roots_of(I)):
            return "singular"
        return "other"

    def weyl_dim(self, lam: Sequence[Fraction], I: Iterable[int]) -> int:
        """Dimension of the simple Levi module ``F(lam - rho)`` for ``lam`` in Lambda_I^+."""
        I = frozenset(I)
        if self.dominance(lam, I) != "dominant":
            raise RootSystemError(f"weight {lam} is not in Lambda_I^+ for I={sorted(I)}")
        rho = self.rho
        roots = self.positive_roots_of(I)
        value = prod((self.pairing(lam, r) / self.pairing(rho, r) for r in roots), start=Fraction(1))
        assert value.denominator == 1
        return int(value)

    def __repr__(self) -> str:
        return f"RootDatum({self.cartan_type})"


_CACHE: dict[CartanType, RootDatum] = {}


def build(ct) -> RootDatum:
    """Root datum for a Cartan type (given as ``CartanType`` or a string like ``"E7"``)."""
    if isinstance(ct, str):
        ct = CartanType.parse(ct)
    if ct not in _CACHE:
        _CACHE[ct] = RootDatum(ct)
    return _CACHE[ct]


def format_weight(lam: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(x) for x in lam) + ")"


def _component_order(rank: int, n_pos: int, simply_laced: bool) -> int:
    """Order of an irreducible Weyl group from its rank, number of positive
    roots and whether it is simply laced (E6 and B6 both have 36 roots)."""
    if n_pos == rank * (rank + 1) // 2:
        return factorial(rank + 1)
    if rank == 2 and n_pos == 6:
        return 12
    if not simply_laced and n_pos == rank * rank:
        return 2**rank * factorial(rank)
    if rank == 4 and n_pos == 24:
        return 1152
    if n_pos == rank * (rank - 1):
        return 2 ** (rank - 1) * factorial(rank)
    return {(6, 36): 51840, (7, 63): 2903040, (8, 120): 696729600}[(rank, n_pos)]


def weyl_group_order(R: RootDatum, I: Iterable[int]) -> int:
    """Order of the parabolic subgroup ``W_I`` (1-based ``I``), from its irreducible components."""
    I = sorted(set(I))
    seen: set[int] = set()
    order = 1
    for start in I:
        if start in seen:
            continue
        comp, stack = set(), [start]
        while stack:
            i = stack.pop()
            if i in comp:
                continue
            comp.add(i)
            stack.extend(j for j in I if j not in comp and R.cartan[i - 1][j - 1] != 0)
        seen |= comp
        n_pos = len(R.positive_roots_of(comp))
        simply_laced = all(R.cartan[i - 1][j - 1] in (0, -1) for i in comp for j in comp if i != j)
        order *= _component_order(len(comp), n_pos, simply_laced)
    return order

"""Blocks of parabolic category O: weights, decomposition matrices, socular data.

A block is fixed by a root system, the Levi set ``I`` and the singular set
``J`` of an anti-dominant integral weight ``lam``.  Its generalized Verma
modules are indexed by ``^IW^J`` sorted by decreasing length, so index 1
is the highest weight.  Module and simple indices in the public objects
are 1-based; matrices are plain 0-based arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .parabolic import ParabolicKL, parabolic
from .polynomial import IntPoly
from .root_system import CartanType, RootDatum, Vector, build, format_weight
from .weyl_group import QuotientSet, WeylGroup, as_subset, weyl_group


@dataclass(frozen=True)
class BasicSystem:
    cartan_type: CartanType
    i: int
    k: int
    semisimple: bool

    def __str__(self) -> str:
        return f"({self.cartan_type},{self.i},{self.k})"


_BASIC = {
    "A": [("A1", 1, 1), ("A2", 1, 1), ("A2", 1, 2), ("A2", 2, 1), ("A2", 2, 2), ("A3", 2, 2)],
    "B": [("B2", 1, 1), ("B2", 1, 2), ("B2", 2, 1), ("B2", 2, 2), ("B3", 2, 2), ("B3", 2, 3), ("B3", 3, 2), ("B4", 3, 3)],
    "C": [("C2", 1, 1), ("C2", 1, 2), ("C2", 2, 1), ("C2", 2, 2), ("C3", 2, 2), ("C3", 2, 3), ("C3", 3, 2), ("C4", 3, 3)],
    "D": [("D4", 2, 2), ("D5", 3, 3)],
    "E": [
        ("E6", 4, 4), ("E7", 4, 4), ("E7", 4, 5), ("E7", 5, 4), ("E8", 3, 4),
        ("E8", 4, 3), ("E8", 4, 4), ("E8", 4, 5), ("E8", 5, 4), ("E8", 5, 5),
    ],
    "F": [("F4", 2, 2), ("F4", 2, 3), ("F4", 3, 2), ("F4", 3, 3)],
    "G": [("G2", 1, 1), ("G2", 1, 2), ("G2", 2, 1), ("G2", 2, 2)],
}
_NON_SEMISIMPLE = {("A1", 1, 1), ("B3", 2, 2), ("C3", 2, 2), ("E7", 4, 4), ("E8", 4, 5), ("E8", 5, 4), ("E8", 4, 4)}


def classify_basic_systems() -> list[BasicSystem]:
    """The complete list of basic systems, with the non-semisimple ones flagged."""
    out = []
    for series in "ABCDEFG":
        for t, i, k in _BASIC[series]:
            out.append(BasicSystem(CartanType.parse(t), i, k, (t, i, k) not in _NON_SEMISIMPLE))
    return out


@dataclass
class BlockDescriptor:
    root_datum: RootDatum
    group: WeylGroup
    I: frozenset[int]
    J: frozenset[int]
    lam: Vector
    quotient: QuotientSet
    weights: tuple[Vector, ...]
    labels: tuple[tuple[int, ...], ...]
    basic: tuple[int, int] | None = None

    @property
    def cartan_type(self) -> CartanType:
        return self.root_datum.cartan_type

    @property
    def size(self) -> int:
        return len(self.weights)

    def __len__(self) -> int:
        return self.size

    @property
    def lengths(self) -> tuple[int, ...]:
        return self.quotient.lengths

    @cached_property
    def index_of_labels(self) -> dict[tuple[int, ...], int]:
        """1-based module index keyed by the simple-coroot labels of its weight."""
        return {lab: k + 1 for k, lab in enumerate(self.labels)}

    def index_of(self, weight: Sequence) -> int | None:
        return self.index_of_labels.get(self.root_datum.int_labels(weight))

    @property
    def kl(self) -> ParabolicKL:
        return parabolic(self.group, self.I, self.J)

    def describe(self) -> dict:
        return {
            "type": self.cartan_type.series,
            "rank": self.cartan_type.rank,
            "I": sorted(self.I),
            "J": sorted(self.J),
        }

    def __repr__(self) -> str:
        return f"BlockDescriptor({self.cartan_type}, I={sorted(self.I)}, J={sorted(self.J)}, n={self.size})"


def anti_dominant_weight(R: RootDatum, J: Iterable[int]) -> Vector:
    """``-sum of fundamental weights outside J``: integral, anti-dominant, singular exactly on J."""
    J = as_subset(J)
    return R.from_labels([0 if (i + 1) in J else -1 for i in range(R.rank)])


def build_block(ct, I: Iterable[int], J: Iterable[int], basic: tuple[int, int] | None = None) -> BlockDescriptor:
    R = build(ct)
    W = weyl_group(R.cartan_type)
    I, J = as_subset(I), as_subset(J)
    full = W.index_set()
    if not (I <= full and J <= full):
        raise ValueError(f"subsets must lie in {sorted(full)}")
    lam = anti_dominant_weight(R, J)
    lam_labels = R.int_labels(lam)
    Q = W.enumerate_quotient(I, J)
    wI = W.longest_element(I)
    labels = tuple((wI * y).act_labels(lam_labels) for y in Q)
    weights = tuple(R.from_labels(lab) for lab in labels)
    block = BlockDescriptor(R, W, I, J, lam, Q, weights, labels, basic)
    for mu in labels:
        assert all(mu[i - 1] > 0 for i in I), "weight outside Lambda_I^+"
    return block


def build_basic(ct, i: int, k: int) -> BlockDescriptor:
    """Block of the basic system ``(ct, i, k)``: ``I`` misses ``alpha_i``, ``lam = w_0 varpi_k``."""
    R = build(ct)
    W = weyl_group(R.cartan_type)
    full = W.index_set()
    if i not in full or k not in full:
        raise ValueError(f"indices must lie in {sorted(full)}")
    return build_block(R.cartan_type, full - {i}, W.minus_w0(full - {k}), basic=(i, k))


# -- decomposition matrices ------------------------------------------------


@dataclass
class GradedMatrix:
    """Square matrix of entries ``sign^off * v^off * f(v^{-2})`` with ``f`` in ``Z[q]``.

    ``signed`` selects ``sign = -1``; otherwise the sign is ``+1``.
    """

    entries: list[list[IntPoly]]
    offsets: list[list[int]]
    signed: bool = False

    @property
    def size(self) -> int:
        return len(self.entries)

    def laurent(self, r: int, c: int) -> dict[int, int]:
        """Entry as ``{exponent of v: coefficient}``."""
        p = self.entries[r][c]
        off = self.offsets[r][c]
        sign = -1 if (self.signed and off % 2) else 1
        return {off - 2 * k: sign * a for k, a in p.terms()}

    def at_one(self) -> list[list[int]]:
        return [[sum(self.laurent(r, c).values()) for c in range(self.size)] for r in range(self.size)]

    def is_unitriangular(self) -> bool:
        n = self.size
        for r in range(n):
            if self.laurent(r, r) != {0: 1}:
                return False
            for c in range(n):
                if c != r and self.entries[r][c] != 0 and self.entries[c][r] != 0:
                    return False
        return True


def _laurent_mul_add(acc: dict[int, int], a: dict[int, int], b: dict[int, int]) -> None:
    for i, x in a.items():
        for j, y in b.items():
            acc[i + j] = acc.get(i + j, 0) + x * y


def graded_decomposition(b: BlockDescriptor) -> GradedMatrix:
    """Row ``x`` lists the graded multiplicities of simples in the module indexed by ``x``."""
    n, L = b.size, b.lengths
    kl = b.kl
    entries = [[kl.Q(r, c) for c in range(n)] for r in range(n)]
    offsets = [[L[r] - L[c] for c in range(n)] for r in range(n)]
    return GradedMatrix(entries, offsets)


def graded_inverse(b: BlockDescriptor) -> GradedMatrix:
    """Entry ``(x, y)``: graded coefficient of the module ``x`` in the simple ``y``."""
    n, L = b.size, b.lengths
    kl = b.kl
    entries = [[kl.P(r, c) for c in range(n)] for r in range(n)]
    offsets = [[L[c] - L[r] for c in range(n)] for r in range(n)]
    return GradedMatrix(entries, offsets, signed=True)


def inverse_defect(D: GradedMatrix, Dinv: GradedMatrix) -> list[tuple[int, int, dict[int, int]]]:
    """Entries where ``D * Dinv^T`` differs from the identity."""
    n = D.size
    bad = []
    for r in range(n):
        for c in range(n):
            acc: dict[int, int] = {}
            for k in range(n):
                if D.entries[r][k] != 0 and Dinv.entries[c][k] != 0:
                    _laurent_mul_add(acc, D.laurent(r, k), Dinv.laurent(c, k))
            acc = {e: v for e, v in acc.items() if v}
            if acc != ({0: 1} if r == c else {}):
                bad.append((r, c, acc))
    return bad


def ungraded(b: BlockDescriptor, which: str = "decomposition") -> list[list[int]]:
    if which == "decomposition":
        return graded_decomposition(b).at_one()
    if which == "inverse":
        return graded_inverse(b).at_one()
    raise ValueError(f"unknown matrix {which!r}")


# -- Bernstein degrees and socular weights ---------------------------------


def gk_dimension(b: BlockDescriptor) -> int:
    """``|Phi^+ \\ Phi_I|``, the GK dimension of every generalized Verma module in the block."""
    R = b.root_datum
    return R.n_pos - len(R.positive_roots_of(b.I))


def module_degrees(b: BlockDescriptor) -> list[int]:
    """Bernstein degrees of the generalized Verma modules, by Weyl's dimension formula."""
    return [b.root_datum.weyl_dim(mu, b.I) for mu in b.weights]


def simple_degrees(b: BlockDescriptor, decomposition: Sequence[Sequence[int]]) -> list[int]:
    """Solve ``c(M_s) = sum_t [M_s : L_t] c(L_t)`` from the bottom up."""
    n = b.size
    cm = module_degrees(b)
    out = [0] * n
    for s in reversed(range(n)):
        rest = sum(decomposition[s][t] * out[t] for t in range(s + 1, n))
        if decomposition[s][s] != 1:
            raise ValueError(f"diagonal entry {s + 1} is not 1")
        out[s] = cm[s] - rest
        if out[s] < 0:
            raise ValueError(f"negative Bernstein degree for simple {s + 1}")
    return out


def socular_data(b: BlockDescriptor, decomposition: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Pairs ``(t, m(t))`` of socular indices and their maximal module (1-based)."""
    degs = simple_degrees(b, decomposition)
    out = []
    for t in range(b.size):
        if degs[t] > 0:
            rows = [s for s in range(b.size) if decomposition[s][t]]
            m = min(rows)
            if decomposition[m][t] != 1:
                raise ValueError(f"multiplicity of L_{t + 1} in M_{m + 1} is not 1")
            out.append((t + 1, m + 1))
    return out


# -- Ext^1 poset -----------------------------------------------------------


@dataclass
class Poset:
    """Nonzero ``Ext^1`` pairs ``(s, t)``, ``s < t``; drawings use the covering relation."""

    lengths: tuple[int, ...]
    edges: list[tuple[int, int]] = field(default_factory=list)

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Edges not implied by transitivity of the order they generate."""
        n = len(self.lengths)
        above: dict[int, set[int]] = {s: set() for s in range(1, n + 1)}
        for s, t in self.edges:
            above[s].add(t)
        reach: dict[int, set[int]] = {}
        for s in range(n, 0, -1):
            r: set[int] = set()
            for t in above[s]:
                r |= {t} | reach[t]
            reach[s] = r
        return sorted((s, t) for s, t in self.edges if not any(t in reach[u] for u in above[s] if u != t))

    def to_dot(self, name: str = "ext1") -> str:
        lines = [f"graph {name} {{", "  node [shape=circle];"]
        by_len: dict[int, list[int]] = {}
        for k, l in enumerate(self.lengths):
            by_len.setdefault(l, []).append(k + 1)
        for l in sorted(by_len, reverse=True):
            nodes = " ".join(str(k) for k in by_len[l])
            lines.append(f"  {{ rank=same; {nodes}; }}")
        for s, t in self.hasse_edges():
            lines.append(f"  {s} -- {t};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "nodes": [{"index": k + 1, "length": l} for k, l in enumerate(self.lengths)],
            "edges": [{"from": s, "to": t} for s, t in self.edges],
            "covering": [{"from": s, "to": t} for s, t in self.hasse_edges()],
        }


def ext1_poset(b: BlockDescriptor, filtrations) -> Poset:
    """Edge ``s -- t`` whenever ``L_t`` occurs in the first radical layer of ``M_s``."""
    edges = set()
    for f in filtrations:
        if len(f.layers) > 1:
            for t, m in f.layers[1]:
                if m:
                    edges.add((f.index, t))
    return Poset(b.lengths, sorted(edges))


def weight_table(b: BlockDescriptor) -> list[str]:
    return [format_weight(mu) for mu in b.weights]

"""Weyl groups acting on root indices, Bruhat order, and (double) parabolic quotients.

A group element is stored as the tuple of images of the positive roots
under the root-index numbering of :class:`~gverma.root_system.RootDatum`
(``k`` and ``k + N`` are a root and its negative).  Subsets of simple
reflections are frozensets of 1-based indices; internally everything is
0-based.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .root_system import CartanType, RootDatum, build

Subset = frozenset


def as_subset(items: Iterable[int] | None) -> frozenset[int]:
    return frozenset(int(i) for i in (items or ()))


def format_word(word: Sequence[int]) -> str:
    """Comma-separated 1-based generator indices; the identity is the empty string."""
    return ",".join(str(i) for i in word)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "e"):
        return ()
    return tuple(int(p) for p in text.split(","))


class WeylGroupError(ValueError):
    pass


class WeylElem:
    """An element of a finite Weyl group.

    ``img[k]`` is the index of ``w(beta_k)`` for each positive root ``beta_k``.
    Equality and hashing only look at ``img``; elements of different groups
    must not be mixed.
    """

    __slots__ = ("group", "img", "_word", "_length", "__weakref__")

    def __init__(self, group: "WeylGroup", img: tuple[int, ...]):
        self.group = group
        self.img = img
        self._word = None
        self._length = None

    @property
    def length(self) -> int:
        if self._length is None:
            N = self.group.N
            self._length = sum(1 for j in self.img if j >= N)
        return self._length

    def __len__(self) -> int:
        return self.length

    @property
    def word(self) -> tuple[int, ...]:
        """ShortLex-minimal reduced word, 1-based."""
        if self._word is None:
            g = self.group
            N = g.N
            inv = self.inverse()
            out = []
            img = inv.img
            while True:
                for s in range(g.rank):
                    if img[s] >= N:
                        break
                else:
                    break
                out.append(s + 1)
                img = g._right_mul_img(img, s)
            self._word = tuple(out)
            self._length = len(out)
        return self._word

    @property
    def word_str(self) -> str:
        return format_word(self.word)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.length, self.word)

    def inverse(self) -> "WeylElem":
        g = self.group
        N = g.N
        inv = [0] * N
        for k, j in enumerate(self.img):
            if j < N:
                inv[j] = k
            else:
                inv[j - N] = k + N
        return WeylElem(g, tuple(inv))

    def __mul__(self, other: "WeylElem") -> "WeylElem":
        if other.group is not self.group:
            raise WeylGroupError("elements of different groups")
        a = self.img
        N = self.group.N
        out = tuple(a[j] if j < N else _neg(a[j - N], N) for j in other.img)
        return WeylElem(self.group, out)

    def act_root(self, k: int) -> int:
        N = self.group.N
        return self.img[k] if k < N else _neg(self.img[k - N], N)

    def right_descents(self) -> frozenset[int]:
        N = self.group.N
        return frozenset(s + 1 for s in range(self.group.rank) if self.img[s] >= N)

    def left_descents(self) -> frozenset[int]:
        return self.inverse().right_descents()

    def act_labels(self, labels: Sequence[int]) -> tuple[int, ...]:
        """Action on an integral weight written in simple-coroot labels."""
        cart = self.group.root_datum.cartan
        out = tuple(labels)
        for s in reversed(self.word):
            out = RootDatum.label_reflect(out, s - 1, cart)
        return out

    def act(self, lam):
        """Action on a weight in epsilon coordinates."""
        R = self.group.root_datum
        out = tuple(lam)
        for s in reversed(self.word):
            out = R.reflect(out, s - 1)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElem) and other.img == self.img

    def __hash__(self) -> int:
        return hash(self.img)

    def __repr__(self) -> str:
        return f"WeylElem({self.group.cartan_type}, [{self.word_str}])"


def _neg(k: int, N: int) -> int:
    return k + N if k < N else k - N


class WeylGroup:
    """The Weyl group of a root datum."""

    def __init__(self, root_datum: RootDatum):
        self.root_datum = root_datum
        self.cartan_type = root_datum.cartan_type
        self.rank = root_datum.rank
        N = self.N = root_datum.n_pos
        roots = root_datum.roots
        cart = root_datum.cartan
        table = []
        for s in range(self.rank):
            row = []
            for r in roots:
                # s_s(beta) = beta - <beta, alpha_s^vee> alpha_s
                p = sum(r.coeffs[j] * cart[j][s] for j in range(self.rank))
                c = list(r.coeffs)
                c[s] -= p
                row.append(root_datum.root_index[tuple(c)])
            table.append(tuple(row))
        self.sref = tuple(table)
        self._bruhat: dict[tuple, bool] = {}
        self._lock = threading.Lock()
        self._coset_spaces: dict[frozenset, CosetSpace] = {}
        self._space_lock = threading.Lock()

    # -- elements ------------------------------------------------------
    @cached_property
    def identity(self) -> WeylElem:
        return WeylElem(self, tuple(range(self.N)))

    def simple(self, s: int) -> WeylElem:
        """Simple reflection, 1-based index."""
        return self.left_mul(s, self.identity)

    def left_mul(self, s: int, w: WeylElem) -> WeylElem:
        row = self.sref[s - 1]
        return WeylElem(self, tuple(row[j] for j in w.img))

    def right_mul(self, w: WeylElem, s: int) -> WeylElem:
        return WeylElem(self, self._right_mul_img(w.img, s - 1))

    def _right_mul_img(self, img: tuple[int, ...], s: int) -> tuple[int, ...]:
        N = self.N
        row = self.sref[s]
        return tuple(img[j] if j < N else _neg(img[j - N], N) for j in row[:N])

    def from_word(self, word: Iterable[int]) -> WeylElem:
        img = tuple(range(self.N))
        for s in word:
            if not 1 <= s <= self.rank:
                raise WeylGroupError(f"generator {s} out of range")
            img = self._right_mul_img(img, s - 1)
        return WeylElem(self, img)

    def parse(self, text: str) -> WeylElem:
        return self.from_word(parse_word(text))

    def multiply(self, a: WeylElem, b: WeylElem) -> WeylElem:
        return a * b

    def longest_element(self, I: Iterable[int] | None = None) -> WeylElem:
        I = sorted(self.index_set() if I is None else as_subset(I))
        w = self.identity
        N = self.N
        grew = True
        while grew:
            grew = False
            for s in I:
                if w.img[s - 1] < N:
                    w = self.right_mul(w, s)
                    grew = True
        return w

    @cached_property
    def w0(self) -> WeylElem:
        return self.longest_element()

    def index_set(self) -> frozenset[int]:
        return frozenset(range(1, self.rank + 1))

    def diagram_involution(self) -> dict[int, int]:
        """The map ``i -> j`` with ``-w_0 alpha_i = alpha_j``."""
        w0 = self.w0
        N = self.N
        return {s + 1: w0.img[s] - N + 1 for s in range(self.rank)}

    def minus_w0(self, I: Iterable[int]) -> frozenset[int]:
        inv = self.diagram_involution()
        return frozenset(inv[i] for i in as_subset(I))

    def parabolic_elements(self, I: Iterable[int]) -> list[WeylElem]:
        """All elements of the standard parabolic subgroup ``W_I``, by length then ShortLex."""
        I = sorted(as_subset(I))
        seen = {self.identity.img: self.identity}
        queue = deque([self.identity])
        while queue:
            w = queue.popleft()
            for s in I:
                u = self.right_mul(w, s)
                if u.img not in seen:
                    seen[u.img] = u
                    queue.append(u)
        return sorted(seen.values(), key=WeylElem.sort_key)

    def elements(self) -> list[WeylElem]:
        return self.parabolic_elements(self.index_set())

    # -- Bruhat order --------------------------------------------------
    def bruhat_leq(self, x: WeylElem, y: WeylElem) -> bool:
        """Bruhat order by the lifting property, memoized."""
        if x.group is not self or y.group is not self:
            raise WeylGroupError("elements of different groups")
        return self._leq(x, y)

    def _leq(self, x: WeylElem, y: WeylElem) -> bool:
        lx, ly = x.length, y.length
        if lx > ly:
            return False
        if lx == ly:
            return x.img == y.img
        if lx == 0:
            return True
        key = (x.img, y.img)
        hit = self._bruhat.get(key)
        if hit is not None:
            return hit
        # pick a left descent s of y: s is a right descent of y^{-1}
        N = self.N
        yinv = y.inverse()
        s = next(t for t in range(self.rank) if yinv.img[t] >= N)
        sy = self.left_mul(s + 1, y)
        sx = self.left_mul(s + 1, x)
        lower = sx if sx.length < lx else x
        result = self._leq(lower, sy)
        with self._lock:
            self._bruhat[key] = result
        return result

    # -- quotients -----------------------------------------------------
    def in_left_quotient(self, w: WeylElem, I: Iterable[int]) -> bool:
        """``w`` is of minimal length in ``W_I w``."""
        lw = w.length
        return all(self.left_mul(s, w).length > lw for s in as_subset(I))

    def in_double_quotient(self, w: WeylElem, I: Iterable[int], J: Iterable[int]) -> bool:
        """Direct test of the defining conditions of ``^IW^J``."""
        I = as_subset(I)
        if not self.in_left_quotient(w, I):
            return False
        for a in as_subset(J):
            ws = self.right_mul(w, a)
            if ws.length != w.length + 1 or not self.in_left_quotient(ws, I):
                return False
        return True

    def enumerate_quotient(self, I: Iterable[int], J: Iterable[int]) -> "QuotientSet":
        """All elements of ``^IW^J``, sorted by decreasing length then ShortLex.

        The search runs over the orbit of a dominant weight whose stabilizer
        is ``W_I``: the coset ``W_I x`` corresponds to ``x^{-1} omega``, and
        ``x`` lies in ``^IW^J`` exactly when ``x^{-1} omega`` pairs
        positively with every simple coroot in ``J``.
        """
        I, J = as_subset(I), as_subset(J)
        omega = tuple(0 if (i + 1) in I else 1 for i in range(self.rank))
        cart = self.root_datum.cartan
        Jidx = [j - 1 for j in sorted(J)]
        parent: dict[tuple, tuple] = {omega: None}
        depth = {omega: 0}
        frontier = [omega]
        hits = []
        level = 0
        while frontier:
            nxt = []
            for nu in frontier:
                if all(nu[j] > 0 for j in Jidx):
                    hits.append(nu)
                for s in range(self.rank):
                    if nu[s] > 0:
                        mu = RootDatum.label_reflect(nu, s, cart)
                        if mu not in parent:
                            parent[mu] = (nu, s)
                            depth[mu] = level + 1
                            nxt.append(mu)
            frontier = nxt
            level += 1
        elems = []
        for nu in hits:
            word = []
            cur = nu
            while parent[cur] is not None:
                cur, s = parent[cur]
                word.append(s + 1)
            # x = s_{a1} s_{a2} ... along the path from omega
            x = self.from_word(reversed(word))
            assert x.length == depth[nu]
            elems.append(x)
        elems.sort(key=lambda w: (-w.length, w.word))
        return QuotientSet(self, I, J, tuple(elems), orbit_size=len(parent))

    def quotient_bijections(self, w: WeylElem, I: Iterable[int], J: Iterable[int]) -> tuple[WeylElem, WeylElem]:
        """Images of ``w`` under ``w -> w_J w^{-1} w_I w_0`` and ``w -> w_0 w_J w^{-1} w_I``."""
        I, J = as_subset(I), as_subset(J)
        if not self.in_double_quotient(w, I, J):
            raise WeylGroupError(f"{w} is not in the double quotient")
        wI, wJ, w0 = self.longest_element(I), self.longest_element(J), self.w0
        winv = w.inverse()
        f = wJ * winv * wI * w0
        g = w0 * wJ * winv * wI
        mI, mJ = self.minus_w0(I), self.minus_w0(J)
        assert self.in_double_quotient(f, J, mI)
        assert self.in_double_quotient(g, mJ, I)
        return f, g

    def coset_space(self, J: Iterable[int]) -> "CosetSpace":
        J = as_subset(J)
        with self._space_lock:
            if J not in self._coset_spaces:
                self._coset_spaces[J] = CosetSpace(self, J)
            return self._coset_spaces[J]

    def __repr__(self) -> str:
        return f"WeylGroup({self.cartan_type})"


@dataclass(frozen=True)
class QuotientSet:
    group: WeylGroup
    I: frozenset[int]
    J: frozenset[int]
    elements: tuple[WeylElem, ...]
    orbit_size: int = 0

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k: int) -> WeylElem:
        return self.elements[k]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(w.length for w in self.elements)

    def index(self, w: WeylElem) -> int:
        return self.elements.index(w)


class CosetSpace:
    """The left action of ``W`` on ``W / W_J`` with lengths and ascent data.

    Cosets are numbered by increasing length of their minimal representative.
    ``lmul[s, i]`` is the coset of ``s * x_i`` and ``kind[s, i]`` is ``+1``
    (length goes up), ``-1`` (goes down) or ``0`` (``s`` fixes the coset).
    With ``J`` empty this is the regular representation of ``W`` itself.
    """

    def __init__(self, group: WeylGroup, J: Iterable[int]):
        self.group = group
        self.J = as_subset(J)
        rank = group.rank
        cart = group.root_datum.cartan
        omega = tuple(0 if (i + 1) in self.J else 1 for i in range(rank))
        self.omega = omega
        index = {omega: 0}
        labels = [omega]
        lengths = [0]
        parent = [(-1, -1)]
        pos = 0
        while pos < len(labels):
            nu = labels[pos]
            for s in range(rank):
                if nu[s] > 0:
                    mu = RootDatum.label_reflect(nu, s, cart)
                    if mu not in index:
                        index[mu] = len(labels)
                        labels.append(mu)
                        lengths.append(lengths[pos] + 1)
                        parent.append((pos, s))
            pos += 1
        n = self.size = len(labels)
        self.index = index
        self.labels = labels
        self.parent = parent
        self.min_length = np.asarray(lengths, dtype=np.int64)
        self.wJ_length = group.longest_element(self.J).length
        self.max_length = self.min_length + self.wJ_length
        lab = np.asarray(labels, dtype=np.int64).reshape(n, rank)
        self.kind = np.sign(lab).T.astype(np.int8).copy()
        lmul = np.empty((rank, n), dtype=np.int64)
        for s in range(rank):
            for i, nu in enumerate(labels):
                lmul[s, i] = i if nu[s] == 0 else index[RootDatum.label_reflect(nu, s, cart)]
        self.lmul = lmul
        self._min_cache: dict[int, WeylElem] = {0: group.identity}

    def __len__(self) -> int:
        return self.size

    def min_rep(self, i: int) -> WeylElem:
        """Minimal-length representative of coset ``i``."""
        if i not in self._min_cache:
            p, s = self.parent[i]
            self._min_cache[i] = self.group.left_mul(s + 1, self.min_rep(p))
        return self._min_cache[i]

    def max_rep(self, i: int) -> WeylElem:
        return self.min_rep(i) * self.group.longest_element(self.J)

    def coset_of(self, w: WeylElem) -> int:
        """Index of the coset ``w W_J``."""
        return self.index[w.act_labels(self.omega)]

    def left_descents(self, i: int) -> frozenset[int]:
        """Left descents (1-based) of the maximal representative of coset ``i``."""
        return frozenset(s + 1 for s in range(self.group.rank) if self.kind[s, i] <= 0)


_GROUPS: dict[CartanType, WeylGroup] = {}


def weyl_group(ct) -> WeylGroup:
    R = build(ct)
    if R.cartan_type not in _GROUPS:
        _GROUPS[R.cartan_type] = WeylGroup(R)
    return _GROUPS[R.cartan_type]

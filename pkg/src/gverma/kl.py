"""Kazhdan-Lusztig polynomials.

Two independent computations live here:

* :class:`ColumnEngine` computes ``P_{x,v}`` for all ``v`` whose right
  descent set contains a fixed ``J``.  Such ``v`` are the maximal elements
  of cosets ``vW_J`` and ``P_{x,v}`` only depends on the coset of ``x``,
  so the whole computation runs on ``W / W_J``.  Columns are built by the
  standard left-multiplication recursion and stored only on rows that are
  maximal for the left descents of the column.
* :class:`ROracle` computes R-polynomials by their recursion and solves
  the triangular system that defines ``P``.  It is slow and only meant for
  small groups, as a cross-check.

:func:`kl_P` picks a column engine from the right descents of ``y`` and
goes through a :class:`KLCache`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .polynomial import ONE, ZERO, IntPoly
from .weyl_group import CosetSpace, WeylElem, WeylGroup, as_subset, format_word

# coefficients beyond this switch the column store to Python integers
_INT64_SAFE = 2**52


class ColumnEngine:
    """Lazy table of ``P_{x,v}`` for ``J``-maximal ``v``."""

    def __init__(self, space: CosetSpace):
        self.space = space
        self.group = space.group
        n = self.n = space.size
        self.lengths = space.min_length
        self.depth = int(self.lengths.max()) // 2 + 2
        self.dtype = np.int64
        # column index -> (sorted extremal rows, coefficient block)
        self.columns: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self.mu_lists: dict[int, list[tuple[int, int]]] = {}
        self._push: dict[frozenset, np.ndarray] = {}
        self._lock = threading.RLock()
        base_rows = np.array([0], dtype=np.int64)
        base_vals = np.zeros((1, self.depth), dtype=self.dtype)
        base_vals[0, 0] = 1
        self.columns[0] = (base_rows, base_vals)
        self.mu_lists[0] = []
        self.stats = {"columns": 1, "stored_rows": 1}
        assert n >= 1

    # -- helpers -------------------------------------------------------
    def left_set(self, v: int) -> frozenset[int]:
        """0-based left descents of the maximal element of coset ``v``."""
        kind = self.space.kind
        return frozenset(s for s in range(self.group.rank) if kind[s, v] <= 0)

    def push_map(self, L: frozenset[int]) -> np.ndarray:
        """Send each coset to the top of its ``W_L``-orbit (``L`` 0-based)."""
        hit = self._push.get(L)
        if hit is not None:
            return hit
        sp = self.space
        push = np.arange(self.n, dtype=np.int64)
        if L:
            order = np.argsort(-self.lengths, kind="stable")
            kind, lmul = sp.kind, sp.lmul
            Ls = sorted(L)
            for x in order:
                for s in Ls:
                    if kind[s, x] == 1:
                        push[x] = push[lmul[s, x]]
                        break
        self._push[L] = push
        return push

    def _ideal_mask(self, v: int) -> np.ndarray:
        """Cosets below ``v`` in the Bruhat order."""
        sp = self.space
        path = []
        cur = v
        while cur != 0:
            s = int(np.flatnonzero(sp.kind[:, cur] == -1)[0])
            path.append(s)
            cur = int(sp.lmul[s, cur])
        mask = np.zeros(self.n, dtype=bool)
        mask[0] = True
        for s in reversed(path):
            mask[sp.lmul[s, mask]] = True
        return mask

    def dense(self, v: int) -> np.ndarray:
        """Column ``v`` on every coset as an ``n x depth`` array."""
        rows, vals = self.columns[v]
        push = self.push_map(self.left_set(v))
        pos = np.searchsorted(rows, push)
        pos[pos >= len(rows)] = 0
        hit = rows[pos] == push
        out = np.zeros((self.n, self.depth), dtype=self.dtype)
        out[hit] = vals[pos[hit]]
        return out

    # -- computation ---------------------------------------------------
    def ensure(self, targets: Iterable[int]) -> None:
        targets = [int(t) for t in targets if int(t) not in self.columns]
        if not targets:
            return
        # one filler at a time; readers only see finished columns
        with self._lock:
            self._fill(targets)

    def _fill(self, targets: list[int]) -> None:
        mask = np.zeros(self.n, dtype=bool)
        for t in targets:
            mask |= self._ideal_mask(t)
        todo = [int(v) for v in np.flatnonzero(mask) if int(v) not in self.columns]
        todo.sort(key=lambda v: (self.lengths[v], v))
        for v in todo:
            self._compute(v)

    def _shift(self, arr: np.ndarray, k: int) -> np.ndarray:
        if k == 0:
            return arr
        out = np.zeros_like(arr)
        out[:, k:] = arr[:, : self.depth - k]
        return out

    def _compute(self, v: int) -> None:
        sp = self.space
        kind_v = sp.kind[:, v]
        s = int(np.flatnonzero(kind_v == -1)[0])
        c = int(sp.lmul[s, v])
        Pc = self.dense(c)
        ks = sp.kind[s]
        sx = sp.lmul[s]
        new = np.zeros_like(Pc)
        down = ks == -1
        fixed = ks == 0
        new[down] = Pc[sx[down]]
        new[:, 1:][down] += Pc[down][:, :-1]
        new[fixed] = Pc[fixed]
        new[:, 1:][fixed] += Pc[fixed][:, :-1]
        lv = int(self.lengths[v])
        for z, m in self.mu_lists[c]:
            if ks[z] <= 0:
                e = (lv - int(self.lengths[z])) // 2
                new -= m * self._shift(self.dense(z), e)
        up = ks == 1
        new[up] = new[sx[up]]
        if self.dtype is np.int64 and np.abs(new).max(initial=0) > _INT64_SAFE:
            self._promote()
            return self._compute(v)
        L = self.left_set(v)
        push = self.push_map(L)
        extremal = push == np.arange(self.n)
        nonzero = new.any(axis=1)
        rows = np.flatnonzero(extremal & nonzero)
        vals = new[rows].copy()
        self._store(v, rows, vals, L)

    def _store(self, v: int, rows: np.ndarray, vals: np.ndarray, L: frozenset[int]) -> None:
        sp = self.space
        lv = int(self.lengths[v])
        mus = []
        for r, row in zip(rows.tolist(), vals):
            d = lv - int(self.lengths[r])
            if d % 2 == 1:
                m = int(row[(d - 1) // 2])
                if m:
                    mus.append((r, m))
        for t in sorted(L):
            if sp.kind[t, v] == -1:
                mus.append((int(sp.lmul[t, v]), 1))
        with self._lock:
            self.columns[v] = (rows, vals)
            self.mu_lists[v] = mus
            self.stats["columns"] += 1
            self.stats["stored_rows"] += len(rows)

    def _promote(self) -> None:
        self.dtype = object
        for v, (rows, vals) in list(self.columns.items()):
            self.columns[v] = (rows, vals.astype(object))

    # -- queries -------------------------------------------------------
    def value(self, x: int, v: int) -> IntPoly:
        """``P_{x', v'}`` for any ``x'`` in coset ``x`` and ``v'`` the top of coset ``v``."""
        self.ensure([v])
        rows, vals = self.columns[v]
        p = int(self.push_map(self.left_set(v))[x])
        k = int(np.searchsorted(rows, p))
        if k < len(rows) and rows[k] == p:
            return IntPoly(int(c) for c in vals[k])
        return ZERO

    def column_values(self, v: int) -> dict[int, IntPoly]:
        """All nonzero ``P_{x,v}`` keyed by coset index."""
        self.ensure([v])
        d = self.dense(v)
        return {int(x): IntPoly(int(c) for c in d[x]) for x in np.flatnonzero(d.any(axis=1))}

    def memory_bytes(self) -> int:
        return sum(r.nbytes + (v.nbytes if v.dtype != object else v.size * 32) for r, v in self.columns.values())


# -- oracle ----------------------------------------------------------------

_B = 1 << 64


def _encode(coeffs: Iterable[int]) -> int:
    out = 0
    for c in reversed(list(coeffs)):
        out = out * _B + c
    return out


def _decode(value: int, count: int | None = None) -> list[int]:
    """Balanced base-``2^64`` digits (coefficients of the encoded polynomial)."""
    out = []
    half = _B >> 1
    while value and (count is None or len(out) < count):
        d = value % _B
        if d >= half:
            d -= _B
        out.append(d)
        value = (value - d) // _B
    return out


class ROracle:
    """Kazhdan-Lusztig polynomials through R-polynomials, for small groups.

    Polynomials are packed into single integers by evaluating at ``q = 2^64``;
    all coefficients involved stay far below ``2^63``.
    """

    def __init__(self, group: WeylGroup, max_size: int = 5000):
        space = group.coset_space(())
        if space.size > max_size:
            raise ValueError(f"group of order {space.size} too large for the oracle")
        self.group = group
        self.space = space
        n = self.n = space.size
        self.len = space.min_length.tolist()
        self.lmul = space.lmul.tolist()
        kind = space.kind
        self.first_left_descent = [int(np.flatnonzero(kind[:, v] == -1)[0]) if v else -1 for v in range(n)]
        # below[v][x] is True iff x <= v
        below = np.zeros((n, n), dtype=bool)
        below[0, 0] = True
        for v in range(1, n):
            s = self.first_left_descent[v]
            c = self.lmul[s][v]
            below[v] = below[c] | below[c][space.lmul[s]]
        self.below = below
        self._R: dict[tuple[int, int], int] = {}
        self._P: dict[tuple[int, int], int] = {}

    def leq(self, x: int, y: int) -> bool:
        return bool(self.below[y, x])

    def R(self, x: int, y: int) -> int:
        if x == y:
            return 1
        if not self.below[y, x]:
            return 0
        key = (x, y)
        hit = self._R.get(key)
        if hit is not None:
            return hit
        s = self.first_left_descent[y]
        sy = self.lmul[s][y]
        sx = self.lmul[s][x]
        if self.len[sx] < self.len[x]:
            val = self.R(sx, sy)
        else:
            val = (_B - 1) * self.R(x, sy) + _B * self.R(sx, sy)
        self._R[key] = val
        return val

    def P(self, x: int, y: int) -> IntPoly:
        if not self.below[y, x]:
            return ZERO
        self._solve(x, y)
        return IntPoly(_decode(self._P[(x, y)]))

    def _solve(self, x: int, y: int) -> None:
        if (x, y) in self._P:
            return
        ly = self.len[y]
        interval = [z for z in np.flatnonzero(self.below[y]).tolist() if self.below[z, x]]
        interval.sort(key=lambda z: -self.len[z])
        for u in interval:
            if (u, y) in self._P:
                continue
            if u == y:
                self._P[(u, y)] = 1
                continue
            total = 0
            for z in interval:
                if z != u and self.len[z] > self.len[u] and self.below[z, u]:
                    total += self.R(u, z) * self._P[(z, y)]
            delta = ly - self.len[u]
            keep = (delta - 1) // 2 + 1
            self._P[(u, y)] = -_encode(_decode(total, keep)[:keep])

    def index(self, w: WeylElem) -> int:
        return self.space.coset_of(w)


_ORACLES: dict[int, ROracle] = {}


def kl_from_R(x: WeylElem, y: WeylElem) -> IntPoly:
    """``P_{x,y}`` computed independently from R-polynomials (small groups only)."""
    g = x.group
    key = id(g)
    if key not in _ORACLES:
        _ORACLES[key] = ROracle(g)
    o = _ORACLES[key]
    return o.P(o.index(x), o.index(y))


# -- cache and public API --------------------------------------------------


@dataclass
class KLCache:
    """Memo table of ``P_{x,y}`` keyed by canonical word pairs."""

    type_name: str
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], IntPoly] = field(default_factory=dict)
    hits: int = 0
    misses: int = 0

    def __post_init__(self):
        self._lock = threading.Lock()

    def get(self, key):
        val = self.entries.get(key)
        if val is None:
            self.misses += 1
        else:
            self.hits += 1
        return val

    def put(self, key, value: IntPoly) -> None:
        with self._lock:
            old = self.entries.get(key)
            if old is not None and old != value:
                raise ValueError(f"conflicting cache values for {key}: {old} vs {value}")
            self.entries[key] = value

    def __len__(self) -> int:
        return len(self.entries)

    def stats(self) -> dict[str, int]:
        return {"entries": len(self.entries), "hits": self.hits, "misses": self.misses}


def canonical_key(x: WeylElem, y: WeylElem) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Least of the four symmetric variants of ``(x, y)`` as a pair of words."""
    g = x.group
    w0 = g.w0
    xi, yi = x.inverse(), y.inverse()
    variants = [(x, y), (xi, yi), (w0 * x * w0, w0 * y * w0), (w0 * xi * w0, w0 * yi * w0)]
    a, b = min(variants, key=lambda p: (p[0].sort_key(), p[1].sort_key()))
    return a.word, b.word


class KLService:
    """Per-group front end: column engines keyed by ``J`` plus a cache."""

    def __init__(self, group: WeylGroup, cache: KLCache | None = None):
        self.group = group
        self.cache = cache if cache is not None else KLCache(str(group.cartan_type))
        self.engines: dict[frozenset, ColumnEngine] = {}
        self._lock = threading.Lock()
        # imported mu-values, consulted before any computation
        self.overlay: dict[tuple, int] = {}

    def engine(self, J: Iterable[int]) -> ColumnEngine:
        J = as_subset(J)
        with self._lock:
            if J not in self.engines:
                self.engines[J] = ColumnEngine(self.group.coset_space(J))
            return self.engines[J]

    def P(self, x: WeylElem, y: WeylElem, J: Iterable[int] | None = None, use_cache: bool = True) -> IntPoly:
        """``P_{x,y}``; ``J`` (a subset of the right descents of ``y``) selects the engine."""
        key = canonical_key(x, y) if use_cache else None
        if key is not None:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
        if x.length > y.length:
            val = ZERO
        else:
            J = y.right_descents() if J is None else as_subset(J)
            if not J <= y.right_descents():
                raise ValueError("J must consist of right descents of y")
            eng = self.engine(J)
            sp = eng.space
            val = eng.value(sp.coset_of(x), sp.coset_of(y))
        if key is not None:
            self.cache.put(key, val)
        return val

    def Q(self, x: WeylElem, y: WeylElem) -> IntPoly:
        w0 = self.group.w0
        return self.P(x * w0, y * w0)

    def mu(self, x: WeylElem, y: WeylElem) -> int:
        d = y.length - x.length
        if d <= 0 or d % 2 == 0:
            return 0
        if self.overlay:
            known = self.overlay.get(canonical_key(x, y))
            if known is not None:
                return known
        return self.P(x, y).coefficient((d - 1) // 2)


_SERVICES: dict[int, KLService] = {}


def service(group: WeylGroup) -> KLService:
    if id(group) not in _SERVICES:
        _SERVICES[id(group)] = KLService(group)
    return _SERVICES[id(group)]


def kl_P(x: WeylElem, y: WeylElem) -> IntPoly:
    return service(x.group).P(x, y)


def kl_Q(x: WeylElem, y: WeylElem) -> IntPoly:
    """``Q_{x,y} = P_{x w_0, y w_0}``."""
    return service(x.group).Q(x, y)


def mu(x: WeylElem, y: WeylElem) -> int:
    return service(x.group).mu(x, y)

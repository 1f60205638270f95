"""Radical filtrations of generalized Verma modules.

Two routes:

* from KL data: ``[Rad_i M_x : L_y]`` is the coefficient of
  ``q^((l(x) - l(y) - i) / 2)`` in ``Q^{I,J}_{x,y}``;
* a constraint solver that only uses the Jantzen coefficients.  Going
  from the lowest weight up, the sum formula gives ``sum_i i [Rad_i M_s]``
  and each multiplicity is spread over layers of the right parity.
  Candidates are pruned by Bernstein degrees, by the fact that radical
  layers cannot skip (an empty layer ends the filtration) and optionally
  by first-layer multiplicities taken from external mu-data.  When more
  than one candidate survives, the module is reported as ambiguous.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .block import BlockDescriptor, gk_dimension, module_degrees, ungraded
from .jantzen import JantzenTable, jantzen_coefficients
from .kl import KLService, canonical_key, service
from .weyl_group import WeylGroup, parse_word


class SolverContradiction(RuntimeError):
    pass


@dataclass
class RadicalFiltration:
    """``layers[i]`` lists ``(t, multiplicity)`` for ``Rad_i M_index``; layer 0 is the head."""

    index: int
    length: int
    layers: list[list[tuple[int, int]]]

    def weighted(self, n: int) -> list[int]:
        """``sum_i i [Rad_i]`` as a vector over simples."""
        out = [0] * n
        for i, layer in enumerate(self.layers):
            for t, m in layer:
                out[t - 1] += i * m
        return out

    def totals(self, n: int) -> list[int]:
        out = [0] * n
        for layer in self.layers:
            for t, m in layer:
                out[t - 1] += m
        return out

    def loewy_length(self) -> int:
        return len(self.layers)

    def composition_length(self) -> int:
        return sum(m for layer in self.layers for _, m in layer)

    def render(self) -> str:
        def term(t, m):
            return f"L{t}" if m == 1 else f"{m}L{t}"

        return " | ".join(" ".join(term(t, m) for t, m in layer) for layer in self.layers)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "length": self.length,
            "layers": [[{"to": t, "mult": m} for t, m in layer] for layer in self.layers],
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, RadicalFiltration) and self.index == other.index and self.layers == other.layers


def filtration_from_kl(b: BlockDescriptor, s: int) -> RadicalFiltration:
    L = b.lengths
    kl = b.kl
    layers: dict[int, list[tuple[int, int]]] = {}
    for t in range(1, b.size + 1):
        q = kl.Q(s - 1, t - 1)
        for k, c in q.terms():
            i = L[s - 1] - L[t - 1] - 2 * k
            if i < 0 or (i == 0 and (t != s or c != 1)):
                raise ValueError(f"Q({s},{t}) = {q} violates the degree bound")
            if c < 0:
                raise ValueError(f"Q({s},{t}) = {q} has a negative coefficient")
            layers.setdefault(i, []).append((t, c))
    top = max(layers)
    out = [sorted(layers.get(i, [])) for i in range(top + 1)]
    return RadicalFiltration(s, L[s - 1], out)


def filtrations_from_kl(b: BlockDescriptor, threads: int = 1) -> list[RadicalFiltration]:
    """Every module's filtration; ``threads`` workers share the KL caches."""
    indices = range(1, b.size + 1)
    if threads <= 1:
        return [filtration_from_kl(b, s) for s in indices]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: filtration_from_kl(b, s), indices))


def bernstein_degree(b: BlockDescriptor, s: int) -> int:
    return b.root_datum.weyl_dim(b.weights[s - 1], b.I)


def derive_simple_degrees(b: BlockDescriptor, known: Sequence[RadicalFiltration]) -> list[int]:
    """Bernstein degrees of the simples from complete filtrations."""
    from .block import simple_degrees

    n = b.size
    rows = {f.index: f.totals(n) for f in known}
    if set(rows) != set(range(1, n + 1)):
        raise ValueError("filtrations for every module are required")
    return simple_degrees(b, [rows[s] for s in range(1, n + 1)])


# -- external mu data ------------------------------------------------------


@dataclass
class MuOverlay:
    """mu-values read from a MUFILE, keyed by canonical word pairs."""

    type_name: str
    values: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = field(default_factory=dict)
    provenance: str = ""
    checked: int = 0

    def get(self, x, y) -> int | None:
        return self.values.get(canonical_key(x, y))


_HEADER = re.compile(r"MUFILE v1 ([A-G]\d+)$")


def import_mu(path, group: WeylGroup, kl: KLService | None = None, check_limit: int = 200_000) -> MuOverlay:
    """Read a MUFILE and check every entry that can be computed internally.

    Entries whose column lives on a coset space of at most ``check_limit``
    cosets are recomputed; a disagreement is an error.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.split("\n")]
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    overlay = MuOverlay(str(group.cartan_type), provenance=str(path))
    if not body:
        return overlay
    m = _HEADER.match(body[0])
    if not m:
        raise ValueError(f"{path}: missing MUFILE header")
    if m.group(1) != str(group.cartan_type):
        raise ValueError(f"{path}: file is for {m.group(1)}, not {group.cartan_type}")
    kl = kl if kl is not None else service(group)
    for lineno, ln in enumerate(body[1:], start=2):
        parts = ln.split(";")
        if len(parts) != 3:
            raise ValueError(f"{path}: malformed line {lineno}: {ln!r}")
        try:
            x = group.from_word(parse_word(parts[0]))
            y = group.from_word(parse_word(parts[1]))
            value = int(parts[2])
        except ValueError as exc:
            raise ValueError(f"{path}: malformed line {lineno}: {exc}") from None
        key = canonical_key(x, y)
        if key in overlay.values and overlay.values[key] != value:
            raise ValueError(f"{path}: conflicting entries for {parts[0]};{parts[1]}")
        if coset_count(group, y.right_descents()) <= check_limit:
            internal = kl.mu(x, y)
            if internal != value:
                raise ValueError(f"{path}: mu({parts[0]},{parts[1]}) = {value} but computed {internal}")
            overlay.checked += 1
        overlay.values[key] = value
    kl.overlay.update(overlay.values)
    return overlay


def coset_count(group: WeylGroup, J) -> int:
    from .root_system import weyl_group_order

    R = group.root_datum
    return weyl_group_order(R, group.index_set()) // weyl_group_order(R, J)


def layer_one_from_mu(b: BlockDescriptor, overlay: MuOverlay) -> dict[tuple[int, int], int]:
    """First-layer multiplicities ``[Rad_1 M_s : L_t]`` available from the overlay.

    By duality the coefficient of ``q^((l(x)-l(y)-1)/2)`` in ``Q^{I,J}_{x,y}``
    is ``mu(w_K g(x), w_K g(y))`` with ``K = -w_0 J`` and
    ``g(w) = w_0 w_J w^{-1} w_I``.
    """
    W = b.group
    K = W.minus_w0(b.J)
    wK = W.longest_element(K)
    gs = [wK * W.quotient_bijections(y, b.I, b.J)[1] for y in b.quotient]
    L = b.lengths
    out = {}
    for s in range(b.size):
        for t in range(s + 1, b.size):
            if (L[s] - L[t]) % 2 == 1:
                v = overlay.get(gs[s], gs[t])
                if v is not None:
                    out[(s + 1, t + 1)] = v
    return out


# -- solver ----------------------------------------------------------------


@dataclass
class SolverState:
    status: dict[int, str] = field(default_factory=dict)
    candidates: dict[int, list[RadicalFiltration]] = field(default_factory=dict)
    module_degrees: list[int] = field(default_factory=list)
    simple_degrees: dict[int, int] = field(default_factory=dict)
    notes: dict[int, str] = field(default_factory=dict)
    complete: dict[int, bool] = field(default_factory=dict)

    def determined(self) -> list[int]:
        return [s for s, st in sorted(self.status.items()) if st == "determined"]

    def ambiguous(self) -> list[int]:
        return [s for s, st in sorted(self.status.items()) if st == "ambiguous"]


def _partitions(total: int, parts: list[int]) -> list[dict[int, int]]:
    """Multisets of ``parts`` (as ``{part: count}``) summing to ``total``."""
    out = []

    def rec(rem, idx, acc):
        if rem == 0:
            out.append(dict(acc))
            return
        if idx < 0:
            return
        p = parts[idx]
        for k in range(rem // p, -1, -1):
            if k:
                acc[p] = k
            rec(rem - k * p, idx - 1, acc)
            acc.pop(p, None)

    rec(total, len(parts) - 1, {})
    return out


def _distribute(
    s: int,
    rhs: list[int],
    lengths: Sequence[int],
    simple_deg: dict[int, int],
    module_deg: int | None,
    layer_one: dict[tuple[int, int], int],
    limit: int,
) -> tuple[list[list[list[tuple[int, int]]]], bool]:
    """Layer assignments for module ``s``; returns (candidates, truncated)."""
    n = len(rhs)
    ls = lengths[s - 1]
    options: list[tuple[int, list[dict[int, int]]]] = []
    for t in range(s + 1, n + 1):
        v = rhs[t - 1]
        if v == 0:
            if layer_one.get((s, t), 0):
                return [], False
            continue
        d = ls - lengths[t - 1]
        parts = [i for i in range(1, d + 1) if (d - i) % 2 == 0]
        opts = _partitions(v, parts) if parts else []
        if (s, t) in layer_one:
            opts = [o for o in opts if o.get(1, 0) == layer_one[(s, t)]]
        c = simple_deg.get(t, 0)
        if module_deg is not None and c:
            opts = [o for o in opts if sum(o.values()) * c <= module_deg]
        if not opts:
            return [], False
        options.append((t, opts))
    options.sort(key=lambda item: (len(item[1]), item[0]))
    found: list[list[list[tuple[int, int]]]] = []
    usage: dict[int, dict[int, int]] = {}
    truncated = False

    def rec(k: int, budget: int | None):
        nonlocal truncated
        if truncated:
            return
        if k == len(options):
            top = max(usage) if usage else 0
            if any(not usage.get(i) for i in range(1, top + 1)):
                return
            layers = [[(s, 1)]] + [sorted(usage[i].items()) for i in range(1, top + 1)]
            found.append(layers)
            if len(found) > limit:
                truncated = True
            return
        t, opts = options[k]
        c = simple_deg.get(t, 0)
        for o in opts:
            cost = sum(o.values()) * c
            if budget is not None and cost > budget:
                continue
            for i, m in o.items():
                usage.setdefault(i, {})[t] = m
            rec(k + 1, None if budget is None else budget - cost)
            for i in o:
                del usage[i][t]
                if not usage[i]:
                    del usage[i]

    rec(0, module_deg)
    return found, truncated


class _SearchLimit(Exception):
    pass


def _rhs(table: JantzenTable, s: int, totals: dict, n: int) -> tuple[list[int], list[int]]:
    rhs = [0] * n
    missing = []
    for t, c in table.row(s).items():
        row = totals.get(t)
        if row is None:
            missing.append(t)
            continue
        for u in range(n):
            rhs[u] += c * row[u]
    return rhs, missing


def _simple_degree(s: int, row: list[int], mdeg: int, known: dict[int, int]) -> int | None:
    n = len(row)
    if not all(t in known for t in range(s + 1, n + 1) if row[t - 1]):
        return None
    return mdeg - sum(row[t - 1] * known[t] for t in range(s + 1, n + 1) if row[t - 1])


def _greedy(b, table, bernstein, layer_one, limit, state) -> list[RadicalFiltration | None]:
    """One bottom-up pass; ambiguity stops propagation to the modules above."""
    n = b.size
    L = b.lengths
    totals: dict[int, list[int] | None] = {}
    result: list[RadicalFiltration | None] = [None] * n
    for s in range(n, 0, -1):
        rhs, missing = _rhs(table, s, totals, n)
        if missing:
            state.status[s] = "ambiguous"
            state.notes[s] = "depends on undetermined modules " + ",".join(map(str, missing))
            state.candidates[s] = []
            state.complete[s] = False
            totals[s] = None
            continue
        if any(v < 0 for v in rhs):
            raise SolverContradiction(f"negative sum-formula multiplicity for module {s}: {rhs}")
        mdeg = state.module_degrees[s - 1] if bernstein else None
        cands, truncated = _distribute(s, rhs, L, state.simple_degrees, mdeg, layer_one, limit)
        if not cands:
            raise SolverContradiction(f"no admissible radical filtration for module {s}")
        filts = [RadicalFiltration(s, L[s - 1], layers) for layers in cands[:limit]]
        state.candidates[s] = filts
        state.complete[s] = not truncated
        if len(cands) == 1:
            state.status[s] = "determined"
            result[s - 1] = filts[0]
        else:
            state.status[s] = "ambiguous"
            state.notes[s] = f"{'more than ' if truncated else ''}{min(len(cands), limit)} candidates"
        rows = [f.totals(n) for f in filts]
        totals[s] = rows[0] if not truncated and all(r == rows[0] for r in rows) else None
        if bernstein and totals[s] is not None:
            c = _simple_degree(s, totals[s], mdeg, state.simple_degrees)
            if c is not None:
                if c < 0:
                    raise SolverContradiction(f"negative Bernstein degree for simple {s}")
                state.simple_degrees[s] = c
    return result


def _search(b, table, bernstein, layer_one, module_degs, node_budget, max_solutions):
    """All globally consistent assignments, or :class:`_SearchLimit` if too many."""
    n = b.size
    L = b.lengths
    totals: dict[int, list[int]] = {}
    sdeg: dict[int, int] = {}
    chosen: dict[int, list[RadicalFiltration]] = {}
    solutions: list[dict[int, list[RadicalFiltration]]] = []
    nodes = 0

    def rec(s: int) -> None:
        nonlocal nodes
        if s == 0:
            solutions.append(dict(chosen))
            if len(solutions) > max_solutions:
                raise _SearchLimit
            return
        nodes += 1
        if nodes > node_budget:
            raise _SearchLimit
        rhs, _ = _rhs(table, s, totals, n)
        if any(v < 0 for v in rhs):
            return
        mdeg = module_degs[s - 1] if bernstein else None
        cands, truncated = _distribute(s, rhs, L, sdeg, mdeg, layer_one, max_solutions)
        if truncated:
            raise _SearchLimit
        # higher modules only see the composition factors, so branch on those
        groups: dict[tuple[int, ...], list[RadicalFiltration]] = {}
        for layers in cands:
            f = RadicalFiltration(s, L[s - 1], layers)
            groups.setdefault(tuple(f.totals(n)), []).append(f)
        for key, fs in groups.items():
            row = list(key)
            if bernstein:
                c = _simple_degree(s, row, mdeg, sdeg)
                if c < 0:
                    continue
                sdeg[s] = c
            totals[s] = row
            chosen[s] = fs
            rec(s - 1)
        totals.pop(s, None)
        sdeg.pop(s, None)
        chosen.pop(s, None)

    rec(n)
    return solutions


def solve_block(
    b: BlockDescriptor,
    table: JantzenTable | None = None,
    bernstein: bool = True,
    layer_one: dict[tuple[int, int], int] | None = None,
    limit: int = 8,
    node_budget: int = 20_000,
) -> tuple[list[RadicalFiltration | None], SolverState]:
    """Radical filtrations from Jantzen coefficients alone.

    A greedy bottom-up pass runs first.  If it leaves ambiguity, a bounded
    search over the candidate sets of all modules discards candidates that
    make some higher module impossible.  Returns one entry per module
    (``None`` where ambiguous) and the solver state.  Raises
    :class:`SolverContradiction` if no consistent assignment exists.
    """
    table = table if table is not None else jantzen_coefficients(b)
    layer_one = layer_one or {}
    state = SolverState()
    state.module_degrees = module_degrees(b) if bernstein else []
    result = _greedy(b, table, bernstein, layer_one, limit, state)
    if all(f is not None for f in result):
        return result, state
    try:
        solutions = _search(b, table, bernstein, layer_one, state.module_degrees, node_budget, limit)
    except _SearchLimit:
        state.notes[0] = "global search exceeded its budget; greedy result kept"
        return result, state
    if not solutions:
        raise SolverContradiction("no consistent assignment of radical filtrations")
    n = b.size
    for s in range(1, n + 1):
        options: list[RadicalFiltration] = []
        for sol in solutions:
            for f in sol[s]:
                if f not in options:
                    options.append(f)
        state.candidates[s] = options
        state.complete[s] = True
        if len(options) == 1:
            state.status[s] = "determined"
            state.notes.pop(s, None)
            result[s - 1] = options[0]
        else:
            state.status[s] = "ambiguous"
            state.notes[s] = f"{len(options)} candidates after global search"
            result[s - 1] = None
    degs = {}
    for s in range(n, 0, -1):
        vals = {sol_deg for sol_deg in _solution_degrees(b, solutions, s, state.module_degrees)} if bernstein else set()
        if len(vals) == 1:
            degs[s] = vals.pop()
    state.simple_degrees = degs
    return result, state


def _solution_degrees(b, solutions, s, module_degs):
    n = b.size
    for sol in solutions:
        known: dict[int, int] = {}
        for t in range(n, s - 1, -1):
            known[t] = _simple_degree(t, sol[t][0].totals(n), module_degs[t - 1], known)
        yield known[s]


@dataclass
class CrossCheckReport:
    matches: list[int] = field(default_factory=list)
    divergences: list[int] = field(default_factory=list)
    ambiguous: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.divergences


def cross_check(b: BlockDescriptor, solver_result=None) -> CrossCheckReport:
    kl = filtrations_from_kl(b)
    solved, state = solver_result if solver_result is not None else solve_block(b)
    rep = CrossCheckReport()
    for s in range(1, b.size + 1):
        f = solved[s - 1]
        if f is None:
            rep.ambiguous.append(s)
            if state.complete.get(s) and kl[s - 1] not in state.candidates[s]:
                rep.divergences.append(s)
        elif f == kl[s - 1]:
            rep.matches.append(s)
        else:
            rep.divergences.append(s)
    return rep


def sum_formula_vector_from_kl(b: BlockDescriptor, s: int) -> list[int]:
    """``sum_i i [Rad_i M_s]`` read off from ``Q^{I,J}``."""
    return filtration_from_kl(b, s).weighted(b.size)

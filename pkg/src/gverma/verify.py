"""Named verification suites behind ``gverma verify``.

Each suite is a list of checks; a check returns ``(passed, detail)``.  The
suites compare computed data with the shipped fixtures and with the
independent R-polynomial oracle.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .block import (
    build_basic,
    build_block,
    classify_basic_systems,
    ext1_poset,
    gk_dimension,
    graded_decomposition,
    graded_inverse,
    inverse_defect,
    module_degrees,
    socular_data,
    ungraded,
)
from .jantzen import jantzen_coefficients, sum_formula_rhs
from .kl import KLCache, KLService, ROracle
from .parabolic import duality_check
from .persistence import align_ties, dumps_cache, fixture_filtrations, load_fixture, loads_cache
from .radical import cross_check, filtrations_from_kl, solve_block
from .weyl_group import weyl_group


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}  ({self.seconds:.1f}s){'  ' + self.detail if self.detail else ''}"


def run_check(name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, not a crashed suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(name, bool(ok), detail, time.perf_counter() - t)


# -- individual checks -----------------------------------------------------


def oracle_pairs_exhaustive(ct: str) -> tuple[bool, str]:
    """``kl_P`` against the R-polynomial oracle on every pair ``x <= y``."""
    W = weyl_group(ct)
    oracle = ROracle(W)
    kl = KLService(W)
    elems = W.elements()
    bad = 0
    count = 0
    for y in elems:
        iy = oracle.index(y)
        for x in elems:
            ix = oracle.index(x)
            if not oracle.leq(ix, iy):
                continue
            count += 1
            if kl.P(x, y, use_cache=False) != oracle.P(ix, iy):
                bad += 1
    return bad == 0, f"{count} pairs, {bad} mismatches"


def random_pair(W, rng: random.Random):
    """Random ``y`` and a random subword ``x`` of a reduced word of ``y``, so ``x <= y``."""
    y = W.from_word(rng.choice(range(1, W.rank + 1)) for _ in range(rng.randint(0, 3 * W.N)))
    sub = [s for s in y.word if rng.random() < 0.6]
    return W.from_word(sub), y


def oracle_pairs_random(ct: str, n: int = 1000, seed: int = 0) -> tuple[bool, str]:
    W = weyl_group(ct)
    oracle = ROracle(W)
    kl = KLService(W)
    rng = random.Random(seed)
    bad = 0
    for _ in range(n):
        x, y = random_pair(W, rng)
        ix, iy = oracle.index(x), oracle.index(y)
        if not oracle.leq(ix, iy) or kl.P(x, y, use_cache=False) != oracle.P(ix, iy):
            bad += 1
    return bad == 0, f"{n} random pairs, {bad} mismatches"


def kl_properties(ct: str, n: int | None = None, seed: int = 1) -> tuple[bool, str]:
    """Nonnegativity, the degree bound, ``P_{x,x} = 1`` and the symmetries
    ``P_{x,y} = P_{x^-1,y^-1} = P_{w0 x w0, w0 y w0}``."""
    W = weyl_group(ct)
    kl = KLService(W)
    w0 = W.w0
    if n is None:
        elems = W.elements()
        pairs = [(x, y) for y in elems for x in elems if W.bruhat_leq(x, y)]
    else:
        rng = random.Random(seed)
        pairs = [random_pair(W, rng) for _ in range(n)]
    problems = []
    for x, y in pairs:
        p = kl.P(x, y, use_cache=False)
        d = y.length - x.length
        if x == y and p != 1:
            problems.append(f"P_xx != 1 at {x}")
        elif x != y and (p.is_zero() or 2 * p.degree > d - 1 or p.coefficient(0) != 1):
            problems.append(f"bound at ({x},{y}): {p}")
        if not p.nonnegative():
            problems.append(f"negative at ({x},{y})")
        if kl.P(x.inverse(), y.inverse(), use_cache=False) != p:
            problems.append(f"inverse symmetry at ({x},{y})")
        if kl.P(w0 * x * w0, w0 * y * w0, use_cache=False) != p:
            problems.append(f"w0 symmetry at ({x},{y})")
    return not problems, f"{len(pairs)} pairs" + (f"; first problem: {problems[0]}" if problems else "")


def cache_round_trip(ct: str = "A3") -> tuple[bool, str]:
    """Full table into a cache, save, reload, re-save; then spot-check the reload."""
    W = weyl_group(ct)
    kl = KLService(W, KLCache(ct))
    elems = W.elements()
    for y in elems:
        for x in elems:
            kl.P(x, y)
    text = dumps_cache(kl.cache)
    again = loads_cache(text, group=W)
    if again.entries != kl.cache.entries:
        return False, "reloaded entries differ"
    if dumps_cache(again) != text:
        return False, "re-save is not byte-identical"
    oracle = ROracle(W)
    rng = random.Random(5)
    for key in rng.sample(sorted(again.entries), 5):
        x, y = W.from_word(key[0]), W.from_word(key[1])
        if oracle.P(oracle.index(x), oracle.index(y)) != again.entries[key]:
            return False, f"entry {key} disagrees with the oracle"
    return True, f"{len(again)} entries"


def _iter_basic(max_rank: int, include_semisimple: bool = True):
    for bs in classify_basic_systems():
        if bs.cartan_type.rank <= max_rank and (include_semisimple or not bs.semisimple):
            yield bs


def orthogonality_and_duality(ct, i, k) -> tuple[bool, str]:
    b = build_basic(ct, i, k)
    para = b.kl
    fails = para.orthogonality_check()
    defect = inverse_defect(graded_decomposition(b), graded_inverse(b))
    dual_bad = [(x, y) for x in b.quotient for y in b.quotient if not duality_check(b.group, b.I, b.J, x, y)]
    ok = not fails and not defect and not dual_bad
    return ok, f"n={b.size}; orthogonality failures {len(fails)}, inverse defects {len(defect)}, duality failures {len(dual_bad)}"


def block_properties(b) -> tuple[bool, str]:
    """IQJ nonnegativity, parity, head uniqueness, totals = q=1 row, sum formula."""
    n, L = b.size, b.lengths
    para = b.kl
    problems = []
    for r in range(n):
        for c in range(n):
            if not para.Q(r, c).nonnegative():
                problems.append(f"Q({r + 1},{c + 1}) has a negative coefficient")
    filts = filtrations_from_kl(b)
    dec = ungraded(b)
    table = jantzen_coefficients(b)
    for f in filts:
        s = f.index
        if f.layers[0] != [(s, 1)]:
            problems.append(f"head of M_{s} is {f.layers[0]}")
        for i, layer in enumerate(f.layers):
            for t, m in layer:
                if (L[s - 1] - L[t - 1] - i) % 2:
                    problems.append(f"parity of L_{t} in layer {i} of M_{s}")
        if f.totals(n) != list(dec[s - 1]):
            problems.append(f"totals of M_{s} differ from the q=1 row")
        if f.weighted(n) != sum_formula_rhs(b, s, table, dec):
            problems.append(f"sum formula fails for M_{s}")
    return not problems, f"n={n}" + (f"; {problems[0]}" if problems else "")


def solver_soundness(b) -> tuple[bool, str]:
    rep = cross_check(b)
    return rep.ok, f"matches {len(rep.matches)}, ambiguous {len(rep.ambiguous)}, divergences {rep.divergences}"


def verma_sum_formula(ct: str) -> tuple[bool, str]:
    """Sum formula for ordinary Verma modules in every integral block."""
    W = weyl_group(ct)
    full = sorted(W.index_set())
    blocks = 0
    problems = []
    for mask in range(1 << len(full)):
        J = [s for k, s in enumerate(full) if mask >> k & 1]
        b = build_block(ct, [], J)
        ok, detail = block_properties(b)
        blocks += 1
        if not ok:
            problems.append(f"J={J}: {detail}")
    return not problems, f"{blocks} blocks" + (f"; {problems[0]}" if problems else "")


def classification_check(ct, i, k, semisimple: bool) -> tuple[bool, str]:
    b = build_basic(ct, i, k)
    table = jantzen_coefficients(b)
    if semisimple:
        if len(table):
            return False, f"{len(table)} nonzero Jantzen coefficients"
        if b.group.N <= 60 and ungraded(b) != [[int(r == c) for c in range(b.size)] for r in range(b.size)]:
            return False, "decomposition matrix is not the identity"
        return True, f"n={b.size}, empty table"
    return len(table) > 0, f"n={b.size}, {len(table)} coefficients"


# -- fixture comparisons ----------------------------------------------------


def _fx_block(fid):
    fx = load_fixture(fid)
    return fx, build_basic(*fx.block_args())


def check_lengths(fid: str) -> tuple[bool, str]:
    fx, b = _fx_block(fid)
    return list(b.lengths) == list(fx.data), f"computed {list(b.lengths)}"


def check_jantzen(fid: str) -> tuple[bool, str]:
    fx, b = _fx_block(fid)
    got = [list(x) for x in jantzen_coefficients(b).items()]
    want = [list(x) for x in fx.data]
    return got == want, f"{len(got)} coefficients"


def check_weights(fid: str) -> tuple[bool, str]:
    fx, b = _fx_block(fid)
    want = [tuple(Fraction(c) for c in w) for w in fx.data]
    got = [tuple(Fraction(c) for c in w) for w in b.weights]
    return got == want, f"{len(got)} weights"


def check_degrees(fid: str) -> tuple[bool, str]:
    fx, b = _fx_block(fid)
    d = gk_dimension(b)
    mods = module_degrees(b)
    _, state = solve_block(b)
    simples = {int(t): v for t, v in fx.data["simples"].items()}
    ok = d == fx.data["d"] and mods == list(fx.data["modules"]) and all(state.simple_degrees.get(t) == v for t, v in simples.items())
    return ok, f"d={d}, modules {mods}"


def check_socular(fid: str) -> tuple[bool, str]:
    fx, b = _fx_block(fid)
    got = socular_data(b, ungraded(b))
    want = [tuple(p) for p in fx.data]
    return sorted(got) == sorted(want), f"computed {got}"


def _computed(filts) -> dict[int, list[list[tuple[int, int]]]]:
    return {f.index: [sorted(layer) for layer in f.layers] for f in filts if f is not None}


def check_filtrations(fid: str, method: str = "solver") -> tuple[bool, str]:
    """Every determined filtration equals the reference one, allowing only
    relabelling among indices of equal length."""
    fx, b = _fx_block(fid)
    if method == "kl":
        filts = filtrations_from_kl(b)
    else:
        filts, state = solve_block(b)
    comp = _computed(filts)
    perm = align_ties(b.lengths, comp, fixture_filtrations(fx))
    moved = {r: c for r, c in (perm or {}).items() if r != c}
    return perm is not None, f"{len(comp)}/{b.size} determined" + (f", equal-length relabelling {moved}" if moved else "")


def check_poset(fid: str, method: str = "solver") -> tuple[bool, str]:
    fx, b = _fx_block(fid)
    filts = filtrations_from_kl(b) if method == "kl" else solve_block(b)[0]
    if any(f is None for f in filts):
        return False, "filtrations not fully determined"
    comp = _computed(filts)
    filt_fx = load_fixture(fid.replace("_poset", "_filtrations"))
    perm = align_ties(b.lengths, comp, fixture_filtrations(filt_fx)) or {k: k for k in range(1, b.size + 1)}
    poset = ext1_poset(b, filts)
    want = sorted(tuple(sorted((perm[a], perm[c]))) for a, c in fx.data["edges"])
    got = sorted(poset.hasse_edges())
    return got == want and fx.data["nodes"] == b.size, f"{len(got)} covering edges"


# -- suites ----------------------------------------------------------------


def suite_rank3() -> list[Check]:
    out = [run_check(f"oracle equivalence {ct}", lambda ct=ct: oracle_pairs_exhaustive(ct)) for ct in ("A1", "A2", "A3", "B2", "B3", "C3", "G2")]
    for bs in _iter_basic(3):
        ct, i, k = str(bs.cartan_type), bs.i, bs.k
        out.append(run_check(f"orthogonality/duality {bs}", lambda: orthogonality_and_duality(ct, i, k)))
        out.append(run_check(f"block properties {bs}", lambda: block_properties(build_basic(ct, i, k))))
        out.append(run_check(f"solver soundness {bs}", lambda: solver_soundness(build_basic(ct, i, k))))
    for ct in ("A1", "A2", "A3", "B2", "B3"):
        out.append(run_check(f"Verma sum formula {ct}", lambda ct=ct: verma_sum_formula(ct)))
    return out


def suite_rank4() -> list[Check]:
    out = [run_check(f"oracle random {ct}", lambda ct=ct: oracle_pairs_random(ct)) for ct in ("A4", "B4", "C4", "D4", "D5", "F4")]
    for bs in _iter_basic(5):
        if bs.cartan_type.rank <= 3:
            continue
        ct, i, k = str(bs.cartan_type), bs.i, bs.k
        out.append(run_check(f"orthogonality/duality {bs}", lambda: orthogonality_and_duality(ct, i, k)))
        out.append(run_check(f"block properties {bs}", lambda: block_properties(build_basic(ct, i, k))))
        out.append(run_check(f"solver soundness {bs}", lambda: solver_soundness(build_basic(ct, i, k))))
    return out


def suite_classification(max_rank: int = 8) -> list[Check]:
    out = []
    for bs in classify_basic_systems():
        if bs.cartan_type.rank > max_rank:
            continue
        ct, i, k, ss = str(bs.cartan_type), bs.i, bs.k, bs.semisimple
        label = "semisimple" if ss else "not semisimple"
        out.append(run_check(f"classification {bs} {label}", lambda: classification_check(ct, i, k, ss)))
    return out


def suite_two_module() -> list[Check]:
    out = []
    for fid in ("a1_11_two_module", "b3_22_two_module", "c3_22_two_module"):
        out.append(run_check(f"two-module block {fid}", lambda fid=fid: two_module_check(fid)))
    return out


def two_module_check(fid: str) -> tuple[bool, str]:
    fx, b = _fx_block(fid)
    data = fx.data
    jt = [list(x) for x in jantzen_coefficients(b).items()]
    filts = filtrations_from_kl(b)
    solved, _ = solve_block(b)
    want = {f["index"]: [sorted((t, m) for t, m in layer) for layer in f["layers"]] for f in data["filtrations"]}
    ok = b.size == 2 and jt == [list(x) for x in data["jantzen"]]
    ok = ok and all(_computed(filts)[s] == want[s] and _computed(solved)[s] == want[s] for s in (1, 2))
    poset = ext1_poset(b, filts)
    ok = ok and sorted(poset.hasse_edges()) == [tuple(e) for e in data["poset"]["edges"]]
    return ok, f"lengths {list(b.lengths)}, Q12 = {b.kl.Q(0, 1)}, P21 = {b.kl.P(1, 0)}"


def suite_e7() -> list[Check]:
    return [
        run_check("E7 Jantzen table", lambda: check_jantzen("e7_44_jantzen")),
        run_check("E7 lengths", lambda: check_lengths("e7_44_lengths")),
        run_check("E7 weights", lambda: check_weights("e7_44_weights")),
        run_check("E7 Bernstein degrees", lambda: check_degrees("e7_44_degrees")),
        run_check("E7 filtrations (solver)", lambda: check_filtrations("e7_44_filtrations", "solver")),
        run_check("E7 filtrations (KL)", lambda: check_filtrations("e7_44_filtrations", "kl")),
        run_check("E7 socular data", lambda: check_socular("e7_44_socular")),
        run_check("E7 Ext1 poset", lambda: check_poset("e7_44_poset", "solver")),
    ]


def suite_e8_lengths() -> list[Check]:
    return [run_check(f"lengths {fid}", lambda fid=fid: check_lengths(fid)) for fid in ("e8_54_lengths", "e8_45_lengths", "e8_44_lengths")]


def e8_solver_check(fid: str) -> tuple[bool, str]:
    """Runs to completion, no contradiction, determined modules match."""
    fx, b = _fx_block(fid)
    filts, state = solve_block(b)
    if set(state.status.values()) - {"determined", "ambiguous"}:
        return False, f"unexpected states {set(state.status.values())}"
    comp = _computed(filts)
    ref = fixture_filtrations(fx)
    perm = align_ties(b.lengths, comp, ref)
    if perm is None:
        return False, f"{len(comp)} determined, no equal-length relabelling matches"
    inv = {c: r for r, c in perm.items()}
    # complete candidate lists must contain the reference answer
    missing = []
    for s in state.ambiguous():
        if state.complete.get(s) and state.candidates.get(s):
            want = [sorted((perm[t], m) for t, m in layer) for layer in ref[inv[s]]]
            if all([sorted(layer) for layer in f.layers] != want for f in state.candidates[s]):
                missing.append(s)
    return not missing, f"{len(comp)}/{b.size} determined, {len(state.ambiguous())} ambiguous" + (f", reference missing from candidates of {missing}" if missing else "")


def suite_e8_solver() -> list[Check]:
    return [run_check(f"solver {fid}", lambda fid=fid: e8_solver_check(fid)) for fid in ("e8_54_filtrations", "e8_45_filtrations", "e8_44_filtrations")]


def suite_properties() -> list[Check]:
    out = [run_check(f"KL properties {ct}", lambda ct=ct: kl_properties(ct)) for ct in ("A3", "B3", "G2")]
    out += [run_check(f"KL properties {ct} (random)", lambda ct=ct: kl_properties(ct, n=300)) for ct in ("D4", "F4")]
    for bs in _iter_basic(5, include_semisimple=False):
        ct, i, k = str(bs.cartan_type), bs.i, bs.k
        out.append(run_check(f"block properties {bs}", lambda: block_properties(build_basic(ct, i, k))))
    for ct, I, J in (("A3", [1], [3]), ("B3", [2], [1]), ("C3", [1, 3], [])):
        out.append(run_check(f"block properties {ct} I={I} J={J}", lambda ct=ct, I=I, J=J: block_properties(build_block(ct, I, J))))
    out.append(run_check("cache round trip A3", cache_round_trip))
    return out


SUITES: dict[str, Callable[[], list[Check]]] = {
    "properties": suite_properties,
    "rank3": suite_rank3,
    "rank4": suite_rank4,
    "classification": suite_classification,
    "two-module": suite_two_module,
    "e7": suite_e7,
    "e8-lengths": suite_e8_lengths,
    "e8-solver": suite_e8_solver,
}


def run_suites(names: Iterable[str]) -> list[Check]:
    out = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        out.extend(SUITES[name]())
    return out

"""Command line interface: ``gverma <verb> [options]``.

Exit codes: 0 success, 1 usage error, 2 solver ambiguity under
``--method solver``, 3 mismatch (failed ``verify`` check or a cross-check
divergence).
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Sequence

from .block import (
    BlockDescriptor,
    build_basic,
    build_block,
    ext1_poset,
    graded_decomposition,
    graded_inverse,
    weight_table,
)
from .jantzen import jantzen_coefficients
from .kl import KLService, ROracle, service
from .persistence import CacheFormatError, dumps_json, load_cache, save_cache
from .radical import (
    RadicalFiltration,
    SolverContradiction,
    coset_count,
    filtrations_from_kl,
    import_mu,
    layer_one_from_mu,
    solve_block,
)
from .root_system import CartanType, weyl_group_order
from .verify import SUITES, run_suites
from .weyl_group import format_word, parse_word, weyl_group

EXIT_OK, EXIT_USAGE, EXIT_AMBIGUOUS, EXIT_MISMATCH = 0, 1, 2, 3
# recomputing a cache entry is skipped when its coset space is larger than this
CHECK_COSET_LIMIT = 200_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _subset(text: str | None) -> list[int] | None:
    if text is None:
        return None
    if text.strip().lower() == "none":
        return []
    try:
        return sorted({int(p) for p in text.split(",") if p.strip()})
    except ValueError:
        raise UsageError(f"bad index set {text!r}") from None


def _block_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--type", required=True, help="Cartan type such as E7")
    p.add_argument("--i", type=int, help="basic system: I is the complement of this node")
    p.add_argument("--k", type=int, help="basic system: node k")
    p.add_argument("--I", dest="I_set", help="Levi set, e.g. 1,3 or none")
    p.add_argument("--J", dest="J_set", help="singular set, e.g. 2 or none")


def _output_options(p: argparse.ArgumentParser, dot: bool = False) -> None:
    p.add_argument("--json", action="store_true", help="JSON output")
    if dot:
        p.add_argument("--dot", action="store_true", help="Graphviz DOT output")


def _kl_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cache", help="KL cache file, read before and written after")
    p.add_argument("--threads", type=int, default=1, help="worker threads for KL fills")


def _method_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=("kl", "solver", "cross-check"), default="cross-check")
    p.add_argument("--mu-file", help="MUFILE with externally computed mu-values")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gverma", description="Generalized Verma modules: KL data, Jantzen coefficients, radical filtrations.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("block", help="list the modules of a block")
    _block_options(p)
    _output_options(p)

    p = sub.add_parser("decomp", help="graded decomposition matrix or its inverse")
    _block_options(p)
    _output_options(p)
    _kl_options(p)
    p.add_argument("--inverse", action="store_true", help="inverse matrix instead")

    p = sub.add_parser("jantzen", help="Jantzen coefficients")
    _block_options(p)
    _output_options(p)

    p = sub.add_parser("radical", help="radical filtrations")
    _block_options(p)
    _output_options(p)
    _kl_options(p)
    _method_options(p)

    p = sub.add_parser("poset", help="Ext^1 poset")
    _block_options(p)
    _output_options(p, dot=True)
    _kl_options(p)
    _method_options(p)

    p = sub.add_parser("kl", help="a single Kazhdan-Lusztig polynomial")
    p.add_argument("--type", required=True)
    p.add_argument("--x", required=True, help="word such as 1,2,1 or e")
    p.add_argument("--y", required=True)
    _output_options(p)
    _kl_options(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", action="append", help=f"one of {', '.join(SUITES)} or all; repeatable")
    _output_options(p)

    p = sub.add_parser("cache", help="inspect, merge or spot-check KL cache files")
    p.add_argument("--cache", required=True, help="cache file; written back after --merge")
    p.add_argument("--merge", action="append", default=[], help="another cache file to union in")
    p.add_argument("--check", type=int, default=0, help="recompute this many random entries")
    _output_options(p)
    return parser


# -- helpers ---------------------------------------------------------------


def _cartan(text: str) -> CartanType:
    try:
        return CartanType.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _block(args) -> BlockDescriptor:
    ct = _cartan(args.type)
    basic = args.i is not None or args.k is not None
    general = args.I_set is not None or args.J_set is not None
    if basic == general:
        raise UsageError("give either --i and --k or --I and --J")
    if basic:
        if args.i is None or args.k is None:
            raise UsageError("--i and --k go together")
        for v in (args.i, args.k):
            if not 1 <= v <= ct.rank:
                raise UsageError(f"node {v} out of range for {ct}")
        return build_basic(ct, args.i, args.k)
    I, J = _subset(args.I_set), _subset(args.J_set)
    if I is None or J is None:
        raise UsageError("--I and --J go together")
    if any(not 1 <= v <= ct.rank for v in I + J):
        raise UsageError(f"index out of range for {ct}")
    return build_block(ct, I, J)


def _envelope(b: BlockDescriptor, items: list, **extra) -> dict:
    doc = {"block": b.describe(), "items": items}
    doc.update(extra)
    return doc


class _CacheSession:
    """Loads ``--cache`` into the group's KL service and saves it on exit."""

    def __init__(self, group, path: str | None):
        self.kl: KLService = service(group)
        self.path = Path(path) if path else None
        if self.path and self.path.exists():
            load_cache(self.path, into=self.kl.cache, group=group)

    def close(self) -> None:
        if self.path:
            save_cache(self.kl.cache, self.path)


def _solver(b: BlockDescriptor, args):
    layer_one = None
    provenance = None
    if args.mu_file:
        overlay = import_mu(args.mu_file, b.group, service(b.group))
        layer_one = layer_one_from_mu(b, overlay)
        provenance = {"mu_file": overlay.provenance, "entries": len(overlay.values), "checked": overlay.checked}
    filts, state = solve_block(b, layer_one=layer_one)
    return filts, state, provenance


# -- verbs -----------------------------------------------------------------


def cmd_block(args, out) -> int:
    b = _block(args)
    weights = weight_table(b)
    rows = [
        {"index": k + 1, "length": y.length, "y": format_word(y.word), "labels": list(b.labels[k]), "weight": weights[k]}
        for k, y in enumerate(b.quotient)
    ]
    if args.json:
        out.write(dumps_json(_envelope(b, rows)))
    else:
        out.write(f"{b.cartan_type} I={sorted(b.I)} J={sorted(b.J)}: {b.size} modules\n")
        for r in rows:
            out.write(f"{r['index']:>3}  l={r['length']:<3} weight={r['weight']}  y={r['y'] or 'e'}\n")
    return EXIT_OK


def cmd_decomp(args, out) -> int:
    b = _block(args)
    session = _CacheSession(b.group, args.cache)
    if args.threads > 1:
        filtrations_from_kl(b, threads=args.threads)
    M = graded_inverse(b) if args.inverse else graded_decomposition(b)
    session.close()
    items = []
    for r in range(b.size):
        for c in range(b.size):
            p = M.entries[r][c]
            if p != 0:
                lau = M.laurent(r, c)
                items.append({"row": r + 1, "col": c + 1, "poly": p.to_list(), "graded": {str(e): v for e, v in sorted(lau.items())}})
    if args.json:
        out.write(dumps_json(_envelope(b, items, matrix="inverse" if args.inverse else "decomposition")))
    else:
        name = "P" if args.inverse else "Q"
        for it in items:
            out.write(f"{name}({it['row']},{it['col']}) = {M.entries[it['row'] - 1][it['col'] - 1]}\n")
    return EXIT_OK


def cmd_jantzen(args, out) -> int:
    b = _block(args)
    table = jantzen_coefficients(b)
    if args.json:
        out.write(dumps_json(_envelope(b, table.to_json())))
    else:
        for s, t, c in table.items():
            out.write(f"c({s},{t}) = {c}\n")
        if not len(table):
            out.write("no nonzero Jantzen coefficients\n")
    return EXIT_OK


def _render_filtrations(filts: Sequence[RadicalFiltration | None], out) -> None:
    for k, f in enumerate(filts, start=1):
        out.write(f"M{k}: {f.render() if f else '(ambiguous)'}\n")


def _filtrations(b, args, out_notes: dict) -> tuple[list | None, int]:
    """Filtrations per ``--method``; returns (filtrations, exit code)."""
    method = args.method
    if method in ("kl", "cross-check"):
        session = _CacheSession(b.group, args.cache)
        kl_filts = filtrations_from_kl(b, threads=args.threads)
        session.close()
    if method == "kl":
        return kl_filts, EXIT_OK
    solved, state, provenance = _solver(b, args)
    out_notes["status"] = {str(s): state.status[s] for s in sorted(state.status)}
    out_notes["notes"] = {str(s): note for s, note in sorted(state.notes.items())}
    if provenance:
        out_notes["provenance"] = provenance
    if method == "solver":
        out_notes["candidates"] = {str(s): [f.to_json() for f in state.candidates.get(s, [])] for s in state.ambiguous()}
        return solved, EXIT_AMBIGUOUS if state.ambiguous() else EXIT_OK
    divergent = [f.index for f, g in zip(kl_filts, solved) if g is not None and f != g]
    divergent += [s for s in state.ambiguous() if state.complete.get(s) and kl_filts[s - 1] not in state.candidates[s]]
    out_notes["divergences"] = sorted(divergent)
    return kl_filts, EXIT_MISMATCH if divergent else EXIT_OK


def cmd_radical(args, out) -> int:
    b = _block(args)
    notes: dict = {}
    filts, code = _filtrations(b, args, notes)
    if args.json:
        items = [f.to_json() if f else {"index": k, "length": b.lengths[k - 1], "layers": None} for k, f in enumerate(filts, start=1)]
        out.write(dumps_json(_envelope(b, items, method=args.method, **notes)))
    else:
        _render_filtrations(filts, out)
        if notes.get("divergences"):
            out.write(f"divergences: {notes['divergences']}\n")
        for s, note in notes.get("notes", {}).items():
            out.write(f"note {s}: {note}\n")
    return code


def cmd_poset(args, out) -> int:
    b = _block(args)
    notes: dict = {}
    filts, code = _filtrations(b, args, notes)
    if any(f is None for f in filts):
        out.write("Ext^1 poset needs every filtration; the solver left some undetermined\n")
        return code or EXIT_AMBIGUOUS
    poset = ext1_poset(b, filts)
    if args.dot:
        out.write(poset.to_dot())
    elif args.json:
        out.write(dumps_json(_envelope(b, [poset.to_json()], method=args.method)))
    else:
        for s, t in poset.hasse_edges():
            out.write(f"{s} -- {t}\n")
    return code


def cmd_kl(args, out) -> int:
    W = weyl_group(_cartan(args.type))
    try:
        x, y = W.from_word(parse_word(args.x)), W.from_word(parse_word(args.y))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    session = _CacheSession(W, args.cache)
    kl = session.kl
    p, m, leq = kl.P(x, y), kl.mu(x, y), W.bruhat_leq(x, y)
    session.close()
    if args.json:
        doc = {"type": str(W.cartan_type), "x": format_word(x.word), "y": format_word(y.word), "P": p.to_list(), "mu": m, "bruhat_leq": leq}
        out.write(dumps_json(doc))
    else:
        out.write(f"P({x.word_str}, {y.word_str}) = {p}\nmu = {m}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    names = args.suite or ["properties"]
    if "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite {unknown[0]!r}")
    checks = []
    for c in run_suites(names):
        checks.append(c)
        if not args.json:
            out.write(c.line() + "\n")
            out.flush()
    failed = [c for c in checks if not c.passed]
    if args.json:
        items = [{"name": c.name, "passed": c.passed, "detail": c.detail, "seconds": round(c.seconds, 3)} for c in checks]
        out.write(dumps_json({"suites": names, "items": items}))
    else:
        out.write(f"{len(checks) - len(failed)}/{len(checks)} checks passed\n")
    return EXIT_MISMATCH if failed else EXIT_OK


def group_order(W) -> int:
    return weyl_group_order(W.root_datum, W.index_set())


def cmd_cache(args, out) -> int:
    path = Path(args.cache)
    if not path.exists():
        raise UsageError(f"no such cache file {path}")
    cache = load_cache(path)
    for other in args.merge:
        load_cache(other, into=cache)
    W = weyl_group(cache.type_name)
    bad = checked = skipped = 0
    if args.check:
        rng = random.Random(0)
        keys = sorted(cache.entries)
        oracle = ROracle(W) if group_order(W) <= 5000 else None
        fresh = KLService(W)
        for key in rng.sample(keys, min(args.check, len(keys))):
            x, y = W.from_word(key[0]), W.from_word(key[1])
            if oracle is not None:
                want = oracle.P(oracle.index(x), oracle.index(y))
            elif coset_count(W, y.right_descents()) <= CHECK_COSET_LIMIT:
                want = fresh.P(x, y, use_cache=False)
            else:
                skipped += 1
                continue
            checked += 1
            bad += want != cache.entries[key]
    if args.merge:
        save_cache(cache, path)
    info = {"type": cache.type_name, "entries": len(cache), "merged": list(args.merge), "checked": checked, "skipped": skipped, "mismatches": bad}
    if args.json:
        out.write(dumps_json(info))
    else:
        out.write(" ".join(f"{k}={v}" for k, v in info.items()) + "\n")
    return EXIT_MISMATCH if bad else EXIT_OK


COMMANDS = {
    "block": cmd_block,
    "decomp": cmd_decomp,
    "jantzen": cmd_jantzen,
    "radical": cmd_radical,
    "poset": cmd_poset,
    "kl": cmd_kl,
    "verify": cmd_verify,
    "cache": cmd_cache,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.verb](args, out)
    except UsageError as exc:
        err.write(f"gverma: {exc}\n")
        return EXIT_USAGE
    except SolverContradiction as exc:
        err.write(f"gverma: contradiction: {exc}\n")
        return EXIT_MISMATCH
    except (CacheFormatError, ValueError, OSError) as exc:
        err.write(f"gverma: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""KL cache files, reference fixtures and JSON output.

Cache files are plain text so they diff cleanly::

    KLCACHE v1 E7
    <x word>;<y word>;c0,c1,...

Words use the comma-separated generator indices of :func:`format_word`,
entries are sorted, and line endings are LF.  Fixtures are JSON documents
shipped with the package, one per reference table or figure.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping, Sequence

from .kl import KLCache
from .polynomial import IntPoly
from .weyl_group import WeylGroup, format_word, parse_word

_CACHE_HEADER = re.compile(r"KLCACHE v1 ([A-G]\d+)$")


class CacheFormatError(ValueError):
    pass


class FixtureError(KeyError):
    pass


# -- KL cache --------------------------------------------------------------


def _degree_ok(x_len: int, y_len: int, p: IntPoly) -> bool:
    if x_len == y_len:
        return p == 1 or p.is_zero()
    if x_len > y_len:
        return p.is_zero()
    return p.is_zero() or 2 * p.degree <= y_len - x_len - 1


def dumps_cache(cache: KLCache) -> str:
    lines = [f"KLCACHE v1 {cache.type_name}"]
    for (x, y), p in sorted(cache.entries.items()):
        lines.append(f"{format_word(x)};{format_word(y)};{p.to_csv()}")
    return "\n".join(lines) + "\n"


def save_cache(cache: KLCache, path) -> None:
    """Write ``cache`` deterministically; saving twice gives identical bytes."""
    Path(path).write_bytes(dumps_cache(cache).encode("utf-8"))


def loads_cache(text: str, into: KLCache | None = None, group: WeylGroup | None = None, source: str = "<cache>") -> KLCache:
    """Parse cache text, merging into ``into`` if given.

    Every entry is checked against the degree bound ``deg P_{x,y} <=
    (l(y)-l(x)-1)/2``.  With ``group`` the words are also checked to be
    reduced.  A value that disagrees with one already present is an error.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CacheFormatError(f"{source}: empty file")
    m = _CACHE_HEADER.match(lines[0].rstrip("\r"))
    if not m:
        raise CacheFormatError(f"{source}: bad header {lines[0]!r}")
    type_name = m.group(1)
    if group is not None and str(group.cartan_type) != type_name:
        raise CacheFormatError(f"{source}: cache is for {type_name}, not {group.cartan_type}")
    cache = into if into is not None else KLCache(type_name)
    if cache.type_name != type_name:
        raise CacheFormatError(f"{source}: cannot merge {type_name} entries into a {cache.type_name} cache")
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(";")
        if len(parts) != 3:
            raise CacheFormatError(f"{source}:{lineno}: expected three fields")
        try:
            x, y = parse_word(parts[0]), parse_word(parts[1])
            p = IntPoly.parse(parts[2])
        except ValueError as exc:
            raise CacheFormatError(f"{source}:{lineno}: {exc}") from None
        if group is not None:
            for w in (x, y):
                if group.from_word(w).length != len(w):
                    raise CacheFormatError(f"{source}:{lineno}: word {format_word(w)!r} is not reduced")
        if not _degree_ok(len(x), len(y), p):
            raise CacheFormatError(f"{source}:{lineno}: degree bound violated by {p}")
        try:
            cache.put((x, y), p)
        except ValueError as exc:
            raise CacheFormatError(f"{source}:{lineno}: {exc}") from None
    return cache


def load_cache(path, into: KLCache | None = None, group: WeylGroup | None = None) -> KLCache:
    return loads_cache(Path(path).read_text(encoding="utf-8"), into=into, group=group, source=str(path))


# -- fixtures --------------------------------------------------------------


def _freeze(obj: Any) -> Any:
    if isinstance(obj, dict):
        return MappingProxyType({k: _freeze(v) for k, v in obj.items()})
    if isinstance(obj, list):
        return tuple(_freeze(v) for v in obj)
    return obj


@dataclass(frozen=True)
class FixtureSet:
    """Reference values for one table or figure; ``source`` names it."""

    id: str
    source: str
    kind: str
    block: Mapping[str, Any] | None
    data: Any
    checksum: str

    def block_args(self) -> tuple[str, int, int]:
        return self.block["type"], self.block["i"], self.block["k"]


def _fixture_dir():
    return resources.files("gverma") / "fixtures"


def fixture_ids() -> list[str]:
    return sorted(p.name[:-5] for p in _fixture_dir().iterdir() if p.name.endswith(".json") and p.name != "checksums.json")


def _checksums() -> dict[str, str]:
    return json.loads((_fixture_dir() / "checksums.json").read_text(encoding="utf-8"))


def load_fixture(fixture_id: str) -> FixtureSet:
    path = _fixture_dir() / f"{fixture_id}.json"
    if not path.is_file():
        raise FixtureError(f"unknown fixture {fixture_id!r}")
    raw = path.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    expected = _checksums().get(fixture_id)
    if expected != digest:
        raise FixtureError(f"fixture {fixture_id!r} does not match its recorded checksum")
    doc = json.loads(raw)
    return FixtureSet(doc["id"], doc["source"], doc["kind"], _freeze(doc["block"]), _freeze(doc["data"]), digest)


def fixture_filtrations(fx: FixtureSet) -> dict[int, list[list[tuple[int, int]]]]:
    """``{index: layers}`` with each layer a sorted list of ``(t, multiplicity)``."""
    return {f["index"]: [sorted((t, m) for t, m in layer) for layer in f["layers"]] for f in fx.data}


def tie_groups(lengths: Sequence[int]) -> list[list[int]]:
    """Runs of equal length as lists of 1-based indices."""
    out: list[list[int]] = []
    for k, ln in enumerate(lengths, start=1):
        if out and lengths[out[-1][0] - 1] == ln:
            out[-1].append(k)
        else:
            out.append([k])
    return out


def align_ties(
    lengths: Sequence[int],
    computed: Mapping[int, list[list[tuple[int, int]]]],
    expected: Mapping[int, list[list[tuple[int, int]]]],
) -> dict[int, int] | None:
    """A relabelling that only permutes indices of equal length and makes
    every computed filtration equal to the expected one.

    ``computed`` may omit modules (undetermined ones); ``expected`` is indexed
    in the reference order.  Returns ``{reference index: computed index}`` or
    ``None`` when no such relabelling exists.
    """
    groups = tie_groups(lengths)
    perm: dict[int, int] = {}

    def relabel(layers):
        return [sorted((perm[t], m) for t, m in layer) for layer in layers]

    def consistent(group: list[int]) -> bool:
        for r in group:
            c = perm[r]
            if c in computed and relabel(expected[r]) != computed[c]:
                return False
        return True

    def rec(g: int) -> bool:
        if g < 0:
            return True
        group = groups[g]
        for image in itertools.permutations(group):
            perm.update(zip(group, image))
            if consistent(group) and rec(g - 1):
                return True
        for r in group:
            perm.pop(r, None)
        return False

    # filtrations only mention lower modules, so fix the bottom first
    return dict(perm) if rec(len(groups) - 1) else None


# -- output ----------------------------------------------------------------


def dumps_json(obj: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"

"""Jantzen's theta characters, Jantzen coefficients and the sum formula.

For ``mu`` in ``Lambda_I^+`` the reflections ``s_beta`` with ``beta`` in
``Psi^+(mu)`` (positive roots outside ``Phi_I`` pairing positively with
``mu``) produce characters ``theta(s_beta mu)``, each of which is zero or
``+-[M_I(nu)]`` for a single ``nu`` in ``Lambda_I^+``.  The net coefficient
of ``[M_I(nu)]`` is the Jantzen coefficient ``c(mu, nu)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .block import BlockDescriptor, ungraded
from .root_system import Root, RootDatum, Vector
from .weyl_group import as_subset


class JantzenError(RuntimeError):
    pass


@dataclass(frozen=True)
class ThetaTerm:
    sign: int
    target: Vector | None
    steps: int = 0


def _root_labels(R: RootDatum, k: int) -> tuple[int, ...]:
    c = R.roots[k].coeffs
    n = R.rank
    return tuple(sum(c[j] * R.cartan[j][i] for j in range(n)) for i in range(n))


def _theta_labels(R: RootDatum, labels: Sequence[int], I: frozenset[int]) -> tuple[int, tuple[int, ...] | None, int]:
    """``(sign, dominant labels, l(w))``; sign 0 when the weight is singular on ``Phi_I``."""
    lab = tuple(labels)
    Iidx = sorted(i - 1 for i in I)
    steps = 0
    while True:
        for i in Iidx:
            if lab[i] < 0:
                lab = RootDatum.label_reflect(lab, i, R.cartan)
                steps += 1
                break
        else:
            break
    if any(lab[i] == 0 for i in Iidx):
        return 0, None, steps
    return (-1) ** steps, lab, steps


def theta_normalize(R: RootDatum, mu: Sequence, I) -> ThetaTerm:
    """Write ``theta(mu)`` as ``sign * [M_I(target)]`` with ``target`` in ``Lambda_I^+``."""
    I = as_subset(I)
    labels = R.int_labels(mu)
    sign, lab, steps = _theta_labels(R, labels, I)
    if sign == 0:
        return ThetaTerm(0, None, steps)
    return ThetaTerm(sign, R.from_labels(lab), steps)


def psi_plus(R: RootDatum, mu: Sequence, I) -> list[Root]:
    I = as_subset(I)
    if R.dominance(mu, I) != "dominant":
        raise JantzenError(f"weight {mu} is not in Lambda_I^+")
    labels = R.int_labels(mu)
    inside = {r.index for r in R.positive_roots_of(I)}
    return [r for r in R.positive_roots if r.index not in inside and R.label_pairing(labels, r.index) > 0]


def theta_sum(R: RootDatum, labels: Sequence[int], I: frozenset[int]) -> dict[tuple[int, ...], int]:
    """``sum over beta in Psi^+ of theta(s_beta mu)`` as ``{target labels: coefficient}``."""
    inside = {r.index for r in R.positive_roots_of(I)}
    out: dict[tuple[int, ...], int] = {}
    for r in R.positive_roots:
        if r.index in inside:
            continue
        p = R.label_pairing(labels, r.index)
        if p <= 0:
            continue
        rl = _root_labels(R, r.index)
        reflected = tuple(a - p * b for a, b in zip(labels, rl))
        sign, lab, _ = _theta_labels(R, reflected, I)
        if sign:
            out[lab] = out.get(lab, 0) + sign
    return {k: v for k, v in out.items() if v}


def internal_reflection_count_ok(b: BlockDescriptor, s: int) -> bool:
    """For every ``w`` in ``W_I``: ``#{beta in Phi_I^+ : <w mu, beta^vee> < 0} = l(w)``."""
    R = b.root_datum
    labels = b.labels[s - 1]
    roots = [r.index for r in R.positive_roots_of(b.I)]
    for w in b.group.parabolic_elements(b.I):
        wl = w.act_labels(labels)
        if sum(1 for k in roots if R.label_pairing(wl, k) < 0) != w.length:
            return False
    return True


@dataclass
class JantzenTable:
    block: BlockDescriptor
    coeffs: dict[tuple[int, int], int] = field(default_factory=dict)

    def get(self, s: int, t: int) -> int:
        return self.coeffs.get((s, t), 0)

    def row(self, s: int) -> dict[int, int]:
        return {t: c for (a, t), c in sorted(self.coeffs.items()) if a == s}

    def items(self) -> list[tuple[int, int, int]]:
        return [(s, t, c) for (s, t), c in sorted(self.coeffs.items())]

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_json(self) -> list[dict]:
        return [{"from": s, "to": t, "c": c} for s, t, c in self.items()]


def jantzen_coefficients(b: BlockDescriptor, check_reflection_count: bool | None = None) -> JantzenTable:
    R = b.root_datum
    if check_reflection_count is None:
        check_reflection_count = R.rank <= 3
    table = JantzenTable(b)
    index = b.index_of_labels
    for s in range(1, b.size + 1):
        if check_reflection_count and not internal_reflection_count_ok(b, s):
            raise JantzenError(f"internal reflection count mismatch at module {s}")
        for lab, c in theta_sum(R, b.labels[s - 1], b.I).items():
            t = index.get(lab)
            if t is None:
                raise JantzenError(f"theta target {lab} of module {s} lies outside the block")
            if t <= s:
                raise JantzenError(f"Jantzen coefficient c({s},{t}) violates the weight order")
            table.coeffs[(s, t)] = c
    return table


def sum_formula_rhs(
    b: BlockDescriptor,
    s: int,
    table: JantzenTable | None = None,
    decomposition: Sequence[Sequence[int]] | None = None,
) -> list[int]:
    """``sum_t c(s,t) [M_t]`` expanded in simples; entry ``t-1`` is the multiplicity of ``L_t``."""
    table = table if table is not None else jantzen_coefficients(b)
    decomposition = decomposition if decomposition is not None else ungraded(b)
    n = b.size
    out = [0] * n
    for t, c in table.row(s).items():
        row = decomposition[t - 1]
        for u in range(n):
            out[u] += c * row[u]
    return out


def is_simple(b: BlockDescriptor, s: int) -> bool:
    return not theta_sum(b.root_datum, b.labels[s - 1], b.I)

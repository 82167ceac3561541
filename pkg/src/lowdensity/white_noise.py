"""Symbolic commutator engine for the limiting white-noise generators.

Three generator kinds act on the limit Fock space: creators B+, gauge
(number-like) generators NG, and annihilators B-.  Each carries two vector
labels and symbolic energy / time variables.  Scalars are tracked exactly:
a complex numeric, a power of 2 pi, symmetric delta atoms linking time or
energy variables, and inner-product atoms

    ip(a, b, E)  = <a, P_E b>
    ipn(a, b, E) = <a, P_E n_hat b>

The closed commutation relations:

    [B-_{f,g}(E,t), B+_{f',g'}(E',t')] = 2pi d(t'-t) d(E'-E) ip(f,f',E) ipn(g',g,E)
    [B-_{f,g}(E,t), NG_{f',g'}(E',t')] = 2pi d(t'-t) d(E-E')  ip(f,f',E)  B-_{g',g}(E,t)
    [NG_{a,b}(E',t'), B+_{f,g}(E,t)]  = 2pi d(t-t')  d(E-E')  ip(b,f,E)   B+_{a,g}(E,t)
    [NG_{f,g}(E,t), NG_{f',g'}(E',t')] = 2pi d(t'-t) d(E'-E)
            ( ip(g,f',E) NG_{f,g'}(E,t) - ip(g',f,E) NG_{f',g}(E,t) )

with like-kind B commutators vanishing.  The third line is the adjoint
companion of the second (NG* swaps labels).  Delta atoms are symmetric, and
within any product each delta graph stays a forest, so a term's delta
structure is canonically the induced partition of its variables.

Normal order puts creators left, gauge middle, annihilators right; vacuum
expectations keep only the generator-free terms.  Each smeared number symbol
expands as N_{f,g}(t) = integral dE [ NG_{f,g} + B-_{g,f} + B+_{f,g} ](E,t)
plus, by default, the scalar gamma_{f,g} = integral dE ipn(g,f,E); without
the scalar the engine reproduces truncated correlations only.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from math import pi
from typing import Iterable, Mapping, Sequence

import numpy as np

CREATE = "create"
GAUGE = "gauge"
ANNIHILATE = "annihilate"

_NORMAL_RANK = {CREATE: 0, GAUGE: 1, ANNIHILATE: 2}
_ANTI_RANK = {ANNIHILATE: 0, GAUGE: 1, CREATE: 2}
_KIND_MARK = {CREATE: "B+", GAUGE: "NG", ANNIHILATE: "B-"}

NORMAL_ORDER_STEP_CAP = 5_000_000

_VAR_RE = re.compile(r"^([A-Za-z]+)(\d+)$")


def _var_key(name: str):
    m = _VAR_RE.match(name)
    if m:
        return (m.group(1), int(m.group(2)), "")
    return (name, -1, name)


@dataclass(frozen=True)
class WnGenerator:
    kind: str
    left: str
    right: str
    energy: str
    time: str

    def __post_init__(self):
        if self.kind not in _KIND_MARK:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    def __str__(self) -> str:
        return f"{_KIND_MARK[self.kind]}[{self.left},{self.right}]({self.energy},{self.time})"


def creator(left: str, right: str, energy: str, time: str) -> WnGenerator:
    return WnGenerator(CREATE, left, right, energy, time)


def gauge(left: str, right: str, energy: str, time: str) -> WnGenerator:
    return WnGenerator(GAUGE, left, right, energy, time)


def annihilator(left: str, right: str, energy: str, time: str) -> WnGenerator:
    return WnGenerator(ANNIHILATE, left, right, energy, time)


@dataclass(frozen=True)
class Coefficient:
    """Exact scalar prefactor of a term."""

    numeric: complex = 1.0 + 0j
    two_pi: int = 0
    t_deltas: tuple[tuple[str, str], ...] = ()
    e_deltas: tuple[tuple[str, str], ...] = ()
    ips: tuple[tuple[str, str, str], ...] = ()
    ipns: tuple[tuple[str, str, str], ...] = ()

    def __mul__(self, other: "Coefficient") -> "Coefficient":
        return Coefficient(
            numeric=self.numeric * other.numeric,
            two_pi=self.two_pi + other.two_pi,
            t_deltas=self.t_deltas + other.t_deltas,
            e_deltas=self.e_deltas + other.e_deltas,
            ips=self.ips + other.ips,
            ipns=self.ipns + other.ipns,
        )

    def scaled(self, z: complex) -> "Coefficient":
        return replace(self, numeric=self.numeric * z)


def _delta(a: str, b: str) -> tuple[str, str]:
    return (a, b) if _var_key(a) <= _var_key(b) else (b, a)


@dataclass(frozen=True)
class WnTerm:
    coeff: Coefficient
    factors: tuple[WnGenerator, ...] = ()

    def __str__(self) -> str:
        c = self.coeff
        bits = []
        if c.numeric != 1 or (not c.two_pi and not self.factors and not c.ips and not c.ipns):
            bits.append(f"{c.numeric:g}" if c.numeric.imag == 0 else f"({c.numeric:g})")
        if c.two_pi:
            bits.append(f"2pi^{c.two_pi}" if c.two_pi != 1 else "2pi")
        bits += [f"dt({a},{b})" for a, b in c.t_deltas]
        bits += [f"dE({a},{b})" for a, b in c.e_deltas]
        bits += [f"ip({a},{b};{e})" for a, b, e in c.ips]
        bits += [f"ipn({a},{b};{e})" for a, b, e in c.ipns]
        bits += [str(g) for g in self.factors]
        return " ".join(bits) if bits else "1"


@dataclass(frozen=True)
class WnExpression:
    terms: tuple[WnTerm, ...] = ()

    def __add__(self, other: "WnExpression") -> "WnExpression":
        return WnExpression(self.terms + other.terms)

    def scaled(self, z: complex) -> "WnExpression":
        return WnExpression(tuple(WnTerm(t.coeff.scaled(z), t.factors) for t in self.terms))

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms) if self.terms else "0"


def _classes(pairs: Iterable[tuple[str, str]]) -> dict[str, str]:
    """Union-find over delta pairs; returns var -> representative (least by
    natural variable order)."""
    parent: dict[str, str] = {}

    def find(v: str) -> str:
        parent.setdefault(v, v)
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = (ra, rb) if _var_key(ra) <= _var_key(rb) else (rb, ra)
            parent[hi] = lo
    return {v: find(v) for v in parent}


def _partition_tuple(rep: dict[str, str]) -> tuple[tuple[str, ...], ...]:
    groups: dict[str, list[str]] = {}
    for v, r in rep.items():
        groups.setdefault(r, []).append(v)
    classes = [tuple(sorted(g, key=_var_key)) for g in groups.values()]
    return tuple(sorted(classes, key=lambda c: _var_key(c[0])))


def canonical_term(term: WnTerm) -> WnTerm:
    """Rewrite every variable to its delta-class representative and store the
    delta structure as the induced partition (one pair per extra member)."""
    c = term.coeff
    t_rep = _classes(c.t_deltas)
    e_rep = _classes(c.e_deltas)
    # forest check: a delta graph with a cycle would square a delta
    t_classes = _partition_tuple(t_rep)
    e_classes = _partition_tuple(e_rep)
    if len(c.t_deltas) != sum(len(cl) - 1 for cl in t_classes):
        raise ValueError("time delta atoms form a cycle")
    if len(c.e_deltas) != sum(len(cl) - 1 for cl in e_classes):
        raise ValueError("energy delta atoms form a cycle")

    def t_of(v: str) -> str:
        return t_rep.get(v, v)

    def e_of(v: str) -> str:
        return e_rep.get(v, v)

    coeff = Coefficient(
        numeric=c.numeric,
        two_pi=c.two_pi,
        t_deltas=tuple(_delta(cl[0], v) for cl in t_classes for v in cl[1:]),
        e_deltas=tuple(_delta(cl[0], v) for cl in e_classes for v in cl[1:]),
        ips=tuple(sorted((a, b, e_of(e)) for a, b, e in c.ips)),
        ipns=tuple(sorted((a, b, e_of(e)) for a, b, e in c.ipns)),
    )
    factors = tuple(replace(g, energy=e_of(g.energy), time=t_of(g.time)) for g in term.factors)
    return WnTerm(coeff, factors)


def canonicalize(expr: WnExpression) -> WnExpression:
    """Merge terms equal up to delta-induced variable identification."""
    acc: dict[tuple, tuple[complex, WnTerm]] = {}
    for term in expr.terms:
        ct = canonical_term(term)
        c = ct.coeff
        key = (c.two_pi, c.t_deltas, c.e_deltas, c.ips, c.ipns, ct.factors)
        if key in acc:
            acc[key] = (acc[key][0] + c.numeric, ct)
        else:
            acc[key] = (c.numeric, ct)
    terms = []
    for numeric, ct in acc.values():
        if numeric != 0:
            terms.append(WnTerm(replace(ct.coeff, numeric=numeric), ct.factors))
    return WnExpression(tuple(sorted(terms, key=str)))


def _cr_bminus_bplus(bm: WnGenerator, bp: WnGenerator) -> WnExpression:
    coeff = Coefficient(
        two_pi=1,
        t_deltas=(_delta(bp.time, bm.time),),
        e_deltas=(_delta(bp.energy, bm.energy),),
        ips=((bm.left, bp.left, bm.energy),),
        ipns=((bp.right, bm.right, bm.energy),),
    )
    return WnExpression((WnTerm(coeff),))


def _cr_bminus_gauge(bm: WnGenerator, ng: WnGenerator) -> WnExpression:
    coeff = Coefficient(
        two_pi=1,
        t_deltas=(_delta(ng.time, bm.time),),
        e_deltas=(_delta(bm.energy, ng.energy),),
        ips=((bm.left, ng.left, bm.energy),),
    )
    out = annihilator(ng.right, bm.right, bm.energy, bm.time)
    return WnExpression((WnTerm(coeff, (out,)),))


def _cr_gauge_bplus(ng: WnGenerator, bp: WnGenerator) -> WnExpression:
    coeff = Coefficient(
        two_pi=1,
        t_deltas=(_delta(bp.time, ng.time),),
        e_deltas=(_delta(bp.energy, ng.energy),),
        ips=((ng.right, bp.left, bp.energy),),
    )
    out = creator(ng.left, bp.right, bp.energy, bp.time)
    return WnExpression((WnTerm(coeff, (out,)),))


def _cr_gauge_gauge(n1: WnGenerator, n2: WnGenerator) -> WnExpression:
    base = Coefficient(
        two_pi=1,
        t_deltas=(_delta(n2.time, n1.time),),
        e_deltas=(_delta(n2.energy, n1.energy),),
    )
    plus = WnTerm(
        base * Coefficient(ips=((n1.right, n2.left, n1.energy),)),
        (gauge(n1.left, n2.right, n1.energy, n1.time),),
    )
    minus = WnTerm(
        (base * Coefficient(ips=((n2.right, n1.left, n1.energy),))).scaled(-1.0),
        (gauge(n2.left, n1.right, n1.energy, n1.time),),
    )
    return WnExpression((plus, minus))


def commutator(a: WnGenerator, b: WnGenerator) -> WnExpression:
    """[a, b] from the closed relations; like-kind B commutators vanish."""
    if a.kind == ANNIHILATE and b.kind == CREATE:
        return _cr_bminus_bplus(a, b)
    if a.kind == CREATE and b.kind == ANNIHILATE:
        return _cr_bminus_bplus(b, a).scaled(-1.0)
    if a.kind == ANNIHILATE and b.kind == GAUGE:
        return _cr_bminus_gauge(a, b)
    if a.kind == GAUGE and b.kind == ANNIHILATE:
        return _cr_bminus_gauge(b, a).scaled(-1.0)
    if a.kind == GAUGE and b.kind == CREATE:
        return _cr_gauge_bplus(a, b)
    if a.kind == CREATE and b.kind == GAUGE:
        return _cr_gauge_bplus(b, a).scaled(-1.0)
    if a.kind == GAUGE and b.kind == GAUGE:
        return _cr_gauge_gauge(a, b)
    return WnExpression(())


def commutator_expr(x: WnExpression, y: WnExpression) -> WnExpression:
    """Bilinear extension of the generator commutator via the derivation rule
    [g_1..g_m, h] = sum_i g_1..g_{i-1} [g_i, h] g_{i+1}..g_m."""
    terms: list[WnTerm] = []
    for tx in x.terms:
        for ty in y.terms:
            coeff = tx.coeff * ty.coeff
            for j, h in enumerate(ty.factors):
                prefix_y = ty.factors[:j]
                suffix_y = ty.factors[j + 1 :]
                for i, g in enumerate(tx.factors):
                    inner = commutator(g, h)
                    for it in inner.terms:
                        terms.append(
                            WnTerm(
                                coeff * it.coeff,
                                prefix_y + tx.factors[:i] + it.factors + tx.factors[i + 1 :] + suffix_y,
                            )
                        )
            # scalar parts commute; only generator pairs contribute
    return canonicalize(WnExpression(tuple(terms)))


def normal_order(expr: WnExpression, ranks: Mapping[str, int] = _NORMAL_RANK) -> WnExpression:
    """Rewrite xy -> yx + [x,y] until no adjacent pair is disordered.

    Every commutator branch strictly shortens the word and every swap lowers
    the inversion count, so this terminates; the step cap only guards
    against implementation bugs.
    """
    done: list[WnTerm] = []
    stack = list(expr.terms)
    steps = 0
    while stack:
        steps += 1
        if steps > NORMAL_ORDER_STEP_CAP:
            raise RuntimeError(f"normal ordering exceeded {NORMAL_ORDER_STEP_CAP} rewrite steps")
        term = stack.pop()
        fs = term.factors
        spot = next((i for i in range(len(fs) - 1) if ranks[fs[i].kind] > ranks[fs[i + 1].kind]), None)
        if spot is None:
            done.append(term)
            continue
        x, y = fs[spot], fs[spot + 1]
        stack.append(WnTerm(term.coeff, fs[:spot] + (y, x) + fs[spot + 2 :]))
        for ct in commutator(x, y).terms:
            stack.append(WnTerm(term.coeff * ct.coeff, fs[:spot] + ct.factors + fs[spot + 2 :]))
    return canonicalize(WnExpression(tuple(done)))


def anti_normal_order(expr: WnExpression) -> WnExpression:
    """Annihilators left; the opposite ordering, used as a confluence check
    that rewriting preserves the algebra element."""
    return normal_order(expr, ranks=_ANTI_RANK)


def number_symbol_expansion(slot: int, f: str, g: str, include_scalar: bool) -> list[WnTerm]:
    """The four expansion choices of one smeared number symbol at slot l."""
    e, t = f"E{slot}", f"t{slot}"
    out = [
        WnTerm(Coefficient(), (gauge(f, g, e, t),)),
        WnTerm(Coefficient(), (annihilator(g, f, e, t),)),
        WnTerm(Coefficient(), (creator(f, g, e, t),)),
    ]
    if include_scalar:
        out.append(WnTerm(Coefficient(ipns=((g, f, e),))))
    return out


@dataclass(frozen=True)
class VacuumTerm:
    """One scalar contribution to a vacuum expectation after integrating the
    energy deltas; time deltas stay symbolic as a partition of the slots."""

    numeric: complex
    two_pi: int
    time_partition: tuple[tuple[int, ...], ...]
    energy_groups: tuple[tuple[tuple[str, str, str], ...], ...]  # atoms ("ip"|"ipn", a, b) per free energy variable

    @property
    def delta_chain_order(self) -> int:
        return sum(len(c) - 1 for c in self.time_partition)


@dataclass(frozen=True)
class VacuumExpectation:
    k: int
    labels: tuple[tuple[str, str], ...]
    include_scalar: bool
    terms: tuple[VacuumTerm, ...]

    def connected_terms(self) -> tuple[VacuumTerm, ...]:
        full = tuple(range(1, self.k + 1))
        return tuple(t for t in self.terms if t.time_partition == (full,))


def _slot_partition(k: int, t_deltas, prefix: str = "t") -> tuple[tuple[int, ...], ...]:
    rep = _classes(t_deltas)
    classes: dict[str, list[int]] = {}
    for slot in range(1, k + 1):
        v = f"{prefix}{slot}"
        classes.setdefault(rep.get(v, v), []).append(slot)
    return tuple(sorted((tuple(sorted(c)) for c in classes.values()), key=lambda c: c[0]))


def vacuum_expectation(labels: Sequence[tuple[str, str]], include_scalar: bool = True, trace=None) -> VacuumExpectation:
    """<Omega, N_{f_1,g_1}(t_1) ... N_{f_k,g_k}(t_k) Omega> symbolically.

    Expands each symbol into its generator choices, normal orders every
    branch, and keeps the generator-free terms.  With include_scalar the
    result reproduces full correlation functions; without it, only the parts
    where every slot is contracted into some chain.
    """
    labels = tuple((str(f), str(g)) for f, g in labels)
    k = len(labels)
    if not 1 <= k <= 5:
        raise ValueError("vacuum_expectation supports 1 <= k <= 5 symbols")
    choices = [number_symbol_expansion(l, f, g, include_scalar) for l, (f, g) in enumerate(labels, start=1)]

    collected: list[WnTerm] = []
    for combo in itertools.product(*choices):
        coeff = Coefficient()
        factors: tuple[WnGenerator, ...] = ()
        for part in combo:
            coeff = coeff * part.coeff
            factors = factors + part.factors
        ordered = normal_order(WnExpression((WnTerm(coeff, factors),)))
        if trace is not None:
            trace.append((WnTerm(coeff, factors), ordered))
        collected.extend(t for t in ordered.terms if not t.factors)

    merged = canonicalize(WnExpression(tuple(collected)))
    out: list[VacuumTerm] = []
    for term in merged.terms:
        c = term.coeff
        e_rep = _classes(c.e_deltas)
        groups: dict[str, list[tuple[str, str, str]]] = {}
        for a, b, e in c.ips:
            groups.setdefault(e_rep.get(e, e), []).append(("ip", a, b))
        for a, b, e in c.ipns:
            groups.setdefault(e_rep.get(e, e), []).append(("ipn", a, b))
        # one free integration per energy class; every class carries atoms
        n_free = len(set(e_rep.get(f"E{l}", f"E{l}") for l in range(1, k + 1)))
        if n_free != len(groups):
            raise ValueError("energy variable without atoms in a vacuum term")
        out.append(
            VacuumTerm(
                numeric=c.numeric,
                two_pi=c.two_pi,
                time_partition=_slot_partition(k, c.t_deltas),
                energy_groups=tuple(sorted(tuple(sorted(g)) for g in groups.values())),
            )
        )
    out.sort(key=lambda t: (t.time_partition, t.energy_groups))
    return VacuumExpectation(k=k, labels=labels, include_scalar=include_scalar, terms=tuple(out))


@dataclass(frozen=True, eq=False)
class EvaluatedExpectation:
    k: int
    by_partition: dict

    @property
    def connected(self) -> complex:
        return self.by_partition.get((tuple(range(1, self.k + 1)),), 0j)

    def chain(self, order: int) -> complex:
        return sum(
            (v for p, v in self.by_partition.items() if sum(len(c) - 1 for c in p) == order),
            start=0j,
        )

    @property
    def total_coefficient_table(self) -> dict:
        return dict(sorted(self.by_partition.items()))


def _atom_values(atoms, model) -> np.ndarray:
    vals = np.ones(model.grid.bins, dtype=complex)
    for kind, a, b in atoms:
        if kind == "ip":
            vals = vals * np.conj(model.amplitude(a)) * model.amplitude(b)
        elif kind == "ipn":
            vals = vals * np.conj(model.amplitude(a)) * model.density.values * model.amplitude(b)
        else:
            raise ValueError(f"unknown atom kind {kind!r}")
    return vals


def evaluate_symbolic(vac: VacuumExpectation, model) -> EvaluatedExpectation:
    """Numeric value of each delta-chain structure on a grid model: every
    free energy integral becomes a bin sum of its atom product."""
    table: dict[tuple, complex] = {}
    two_pi = 2.0 * pi
    for term in vac.terms:
        val = complex(term.numeric) * two_pi**term.two_pi
        for atoms in term.energy_groups:
            val *= complex(np.sum(_atom_values(atoms, model)) * model.grid.delta_e)
        table[term.time_partition] = table.get(term.time_partition, 0j) + val
    return EvaluatedExpectation(k=vac.k, by_partition=table)

"""Exact CTL model checking on unit-step one-counter processes.

Above the threshold ``B = 2 * |f| * k**2 * K_f`` the satisfaction sets of a
CTL formula repeat with period ``K_f = lcm(1..k) ** lud(f)``, where ``k`` is
the number of control locations. The infinite system is therefore replaced by
a finite quotient: counter values ``0 .. band_lo + K_f - 1`` with
``band_lo = B + 1``, where an increment out of the top of the band wraps back
by exactly ``K_f``. Standard finite-state labeling on that graph yields every
satisfaction set as an ultimately periodic set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import lcm

from .ctl import EU, EW, EX, And, Formula, Not, Prop, expand, lud, size, subformulas
from .ocp import OcpError, OneCounterProcess, is_unit_step
from .periodic import UltimatelyPeriodicSet, member, normalize

#: Refuse to materialize quotients larger than this many states.
DEFAULT_MAX_STATES = 2_000_000


class UnsupportedSystemError(ValueError):
    """The quotient engine cannot handle this system (non-unit effects or size)."""


@dataclass(frozen=True)
class BoundParams:
    k: int
    K: int
    K_phi: int
    B: int
    band_lo: int

    @property
    def width(self) -> int:
        """Number of counter values materialized per location."""
        return self.band_lo + self.K_phi

    def representative(self, n: int) -> int:
        if n < self.band_lo:
            return n
        return self.band_lo + (n - self.band_lo) % self.K_phi

    def header(self) -> dict:
        return {"k": self.k, "K": self.K, "K_phi": self.K_phi, "B": self.B}


def lcm_upto(k: int) -> int:
    """LCM of 1..k (1 for k = 0)."""
    out = 1
    for i in range(2, k + 1):
        out = lcm(out, i)
    return out


def bound_params(ocp: OneCounterProcess, f: Formula) -> BoundParams:
    k = len(ocp.locations)
    K = lcm_upto(k)
    K_phi = K ** lud(f)
    B = 2 * size(f) * k * k * K_phi
    return BoundParams(k, K, K_phi, B, B + 1)


@dataclass(frozen=True)
class QuotientSystem:
    ocp: OneCounterProcess
    params: BoundParams
    succ: tuple[tuple[int, ...], ...]
    pred: tuple[tuple[int, ...], ...]

    @property
    def num_states(self) -> int:
        return len(self.succ)

    def index(self, location: str, value: int) -> int:
        return self.ocp.locations.index(location) * self.params.width + value

    def state(self, idx: int) -> tuple[str, int]:
        w = self.params.width
        return self.ocp.locations[idx // w], idx % w


def build_quotient(
    ocp: OneCounterProcess, bp: BoundParams, max_states: int = DEFAULT_MAX_STATES
) -> QuotientSystem:
    if not is_unit_step(ocp):
        raise UnsupportedSystemError(
            "the quotient engine needs counter effects in {-1, 0, +1}; use the oracle engine"
        )
    w = bp.width
    n_states = len(ocp.locations) * w
    if n_states > max_states:
        raise UnsupportedSystemError(
            f"quotient would have {n_states} states (limit {max_states}); use the oracle engine"
        )
    loc_idx = {loc: i for i, loc in enumerate(ocp.locations)}
    top = w  # first value that wraps
    succ: list[tuple[int, ...]] = []
    pred: list[list[int]] = [[] for _ in range(n_states)]
    for q in ocp.locations:
        zero_rules = ocp.rules_from(q, True)
        pos_rules = ocp.rules_from(q, False)
        # width >= 2, so a unit zero-step never wraps
        zero_out = tuple(sorted({loc_idx[r.target] * w + r.effect for r in zero_rules}))
        base = loc_idx[q] * w
        succ.append(zero_out)
        for v in range(1, w):
            targets = set()
            for r in pos_rules:
                v2 = v + r.effect
                if v2 < 0:
                    continue
                if v2 >= top:
                    v2 -= bp.K_phi
                targets.add(loc_idx[r.target] * w + v2)
            succ.append(tuple(sorted(targets)))
        for v in range(w):
            for t in succ[base + v]:
                pred[t].append(base + v)
    return QuotientSystem(ocp, bp, tuple(succ), tuple(tuple(p) for p in pred))


# --- finite-state labeling -------------------------------------------------------


def _label_prop(qs: QuotientSystem, name: str) -> list[bool]:
    w = qs.params.width
    out = []
    for q in qs.ocp.locations:
        out.extend([qs.ocp.holds(name, q)] * w)
    return out


def _pre_image(qs: QuotientSystem, target: list[bool]) -> list[bool]:
    out = [False] * qs.num_states
    for t, hit in enumerate(target):
        if hit:
            for p in qs.pred[t]:
                out[p] = True
    return out


def _until(qs: QuotientSystem, hold: list[bool], goal: list[bool]) -> list[bool]:
    """Least fixpoint of ``goal | (hold & EX Z)``."""
    out = list(goal)
    work = deque(i for i, g in enumerate(goal) if g)
    while work:
        t = work.popleft()
        for p in qs.pred[t]:
            if not out[p] and hold[p]:
                out[p] = True
                work.append(p)
    return out


def _always(qs: QuotientSystem, hold: list[bool]) -> list[bool]:
    """Greatest fixpoint of ``hold & EX Z``: states with an infinite ``hold``-path."""
    inside = list(hold)
    count = [sum(1 for t in qs.succ[s] if inside[t]) if inside[s] else 0 for s in range(qs.num_states)]
    work = deque(s for s in range(qs.num_states) if inside[s] and count[s] == 0)
    while work:
        s = work.popleft()
        if not inside[s]:
            continue
        inside[s] = False
        for p in qs.pred[s]:
            if inside[p]:
                count[p] -= 1
                if count[p] == 0:
                    work.append(p)
    return inside


def label_states(qs: QuotientSystem, f: Formula) -> dict[Formula, list[bool]]:
    """Label every quotient state with every subformula of core formula ``f``."""
    labels: dict[Formula, list[bool]] = {}
    for g in subformulas(f):
        if g in labels:
            continue
        if isinstance(g, Prop):
            val = _label_prop(qs, g.name)
        elif isinstance(g, Not):
            val = [not x for x in labels[g.arg]]
        elif isinstance(g, And):
            val = [a and b for a, b in zip(labels[g.left], labels[g.right])]
        elif isinstance(g, EX):
            val = _pre_image(qs, labels[g.arg])
        elif isinstance(g, EU):
            val = _until(qs, labels[g.left], labels[g.right])
        elif isinstance(g, EW):
            finite = _until(qs, labels[g.left], labels[g.right])
            val = [a or b for a, b in zip(finite, _always(qs, labels[g.left]))]
        else:
            raise TypeError(f"not a core formula: {g!r}")
        labels[g] = val
    return labels


@dataclass(frozen=True)
class Labeling:
    params: BoundParams
    sets: dict[str, UltimatelyPeriodicSet]

    def to_json(self) -> dict:
        return {
            "header": self.params.header(),
            "labels": {loc: self.sets[loc].to_json() for loc in sorted(self.sets)},
        }


def label(ocp: OneCounterProcess, f: Formula, max_states: int = DEFAULT_MAX_STATES) -> Labeling:
    """Satisfaction set of ``f`` at each location, as ultimately periodic sets."""
    core = expand(f)
    bp = bound_params(ocp, core)
    qs = build_quotient(ocp, bp, max_states)
    bits = label_states(qs, core)[core]
    w = bp.width
    sets = {}
    for i, q in enumerate(ocp.locations):
        row = bits[i * w:(i + 1) * w]
        raw = UltimatelyPeriodicSet(bp.band_lo, bp.K_phi, tuple(row[:bp.band_lo]), tuple(row[bp.band_lo:]))
        sets[q] = normalize(raw)
    return Labeling(bp, sets)


def check(
    ocp: OneCounterProcess, f: Formula, location: str, n: int, max_states: int = DEFAULT_MAX_STATES
) -> bool:
    """Decide ``(location, n) |= f``; ``n`` may be arbitrarily large."""
    if location not in ocp.locations:
        raise OcpError(f"unknown location {location!r}")
    if n < 0:
        raise OcpError("counter must be non-negative")
    return member(label(ocp, f, max_states).sets[location], n)

"""Sound three-valued CTL evaluation on a counter-truncated system.

Counter values above a ceiling ``C`` are collapsed into one absorbing
``Frontier`` state about which nothing is known. Evaluation uses strong
Kleene logic, so every definite answer agrees with the infinite system;
formulas whose witnesses escape every ceiling come out ``UNKNOWN``.
Arbitrary integer counter effects are supported.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ctl import EU, EW, EX, And, Formula, Not, Prop, expand, subformulas
from .ocp import OcpError, OneCounterProcess

DEFAULT_MAX_CEILING = 2 ** 16


class TruthValue3(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @property
    def definite(self) -> bool:
        return self is not TruthValue3.UNKNOWN

    def __invert__(self):
        return _NEG[self]

    def __and__(self, other):
        if self is TruthValue3.FALSE or other is TruthValue3.FALSE:
            return TruthValue3.FALSE
        if self is TruthValue3.TRUE and other is TruthValue3.TRUE:
            return TruthValue3.TRUE
        return TruthValue3.UNKNOWN

    def __or__(self, other):
        return ~(~self & ~other)


_NEG = {
    TruthValue3.TRUE: TruthValue3.FALSE,
    TruthValue3.FALSE: TruthValue3.TRUE,
    TruthValue3.UNKNOWN: TruthValue3.UNKNOWN,
}


class IndefiniteError(RuntimeError):
    """The oracle stayed UNKNOWN up to the maximal ceiling."""


class TruncatedSystem:
    """States ``(q, v)`` for ``0 <= v <= ceiling`` plus one Frontier state.

    Steps whose target counter exceeds the ceiling lead to Frontier, which
    has no successors. Frontier is the last index.
    """

    def __init__(self, ocp: OneCounterProcess, ceiling: int):
        if ceiling < 0:
            raise OcpError("ceiling must be non-negative")
        self.ocp = ocp
        self.ceiling = ceiling
        self.width = ceiling + 1
        self.frontier = len(ocp.locations) * self.width
        self._loc = {q: i for i, q in enumerate(ocp.locations)}
        succ: list[set[int]] = []
        for q in ocp.locations:
            for v in range(self.width):
                out = set()
                for r in ocp.rules_from(q, v == 0):
                    v2 = v + r.effect
                    if v2 < 0:
                        continue
                    out.add(self.frontier if v2 > ceiling else self._loc[r.target] * self.width + v2)
                succ.append(out)
        succ.append(set())
        self.succ = succ
        pred: list[list[int]] = [[] for _ in succ]
        for s, outs in enumerate(succ):
            for t in outs:
                pred[t].append(s)
        self.pred = pred

    def __len__(self):
        return len(self.succ)

    def index(self, location: str, value: int) -> int:
        if location not in self._loc:
            raise OcpError(f"unknown location {location!r}")
        if not 0 <= value <= self.ceiling:
            raise OcpError(f"counter {value} outside [0, {self.ceiling}]")
        return self._loc[location] * self.width + value


# A three-valued labeling is a pair (sure, possible) of boolean vectors with
# sure <= possible; Frontier is always (False, True).


def _backward_closure(ts: TruncatedSystem, seeds: list[bool], through: list[bool]) -> list[bool]:
    reached = list(seeds)
    stack = [s for s, b in enumerate(seeds) if b]
    while stack:
        s = stack.pop()
        for p in ts.pred[s]:
            if through[p] and not reached[p]:
                reached[p] = True
                stack.append(p)
    return reached


def _infinite_paths(ts: TruncatedSystem, allowed: list[bool]) -> list[bool]:
    """States from which some path stays forever inside ``allowed``.

    Frontier, if allowed, counts as such a state (it stands for everything above the ceiling).
    """
    alive = list(allowed)
    live_succ = [0] * len(ts)
    for s in range(len(ts)):
        if alive[s]:
            live_succ[s] = sum(1 for t in ts.succ[s] if alive[t])
    f = ts.frontier
    dead = [s for s in range(len(ts)) if alive[s] and live_succ[s] == 0 and s != f]
    while dead:
        s = dead.pop()
        if not alive[s]:
            continue
        alive[s] = False
        for p in ts.pred[s]:
            if alive[p]:
                live_succ[p] -= 1
                if live_succ[p] == 0 and p != f:
                    dead.append(p)
    return alive


def _pin_frontier(ts, sure, possible):
    sure[ts.frontier] = False
    possible[ts.frontier] = True
    return sure, possible


def label3(ts: TruncatedSystem, f: Formula) -> tuple[list[bool], list[bool]]:
    """Three-valued labeling of every truncated state with core formula ``f``."""
    memo: dict[Formula, tuple[list[bool], list[bool]]] = {}
    n = len(ts)
    for g in subformulas(f):
        if g in memo:
            continue
        if isinstance(g, Prop):
            sure = []
            for q in ts.ocp.locations:
                sure.extend([ts.ocp.holds(g.name, q)] * ts.width)
            sure.append(False)
            res = (sure, list(sure))
        elif isinstance(g, Not):
            s, p = memo[g.arg]
            res = ([not x for x in p], [not x for x in s])
        elif isinstance(g, And):
            (s1, p1), (s2, p2) = memo[g.left], memo[g.right]
            res = ([a and b for a, b in zip(s1, s2)], [a and b for a, b in zip(p1, p2)])
        elif isinstance(g, EX):
            s, p = memo[g.arg]
            res = (
                [any(s[t] for t in ts.succ[i]) for i in range(n)],
                [any(p[t] for t in ts.succ[i]) for i in range(n)],
            )
        elif isinstance(g, (EU, EW)):
            (s1, p1), (s2, p2) = memo[g.left], memo[g.right]
            sure = _backward_closure(ts, s2, s1)
            possible = _backward_closure(ts, p2, p1)
            if isinstance(g, EW):
                inf_sure = _infinite_paths(ts, [x and i != ts.frontier for i, x in enumerate(s1)])
                inf_possible = _infinite_paths(ts, p1)
                sure = [a or b for a, b in zip(sure, inf_sure)]
                possible = [a or b for a, b in zip(possible, inf_possible)]
            res = (sure, possible)
        else:
            raise TypeError(f"not a core formula: {g!r}")
        memo[g] = _pin_frontier(ts, *res)
    return memo[f]


@dataclass
class OracleLabeling:
    system: TruncatedSystem
    sure: list[bool]
    possible: list[bool]

    def value(self, location: str, n: int) -> TruthValue3:
        i = self.system.index(location, n)
        if self.sure[i]:
            return TruthValue3.TRUE
        if self.possible[i]:
            return TruthValue3.UNKNOWN
        return TruthValue3.FALSE


def oracle_labeling(ocp: OneCounterProcess, f: Formula, ceiling: int) -> OracleLabeling:
    ts = TruncatedSystem(ocp, ceiling)
    sure, possible = label3(ts, expand(f))
    return OracleLabeling(ts, sure, possible)


def eval3(ocp: OneCounterProcess, f: Formula, location: str, n: int, ceiling: int) -> TruthValue3:
    if n > ceiling:
        raise OcpError(f"counter {n} exceeds ceiling {ceiling}")
    if location not in ocp.locations:
        raise OcpError(f"unknown location {location!r}")
    return oracle_labeling(ocp, f, ceiling).value(location, n)


def eval_definite(
    ocp: OneCounterProcess,
    f: Formula,
    location: str,
    n: int,
    initial_ceiling: int | None = None,
    max_ceiling: int = DEFAULT_MAX_CEILING,
) -> bool:
    """Deepen the ceiling (doubling) until the verdict is definite."""
    c = n if initial_ceiling is None else initial_ceiling
    if not n <= c <= max_ceiling:
        raise OcpError(f"need counter {n} <= initial ceiling {c} <= max ceiling {max_ceiling}")
    while True:
        v = eval3(ocp, f, location, n, c)
        if v.definite:
            return v is TruthValue3.TRUE
        if c >= max_ceiling:
            raise IndefiniteError(f"verdict at {location}:{n} still unknown at ceiling {c}")
        c = min(max(2 * c, c + 1), max_ceiling)

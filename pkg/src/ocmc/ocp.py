"""One-counter processes and their (infinite) transition systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

ZERO = "zero"
POSITIVE = "positive"

#: Reserved proposition used by the EF/EG abbreviations; never labels anything.
RESERVED_PROP = "_tt"


class OcpError(ValueError):
    """Raised for malformed one-counter processes or bad queries against them."""


@dataclass(frozen=True, order=True)
class TransitionRule:
    source: str
    effect: int
    target: str
    mode: str = POSITIVE

    def __post_init__(self):
        if self.mode not in (ZERO, POSITIVE):
            raise OcpError(f"unknown rule mode {self.mode!r}")
        if self.mode == ZERO and self.effect < 0:
            raise OcpError(
                f"zero rule {self.source} {self.effect} {self.target} has negative effect"
            )


@dataclass(frozen=True, order=True)
class State:
    location: str
    counter: int

    def __post_init__(self):
        if self.counter < 0:
            raise OcpError(f"negative counter in state ({self.location}, {self.counter})")

    def __str__(self):
        return f"{self.location}:{self.counter}"


@dataclass(frozen=True)
class OneCounterProcess:
    locations: tuple[str, ...]
    propositions: Mapping[str, frozenset[str]] = field(default_factory=dict)
    zero_rules: frozenset[TransitionRule] = frozenset()
    positive_rules: frozenset[TransitionRule] = frozenset()

    def __post_init__(self):
        locs = tuple(self.locations)
        if len(set(locs)) != len(locs):
            raise OcpError("duplicate location identifiers")
        known = set(locs)
        props = {}
        for name, members in dict(self.propositions).items():
            if name == RESERVED_PROP:
                raise OcpError(f"proposition name {RESERVED_PROP!r} is reserved")
            members = frozenset(members)
            missing = members - known
            if missing:
                raise OcpError(f"proposition {name!r} mentions unknown locations {sorted(missing)}")
            props[name] = members
        zero = frozenset(self.zero_rules)
        pos = frozenset(self.positive_rules)
        for rule, mode in [(r, ZERO) for r in zero] + [(r, POSITIVE) for r in pos]:
            if rule.mode != mode:
                raise OcpError(f"rule {rule} filed under the wrong mode")
            for loc in (rule.source, rule.target):
                if loc not in known:
                    raise OcpError(f"rule {rule.source} {rule.effect} {rule.target} mentions unknown location {loc!r}")
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "propositions", props)
        object.__setattr__(self, "zero_rules", zero)
        object.__setattr__(self, "positive_rules", pos)
        # rules per source, sorted by (target, effect) for deterministic successor order
        by_src = {loc: ([], []) for loc in locs}
        for r in sorted(zero, key=lambda r: (r.target, r.effect)):
            by_src[r.source][0].append(r)
        for r in sorted(pos, key=lambda r: (r.target, r.effect)):
            by_src[r.source][1].append(r)
        object.__setattr__(
            self, "_rules_by_source", {k: (tuple(z), tuple(p)) for k, (z, p) in by_src.items()}
        )

    @classmethod
    def build(
        cls,
        locations: Iterable[str],
        propositions: Mapping[str, Iterable[str]] | None = None,
        zero: Iterable[tuple[str, int, str]] = (),
        positive: Iterable[tuple[str, int, str]] = (),
    ) -> "OneCounterProcess":
        """Convenience constructor from plain ``(source, effect, target)`` triples."""
        return cls(
            tuple(locations),
            {k: frozenset(v) for k, v in (propositions or {}).items()},
            frozenset(TransitionRule(s, e, t, ZERO) for s, e, t in zero),
            frozenset(TransitionRule(s, e, t, POSITIVE) for s, e, t in positive),
        )

    def rules_from(self, location: str, counter_is_zero: bool) -> tuple[TransitionRule, ...]:
        try:
            zero, pos = self._rules_by_source[location]
        except KeyError:
            raise OcpError(f"unknown location {location!r}") from None
        return zero if counter_is_zero else pos

    def labels(self, location: str) -> frozenset[str]:
        return frozenset(p for p, locs in self.propositions.items() if location in locs)

    def holds(self, prop: str, location: str) -> bool:
        return location in self.propositions.get(prop, ())

    @property
    def all_rules(self) -> tuple[TransitionRule, ...]:
        return tuple(sorted(self.zero_rules | self.positive_rules))


def successors(ocp: OneCounterProcess, s: State) -> list[State]:
    """Successor states of ``s`` in T(ocp), ordered by (target, effect).

    Positive-mode steps that would drive the counter below zero are disabled.
    """
    n = s.counter
    out = []
    for rule in ocp.rules_from(s.location, n == 0):
        m = n + rule.effect
        if m >= 0:
            out.append(State(rule.target, m))
    # dedupe while keeping order (two rules can coincide only if identical)
    seen = set()
    return [x for x in out if not (x in seen or seen.add(x))]


def is_ocn(ocp: OneCounterProcess) -> bool:
    pos = {(r.source, r.effect, r.target) for r in ocp.positive_rules}
    return all((r.source, r.effect, r.target) in pos for r in ocp.zero_rules)


def is_unit_step(ocp: OneCounterProcess) -> bool:
    return all(r.effect in (-1, 0, 1) for r in ocp.all_rules)


# --- text format -------------------------------------------------------------


def parse_ocp(text: str) -> OneCounterProcess:
    """Parse the line-oriented OCP format (``loc``, ``prop``, ``t0``, ``tp``).

    Errors carry the offending line number.
    """
    locations: list[str] = []
    props: dict[str, set[str]] = {}
    zero, pos = [], []
    prop_lines: list[tuple[int, str, list[str]]] = []
    rule_lines: list[tuple[int, str, str, int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        if head == "loc":
            if not args:
                raise OcpError(f"line {lineno}: 'loc' needs at least one identifier")
            for a in args:
                if a in locations:
                    raise OcpError(f"line {lineno}: duplicate location {a!r}")
                locations.append(a)
        elif head == "prop":
            if len(args) < 2:
                raise OcpError(f"line {lineno}: 'prop' needs a name and at least one location")
            if args[0] == RESERVED_PROP:
                raise OcpError(f"line {lineno}: proposition {RESERVED_PROP!r} is reserved")
            prop_lines.append((lineno, args[0], args[1:]))
        elif head in ("t0", "tp"):
            if len(args) != 3:
                raise OcpError(f"line {lineno}: '{head}' expects <src> <delta> <dst>")
            src, delta, dst = args
            try:
                eff = int(delta, 10)
            except ValueError:
                raise OcpError(f"line {lineno}: bad counter delta {delta!r}") from None
            if head == "t0" and eff < 0:
                raise OcpError(f"line {lineno}: zero rule with negative delta {eff}")
            rule_lines.append((lineno, head, src, eff, dst))
        else:
            raise OcpError(f"line {lineno}: unknown directive {head!r}")
    known = set(locations)
    for lineno, name, locs in prop_lines:
        for loc in locs:
            if loc not in known:
                raise OcpError(f"line {lineno}: unknown location {loc!r}")
        props.setdefault(name, set()).update(locs)
    for lineno, head, src, eff, dst in rule_lines:
        for loc in (src, dst):
            if loc not in known:
                raise OcpError(f"line {lineno}: unknown location {loc!r}")
        (zero if head == "t0" else pos).append((src, eff, dst))
    return OneCounterProcess.build(locations, props, zero, pos)


def format_ocp(ocp: OneCounterProcess) -> str:
    lines = ["loc " + " ".join(ocp.locations)]
    order = {loc: i for i, loc in enumerate(ocp.locations)}
    for name in sorted(ocp.propositions):
        members = sorted(ocp.propositions[name], key=order.__getitem__)
        if members:
            lines.append(f"prop {name} " + " ".join(members))

    def key(r):
        return (order[r.source], order[r.target], r.effect)

    for r in sorted(ocp.zero_rules, key=key):
        lines.append(f"t0 {r.source} {r.effect:+d} {r.target}")
    for r in sorted(ocp.positive_rules, key=key):
        lines.append(f"tp {r.source} {r.effect:+d} {r.target}")
    return "\n".join(lines) + "\n"

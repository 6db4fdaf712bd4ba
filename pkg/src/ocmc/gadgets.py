"""Hardness gadgets: the fixed one-counter net, divisibility/bit formulas,
the QBF encoding, Chinese remainder utilities, the Boolean-formula OCN and
the NFA composition over serialized words.

Propositions of the fixed net coincide with its locations. ``tb`` stands
for the barred ``t`` location.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import prod
from typing import Iterable, Mapping, Sequence

from .ctl import EU, EX, AX, EF, And, Formula, Implies, Not, Or, Prop, parse_formula
from .ocp import OneCounterProcess, State, successors
from .oracle import TruncatedSystem, label3
from .ctl import expand


class GadgetError(ValueError):
    pass


# --- the fixed net -------------------------------------------------------------

FIXED_LOCATIONS = ("t", "tb", "q0", "q1", "q2", "q3", "f", "g", "p0", "p1")

_FIXED_POSITIVE = [
    # the diamond, every edge decrements
    ("q0", -1, "q1"), ("q1", -1, "q1"), ("q1", -1, "q2"),
    ("q2", -1, "q3"), ("q3", -1, "q3"), ("q3", -1, "q0"),
    # diamond <-> t / tb
    ("q0", 0, "t"), ("t", 0, "q0"), ("q2", 0, "t"),
    ("q1", 0, "tb"), ("tb", 0, "q1"), ("tb", 0, "q2"),
    ("q3", 0, "tb"), ("tb", 0, "q3"),
    # parity check through f/g
    ("t", 0, "f"), ("tb", -1, "f"), ("f", -1, "g"), ("g", -1, "f"),
    # increments for the quantifier gadget
    ("tb", 1, "p1"), ("p1", 1, "p1"), ("p1", 0, "tb"),
    ("tb", 0, "p0"), ("p0", 0, "tb"),
]

_FIXED_ZERO = [
    ("t", 0, "q0"), ("t", 0, "f"), ("tb", 1, "p1"), ("tb", 0, "p0"), ("p0", 0, "tb"),
]


def fixed_ocn() -> OneCounterProcess:
    return OneCounterProcess.build(
        FIXED_LOCATIONS,
        {loc: [loc] for loc in FIXED_LOCATIONS},
        zero=_FIXED_ZERO,
        positive=_FIXED_POSITIVE,
    )


def _any(*names: str) -> Formula:
    out: Formula = Prop(names[0])
    for n in names[1:]:
        out = Or(out, Prop(n))
    return out


TEST = _any("t", "tb")
DIAMOND = _any("q0", "q1", "q2", "q3")
_AT_BOTTOM = And(Prop("q0"), Not(EX(Prop("q1"))))


def _descend(i: int) -> Formula:
    # walk down the diamond, checking divisibility by 2**(i-1) on the way
    return EU(And(DIAMOND, EX(div_formula(i - 1))), _AT_BOTTOM)


@lru_cache(maxsize=None)
def div_formula(i: int) -> Formula:
    """Holds at (t, n) iff 2**i divides n, and at (tb, n) iff it does not."""
    if i < 1:
        raise GadgetError("div_formula needs i >= 1")
    if i == 1:
        f, g = Prop("f"), Prop("g")
        return And(TEST, EX(And(f, EF(And(f, Not(EX(g)))))))
    return And(TEST, EX(_descend(i)))


@lru_cache(maxsize=None)
def bit_formula(i: int) -> Formula:
    """Holds at (tb, n) iff bit i (1-based, least significant first) of n is 1."""
    if i < 1:
        raise GadgetError("bit_formula needs i >= 1")
    if i == 1:
        return div_formula(1)
    return And(Prop("tb"), EX(And(_any("q1", "q2"), _descend(i))))


# --- QBF ---------------------------------------------------------------------

EXISTS = "e"
FORALL = "a"


@dataclass(frozen=True)
class Qbf:
    """``quantifiers[j]`` binds variable ``x_{k-j}`` (outermost first).

    The matrix is a propositional formula over ``x1 .. xk`` built from
    ``Prop``, ``Not``, ``And``, ``Or`` (and ``Implies``, ``TrueF``, ``FalseF``).
    """

    var_count: int
    quantifiers: tuple[str, ...]
    matrix: Formula

    def __post_init__(self):
        if len(self.quantifiers) != self.var_count:
            raise GadgetError("need exactly one quantifier per variable")
        if any(q not in (EXISTS, FORALL) for q in self.quantifiers):
            raise GadgetError("quantifiers must be 'e' or 'a'")
        from .ctl import propositions

        allowed = {f"x{i}" for i in range(1, self.var_count + 1)}
        free = propositions(self.matrix) - allowed
        if free:
            raise GadgetError(f"unbound variables in matrix: {sorted(free)}")

    def quantifier(self, i: int) -> str:
        """Quantifier of ``x_i``."""
        return self.quantifiers[self.var_count - i]


def eval_boolean(f: Formula, assignment: Mapping[str, bool]) -> bool:
    from .ctl import FalseF, TrueF

    if isinstance(f, Prop):
        return bool(assignment.get(f.name, False))
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Not):
        return not eval_boolean(f.arg, assignment)
    if isinstance(f, And):
        return eval_boolean(f.left, assignment) and eval_boolean(f.right, assignment)
    if isinstance(f, Or):
        return eval_boolean(f.left, assignment) or eval_boolean(f.right, assignment)
    if isinstance(f, Implies):
        return (not eval_boolean(f.left, assignment)) or eval_boolean(f.right, assignment)
    raise GadgetError(f"not a propositional formula: {f!r}")


QBF_EVAL_LIMIT = 20


def qbf_eval(alpha: Qbf) -> bool:
    if alpha.var_count > QBF_EVAL_LIMIT:
        raise GadgetError(f"brute-force QBF evaluation limited to {QBF_EVAL_LIMIT} variables")

    def go(i: int, assignment: dict[str, bool]) -> bool:
        if i == 0:
            return eval_boolean(alpha.matrix, assignment)
        branches = []
        for b in (False, True):
            assignment[f"x{i}"] = b
            branches.append(go(i - 1, assignment))
        del assignment[f"x{i}"]
        return any(branches) if alpha.quantifier(i) == EXISTS else all(branches)

    return go(alpha.var_count, {})


def _substitute(f: Formula, table: Mapping[str, Formula]) -> Formula:
    if isinstance(f, Prop):
        return table.get(f.name, f)
    kids = f.children()
    if not kids:
        return f
    return type(f)(*(_substitute(c, table) for c in kids))


def qbf_to_ctl(alpha: Qbf) -> Formula:
    """Formula that holds at (tb, 0) of ``fixed_ocn()`` iff ``alpha`` is valid.

    Each quantifier step moves from ``tb`` either through ``p0`` (bit stays 0)
    or up through ``p1`` (adds ``2**(i-1)``) and back to ``tb``.
    """
    k = alpha.var_count
    if k == 0:
        from .ctl import FalseF, TrueF

        return TrueF() if eval_boolean(alpha.matrix, {}) else FalseF()
    hat = _substitute(alpha.matrix, {f"x{i}": bit_formula(i) for i in range(1, k + 1)})
    tb, p0 = Prop("tb"), Prop("p0")
    branch = _any("p0", "p1")

    def step(i: int, body: Formula) -> Formula:
        if alpha.quantifier(i) == EXISTS:
            return EX(And(branch, body))
        return AX(Implies(branch, body))

    theta = step(1, EX(And(tb, hat)))
    for i in range(2, k + 1):
        phi = div_formula(i - 1)
        climb = EU(Or(p0, EX(And(tb, phi))), EX(And(tb, And(Not(phi), theta))))
        theta = step(i, climb)
    return theta


def parse_qbf(text: str) -> Qbf:
    """QDIMACS-like text: ``p qbf k``, then ``e i`` / ``a i`` lines outermost
    first, then one matrix line over ``x1 .. xk``. ``c`` lines are comments."""
    k = None
    quants: list[tuple[str, int]] = []
    matrix = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c ") or line == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 3 or parts[1] != "qbf":
                raise GadgetError(f"line {lineno}: expected 'p qbf <k>'")
            k = int(parts[2])
        elif parts[0] in (EXISTS, FORALL) and len(parts) == 2 and parts[1].isdigit():
            quants.append((parts[0], int(parts[1])))
        else:
            if matrix is not None:
                raise GadgetError(f"line {lineno}: more than one matrix line")
            try:
                matrix = parse_formula(line)
            except ValueError as e:
                raise GadgetError(f"line {lineno}: {e}") from None
    if k is None:
        raise GadgetError("missing 'p qbf <k>' header")
    if matrix is None:
        raise GadgetError("missing matrix line")
    order = [i for _, i in quants]
    if order != list(range(k, 0, -1)):
        raise GadgetError(f"quantifier lines must bind x{k} .. x1 outermost first, got {order}")
    return Qbf(k, tuple(q for q, _ in quants), matrix)


def format_qbf(alpha: Qbf) -> str:
    from .ctl import format_formula

    lines = [f"p qbf {alpha.var_count}"]
    for j, q in enumerate(alpha.quantifiers):
        lines.append(f"{q} {alpha.var_count - j}")
    lines.append(format_formula(alpha.matrix))
    return "\n".join(lines) + "\n"


# --- Chinese remainder representation ---------------------------------------


def primes_unary(m: int) -> list[int]:
    """The first ``m`` primes."""
    out: list[int] = []
    c = 2
    while len(out) < m:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


def crr(m: int, M: int) -> dict[tuple[int, int], int]:
    """``x_{i,r} = 1`` iff ``M mod p_i == r`` (``i`` is 1-based)."""
    primes = primes_unary(m)
    if not 0 <= M < prod(primes):
        raise GadgetError(f"CRR needs 0 <= M < {prod(primes)}, got {M}")
    return {(i, r): int(M % p == r) for i, p in enumerate(primes, 1) for r in range(p)}


def bin_m(m: int, M: int) -> str:
    if not 0 <= M <= 2 ** m - 1:
        raise GadgetError(f"BIN_{m} needs 0 <= M < {2 ** m}, got {M}")
    return format(M, f"0{m}b") if m else ""


@dataclass(frozen=True)
class CrrFormula:
    """Boolean formula over ``x_{i,r}`` written with ``Prop('x<i>_<r>')`` atoms."""

    m: int
    tree: Formula
    primes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(primes_unary(self.m)))
        for name in _atoms(self.tree):
            i, r = var_index(name)
            if not 1 <= i <= self.m or not 0 <= r < self.primes[i - 1]:
                raise GadgetError(f"variable {name} out of range for m={self.m}")

    def evaluate(self, M: int) -> bool:
        values = crr(self.m, M)
        return eval_boolean(self.tree, {var_name(i, r): bool(b) for (i, r), b in values.items()})

    @property
    def negation_free(self) -> bool:
        from .ctl import subformulas

        return not any(isinstance(g, (Not, Implies)) for g in subformulas(self.tree))


def var_name(i: int, r: int) -> str:
    return f"x{i}_{r}"


def var_index(name: str) -> tuple[int, int]:
    try:
        head, r = name[1:].split("_")
        if name[0] != "x":
            raise ValueError
        return int(head), int(r)
    except ValueError:
        raise GadgetError(f"not a CRR variable: {name!r}") from None


def _atoms(f: Formula) -> set[str]:
    from .ctl import propositions

    return propositions(f)


def parse_crr(text: str, m: int) -> CrrFormula:
    return CrrFormula(m, parse_formula(text))


def _nnf(f: Formula, negate: bool, primes: Sequence[int]) -> Formula:
    from .ctl import FalseF, TrueF

    if isinstance(f, Prop):
        if not negate:
            return f
        i, r = var_index(f.name)
        others = [Prop(var_name(i, k)) for k in range(primes[i - 1]) if k != r]
        out = others[0]
        for o in others[1:]:
            out = Or(out, o)
        return out
    if isinstance(f, Not):
        return _nnf(f.arg, not negate, primes)
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), negate, primes)
    if isinstance(f, (And, Or)):
        flip = (isinstance(f, And)) == negate
        op = Or if flip else And
        return op(_nnf(f.left, negate, primes), _nnf(f.right, negate, primes))
    if isinstance(f, (TrueF, FalseF)):
        raise GadgetError("constants are not CRR formulas; use x1_0 & x1_1 for false")
    raise GadgetError(f"not a CRR formula: {f!r}")


def eliminate_negations(F: CrrFormula) -> CrrFormula:
    """Push negations to the variables, then replace ``!x_{i,r}`` by the
    disjunction of the other residues modulo ``p_i``."""
    if F.negation_free:
        return F
    return CrrFormula(F.m, _nnf(F.tree, False, F.primes))


def default_g(m: int) -> CrrFormula:
    """Conjunction of ``x_{i, 2**m mod p_i}``: true exactly at ``M = 2**m`` below the prime product."""
    primes = primes_unary(m)
    atoms = [Prop(var_name(i, 2 ** m % p)) for i, p in enumerate(primes, 1)]
    tree = atoms[0]
    for a in atoms[1:]:
        tree = And(tree, a)
    return CrrFormula(m, tree)


ALPHA, BETA, GAMMA, RHO = "alpha", "beta", "gamma", "rho"


def fixed_ef_formula() -> Formula:
    return Implies(Prop(ALPHA), EX(And(Prop(BETA), EF(And(Prop(BETA), Not(EX(Prop(GAMMA))))))))


@dataclass
class _OcnBuilder:
    locations: list[str] = field(default_factory=list)
    props: dict[str, set[str]] = field(default_factory=dict)
    zero: list[tuple[str, int, str]] = field(default_factory=list)
    positive: list[tuple[str, int, str]] = field(default_factory=list)

    def loc(self, name: str, *props: str) -> str:
        self.locations.append(name)
        for p in props:
            self.props.setdefault(p, set()).add(name)
        return name

    def both(self, src: str, eff: int, dst: str):
        self.zero.append((src, eff, dst))
        self.positive.append((src, eff, dst))

    def build(self) -> OneCounterProcess:
        return OneCounterProcess.build(self.locations, self.props, self.zero, self.positive)


def _add_formula_ocn(b: _OcnBuilder, F: CrrFormula, prefix: str = "") -> tuple[str, str]:
    if not F.negation_free:
        raise GadgetError("build_ocn_of_formula needs a negation-free formula")
    divs = {}
    for i, p in enumerate(F.primes, 1):
        divs[i] = b.loc(f"{prefix}div{p}", BETA)
    bottom = b.loc(f"{prefix}bot", GAMMA)
    for i, p in enumerate(F.primes, 1):
        b.positive.append((divs[i], -p, divs[i]))
        b.positive.append((divs[i], -1, bottom))
    counter = itertools.count()

    def walk(g: Formula) -> tuple[str, str]:
        n = next(counter)
        if isinstance(g, Prop):
            i, r = var_index(g.name)
            gin = b.loc(f"{prefix}in{n}", ALPHA)
            gout = b.loc(f"{prefix}out{n}")
            b.both(gin, 0, gout)
            b.positive.append((gin, -r, divs[i]))
            if r == 0:
                b.zero.append((gin, 0, divs[i]))
            return gin, gout
        if isinstance(g, (And, Or)):
            gin = b.loc(f"{prefix}in{n}")
            gout = b.loc(f"{prefix}out{n}")
            in1, out1 = walk(g.left)
            in2, out2 = walk(g.right)
            if isinstance(g, And):
                b.both(gin, 0, in1)
                b.both(out1, 0, in2)
                b.both(out2, 0, gout)
            else:
                for i_, o_ in ((in1, out1), (in2, out2)):
                    b.both(gin, 0, i_)
                    b.both(o_, 0, gout)
            return gin, gout
        raise GadgetError(f"unexpected node in negation-free formula: {g!r}")

    return walk(F.tree)


def build_ocn_of_formula(F: CrrFormula) -> tuple[OneCounterProcess, str, str]:
    """One-counter net with locations ``in``/``out`` such that a path of
    ``fixed_ef_formula()``-states leads from ``(in, M)`` to ``(out, M)`` iff
    ``F`` holds on the CRR of ``M``."""
    b = _OcnBuilder()
    gin, gout = _add_formula_ocn(b, F)
    return b.build(), gin, gout


def phi_path_exists(F: CrrFormula, M: int, phi: Formula | None = None) -> bool:
    """Is there a path from ``(in, M)`` to ``(out, M)`` through states satisfying ``phi``?

    All effects inside the net are <= 0, so the search never leaves counters <= M.
    """
    bound = prod(F.primes)
    if not 0 <= M < bound:
        raise GadgetError(f"need 0 <= M < {bound}, got {M}")
    ocp, gin, gout = build_ocn_of_formula(eliminate_negations(F))
    phi = fixed_ef_formula() if phi is None else phi
    ts = TruncatedSystem(ocp, M)
    sure, possible = label3(ts, expand(phi))

    def good(s: State) -> bool:
        i = ts.index(s.location, s.counter)
        if sure[i] != possible[i]:
            raise GadgetError(f"indefinite formula value at {s}")
        return sure[i]

    start, goal = State(gin, M), State(gout, M)
    if not good(start):
        return False
    seen = {start}
    frontier = [start]
    while frontier:
        s = frontier.pop()
        if s == goal:
            return True
        for t in successors(ocp, s):
            if t not in seen and good(t):
                seen.add(t)
                frontier.append(t)
    return False


# --- NFAs and the serialized composition --------------------------------------


@dataclass(frozen=True)
class Nfa:
    states: tuple[str, ...]
    transitions: frozenset[tuple[str, int, str]]
    initial: str
    finals: frozenset[str]

    def __post_init__(self):
        known = set(self.states)
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if self.initial not in known or not self.finals <= known:
            raise GadgetError("NFA initial/final states must be declared")
        for s, b, t in self.transitions:
            if s not in known or t not in known or b not in (0, 1):
                raise GadgetError(f"bad NFA transition {(s, b, t)}")


def nfa_accepts(A: Nfa, w: str) -> bool:
    current = {A.initial}
    for ch in w:
        if ch not in "01":
            raise GadgetError(f"word must be over {{0,1}}, got {ch!r}")
        b = int(ch)
        current = {t for s, c, t in A.transitions if s in current and c == b}
        if not current:
            return False
    return bool(current & A.finals)


def parse_nfa(text: str) -> Nfa:
    """Lines: ``states s..``, ``init s``, ``final s..``, ``trans s b t``."""
    states: list[str] = []
    init = None
    finals: set[str] = set()
    trans = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        if head == "states":
            states.extend(args)
        elif head == "init" and len(args) == 1:
            init = args[0]
        elif head == "final":
            finals.update(args)
        elif head == "trans" and len(args) == 3 and args[1] in ("0", "1"):
            trans.add((args[0], int(args[1]), args[2]))
        else:
            raise GadgetError(f"line {lineno}: cannot parse {line!r}")
    if init is None:
        raise GadgetError("missing 'init' line")
    return Nfa(tuple(states), frozenset(trans), init, frozenset(finals))


def serialized_word(F: CrrFormula) -> str:
    return "".join(str(int(F.evaluate(M))) for M in range(2 ** F.m))


def compose_serialized(
    F: CrrFormula, A: Nfa, G: CrrFormula | None = None
) -> tuple[OneCounterProcess, str, Formula]:
    """Net whose location for ``A``'s initial state satisfies the returned
    until formula at counter 0 iff the word ``F(0) F(1) .. F(2**m - 1)`` is in ``L(A)``."""
    G = default_g(F.m) if G is None else G
    if G.primes != F.primes:
        raise GadgetError("F and G must use the same primes")
    not_g = Not(G.tree)
    one = eliminate_negations(CrrFormula(F.m, And(F.tree, not_g)))
    zero = eliminate_negations(CrrFormula(F.m, And(Not(F.tree), not_g)))
    b = _OcnBuilder()
    nfa_loc = {s: b.loc(f"n_{s}") for s in A.states}
    for idx, (s, bit, t) in enumerate(sorted(A.transitions)):
        gin, gout = _add_formula_ocn(b, one if bit else zero, prefix=f"c{idx}_")
        b.both(nfa_loc[s], 0, gin)
        b.both(gout, 1, nfa_loc[t])
    gin, gout = _add_formula_ocn(b, eliminate_negations(G), prefix="g_")
    for s in sorted(A.finals):
        b.both(nfa_loc[s], 0, gin)
    b.props.setdefault(RHO, set()).add(gout)
    return b.build(), nfa_loc[A.initial], EU(fixed_ef_formula(), Prop(RHO))

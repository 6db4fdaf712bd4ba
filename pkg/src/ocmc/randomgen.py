"""Seeded generators for random systems, formulas and gadget inputs."""

from __future__ import annotations

import random

from .ctl import AX, EF, EG, EU, EW, EX, And, Formula, Implies, Not, Or, Prop, TrueF, expand, lud, size
from .gadgets import EXISTS, FORALL, CrrFormula, Nfa, Qbf, primes_unary, var_name
from .ocp import OneCounterProcess

PROPS = ("a", "b")


def random_ocp(rng: random.Random, max_locations: int = 3, density: float = 0.3) -> OneCounterProcess:
    """Random unit-step one-counter process with propositions ``a`` and ``b``."""
    k = rng.randint(1, max_locations)
    locs = [f"q{i}" for i in range(k)]
    positive, zero = [], []
    for s in locs:
        for t in locs:
            for e in (-1, 0, 1):
                if rng.random() < density:
                    positive.append((s, e, t))
            for e in (0, 1):
                if rng.random() < density / 2:
                    zero.append((s, e, t))
    props = {p: [q for q in locs if rng.random() < 0.5] for p in PROPS}
    return OneCounterProcess.build(locs, props, zero, positive)


def random_formula(rng: random.Random, depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        return Prop(rng.choice(PROPS)) if rng.random() < 0.9 else TrueF()
    kind = rng.choice(["not", "and", "or", "ex", "ax", "eu", "ew", "ef", "eg", "imp"])
    sub = lambda: random_formula(rng, depth - 1)  # noqa: E731
    if kind == "not":
        return Not(sub())
    if kind == "ex":
        return EX(sub())
    if kind == "ax":
        return AX(sub())
    if kind == "ef":
        return EF(sub())
    if kind == "eg":
        return EG(sub())
    cls = {"and": And, "or": Or, "eu": EU, "ew": EW, "imp": Implies}[kind]
    return cls(sub(), sub())


def random_core(rng: random.Random, budget: int) -> Formula:
    """Random core formula of size exactly ``budget``."""
    if budget == 1:
        return Prop(rng.choice(PROPS))
    if budget == 2:
        return rng.choice((Not, EX))(random_core(rng, 1))
    kind = rng.choice(["not", "ex", "and", "eu", "eu", "ew", "ew"])
    if kind in ("not", "ex"):
        return (Not if kind == "not" else EX)(random_core(rng, budget - 1))
    left = rng.randint(1, budget - 2)
    cls = {"and": And, "eu": EU, "ew": EW}[kind]
    return cls(random_core(rng, left), random_core(rng, budget - 1 - left))


def random_small_formula(rng: random.Random, max_size: int = 8, max_lud: int = 2) -> Formula:
    """Random formula whose core expansion has size <= ``max_size`` and lud <= ``max_lud``.

    Mostly core formulas of a uniformly drawn size; occasionally sugar that
    happens to fit the budget.
    """
    while True:
        if rng.random() < 0.8:
            f = random_core(rng, rng.randint(1, max_size))
        else:
            f = random_formula(rng, rng.randint(1, 3))
        core = expand(f)
        if size(core) <= max_size and lud(core) <= max_lud:
            return f


def random_boolean(rng: random.Random, atoms: list[str], connectives: int, negation: bool = True) -> Formula:
    """Random propositional formula with exactly ``connectives`` binary/unary connectives."""
    if connectives == 0:
        return Prop(rng.choice(atoms))
    ops = ["and", "or"] + (["not"] if negation else [])
    op = rng.choice(ops)
    if op == "not":
        return Not(random_boolean(rng, atoms, connectives - 1, negation))
    left = rng.randint(0, connectives - 1)
    cls = And if op == "and" else Or
    return cls(
        random_boolean(rng, atoms, left, negation),
        random_boolean(rng, atoms, connectives - 1 - left, negation),
    )


def random_qbf(rng: random.Random, max_vars: int = 3, max_connectives: int = 8) -> Qbf:
    k = rng.randint(1, max_vars)
    quants = tuple(rng.choice((EXISTS, FORALL)) for _ in range(k))
    matrix = random_boolean(rng, [f"x{i}" for i in range(1, k + 1)], rng.randint(0, max_connectives))
    return Qbf(k, quants, matrix)


def crr_atoms(m: int) -> list[str]:
    return [var_name(i, r) for i, p in enumerate(primes_unary(m), 1) for r in range(p)]


def random_crr(rng: random.Random, m: int, max_connectives: int = 5, negation: bool = False) -> CrrFormula:
    tree = random_boolean(rng, crr_atoms(m), rng.randint(0, max_connectives), negation)
    return CrrFormula(m, tree)


def random_nfa(rng: random.Random, max_states: int = 3) -> Nfa:
    n = rng.randint(1, max_states)
    states = tuple(f"s{i}" for i in range(n))
    trans = {(s, b, t) for s in states for b in (0, 1) for t in states if rng.random() < 0.4}
    finals = {s for s in states if rng.random() < 0.5}
    return Nfa(states, frozenset(trans), states[0], frozenset(finals))

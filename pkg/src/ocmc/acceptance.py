"""Acceptance suites, shared by ``tests/test_acceptance.py`` and ``ocmc selftest``.

Each suite returns a :class:`SuiteResult`; ``passed`` requires zero
mismatches and the runtime target to be met.
"""

from __future__ import annotations

import inspect
import random
import time
from dataclasses import dataclass, field
from math import lcm, prod
from typing import Callable

from . import gadgets as gd
from .ctl import EG, TrueF
from .ocp import OneCounterProcess
from .oracle import IndefiniteError, eval_definite, oracle_labeling
from .periodic import UltimatelyPeriodicSet, complement, equal, intersect, member, normalize, union
from .quotient import check, label, lcm_upto
from .randomgen import random_crr, random_nfa, random_ocp, random_qbf, random_small_formula

DEFAULT_SEED = 20240601


@dataclass
class SuiteResult:
    number: int
    name: str
    checked: int = 0
    mismatches: list = field(default_factory=list)
    seconds: float = 0.0
    limit: float = float("inf")
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.mismatches and self.checked > 0 and self.seconds < self.limit

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"[{status}] {self.number:>2}. {self.name}: {self.checked} checks, {len(self.mismatches)} mismatches, {self.seconds:.2f}s (limit {self.limit:g}s)"
        if self.note:
            msg += f"; {self.note}"
        if self.mismatches:
            msg += f"; first: {self.mismatches[0]}"
        return msg


def _timed(number: int, name: str, limit: float):
    def deco(fn: Callable[..., SuiteResult]):
        def run(*args, **kwargs) -> SuiteResult:
            res = SuiteResult(number, name, limit=limit)
            start = time.perf_counter()
            fn(res, *args, **kwargs)
            res.seconds = time.perf_counter() - start
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return deco


COUNTER_RANGE = 256
MAX_INDEX = 6


@_timed(1, "divisibility formulas on the fixed net", 60)
def divisibility_suite(res: SuiteResult):
    ocp = gd.fixed_ocn()
    for i in range(1, MAX_INDEX + 1):
        f = gd.div_formula(i)
        lab = oracle_labeling(ocp, f, COUNTER_RANGE + 1)
        for n in range(COUNTER_RANGE + 1):
            divides = n % 2 ** i == 0
            for loc, want in (("t", divides), ("tb", not divides)):
                v = lab.value(loc, n)
                res.checked += 1
                if not v.definite or (v.value == "true") != want:
                    res.mismatches.append((i, loc, n, v.value))


@_timed(2, "bit formulas on the fixed net", 60)
def bit_suite(res: SuiteResult):
    ocp = gd.fixed_ocn()
    for i in range(1, MAX_INDEX + 1):
        lab = oracle_labeling(ocp, gd.bit_formula(i), COUNTER_RANGE + 1)
        for n in range(COUNTER_RANGE + 1):
            want = (n >> (i - 1)) & 1 == 1
            v = lab.value("tb", n)
            res.checked += 1
            if not v.definite or (v.value == "true") != want:
                res.mismatches.append((i, n, v.value))


QBF_CEILING = 64


@_timed(3, "QBF reduction", 120)
def qbf_suite(res: SuiteResult, seed: int = DEFAULT_SEED, count: int = 50):
    rng = random.Random(seed)
    ocp = gd.fixed_ocn()
    valid = 0
    for _ in range(count):
        alpha = random_qbf(rng, max_vars=3, max_connectives=8)
        want = gd.qbf_eval(alpha)
        valid += want
        v = oracle_labeling(ocp, gd.qbf_to_ctl(alpha), QBF_CEILING).value("tb", 0)
        res.checked += 1
        if not v.definite or (v.value == "true") != want:
            res.mismatches.append((gd.format_qbf(alpha).replace("\n", "; "), want, v.value))
    res.note = f"{valid} valid / {count - valid} invalid"


@_timed(4, "Boolean-formula net (CRR paths)", 60)
def crr_path_suite(res: SuiteResult, seed: int = DEFAULT_SEED, count: int = 30):
    rng = random.Random(seed + 4)
    for m in (2, 3):
        for _ in range(count):
            F = random_crr(rng, m, max_connectives=5, negation=False)
            for M in range(prod(F.primes)):
                res.checked += 1
                got = gd.phi_path_exists(F, M)
                if got != F.evaluate(M):
                    res.mismatches.append((m, str(F.tree), M, got))


@_timed(5, "serialized NFA composition", 120)
def composition_suite(res: SuiteResult, seed: int = DEFAULT_SEED, count: int = 10):
    rng = random.Random(seed + 5)
    m = 2
    accepted = 0
    for _ in range(count):
        A = random_nfa(rng)
        F = random_crr(rng, m, max_connectives=4, negation=True)
        word = "".join("1" if F.evaluate(M) else "0" for M in range(2 ** m))
        want = gd.nfa_accepts(A, word)
        accepted += want
        ocp, start, phi = gd.compose_serialized(F, A)
        v = oracle_labeling(ocp, phi, prod(F.primes) + 1).value(start, 0)
        res.checked += 1
        if not v.definite or (v.value == "true") != want:
            res.mismatches.append((str(F.tree), word, sorted(A.transitions), v.value))
    res.note = f"{accepted} accepted / {count - accepted} rejected"


@dataclass
class EngineCase:
    ocp: OneCounterProcess
    formula: object
    band_lo: int
    K_phi: int
    sets: dict
    oracle: object  # OracleLabeling at ceiling band_lo + 4 K_phi


def engine_cases(seed: int = DEFAULT_SEED, count: int = 200) -> list[EngineCase]:
    rng = random.Random(seed + 6)
    cases = []
    for _ in range(count):
        ocp = random_ocp(rng, max_locations=3)
        f = random_small_formula(rng, max_size=8, max_lud=2)
        lab = label(ocp, f)
        bp = lab.params
        orc = oracle_labeling(ocp, f, bp.band_lo + 4 * bp.K_phi)
        cases.append(EngineCase(ocp, f, bp.band_lo, bp.K_phi, lab.sets, orc))
    return cases


_CASES: dict[tuple[int, int], list[EngineCase]] = {}


def cached_engine_cases(seed: int = DEFAULT_SEED, count: int = 200) -> list[EngineCase]:
    key = (seed, count)
    if key not in _CASES:
        _CASES[key] = engine_cases(seed, count)
    return _CASES[key]


@_timed(6, "quotient engine vs oracle", 600)
def engine_agreement_suite(res: SuiteResult, seed: int = DEFAULT_SEED, count: int = 200):
    cases = cached_engine_cases(seed, count)
    unknown = 0
    for case in cases:
        for q in case.ocp.locations:
            s = case.sets[q]
            for n in range(case.band_lo + 2 * case.K_phi + 1):
                v = case.oracle.value(q, n)
                if not v.definite:
                    unknown += 1
                    continue
                res.checked += 1
                if member(s, n) != (v.value == "true"):
                    res.mismatches.append((str(case.formula), q, n, v.value))
    lud2 = sum(1 for c in cases if c.K_phi > lcm_upto(len(c.ocp.locations)))
    res.note = f"{len(cases)} instances ({lud2} with lud 2), {unknown} oracle-unknown points skipped"


@_timed(7, "periodicity of labeled sets", 600)
def periodicity_suite(res: SuiteResult, seed: int = DEFAULT_SEED, count: int = 200):
    for case in cached_engine_cases(seed, count):
        for q in case.ocp.locations:
            s = case.sets[q]
            for n in range(case.band_lo, case.band_lo + 3 * case.K_phi + 1):
                res.checked += 1
                if member(s, n) != member(s, n + case.K_phi):
                    res.mismatches.append(("not periodic", str(case.formula), q, n))
                for x in (n, n + case.K_phi):
                    v = case.oracle.value(q, x)
                    if v.definite and (v.value == "true") != member(s, x):
                        res.mismatches.append(("oracle", str(case.formula), q, x))


def climbing_loop() -> OneCounterProcess:
    return OneCounterProcess.build(["q"], {}, zero=[("q", 1, "q")], positive=[("q", 1, "q")])


@_timed(8, "unbounded witness (climbing loop, EG true)", 1.0)
def unbounded_witness_suite(res: SuiteResult, max_ceiling: int = 2 ** 12):
    ocp = climbing_loop()
    f = EG(TrueF())
    for n in (0, 1, 2 ** 64):
        res.checked += 1
        if not check(ocp, f, "q", n):
            res.mismatches.append(("quotient", n))
    res.checked += 1
    try:
        eval_definite(ocp, f, "q", 0, 1, max_ceiling)
        res.mismatches.append(("oracle was definite",))
    except IndefiniteError:
        pass


@_timed(9, "LCM bounds 2^k <= lcm(1..k) <= 4^k", 1.0)
def lcm_suite(res: SuiteResult):
    for k in range(9, 16):
        res.checked += 1
        K = lcm_upto(k)
        if not 2 ** k <= K <= 4 ** k:
            res.mismatches.append((k, K))


def random_periodic(rng: random.Random) -> UltimatelyPeriodicSet:
    t = rng.randint(0, 8)
    k = rng.randint(1, 8)
    return UltimatelyPeriodicSet(
        t, k, tuple(rng.random() < 0.5 for _ in range(t)), tuple(rng.random() < 0.5 for _ in range(k))
    )


@_timed(10, "ultimately periodic set algebra", 30)
def set_algebra_suite(res: SuiteResult, seed: int = DEFAULT_SEED, count: int = 500):
    rng = random.Random(seed + 10)
    for _ in range(count):
        a, b, c = random_periodic(rng), random_periodic(rng), random_periodic(rng)
        top = max(a.threshold, b.threshold, c.threshold) + 3 * lcm(a.period, b.period, c.period)
        u, i, na = union(a, b), intersect(a, b), complement(a)
        for n in range(top + 1):
            ma, mb = member(a, n), member(b, n)
            res.checked += 1
            if member(u, n) != (ma or mb) or member(i, n) != (ma and mb) or member(na, n) == ma:
                res.mismatches.append(("pointwise", a, b, n))
                break
        laws = [
            ("commutative union", equal(u, union(b, a))),
            ("commutative intersection", equal(i, intersect(b, a))),
            ("de Morgan", equal(complement(u), intersect(na, complement(b)))),
            ("double complement", equal(complement(na), a)),
            ("absorption", equal(union(a, intersect(a, b)), a)),
            ("distributivity", equal(intersect(a, union(b, c)), union(intersect(a, b), intersect(a, c)))),
            ("associativity", equal(union(a, union(b, c)), union(union(a, b), c))),
            ("complement law", equal(union(a, na), UltimatelyPeriodicSet.full())
             and equal(intersect(a, na), UltimatelyPeriodicSet.empty())),
            ("normal form", normalize(a) == normalize(normalize(a)) and equal(a, normalize(a))),
        ]
        for name, ok in laws:
            res.checked += 1
            if not ok:
                res.mismatches.append((name, a, b, c))


SUITES = [
    divisibility_suite,
    bit_suite,
    qbf_suite,
    crr_path_suite,
    composition_suite,
    engine_agreement_suite,
    periodicity_suite,
    unbounded_witness_suite,
    lcm_suite,
    set_algebra_suite,
]


def run_all(seed: int = DEFAULT_SEED, echo: Callable[[str], None] = print) -> list[SuiteResult]:
    results = []
    for suite in SUITES:
        r = suite(seed=seed) if "seed" in inspect.signature(suite).parameters else suite()
        echo(r.line())
        results.append(r)
    return results

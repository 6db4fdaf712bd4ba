import random

import pytest

from ocmc import gadgets as gd
from ocmc.ctl import EF, EG, EX, Not, Prop, TrueF
from ocmc.ocp import OcpError, OneCounterProcess
from ocmc.oracle import IndefiniteError, TruncatedSystem, TruthValue3 as V, eval3, eval_definite, oracle_labeling
from ocmc.randomgen import random_crr, random_formula, random_ocp

T, F, U = V.TRUE, V.FALSE, V.UNKNOWN


def test_kleene_tables():
    assert [~T, ~F, ~U] == [F, T, U]
    assert (T & U, F & U, U & U, T & T) == (U, F, U, T)
    assert (T | U, F | U, U | U, F | F) == (T, U, U, F)
    assert T.definite and F.definite and not U.definite


def test_truncated_system_shape(climbing):
    ts = TruncatedSystem(climbing, 5)
    assert len(ts) == 7
    with pytest.raises(OcpError):
        ts.index("q", 6)


def test_climbing_loop_is_unknown(climbing):
    for c in (0, 1, 7, 100):
        assert eval3(climbing, EG(TrueF()), "q", 0, c) is U


def test_divisibility_examples(fig1):
    phi1, phi2 = gd.div_formula(1), gd.div_formula(2)
    assert eval3(fig1, phi1, "t", 2, 4) is T
    assert eval3(fig1, phi1, "t", 3, 4) is F
    assert eval3(fig1, phi2, "t", 4, 6) is T
    assert eval3(fig1, phi2, "t", 2, 6) is F


def test_propositions_ignore_the_ceiling(fig1):
    for n in (0, 3, 9):
        assert eval3(fig1, Prop("t"), "t", n, n) is T
        assert eval3(fig1, Prop("g"), "t", n, n) is F


def test_counter_above_ceiling_is_an_input_error(fig1):
    with pytest.raises(OcpError):
        eval3(fig1, Prop("t"), "t", 5, 4)


def test_eval_definite_examples(fig1, climbing, deadlock):
    assert eval_definite(fig1, gd.bit_formula(3), "tb", 4, 8) is True
    for c in (0, 1, 10):
        assert eval_definite(deadlock, EX(TrueF()), "q", 0, c, max(c, 1)) is False
    with pytest.raises(IndefiniteError):
        eval_definite(climbing, EG(TrueF()), "q", 0, 1, 64)


def _instances(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        ocp = random_ocp(rng)
        out.append((ocp, random_formula(rng, 3)))
    return out


def test_definiteness_is_monotone_in_the_ceiling():
    for ocp, f in _instances(11, 60):
        base = oracle_labeling(ocp, f, 6)
        later = [oracle_labeling(ocp, f, c) for c in range(7, 12)]
        for loc in ocp.locations:
            for n in range(7):
                v = base.value(loc, n)
                if v.definite:
                    assert all(lab.value(loc, n) is v for lab in later), (f, loc, n)


def test_negation_duality():
    for ocp, f in _instances(12, 60):
        pos, neg = oracle_labeling(ocp, f, 8), oracle_labeling(ocp, Not(f), 8)
        for loc in ocp.locations:
            for n in range(9):
                assert neg.value(loc, n) is ~pos.value(loc, n)


def test_non_increasing_systems_are_exact_at_their_counter():
    rng = random.Random(13)
    phi = gd.fixed_ef_formula()
    for _ in range(10):
        F = random_crr(rng, 2, negation=False)
        ocp, _, _ = gd.build_ocn_of_formula(F)
        for n in range(6):
            low = oracle_labeling(ocp, phi, n)
            high = oracle_labeling(ocp, phi, n + 10)
            for loc in ocp.locations:
                assert low.value(loc, n).definite
                assert low.value(loc, n) is high.value(loc, n)


def test_generalized_effects_are_supported():
    ocp = OneCounterProcess.build(["q", "z"], {"z": ["z"]}, zero=[("q", 0, "z")], positive=[("q", -3, "q")])
    ef_z = EF(Prop("z"))
    for n in range(20):
        assert eval_definite(ocp, ef_z, "q", n) is (n % 3 == 0)

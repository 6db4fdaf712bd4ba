import io
import json
import subprocess
import sys

import pytest

from ocmc import gadgets as gd
from ocmc.cli import main
from ocmc.ctl import format_formula, parse_formula
from ocmc.ocp import parse_ocp


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path, capsys, monkeypatch):
    fig1 = tmp_path / "fig1.ocp"
    main(["gen-fixed-ocn"])
    fig1.write_text(capsys.readouterr().out)
    phi2 = tmp_path / "phi2.ctl"
    phi2.write_text(format_formula(gd.div_formula(2)) + "\n")
    big = tmp_path / "big.ocp"
    big.write_text("loc q\ntp q -3 q\n")
    climb = tmp_path / "climb.ocp"
    climb.write_text("loc q\nt0 q +1 q\ntp q +1 q\n")
    return {"fig1": str(fig1), "phi2": str(phi2), "big": str(big), "climb": str(climb), "dir": tmp_path}


def test_check_with_oracle(capsys, monkeypatch, files):
    code, out, _ = run(capsys, monkeypatch, ["check", "--system", files["fig1"], "--formula-file", files["phi2"],
                                             "--state", "t:4", "--engine", "oracle"])
    assert (code, out) == (0, "true\n")
    code, out, _ = run(capsys, monkeypatch, ["check", "--system", files["fig1"], "--formula-file", files["phi2"],
                                             "--state", "t:6", "--engine", "oracle"])
    assert (code, out) == (0, "false\n")


def test_generated_formula_from_stdin(capsys, monkeypatch, files):
    _, formula, _ = run(capsys, monkeypatch, ["gen-divformula", "3"])
    code, out, _ = run(capsys, monkeypatch, ["check", "--system", files["fig1"], "--state", "t:8", "--engine", "oracle"],
                       stdin=formula)
    assert (code, out) == (0, "true\n")


def test_quotient_refuses_big_effects(capsys, monkeypatch, files):
    code, _, err = run(capsys, monkeypatch, ["check", "--system", files["big"], "--formula", "EX true",
                                             "--state", "q:3", "--engine", "quotient"])
    assert code == 4 and "oracle" in err
    code, out, _ = run(capsys, monkeypatch, ["check", "--system", files["big"], "--formula", "EX true", "--state", "q:3"])
    assert (code, out) == (0, "true\n")
    code, _, _ = run(capsys, monkeypatch, ["label", "--system", files["big"], "--formula", "EX true"])
    assert code == 4


def test_engines_cover_each_other(capsys, monkeypatch, files):
    code, out, _ = run(capsys, monkeypatch, ["check", "--system", files["climb"], "--formula", "EG true",
                                             "--state", f"q:{2 ** 64}"])
    assert (code, out) == (0, "true\n")
    code, out, _ = run(capsys, monkeypatch, ["oracle", "--system", files["climb"], "--formula", "EG true",
                                             "--state", "q:0", "--max-ceiling", "64"])
    assert (code, out) == (3, "unknown\n")
    code, _, err = run(capsys, monkeypatch, ["check", "--system", files["climb"], "--formula", "EG true",
                                             "--state", "q:0", "--engine", "oracle", "--max-ceiling", "64"])
    assert code == 3 and "unknown" in err


def test_max_ceiling_from_environment(capsys, monkeypatch, files):
    monkeypatch.setenv("OCMC_MAX_CEILING", "16")
    code, out, _ = run(capsys, monkeypatch, ["oracle", "--system", files["climb"], "--formula", "EG true", "--state", "q:0"])
    assert (code, out) == (3, "unknown\n")
    monkeypatch.setenv("OCMC_MAX_CEILING", "lots")
    code, _, _ = run(capsys, monkeypatch, ["oracle", "--system", files["climb"], "--formula", "EG true", "--state", "q:0"])
    assert code == 2


def test_json_output(capsys, monkeypatch, files):
    code, out, _ = run(capsys, monkeypatch, ["check", "--system", files["climb"], "--formula", "EG true",
                                             "--state", "q:5", "--format", "json"])
    assert code == 0
    assert json.loads(out) == {"state": "q:5", "engine": "quotient", "result": True}
    code, out, _ = run(capsys, monkeypatch, ["label", "--system", files["climb"], "--formula", "EX EX true"])
    data = json.loads(out)
    assert data["header"] == {"k": 1, "K": 1, "K_phi": 1, "B": 2 * 4}
    assert data["labels"]["q"] == {"threshold": 0, "period": 1, "prefix": [], "residues": [1]}


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["check", "--formula", "a &", "--state", "q:0"], "position"),
        (["check", "--formula", "EX true", "--state", "q"], "location:counter"),
        (["check", "--formula", "EX true", "--state", "q:x"], "counter"),
        (["check", "--formula", "EX true", "--state", "nope:1"], "unknown location"),
        (["check", "--formula", "EX _tt", "--state", "q:1"], "reserved"),
    ],
)
def test_input_errors(capsys, monkeypatch, files, argv, fragment):
    code, _, err = run(capsys, monkeypatch, argv[:1] + ["--system", files["climb"]] + argv[1:])
    assert code == 2
    assert fragment in err


def test_bad_system_file(capsys, monkeypatch, files):
    bad = files["dir"] / "bad.ocp"
    bad.write_text("loc q\ntp q 1 r\n")
    code, _, err = run(capsys, monkeypatch, ["check", "--system", str(bad), "--formula", "true", "--state", "q:0"])
    assert code == 2 and "line 2" in err
    code, _, _ = run(capsys, monkeypatch, ["check", "--system", str(files["dir"] / "missing"), "--formula", "true",
                                           "--state", "q:0"])
    assert code == 2


def test_generators_round_trip(capsys, monkeypatch, files):
    _, out, _ = run(capsys, monkeypatch, ["gen-fixed-ocn"])
    assert parse_ocp(out) == gd.fixed_ocn()
    _, out, _ = run(capsys, monkeypatch, ["gen-bitformula", "3"])
    assert parse_formula(out) == gd.bit_formula(3)
    with pytest.raises(SystemExit) as info:
        main(["gen-divformula", "0"])
    assert info.value.code == 2
    capsys.readouterr()
    qbf = files["dir"] / "a.qbf"
    qbf.write_text("p qbf 2\na 2\ne 1\n(x1 & x2) | (!x1 & !x2)\n")
    _, out, _ = run(capsys, monkeypatch, ["qbf2ctl", str(qbf)])
    assert parse_formula(out) == gd.qbf_to_ctl(gd.parse_qbf(qbf.read_text()))


def _headers(text):
    return {k.strip(): v.strip() for k, _, v in (line[2:].partition(":") for line in text.splitlines()
                                                  if line.startswith("# "))}


def test_crr2ocn(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["crr2ocn", "--m", "2", "--formula", "!x1_1"])
    assert code == 0
    ocp = parse_ocp(out)
    head = _headers(out)
    assert head["in"] in ocp.locations and head["out"] in ocp.locations
    assert parse_formula(head["formula"]) == gd.fixed_ef_formula()
    code, _, err = run(capsys, monkeypatch, ["crr2ocn", "--m", "2", "--formula", "x5_0"])
    assert code == 2 and "x5_0" in err


def test_compose_serialized(capsys, monkeypatch, files):
    nfa = files["dir"] / "one.nfa"
    nfa.write_text("states s0 s1\ninit s0\nfinal s1\ntrans s0 0 s0\ntrans s0 1 s1\ntrans s1 0 s1\ntrans s1 1 s1\n")
    system = files["dir"] / "composed.ocp"
    code, out, _ = run(capsys, monkeypatch, ["compose-serialized", "--m", "2", "--formula", "x1_0", "--nfa", str(nfa)])
    assert code == 0
    system.write_text(out)
    head = _headers(out)
    code, verdict, _ = run(capsys, monkeypatch, ["oracle", "--system", str(system), "--formula", head["formula"],
                                                 "--state", f"{head['start']}:0", "--ceiling", "6"])
    assert (code, verdict) == (0, "true\n")


def test_output_is_deterministic(capsys, monkeypatch, files):
    outs = set()
    for _ in range(2):
        _, out, _ = run(capsys, monkeypatch, ["compose-serialized", "--m", "2", "--formula", "x1_0 | x2_2",
                                              "--nfa", "-"], stdin="states a b\ninit a\nfinal b\ntrans a 1 b\ntrans b 0 a\n")
        outs.add(out)
        _, out, _ = run(capsys, monkeypatch, ["label", "--system", files["fig1"], "--formula", "EX t | E[ p0 U tb ]"])
        outs.add(out)
    assert len(outs) == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "ocmc", "check", "--system", files["fig1"], "--formula-file",
                           files["phi2"], "--state", "tb:6", "--engine", "oracle"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "true\n"

import io
import math
import os
from pathlib import Path

import pytest

from qspeedup.cli import main

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "rule_deutsch": ["rule", "--family", "deutsch"],
    "rule_perm_tsv": ["rule", "--family", "perm", "--emit", "tsv"],
    "simulate_grover2": ["simulate", "--family", "grover2", "--emit", "state"],
    "simulate_dj2_table": ["simulate", "--family", "dj2", "--emit", "table"],
    "histories_deutsch": ["histories", "--family", "deutsch", "--emit", "table"],
    "synthesize_deutsch": ["synthesize", "--family", "deutsch"],
    "grover_n4": ["grover", "--n", "4"],
    "simon_n2": ["simon", "--n", "2", "--seed", "3"],
    "simon_n3": ["simon", "--n", "3", "--seed", "7"],
}


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("case", sorted(CASES))
def test_golden_output(case):
    code, out, _ = run(CASES[case])
    path = GOLDEN / f"{case}.txt"
    if os.environ.get("QSPEEDUP_UPDATE_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert code == 0
    assert out == path.read_text(encoding="utf-8")


def test_rule_row_for_deutsch():
    assert run(["rule", "--family", "deutsch"])[1].split() == ["deutsch", "2", "1", "1", "PASS"]


def test_simulate_grover2_prints_the_correlated_state():
    _, out, _ = run(["simulate", "--family", "grover2", "--emit", "state"])
    rows = [line.split("\t") for line in out.splitlines() if not line.startswith("#")]
    nonzero = {(k, x, v): amp for k, x, v, amp in rows if amp != "(0.000000, 0.000000)"}
    assert len(nonzero) == 8
    for (k, x, v), amp in nonzero.items():
        assert k == x
        assert amp == ("(0.353553, 0.000000)" if v == "0" else "(-0.353553, 0.000000)")


def _printed_states(out):
    states, current = [], None
    for line in out.splitlines():
        if line.startswith("# ") and "global phase" in line:
            current = []
            states.append(current)
        elif not line.startswith("#"):
            re_, im = line.split("\t")[-1].strip("()").split(", ")
            current.append(complex(float(re_), float(im)))
    return states


@pytest.mark.parametrize("family", ["deutsch", "dj2", "grover2", "simon2", "minute"])
def test_printed_state_is_normalized_to_rounding(family):
    # each printed amplitude is off by at most 5e-7 per component
    _, out, _ = run(["simulate", "--family", family, "--steps"])
    states = _printed_states(out)
    assert len(states) == 3
    for amps in states:
        total = sum(abs(a) ** 2 for a in amps)
        bound = 2 * 5e-7 * math.sqrt(2) * sum(abs(a) for a in amps) + len(amps) * 1e-12
        assert abs(total - 1) <= max(bound, 1e-6)


def test_unknown_family_is_a_usage_error():
    code, out, err = run(["simulate", "--family", "nosuch"])
    assert code == 2 and out == "" and "unknown family" in err


def test_unknown_flag_is_a_usage_error(capsys):
    assert run(["rule", "--family", "deutsch", "--bogus"])[0] == 2


def test_missing_family_is_a_usage_error():
    assert run(["rule"])[0] == 2


def test_separation_failure_is_a_domain_error():
    code, _, err = run(["synthesize", "--family", "grover4"])
    assert code == 1 and "grover4" in err and "SeparationError" in err


def test_capacity_failure_is_a_domain_error():
    code, _, err = run(["rule", "--family", "simon3"])
    assert code == 1 and "CapacityError" in err


def test_parse_failure_is_a_domain_error(tmp_path):
    bad = tmp_path / "bad.family"
    bad.write_text("family x\nx_bits 1\nv_bits 1\nsolution_bits 1\nk 0 : 0 1 0 ; solution 0\n")
    code, _, err = run(["rule", "--file", str(bad)])
    assert code == 1 and "line 5" in err


def test_family_file_round_trip(tmp_path):
    from qspeedup.families import builtin, serialize_family

    path = tmp_path / "minute.family"
    path.write_text(serialize_family(builtin("minute")))
    assert run(["rule", "--file", str(path)])[1] == run(["rule", "--family", "minute"])[1]


def test_same_seed_same_bytes():
    a = run(["simon", "--n", "3", "--seed", "42"])
    b = run(["simon", "--n", "3", "--seed", "42"])
    assert a == b


def test_every_verb_accepts_seed_and_tol():
    for argv in (
        ["simulate", "--family", "deutsch"],
        ["rule", "--family", "deutsch"],
        ["histories", "--family", "deutsch"],
        ["synthesize", "--family", "deutsch"],
        ["grover", "--n", "2"],
        ["simon", "--n", "2"],
        ["report", "--family", "deutsch"],
    ):
        assert run(argv + ["--seed", "1", "--tol", "1e-9"])[0] == 0


def test_report_all_lists_every_criterion_and_family():
    code, out, _ = run(["report", "--all"])
    lines = out.splitlines()
    assert sum(line.startswith("criterion ") for line in lines) == 8
    from qspeedup.families import BUILTIN_NAMES

    for name in BUILTIN_NAMES:
        assert any(line.startswith(name + "\t") for line in lines)
    failed = [line for line in lines if line.startswith("criterion ") and "\tFAIL\t" in line]
    assert code == (1 if failed else 0)
    assert run(["report", "--all"])[1] == out

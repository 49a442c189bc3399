import pytest
from hypothesis import given
from hypothesis import strategies as st

from qspeedup.errors import ParseError, SizeError
from qspeedup.families import (
    BUILTIN_NAMES,
    FunctionFamily,
    OracleFunction,
    builtin,
    parse_family,
    serialize_family,
    validate_family,
)

DEUTSCH_FILE = """\
family deutsch
x_bits 1
v_bits 1
solution_bits 1
k 00 : 0 0 ; solution 0
k 01 : 0 1 ; solution 1
k 10 : 1 0 ; solution 1
k 11 : 1 1 ; solution 0
"""


def test_deutsch_members():
    family = builtin("deutsch")
    assert family.member("01").table == {"0": "0", "1": "1"}
    assert family.solution["01"] == "1"
    assert family.solution["11"] == "0"


def test_simon_period_metadata():
    family = builtin("simon(2)")
    assert family.meta["0011"]["h"] == "01"
    assert family.solution["0011"] == "01"
    assert family.meta["0110"]["h"] == "11"


def test_grover_is_a_delta():
    assert builtin("grover", 2).member("10").table == {"00": "0", "01": "0", "10": "1", "11": "0"}


@pytest.mark.parametrize("name", ["dj4", "bv5", "simon4", "grover5", "deutsch3", "nosuch"])
def test_unsupported_sizes(name):
    with pytest.raises(SizeError):
        builtin(name)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_validate_and_are_deterministic(name):
    a, b = builtin(name), builtin(name)
    assert validate_family(a) == []
    assert a.k_labels == b.k_labels == tuple(sorted(a.k_labels))


def test_family_sizes():
    sizes = {name: len(builtin(name)) for name in ("deutsch", "dj2", "dj3", "simon2", "simon3", "minute", "perm")}
    assert sizes == {"deutsch": 4, "dj2": 8, "dj3": 72, "simon2": 6, "simon3": 168, "minute": 9, "perm": 24}


@pytest.mark.parametrize("n", [2, 3])
def test_dj_has_two_constant_members(n):
    family = builtin("dj", n)
    constants = [k for k in family.k_labels if family.solution[k] == "0"]
    assert len(constants) == 2


def test_minute_members_and_parity():
    family = builtin("minute")
    assert len(family) == 9
    for f in family.members:
        assert all(v != 3 for v in f.values)
        assert family.solution[f.k_label] == str(f.k_label.count("1") % 2)


def test_perm_partition_blocks():
    family = builtin("perm")
    blocks = {}
    for k, label in family.solution.items():
        blocks.setdefault(label, []).append(k)
    assert sorted(blocks) == ["01", "10", "11"]
    assert all(len(b) == 8 for b in blocks.values())


def test_parse_deutsch_file_equals_builtin():
    parsed = parse_family(DEUTSCH_FILE)
    ref = builtin("deutsch")
    assert parsed.members == ref.members
    assert dict(parsed.solution) == dict(ref.solution)


def test_empty_member_list():
    with pytest.raises(ParseError):
        parse_family("family x\nx_bits 1\nv_bits 1\nsolution_bits 1\n")


def test_value_too_wide_reports_line():
    text = "family x\nx_bits 1\nv_bits 2\nsolution_bits 1\nk 0 : 00 01 ; solution 0\nk 1 : 00 101 ; solution 1\n"
    with pytest.raises(ParseError) as info:
        parse_family(text)
    assert info.value.line == 6


@pytest.mark.parametrize(
    "body, line",
    [
        ("k 0 : 0 1 ; solution 0\nk 0 : 1 1 ; solution 1\n", 6),
        ("k 0 : 0 1 0 ; solution 0\n", 5),
        ("k 0 : 0 1\n", 5),
    ],
    ids=["duplicate-k", "wrong-row-count", "missing-solution"],
)
def test_parse_errors_carry_line_numbers(body, line):
    with pytest.raises(ParseError) as info:
        parse_family("family x\nx_bits 1\nv_bits 1\nsolution_bits 1\n" + body)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n\n" + DEUTSCH_FILE.replace("k 01", "k 01", 1) + "# trailing\n"
    assert len(parse_family(text)) == 4


@pytest.mark.parametrize("name", [n for n in BUILTIN_NAMES if n not in ("dj3", "simon3")])
def test_serialize_parse_round_trip(name):
    family = builtin(name)
    again = parse_family(serialize_family(family))
    assert again.members == family.members
    assert dict(again.solution) == dict(family.solution)
    assert {k: dict(v) for k, v in again.meta.items()} == {k: dict(v) for k, v in family.meta.items()}


@given(st.data())
def test_round_trip_random_families(data):
    x_bits = data.draw(st.integers(0, 2))
    v_bits = data.draw(st.integers(1, 3))
    tables = data.draw(
        st.sets(st.tuples(*[st.integers(0, (1 << v_bits) - 1)] * (1 << x_bits)), min_size=1, max_size=6)
    )
    members = tuple(
        OracleFunction(format(i, "03b"), t, x_bits, v_bits) for i, t in enumerate(sorted(tables))
    )
    family = FunctionFamily("custom", x_bits, v_bits, members, {f.k_label: "1" for f in members})
    again = parse_family(serialize_family(family))
    assert again.members == family.members and dict(again.solution) == dict(family.solution)


def _replace(family, k, values=None, meta=None):
    members = tuple(
        OracleFunction(f.k_label, values, f.x_bits, f.v_bits) if f.k_label == k and values else f for f in family.members
    )
    new_meta = {key: dict(val) for key, val in family.meta.items()}
    if meta:
        new_meta[k] = meta
    return FunctionFamily(family.name, family.x_bits, family.v_bits, members, family.solution, new_meta)


def test_simon_zero_period_violation():
    bad = _replace(builtin("simon2"), "0011", meta={"h": "00"})
    assert any("all zeroes period" in v for v in validate_family(bad))


def test_dj_unbalanced_violation():
    bad = _replace(builtin("dj2"), "0011", values=(1, 1, 1, 0))
    assert any("neither constant nor balanced" in v for v in validate_family(bad))


def test_bv_and_grover_violations():
    assert any("not linear" in v for v in validate_family(_replace(builtin("bv2"), "0110", values=(0, 1, 1, 1))))
    assert any("Kronecker" in v for v in validate_family(_replace(builtin("grover2"), "10", values=(0, 1, 1, 0))))

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qspeedup.errors import RankError
from qspeedup.families import dot2
from qspeedup.gf2 import rank, solve_mod2


def brute_force(samples, n):
    return [
        format(h, f"0{n}b")
        for h in range(1, 1 << n)
        if all(dot2(int(s, 2), h) == 0 for s in samples)
    ]


def test_single_equation():
    assert solve_mod2(["10"], 2) == "01"


def test_three_bits():
    assert solve_mod2(["110", "011"], 3) == "111" == brute_force(["110", "011"], 3)[0]


def test_dependent_samples():
    with pytest.raises(RankError):
        solve_mod2(["110", "110"], 3)
    with pytest.raises(RankError):
        solve_mod2(["110"], 3)


def test_rank():
    assert rank([0b110, 0b011, 0b101], 3) == 2
    assert rank([], 3) == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_every_independent_system_matches_brute_force(n):
    rows = [format(v, f"0{n}b") for v in range(1, 1 << n)]
    for samples in itertools.combinations(rows, n - 1):
        if rank([int(s, 2) for s in samples], n) == n - 1:
            assert [solve_mod2(list(samples), n)] == brute_force(samples, n)


@given(st.integers(2, 8), st.data())
def test_random_systems(n, data):
    h = data.draw(st.integers(1, (1 << n) - 1))
    orth = [s for s in range(1, 1 << n) if dot2(s, h) == 0]
    picked: list[int] = []
    for s in data.draw(st.permutations(orth)):
        if rank(picked + [s], n) > len(picked):
            picked.append(s)
        if len(picked) == n - 1:
            break
    assert solve_mod2([format(s, f"0{n}b") for s in picked], n) == format(h, f"0{n}b")

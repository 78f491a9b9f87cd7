import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from delpezzo.engines import BudgetExceeded, integer_roots, solve_box, split_groups, top_range_chunks
from delpezzo.forms import HomogeneousForm


def brute(forms, B):
    n = forms[0].n
    return sorted(x for x in itertools.product(range(-B, B + 1), repeat=n) if all(f(x) == 0 for f in forms))


def rows(arr):
    return sorted(map(tuple, arr.tolist()))


@pytest.mark.parametrize("text", ["x1^3+x2^3+x3^3+x4^3", "x1^3+2*x2^3-x3^3-2*x4^3", "x1*x2*(x1+x2)-x3^2*x4"])
def test_single_form_engines_agree(text):
    f = HomogeneousForm.parse(text, 4)
    want = brute([f], 6)
    assert rows(solve_box([f], 6, engine="propagate")) == want
    if split_groups(f):
        assert rows(solve_box([f], 6, engine="mitm")) == want


def test_system_of_quadrics():
    fs = [HomogeneousForm.parse(t, 5) for t in ("x1*x2-x3*x4", "x1*x4-x2*x3+x3*x5+x4*x5")]
    assert rows(solve_box(fs, 3)) == brute(fs, 3)


def test_chunks_cover_range():
    for B, c in ((0, 4), (5, 3), (100, 8), (7, 20)):
        vals = [v for r in top_range_chunks(B, c) for v in r]
        assert vals == list(range(-B, B + 1))


def test_partition_by_first():
    f = HomogeneousForm.parse("x1^2+x2^2-x3^2-x4^2", 4)
    whole = rows(solve_box([f], 5, engine="propagate"))
    parts = []
    for r in top_range_chunks(5, 3):
        parts += rows(solve_box([f], 5, first=r, engine="propagate"))
    assert sorted(parts) == whole


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=5), st.integers(1, 50))
@settings(max_examples=300)
def test_integer_roots(cs, B):
    r = integer_roots(cs, B)
    if all(c == 0 for c in cs):
        assert r is None
        return
    want = sorted(v for v in range(-B, B + 1) if sum(c * v**k for k, c in enumerate(cs)) == 0)
    assert r == want


def test_budget():
    f = HomogeneousForm.parse("x1^3+x2^3+x3^3+x4^3", 4)
    with pytest.raises(BudgetExceeded):
        solve_box([f], 50, budget=100, engine="propagate")
    with pytest.raises(BudgetExceeded):
        solve_box([f], 50, budget=100, engine="mitm")

import math

import pytest

from delpezzo import torsor
from delpezzo.torsor import TorsorError, TorsorPointA1, a1_map, a1_violations, psi_a1


def test_d4_bijection_small():
    r = torsor.verify_bijection("D4", 30)
    assert r["missing"] == [] and r["extra"] == [] and r["injective"]


@pytest.mark.parametrize("B", [10, 30, 60])
def test_d4_count_matches_open_subset(B):
    from delpezzo.surfaces import builtin, count_surface
    assert 2 * torsor.d4_count(B) == count_surface(builtin("dp3_d4"), B, "open_U")


def test_d4_points_satisfy_equation_and_height():
    from delpezzo.surfaces import builtin
    f = builtin("dp3_d4").forms[0]
    for t in torsor.d4_points(40):
        x = torsor.D4_MAP.apply(t.as_tuple())
        assert f(x) == 0
        assert max(abs(c) for c in x) <= torsor.psi_d4(t)


def test_a1_small_bijection_boundary_only():
    r = torsor.verify_bijection("A1", 25)
    assert r["extra"] == [] and r["injective"]
    assert all(0 in x[:6] for x in r["missing"])


def test_a1_height_is_max_coordinate():
    for t in torsor.a1_points(300):
        x = a1_map(t)
        assert max(abs(c) for c in x) == psi_a1(t)


def test_a1_map_lands_on_primed_system():
    fs = torsor.a1_primed_system()
    for t in torsor.a1_points(200):
        x = a1_map(t)
        assert all(f(x) == 0 for f in fs)


def test_a1_y2_zero_is_rejected():
    # coprimality alone does not exclude y2 = 0; the image would be a boundary point
    t = TorsorPointA1(1, 1, 1, 1, 1, 0, -1)
    assert "y2 must be nonzero" in a1_violations(t)
    with pytest.raises(TorsorError):
        a1_map(t)


@pytest.mark.parametrize("B", [1, 50, 1000, 5000])
def test_a1_count_kernels_agree(B):
    n_ref = sum(1 for _ in torsor.a1_points(B))
    assert torsor.a1_count(B, fast=True) == n_ref
    assert torsor.a1_count(B, fast=False) == n_ref


def test_a1_count_frozen():
    # values from the reference enumeration, frozen
    assert torsor.a1_count(1000) == 13235
    assert torsor.a1_count(10**4) == 222195


def test_a1_count_workers():
    assert torsor.a1_count(20000, workers=1) == torsor.a1_count(20000, workers=4)


def test_verify_rejects_large_B():
    with pytest.raises(TorsorError):
        torsor.verify_bijection("A1", 500)
    with pytest.raises(TorsorError):
        torsor.verify_bijection("E6", 10)

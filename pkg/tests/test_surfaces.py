import itertools
import math

import numpy as np
import pytest

from delpezzo import surfaces
from delpezzo.surfaces import SurfaceError, builtin, count_affine, count_ambient, count_surface


def brute_ambient(n, B):
    pts = set()
    for x in itertools.product(range(-B, B + 1), repeat=n):
        if any(x) and math.gcd(*x) == 1:
            s = next(v for v in x if v)
            pts.add(tuple(v if s > 0 else -v for v in x))
    return len(pts)


@pytest.mark.parametrize("n,B", [(2, 1), (2, 7), (3, 5), (4, 3)])
def test_ambient_matches_brute(n, B):
    assert count_ambient(n, B) == brute_ambient(n, B)


def test_ambient_trivial():
    assert count_ambient(3, 0) == 0
    assert count_ambient(2, 1) == 4  # (1:0), (0:1), (1:1), (1:-1)


def brute_surface(S, B):
    out = set()
    for x in itertools.product(range(-B, B + 1), repeat=S.n):
        if any(x) and math.gcd(*x) == 1 and all(f(x) == 0 for f in S.forms):
            s = next(v for v in x if v)
            out.add(tuple(v if s > 0 else -v for v in x))
    return out


@pytest.mark.parametrize("sid", ["fermat_cubic", "dp3_d4", "dp3_e6", "dp3_cayley", "diag_cubic:1,1,1,2"])
def test_count_matches_brute(sid):
    S = builtin(sid)
    assert count_surface(S, 6) == len(brute_surface(S, 6))


def test_quartic_del_pezzo_count():
    S = builtin("dp4_iv")
    assert count_surface(S, 3) == len(brute_surface(S, 3))


def test_open_subset_removes_line_points():
    S = builtin("fermat_cubic")
    pts = surfaces.projective_points(S, 10, "open_U")
    assert len(pts) and not S.line_mask(pts).any()
    all_pts = surfaces.projective_points(S, 10)
    assert len(all_pts) > len(pts)
    # every removed point satisfies x_i^3 = -x_j^3 for a pairing
    removed = {tuple(r) for r in all_pts.tolist()} - {tuple(r) for r in pts.tolist()}
    for x in removed:
        assert any(x[i] == -x[j] and x[k] == -x[l] for (i, j), (k, l) in
                   (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))))


def test_open_subset_unavailable():
    with pytest.raises(SurfaceError):
        count_surface(builtin("dp6_a2"), 3, "open_U")


def test_unknown_surface():
    with pytest.raises(SurfaceError):
        builtin("no_such_surface")
    with pytest.raises(SurfaceError):
        builtin("diag_cubic:2,4,6,8")


def test_lines_lie_on_surfaces():
    for sid in ("dp3_d4", "dp3_d4_s2", "dp3_e6", "dp6_a1"):
        S = builtin(sid)
        for line in S.lines:
            assert surfaces.line_on_surface(S.forms, line), (sid, line)


def test_affine_count_and_mobius_identity():
    f = builtin("fermat_cubic").forms[0]
    n = count_affine(f, 12)  # raises if the Moebius identity fails
    brute = sum(1 for x in itertools.product(range(-12, 13), repeat=4) if any(x) and f(x) == 0)
    assert n == brute


def test_workers_do_not_change_counts():
    S = builtin("dp3_d4")
    a = surfaces.projective_points(S, 40, "open_U", workers=1)
    b = surfaces.projective_points(S, 40, "open_U", workers=3)
    assert np.array_equal(a, b)


def test_count_record_fields():
    rec = surfaces.count_record(builtin("fermat_cubic"), 5)
    assert set(rec) == {"surface", "B", "subset", "count", "elapsed_ms"}


def test_catalogue_has_table_rows():
    cat = surfaces.catalogue()
    for row in surfaces.DP4_TABLE:
        assert f"dp4_{row}" in cat

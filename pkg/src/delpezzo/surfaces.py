"""Surface catalogue and direct point counts N_V(B), N_U(B), N(f; B)."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import product
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .arith import mobius, mobius_table
from .engines import DEFAULT_BUDGET, BudgetExceeded, solve_box, top_range_chunks
from .forms import HomogeneousForm, Poly, parse_line
from .parallel import pmap

CHUNKS = 8


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceSpec:
    id: str
    forms: tuple[HomogeneousForm, ...]
    lines: tuple[tuple[HomogeneousForm, ...], ...] = ()
    rho: int | str = "unknown"
    lines_known: bool = False
    # optional vectorised replacement for the per-line test (diagonal cubics)
    on_lines: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    prefix: str = "x"
    note: str = ""

    @property
    def n(self) -> int:
        return self.forms[0].n

    @property
    def ambient_dim(self) -> int:
        return self.n - 1

    def line_mask(self, pts: np.ndarray) -> np.ndarray:
        """Boolean mask of rows lying on an excluded line."""
        if not self.lines_known:
            raise SurfaceError(f"lines of {self.id} are not recorded; open_U is unavailable")
        if self.on_lines is not None:
            return self.on_lines(pts)
        mask = np.zeros(len(pts), dtype=bool)
        for line in self.lines:
            on = np.ones(len(pts), dtype=bool)
            for lf in line:
                on &= _linear_values(lf, pts) == 0
            mask |= on
        return mask


def _linear_values(lf: HomogeneousForm, pts: np.ndarray) -> np.ndarray:
    coeff = np.zeros(lf.n, dtype=np.int64)
    for e, c in lf.terms:
        coeff[e.index(1)] = c
    return pts @ coeff


def line_basis(line: Sequence[HomogeneousForm]) -> list[list[int]]:
    """Two integer vectors spanning the line cut out by the linear forms."""
    n = line[0].n
    rows = []
    for lf in line:
        r = [0] * n
        for e, c in lf.terms:
            r[e.index(1)] = c
        rows.append(r)
    ker = linalg.nullspace(linalg.to_matrix(rows))
    if len(ker) != 2:
        raise SurfaceError(f"linear forms cut out a space of dimension {len(ker) - 1}, not a line")
    out = []
    for v in ker:
        den = math.lcm(*(x.denominator for x in v))
        out.append([int(x * den) for x in v])
    return out


def line_on_surface(forms: Sequence[HomogeneousForm], line: Sequence[HomogeneousForm]) -> bool:
    """Exact containment: every form vanishes identically on s*v1 + t*v2."""
    v1, v2 = line_basis(line)
    images: list[Poly] = []
    for a, b in zip(v1, v2):
        p: Poly = {}
        if a:
            p[(1, 0)] = a
        if b:
            p[(0, 1)] = b
        images.append(p)
    for f in forms:
        if f.substitute(images, 2):
            return False
        # sample evaluation at d+1 points as a second check
        for s in range(f.degree + 1):
            pt = [s * a + (s + 1) * b for a, b in zip(v1, v2)]
            if f(pt) != 0:
                return False
    return True


def _make(id: str, texts: Sequence[str], n: int, lines: Sequence[str] = (), rho: int | str = "unknown",
          lines_known: bool = False, prefix: str = "x", note: str = "",
          on_lines=None) -> SurfaceSpec:
    forms = tuple(HomogeneousForm.parse(t, n, prefix) for t in texts)
    parsed = tuple(tuple(parse_line(l, n, prefix)) for l in lines)
    for l, line in zip(lines, parsed):
        if not line_on_surface(forms, line):
            raise SurfaceError(f"declared line {l!r} is not contained in {id}")
    if isinstance(rho, int) and not 1 <= rho <= 10 - _degree(forms, n):
        raise SurfaceError(f"declared Picard rank {rho} out of range")
    return SurfaceSpec(id, forms, parsed, rho, lines_known or bool(lines), on_lines, prefix, note)


def _degree(forms, n) -> int:
    # degree of the surface: cubic in P^3, 4 for two quadrics in P^4, 6 in P^6
    if n == 4:
        return forms[0].degree
    if n == 5:
        return 4
    if n == 7:
        return 6
    return 3


def diagonal_line_mask(a: Sequence[int]) -> Callable[[np.ndarray], np.ndarray]:
    a = [int(v) for v in a]

    def mask(pts: np.ndarray) -> np.ndarray:
        P = pts.astype(object) if len(pts) else pts
        out = np.zeros(len(pts), dtype=bool)
        for (i, j), (k, l) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
            s1 = a[i] * P[:, i] ** 3 + a[j] * P[:, j] ** 3 == 0
            s2 = a[k] * P[:, k] ** 3 + a[l] * P[:, l] ** 3 == 0
            out |= np.asarray(s1 & s2, dtype=bool)
        return out

    return mask


DP4_TABLE = {
    "i": ("x1*x2-x3*x4", "x1*x4-x2*x3+x3*x5+x4*x5"),
    "ii": ("x1*x2-x3*x4", "x1*x4-x2*x3+x3*x5+x5^2"),
    "iii": ("x1*x2-x3^2", "x1*x3-x2*x3+x4*x5"),
    "iv": ("x1*x2-x3*x4", "(x1+x2+x3+x4)*x5-x3*x4"),
    "v": ("x1*x2-x3^2", "x2*x3+x3^2+x4*x5"),
    "vi": ("x1*x2-x3*x4", "x1*x5+x2*x3+x4*x5"),
    "vii": ("x1*x2-x3*x4", "x1*x4+x2*x4+x3*x5"),
    "viii": ("x1*x4-(x2-x3)*x5", "(x1+x4)*(x2+x3)+x2*x3"),
    "ix": ("x1*x2-x3^2", "x3^2-x4*x5"),
    "x": ("x1*x2-x3^2", "x2*x3-x4*x5"),
    "xi": ("x1*x4-x3*x5", "x1*x2+x2*x4+x3^2"),
    "xii": ("x1*x2-x3*x4", "x1*x5+x2*x3+x4^2"),
    "xiii": ("x1*x4-x2*x5", "x1*x2+x2*x4+x3^2"),
    "xiv": ("x1*x2-x3^2", "x1^2-x4*x5"),
    "xv": ("x1*x2-x3^2", "x1*x5+x2*x3+x4^2"),
}

# Segre symbol and singularity type of each table row
DP4_TYPES = {
    "i": ("(2,1,1,1)", "A1", 12),
    "ii": ("(2,2,1)", "2A1", 9),
    "iii": ("((1,1),1,1,1)", "2A1", 8),
    "iv": ("(3,1,1)", "A2", 8),
    "v": ("((1,1),2,1)", "3A1", 6),
    "vi": ("(3,2)", "A1+A2", 6),
    "vii": ("(4,1)", "A3", 5),
    "viii": ("((2,1),1,1)", "A3", 4),
    "ix": ("((1,1),(1,1),1)", "4A1", 4),
    "x": ("((1,1),3)", "2A1+A2", 4),
    "xi": ("((2,1),2)", "A1+A3", 3),
    "xii": ("(5)", "A4", 3),
    "xiii": ("((3,1),1)", "D4", 2),
    "xiv": ("((2,1),(1,1))", "2A1+A3", 2),
    "xv": ("((4,1))", "D5", 1),
}

A1_FORMS = (
    "x1^2-x2*x4", "x1*x5-x3*x4", "x1*x3-x2*x5", "x1*x6-x3*x5", "x2*x6-x3^2",
    "x4*x6-x5^2", "x1^2+x1*x4+x5*x7", "x1*x2+x1^2+x3*x7", "x1*x3+x1*x5+x6*x7",
)
A1_LINES = (
    "x1=x2=x3=x5=x6=0",
    "x1=x3=x4=x5=x6=0",
    "x3=x5=x6=x1+x4=x1+x2=0",
)
A2_FORMS = (
    "x1*x6-x4*x5", "x1*x7-x2*x5", "x1*x7-x3*x4", "x3*x7+x4*x5+x5^2", "x5*x7-x3*x4",
    "x2*x7+x4^2+x4*x5", "x4*x7-x2*x6", "x4*x6+x5*x6+x7^2", "x2*x3-x1*x4+x1*x5",
)


def _diag(a: Sequence[int], id: str, rho) -> SurfaceSpec:
    terms = "+".join(f"{c}*x{i + 1}^3" for i, c in enumerate(a))
    return _make(id, [terms], 4, rho=rho, lines_known=True, on_lines=diagonal_line_mask(a),
                 note="diagonal cubic; lines detected by a_i x_i^3 + a_j x_j^3 = 0 pairings")


def _registry() -> dict[str, Callable[[], SurfaceSpec]]:
    reg: dict[str, Callable[[], SurfaceSpec]] = {
        "fermat_cubic": lambda: _diag((1, 1, 1, 1), "fermat_cubic", 4),
        "dp3_d4": lambda: _make(
            "dp3_d4", ["t1*t2*(t1+t2)-t3^2*t4"], 4, prefix="t", rho=7,
            lines=["t1=t3=0", "t1=t4=0", "t2=t3=0", "t2=t4=0", "t3=t1+t2=0", "t4=t1+t2=0"],
            note="D4 cubic in torsor-friendly coordinates t1t2(t1+t2)=t3^2 t4"),
        "dp3_d4_s2": lambda: _make(
            "dp3_d4_s2", ["x1*x2*(x1+x2)+x4*(x1+x2+x3)^2"], 4, rho=7,
            lines=["x1=x4=0", "x2=x4=0", "x1+x2=x3=0", "x1+x2=x4=0",
                   "x1=x1+x2+x3=0", "x2=x1+x2+x3=0"]),
        "dp3_d4_s3": lambda: _make("dp3_d4_s3", ["x1*x2*x3+x4*(x1+x2+x3)^2"], 4, rho=7),
        "dp3_e6": lambda: _make("dp3_e6", ["x1^2*x3+x2*x3^2+x4^3"], 4, rho=7, lines=["x3=x4=0"]),
        "dp3_cayley": lambda: _make(
            "dp3_cayley", ["x1*x2*x3+x1*x2*x4+x1*x3*x4+x2*x3*x4"], 4, rho=7),
        "dp6_a1": lambda: _make("dp6_a1", A1_FORMS, 7, lines=A1_LINES, rho=4),
        "dp6_a2": lambda: _make("dp6_a2", A2_FORMS, 7),
        "dp4_rom_walk": lambda: _make(
            "dp4_rom_walk", ["x1*x2+x3*x4", "x1*x4+x2*x3+x3*x5+x4*x5"], 5),
    }
    for row, (q1, q2) in DP4_TABLE.items():
        reg[f"dp4_{row}"] = partial(lambda r, a, b: _make(f"dp4_{r}", [a, b], 5, rho=6), row, q1, q2)
    return reg


REGISTRY = _registry()


def builtin(id: str) -> SurfaceSpec:
    """Surface by catalogue id; 'diag_cubic:a1,a2,a3,a4' builds a diagonal cubic."""
    if id.startswith("diag_cubic:"):
        a = tuple(int(v) for v in id.split(":", 1)[1].split(","))
        if len(a) != 4 or min(a) < 1 or math.gcd(*a) != 1:
            raise SurfaceError("diag_cubic needs four positive coprime integers")
        from .picard import picard_rank
        return _diag(a, id, picard_rank(a))
    if id not in REGISTRY:
        raise SurfaceError(f"unknown surface id {id!r}; known: {', '.join(sorted(REGISTRY))}")
    return REGISTRY[id]()


def catalogue() -> list[str]:
    return sorted(REGISTRY) + ["diag_cubic:a1,a2,a3,a4"]


def evaluate(f: HomogeneousForm, x: Sequence[int]) -> int:
    return f(x)


def count_ambient(n: int, B: int) -> int:
    """Points of P^{n-1}(Q) of height <= B: sum_k mu(k) ((2[B/k]+1)^n - 1) / 2."""
    if n < 2:
        raise ValueError("need n >= 2")
    if B < 1:
        return 0
    mu = mobius_table(B)
    total = sum(mu[k] * ((2 * (B // k) + 1) ** n - 1) for k in range(1, B + 1) if mu[k])
    return total // 2


def primitive_mask(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return np.zeros(0, dtype=bool)
    return np.gcd.reduce(np.abs(pts), axis=1) == 1


def normalized_mask(pts: np.ndarray) -> np.ndarray:
    """Rows whose first nonzero coordinate is positive (zero rows excluded)."""
    if len(pts) == 0:
        return np.zeros(0, dtype=bool)
    nz = pts != 0
    has = nz.any(axis=1)
    first = np.argmax(nz, axis=1)
    lead = pts[np.arange(len(pts)), first]
    return has & (lead > 0)


def _chunk_solutions(args) -> np.ndarray:
    forms, B, first, budget = args
    return solve_box(forms, B, first, budget)


def box_solutions(forms: Sequence[HomogeneousForm], B: int, workers: int | None = None,
                  budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All solutions in [-B, B]^n, assembled from fixed chunks in order."""
    n = forms[0].n
    if B <= 0:
        return np.zeros((1, n), dtype=np.int64) if B == 0 else np.zeros((0, n), dtype=np.int64)
    chunks = top_range_chunks(B, CHUNKS)
    parts = pmap(_chunk_solutions, [(tuple(forms), B, c, budget) for c in chunks], workers)
    return np.concatenate(parts) if parts else np.zeros((0, n), dtype=np.int64)


def projective_points(S: SurfaceSpec, B: int, subset: str = "all", workers: int | None = None,
                      budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Sign-normalised primitive solutions of height <= B, optionally off the lines."""
    if subset not in ("all", "open_U"):
        raise SurfaceError("subset must be 'all' or 'open_U'")
    if subset == "open_U" and not S.lines_known:
        raise SurfaceError(f"lines of {S.id} are not recorded; open_U is unavailable")
    if B < 1:
        return np.zeros((0, S.n), dtype=np.int64)
    pts = box_solutions(S.forms, B, workers, budget)
    keep = primitive_mask(pts) & normalized_mask(pts)
    pts = pts[keep]
    if subset == "open_U":
        pts = pts[~S.line_mask(pts)]
    # deterministic order
    if len(pts):
        pts = pts[np.lexsort(pts.T[::-1])]
    return pts


def count_surface(S: SurfaceSpec, B: int, subset: str = "all", workers: int | None = None,
                  budget: int = DEFAULT_BUDGET) -> int:
    return int(len(projective_points(S, B, subset, workers, budget)))


def count_affine(forms: Sequence[HomogeneousForm] | HomogeneousForm, B: int, workers: int | None = None,
                 budget: int = DEFAULT_BUDGET, check: bool = True) -> int:
    """Nonzero integer solutions with |x| <= B (not only primitive ones).

    For B <= 50 the identity N_V(B) = 1/2 sum_k mu(k) N(f; B/k) is checked
    against the primitive count taken from the same solution set.
    """
    if isinstance(forms, HomogeneousForm):
        forms = [forms]
    if B < 1:
        return 0
    pts = box_solutions(forms, B, workers, budget)
    nonzero = pts[np.any(pts != 0, axis=1)]
    total = int(len(nonzero))
    if check and B <= 50:
        height = np.abs(nonzero).max(axis=1) if len(nonzero) else np.zeros(0, dtype=np.int64)
        nv = int((primitive_mask(nonzero) & normalized_mask(nonzero)).sum())
        acc = 0
        for k in range(1, B + 1):
            mu = mobius(k)
            if mu:
                acc += mu * int((height <= B // k).sum())
        if acc != 2 * nv:
            raise AssertionError(f"Mobius identity failed: {acc} != 2*{nv}")
    return total


def count_record(S: SurfaceSpec, B: int, subset: str = "all", workers: int | None = None) -> dict:
    t0 = time.perf_counter()
    c = count_surface(S, B, subset, workers)
    return {"surface": S.id, "B": B, "subset": subset, "count": c,
            "elapsed_ms": round(1000 * (time.perf_counter() - t0), 3)}

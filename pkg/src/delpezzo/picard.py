"""Lines, Galois action and Picard rank of diagonal cubic surfaces.

The surface is a1 x1^3 + a2 x2^3 + a3 x3^3 + a4 x4^3 = 0 with a_i >= 1.
Write theta for a primitive cube root of unity and alpha, alpha', alpha''
for the real cube roots of a2/a1, a3/a1, a4/a1. The 27 lines are

    L_i^(k): x1 + theta^i alpha   x2 = 0,  x3 + theta^(i+k) beta   x4 = 0
    M_i^(k): x1 + theta^i alpha'  x3 = 0,  x4 + theta^(i+k) beta'  x2 = 0
    N_i^(k): x1 + theta^i alpha'' x4 = 0,  x2 + theta^(i+k) beta'' x3 = 0

with beta = alpha''/alpha', beta' = alpha/alpha'', beta'' = alpha'/alpha and
k in {0, 1, 2} the accent (plain, prime, double prime).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple, Sequence

from .arith import factorize, is_cube
from .linalg import rank, to_matrix

FAMILIES = ("L", "M", "N")
ACCENTS = ("", "'", "''")


class LineLabel(NamedTuple):
    family: str
    accent: int
    index: int

    def __str__(self) -> str:
        return f"{self.family}{ACCENTS[self.accent]}{self.index}"


class GaloisElement(NamedTuple):
    shift: tuple[int, int, int]
    conj: int = 0


LABELS: tuple[LineLabel, ...] = tuple(
    LineLabel(f, k, i) for f in FAMILIES for k in range(3) for i in range(3)
)
LABEL_INDEX = {l: n for n, l in enumerate(LABELS)}


def parse_label(text: str) -> LineLabel:
    s = text.strip().replace("′", "'").replace("″", "''")
    fam, rest = s[0], s[1:]
    acc = len(rest) - len(rest.lstrip("'"))
    return LineLabel(fam, acc, int(rest[acc:]) % 3)


# Naming of the lines as E_i, Q_i, L_ij (blow-up model of the cubic)
DICTIONARY: dict[str, str] = {
    "E1": "L0", "E2": "L1", "E3": "L2",
    "E4": "M1", "E5": "M'2", "E6": "M''0",
    "Q1": "L'1", "Q2": "L'2", "Q3": "L'0",
    "Q4": "M0", "Q5": "M'1", "Q6": "M''2",
    "L12": "L''1", "L23": "L''2", "L13": "L''0",
    "L45": "M''1", "L56": "M2", "L46": "M'0",
    "L14": "N0", "L15": "N1", "L16": "N2",
    "L24": "N'1", "L25": "N'2", "L26": "N'0",
    "L34": "N''2", "L35": "N''0", "L36": "N''1",
}
NAME_OF = {parse_label(v): k for k, v in DICTIONARY.items()}

INTERSECTION = (1, -1, -1, -1, -1, -1, -1)


def _class_of_name(name: str) -> tuple[int, ...]:
    c = [0] * 7
    if name[0] == "E":
        c[int(name[1])] = 1
    elif name[0] == "Q":
        i = int(name[1])
        c[0] = 2
        for j in range(1, 7):
            if j != i:
                c[j] = -1
    else:
        c[0] = 1
        c[int(name[1])] -= 1
        c[int(name[2])] -= 1
    return tuple(c)


def class_of(l: LineLabel | str) -> tuple[int, ...]:
    """Divisor class of a line in the basis [Lambda], [E1], ..., [E6]."""
    if isinstance(l, str):
        l = parse_label(l)
    return _class_of_name(NAME_OF[l])


def intersect(c: Sequence[int], d: Sequence[int]) -> int:
    return sum(w * x * y for w, x, y in zip(INTERSECTION, c, d))


def _exponents_mod3(a: Sequence[int]) -> list[list[int]]:
    """Exponent vectors mod 3 of a2/a1, a3/a1, a4/a1 over the primes of a1a2a3a4."""
    primes = sorted({p for x in a for p, _ in factorize(x)})
    vecs = []
    for k in range(1, 4):
        fa = dict(factorize(a[k]))
        f1 = dict(factorize(a[0]))
        vecs.append([(fa.get(p, 0) - f1.get(p, 0)) % 3 for p in primes])
    return vecs


def cube_relations(a: Sequence[int]) -> list[tuple[int, int, int]]:
    """All m in F_3^3 with prod (a_{k+1}/a1)^{m_k} a rational cube."""
    vecs = _exponents_mod3(a)
    out = []
    for m in itertools.product(range(3), repeat=3):
        ok = all(sum(m[k] * vecs[k][j] for k in range(3)) % 3 == 0 for j in range(len(vecs[0])))
        if ok:
            out.append(m)
    return out


def _check_a(a: Sequence[int]) -> tuple[int, int, int, int]:
    a = tuple(int(x) for x in a)
    if len(a) != 4 or min(a) < 1:
        raise ValueError("need four positive integers")
    return a


@lru_cache(maxsize=4096)
def _shift_group(a: tuple[int, int, int, int]) -> tuple[tuple[int, int, int], ...]:
    rel = cube_relations(a)
    return tuple(e for e in itertools.product(range(3), repeat=3)
                 if all(sum(m[k] * e[k] for k in range(3)) % 3 == 0 for m in rel))


def galois_group(a: Sequence[int]) -> list[GaloisElement]:
    """Elements of Gal(K/Q) acting on the lines, as shifts of the cube roots times {id, conj}."""
    a = _check_a(a)
    return [GaloisElement(e, c) for c in (0, 1) for e in _shift_group(a)]


def shift_generators(a: Sequence[int]) -> list[tuple[int, int, int]]:
    H = _shift_group(_check_a(a))
    gens: list[tuple[int, int, int]] = []
    span = {(0, 0, 0)}
    for e in H:
        if e in span:
            continue
        gens.append(e)
        span = {tuple((s[k] + t * e[k]) % 3 for k in range(3)) for s in span for t in range(3)}
    return gens


def act(g: GaloisElement, l: LineLabel) -> LineLabel:
    e, e1, e2 = g.shift
    f, k, i = l
    if f == "L":
        i, k = i + e, k + (e2 - e1 - e)
    elif f == "M":
        i, k = i + e1, k + (e - e2 - e1)
    else:
        i, k = i + e2, k + (e1 - e - e2)
    if g.conj:
        i, k = -i, -k
    return LineLabel(f, k % 3, i % 3)


def line_action(g: GaloisElement) -> list[int]:
    """Permutation of LABELS (as indices) induced by g."""
    return [LABEL_INDEX[act(g, l)] for l in LABELS]


def pic_matrix(g: GaloisElement) -> list[list[int]]:
    """7x7 integer matrix of g on Pic; column j is the image of basis vector j."""
    cols = [None] * 7
    for j in range(1, 7):
        cols[j] = class_of(act(g, parse_label(DICTIONARY[f"E{j}"])))
    # [Lambda] = [L12] + [E1] + [E2]
    cols[0] = tuple(sum(v) for v in zip(*(class_of(act(g, parse_label(DICTIONARY[n])))
                                         for n in ("L12", "E1", "E2"))))
    return [[cols[j][i] for j in range(7)] for i in range(7)]


def preserves_form(M: list[list[int]]) -> bool:
    for i in range(7):
        for j in range(7):
            v = sum(INTERSECTION[k] * M[k][i] * M[k][j] for k in range(7))
            if v != (INTERSECTION[i] if i == j else 0):
                return False
    return True


def picard_rank(a: Sequence[int]) -> int:
    """Rank of the Galois-fixed part of the geometric Picard lattice."""
    a = _check_a(a)
    gens = [GaloisElement(e, 0) for e in shift_generators(a)] + [GaloisElement((0, 0, 0), 1)]
    rows: list[list[int]] = []
    for g in gens:
        M = pic_matrix(g)
        rows.extend([M[i][j] - (i == j) for j in range(7)] for i in range(7))
    return 7 - rank(to_matrix(rows))


def segre_criterion_rank1(a: Sequence[int]) -> bool:
    """True iff no a_i a_j / (a_k a_l) is a rational cube."""
    a = _check_a(a)
    for i, j in itertools.combinations(range(4), 2):
        k, l = (t for t in range(4) if t not in (i, j))
        if is_cube(Fraction(a[i] * a[j], a[k] * a[l])):
            return False
    return True


def reduce_coefficients(a: Sequence[int]) -> tuple[int, int, int, int]:
    """Divide out the gcd; the Picard rank is unchanged."""
    a = _check_a(a)
    g = 0
    for x in a:
        g = gcd(g, x)
    return tuple(x // g for x in a)

"""Integer homogeneous forms: parsing, evaluation and compilation."""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

Poly = dict[tuple[int, ...], int]


class FormError(ValueError):
    pass


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + va * vb
            if out[k] == 0:
                del out[k]
    return out


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Expand a polynomial expression such as 'x1*x2*(x1+x2) - x3^2*x4'."""
    n = len(variables)
    index = {v: i for i, v in enumerate(variables)}
    src = text.replace("^", "**")
    # allow implicit products like 2x1 or x1x2 only when written with '*'
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise FormError(f"cannot parse {text!r}: {exc}") from None

    def walk(node: ast.AST) -> Poly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return {(0,) * n: node.value} if node.value else {}
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise FormError(f"unknown variable {node.id!r}")
            e = [0] * n
            e[index[node.id]] = 1
            return {tuple(e): 1}
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            p = walk(node.operand)
            return {k: -v for k, v in p.items()} if isinstance(node.op, ast.USub) else p
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return _padd(walk(node.left), walk(node.right))
            if isinstance(node.op, ast.Sub):
                return _padd(walk(node.left), walk(node.right), -1)
            if isinstance(node.op, ast.Mult):
                return _pmul(walk(node.left), walk(node.right))
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise FormError("exponents must be non-negative integer literals")
                base = walk(node.left)
                out: Poly = {(0,) * n: 1}
                for _ in range(node.right.value):
                    out = _pmul(out, base)
                return out
        raise FormError(f"unsupported syntax in {text!r}")

    return walk(tree)


@dataclass(frozen=True)
class HomogeneousForm:
    """Integer form in n variables, stored as sorted (exponents, coefficient) pairs."""

    n: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if not self.terms:
            raise FormError("a form needs at least one nonzero coefficient")
        degs = {sum(e) for e, _ in self.terms}
        if len(degs) != 1 or degs == {0}:
            raise FormError(f"monomials must share one positive degree, got {sorted(degs)}")
        exps = [e for e, _ in self.terms]
        if len(set(exps)) != len(exps):
            raise FormError("duplicate exponent vectors")
        if any(len(e) != self.n for e in exps):
            raise FormError("exponent vector length differs from n")
        if any(c == 0 for _, c in self.terms):
            raise FormError("zero coefficient stored")

    @classmethod
    def from_poly(cls, poly: Mapping[tuple[int, ...], int], n: int) -> "HomogeneousForm":
        terms = tuple(sorted((tuple(e), int(c)) for e, c in poly.items() if c))
        return cls(n, terms)

    @classmethod
    def parse(cls, text: str, n: int, prefix: str = "x") -> "HomogeneousForm":
        names = [f"{prefix}{i + 1}" for i in range(n)]
        return cls.from_poly(parse_poly(text, names), n)

    @property
    def degree(self) -> int:
        return sum(self.terms[0][0])

    def poly(self) -> Poly:
        return dict(self.terms)

    def variables(self) -> set[int]:
        return {i for e, _ in self.terms for i, k in enumerate(e) if k}

    def __call__(self, x: Sequence[int]) -> int:
        return evaluate(self, x)

    def substitute(self, images: Sequence[Poly], m: int) -> Poly:
        """Compose with x_i -> images[i], each a polynomial in m variables."""
        out: Poly = {}
        for e, c in self.terms:
            term: Poly = {(0,) * m: c}
            for i, k in enumerate(e):
                for _ in range(k):
                    term = _pmul(term, images[i])
            out = _padd(out, term)
        return out

    def to_str(self, prefix: str = "x") -> str:
        parts = []
        for e, c in self.terms:
            mono = "*".join(
                f"{prefix}{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts).replace("+ -", "- ")


def evaluate(f: HomogeneousForm, x: Sequence[int]) -> int:
    if len(x) != f.n:
        raise FormError(f"point has {len(x)} coordinates, form has {f.n} variables")
    total = 0
    for e, c in f.terms:
        t = c
        for xi, k in zip(x, e):
            if k:
                t *= int(xi) ** k
        total += t
    return total


def _mono_code(e: Sequence[int], name: str = "X") -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"{name}[{i}]")
        elif k > 1:
            parts.append(f"{name}[{i}]**{k}")
    return "*".join(parts) if parts else "1"


def compile_poly(poly: Poly, name: str = "X") -> str:
    """Python expression string evaluating poly on an indexable X."""
    if not poly:
        return "0"
    out = []
    for e, c in sorted(poly.items()):
        m = _mono_code(e, name)
        out.append(f"({c})*{m}" if m != "1" else f"({c})")
    return "+".join(out)


def coefficients_in(poly: Poly, var: int) -> dict[int, Poly]:
    """Write poly as sum_k c_k * x_var^k; returns {k: c_k} with x_var removed."""
    out: dict[int, Poly] = {}
    for e, c in poly.items():
        k = e[var]
        e2 = tuple(0 if i == var else v for i, v in enumerate(e))
        out.setdefault(k, {})
        out[k][e2] = out[k].get(e2, 0) + c
    return out


def linear_form(text: str, n: int, prefix: str = "x") -> HomogeneousForm:
    f = HomogeneousForm.parse(text, n, prefix)
    if f.degree != 1:
        raise FormError(f"{text!r} is not linear")
    return f


_LINE_SPLIT = re.compile(r"\s*=\s*")


def parse_line(spec: str, n: int, prefix: str = "x") -> list[HomogeneousForm]:
    """'x1=x2+x3=0' style chain of linear forms all equal to zero."""
    parts = [p for p in _LINE_SPLIT.split(spec.strip()) if p]
    if parts and parts[-1] == "0":
        parts = parts[:-1]
    return [linear_form(p, n, prefix) for p in parts]

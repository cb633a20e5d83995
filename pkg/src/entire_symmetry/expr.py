"""Closed-form entire functions of one complex variable ``z``.

The grammar only admits constructs that are entire: sums, products,
non-negative integer powers, division by non-zero constants and the
primitives exp, sin, cos, sinh, cosh. Constants built from rationals, ``i``
and ``pi`` are kept symbolically (Laurent polynomials in pi with
Gaussian-rational coefficients) so that exactness survives parsing.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .gaussian import (
    ONE,
    ZERO,
    GaussianRational,
    poly_add,
    poly_mul,
    poly_trim,
)

PRIMITIVES = ("exp", "sin", "cos", "sinh", "cosh")
_NOT_ENTIRE_NAMES = {
    "log", "ln", "sqrt", "tan", "cot", "sec", "csc", "tanh", "coth",
    "sech", "csch", "gamma", "asin", "acos", "atan", "arcsin", "arccos", "arctan",
}


class ExprSyntaxError(SyntaxError):
    """Malformed expression text; carries the offending position and what was expected."""

    def __init__(self, message: str, position: int, expected: str = ""):
        super().__init__(f"{message} at position {position}" + (f" (expected {expected})" if expected else ""))
        self.position = position
        self.expected = expected


class NotEntireError(ValueError):
    """The expression would denote a function with poles or branch points."""


# ---------------------------------------------------------------- symbolic constants
# A symbolic constant is a tuple of (power_of_pi, GaussianRational) pairs, sorted
# by power with zero coefficients dropped. ``None`` means "numeric only".

SymConst = tuple


def _sym(d: dict) -> SymConst:
    return tuple(sorted((k, c) for k, c in d.items() if c))


def _sym_add(a: SymConst, b: SymConst) -> SymConst:
    d = dict(a)
    for k, c in b:
        d[k] = d.get(k, ZERO) + c
    return _sym(d)


def _sym_mul(a: SymConst, b: SymConst) -> SymConst:
    d: dict = {}
    for ka, ca in a:
        for kb, cb in b:
            d[ka + kb] = d.get(ka + kb, ZERO) + ca * cb
    return _sym(d)


def _sym_neg(a: SymConst) -> SymConst:
    return tuple((k, -c) for k, c in a)


def _sym_value(a: SymConst) -> complex:
    total = 0j
    for k, c in a:
        total += complex(c) * math.pi ** k
    return total


def _sym_reciprocal(a: SymConst) -> Optional[SymConst]:
    if len(a) != 1:
        return None
    k, c = a[0]
    return ((-k, c.reciprocal()),)


# ---------------------------------------------------------------- AST


class ExprNode:
    """Base class for AST nodes. Nodes are immutable and compare structurally."""

    __slots__ = ()

    def __str__(self):
        return format_expr(self)


@dataclass(frozen=True, eq=True)
class Constant(ExprNode):
    value: complex
    sym: Optional[SymConst] = None

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    @classmethod
    def of(cls, x) -> "Constant":
        if isinstance(x, Constant):
            return x
        if isinstance(x, (int, Fraction, GaussianRational)):
            g = GaussianRational.coerce(x)
            s = _sym({0: g})
            return cls(_sym_value(s), s)
        return cls(complex(x), None)

    @classmethod
    def from_sym(cls, s: SymConst) -> "Constant":
        return cls(_sym_value(s), s)

    @property
    def exact(self) -> Optional[GaussianRational]:
        """The Gaussian-rational value, or None when pi or a numeric-only part is involved."""
        if self.sym is None:
            return None
        if not self.sym:
            return ZERO
        if len(self.sym) == 1 and self.sym[0][0] == 0:
            return self.sym[0][1]
        return None

    def is_zero(self) -> bool:
        return self.sym == () if self.sym is not None else self.value == 0

    def is_one(self) -> bool:
        return self.exact == ONE if self.sym is not None else self.value == 1


@dataclass(frozen=True, eq=True)
class Variable(ExprNode):
    pass


@dataclass(frozen=True, eq=True)
class Sum(ExprNode):
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("Sum needs at least one term")


@dataclass(frozen=True, eq=True)
class Product(ExprNode):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("Product needs at least one factor")


@dataclass(frozen=True, eq=True)
class IntegerPower(ExprNode):
    base: ExprNode
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise NotEntireError("IntegerPower exponent must be a non-negative integer")


@dataclass(frozen=True, eq=True)
class Negate(ExprNode):
    arg: ExprNode


@dataclass(frozen=True, eq=True)
class Primitive(ExprNode):
    kind: str
    arg: ExprNode

    def __post_init__(self):
        if self.kind not in PRIMITIVES:
            raise NotEntireError(f"unsupported primitive {self.kind!r}")


Z = Variable()


def is_constant(f: ExprNode) -> bool:
    if isinstance(f, Constant):
        return True
    if isinstance(f, Variable):
        return False
    return all(is_constant(c) for c in _children(f))


def _children(f: ExprNode) -> tuple:
    if isinstance(f, Sum):
        return f.terms
    if isinstance(f, Product):
        return f.factors
    if isinstance(f, (IntegerPower,)):
        return (f.base,)
    if isinstance(f, (Negate, Primitive)):
        return (f.arg,)
    return ()


def fold_constant(f: ExprNode) -> Constant:
    """Collapse a variable-free subtree into a single Constant."""
    if isinstance(f, Constant):
        return f
    if isinstance(f, Variable):
        raise ValueError("not a constant expression")
    if isinstance(f, Negate):
        c = fold_constant(f.arg)
        return Constant.from_sym(_sym_neg(c.sym)) if c.sym is not None else Constant(-c.value)
    if isinstance(f, Sum):
        parts = [fold_constant(t) for t in f.terms]
        if all(p.sym is not None for p in parts):
            s: SymConst = ()
            for p in parts:
                s = _sym_add(s, p.sym)
            return Constant.from_sym(s)
        return Constant(sum((p.value for p in parts), 0j))
    if isinstance(f, Product):
        parts = [fold_constant(t) for t in f.factors]
        if all(p.sym is not None for p in parts):
            s = ((0, ONE),)
            for p in parts:
                s = _sym_mul(s, p.sym)
            return Constant.from_sym(s)
        v = 1 + 0j
        for p in parts:
            v *= p.value
        return Constant(v)
    if isinstance(f, IntegerPower):
        c = fold_constant(f.base)
        if c.sym is not None:
            s = ((0, ONE),)
            for _ in range(f.exponent):
                s = _sym_mul(s, c.sym)
            return Constant.from_sym(s)
        return Constant(c.value ** f.exponent)
    if isinstance(f, Primitive):
        return Constant(_PRIM_SCALAR[f.kind](fold_constant(f.arg).value))
    raise TypeError(f"unknown node {f!r}")


def _reciprocal(c: Constant) -> Constant:
    if c.is_zero():
        raise NotEntireError("division by zero")
    if c.sym is not None:
        r = _sym_reciprocal(c.sym)
        if r is not None:
            return Constant.from_sym(r)
    return Constant(1 / c.value)


def _fold(node: ExprNode) -> ExprNode:
    return fold_constant(node) if is_constant(node) else node


# ---------------------------------------------------------------- parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad, "number, name or operator")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", pos, repr(op))

    def parse(self) -> ExprNode:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos, "operator or end of input")
        return node

    def expr(self) -> ExprNode:
        items = [self.term()]
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                items.append(t if val == "+" else _fold(Negate(t)))
            else:
                break
        return items[0] if len(items) == 1 else _fold(Sum(items))

    def term(self) -> ExprNode:
        items = [self.factor()]
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in ("*", "/"):
                self.take()
                fpos = self.peek()[2]
                f = self.factor()
                if val == "/":
                    if not is_constant(f):
                        raise NotEntireError(f"division by a non-constant expression at position {fpos}")
                    f = _reciprocal(fold_constant(f))
                items.append(f)
            else:
                break
        return items[0] if len(items) == 1 else _fold(Product(items))

    def factor(self) -> ExprNode:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return _fold(Negate(self.factor()))
        if kind == "op" and val == "+":
            self.take()
            return self.factor()
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            epos = self.peek()[2]
            exp_node = self.factor()
            if not is_constant(exp_node):
                raise NotEntireError(f"non-constant exponent at position {epos}")
            ev = fold_constant(exp_node).exact
            if ev is None or ev.im != 0 or ev.re.denominator != 1 or ev.re < 0:
                raise NotEntireError(f"exponent at position {epos} is not a non-negative integer")
            return _fold(IntegerPower(base, int(ev.re)))
        return base

    def atom(self) -> ExprNode:
        kind, val, pos = self.take()
        if kind == "num":
            return Constant.of(Fraction(val))
        if kind == "name":
            if val == "z":
                return Z
            if val == "i":
                return Constant.of(GaussianRational(0, 1))
            if val == "pi":
                return Constant.from_sym(((1, ONE),))
            if val in PRIMITIVES:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return _fold(Primitive(val, arg))
            if val in _NOT_ENTIRE_NAMES:
                raise NotEntireError(f"{val!r} is not entire")
            raise ExprSyntaxError(f"unknown name {val!r}", pos, "z, i, pi or one of " + ", ".join(PRIMITIVES))
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "op" and val == "-":
            return _fold(Negate(self.atom()))
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", pos, "number, 'z', 'i', 'pi', function or '('")


def parse(text: str) -> ExprNode:
    """Parse expression text into an AST, rejecting anything that is not entire."""
    return _Parser(text).parse()


# ---------------------------------------------------------------- formatting


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_gauss(c: GaussianRational) -> str:
    if c.im == 0:
        return _fmt_fraction(c.re)
    im = "i" if c.im == 1 else f"{_fmt_fraction(c.im)}*i"
    if c.re == 0:
        return im
    return f"{_fmt_fraction(c.re)} + {im}"


def _fmt_constant(c: Constant) -> str:
    if c.sym is None:
        v = c.value
        if v.imag == 0:
            return f"({v.real!r})"
        return f"({v.real!r} + {v.imag!r}*i)"
    if not c.sym:
        return "0"
    parts = []
    for k, coef in c.sym:
        body = _fmt_gauss(coef)
        if k == 0:
            parts.append(body)
            continue
        pis = "pi" + (f"^{abs(k)}" if abs(k) > 1 else "")
        if k > 0:
            parts.append(pis if coef == ONE else f"({body})*{pis}")
        else:
            parts.append(f"{body}/{pis}" if re.fullmatch(r"-?\d+", body) else f"({body})/{pis}")
    s = " + ".join(parts)
    if re.fullmatch(r"\d+|i|pi", s):
        return s
    return f"({s})"


def format_expr(f: ExprNode) -> str:
    """Text that parses back to a structurally equal AST (for parser outputs)."""
    if isinstance(f, Constant):
        return _fmt_constant(f)
    if isinstance(f, Variable):
        return "z"
    if isinstance(f, Primitive):
        return f"{f.kind}({format_expr(f.arg)})"
    if isinstance(f, IntegerPower):
        b = format_expr(f.base)
        if not isinstance(f.base, (Variable, Primitive, Constant)):
            b = f"({b})"
        return f"{b}^{f.exponent}"
    if isinstance(f, Negate):
        inner = format_expr(f.arg)
        if isinstance(f.arg, (Sum, Product)):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(f, Product):
        parts = []
        for t in f.factors:
            s = format_expr(t)
            if isinstance(t, (Sum, Product)):
                s = f"({s})"
            parts.append(s)
        return " * ".join(parts)
    if isinstance(f, Sum):
        out = []
        for idx, t in enumerate(f.terms):
            if isinstance(t, Sum):
                s = f"({format_expr(t)})"
            else:
                s = format_expr(t)
            if idx == 0:
                out.append(s)
            elif isinstance(t, Negate):
                inner = format_expr(t.arg)
                if isinstance(t.arg, Sum):
                    inner = f"({inner})"
                out.append(f" - {inner}")
            else:
                out.append(f" + {s}")
        return "".join(out)
    raise TypeError(f"unknown node {f!r}")


# ---------------------------------------------------------------- calculus helpers


def _make_sum(items) -> ExprNode:
    consts = [t for t in items if isinstance(t, Constant)]
    rest = [t for t in items if not isinstance(t, Constant)]
    if consts:
        c = fold_constant(Sum(consts)) if len(consts) > 1 else consts[0]
        if not c.is_zero():
            rest.append(c)
    if not rest:
        return Constant.of(0)
    return rest[0] if len(rest) == 1 else Sum(rest)


def _make_product(items) -> ExprNode:
    consts = [t for t in items if isinstance(t, Constant)]
    rest = [t for t in items if not isinstance(t, Constant)]
    if consts:
        c = fold_constant(Product(consts)) if len(consts) > 1 else consts[0]
        if c.is_zero():
            return Constant.of(0)
        if not c.is_one():
            rest.insert(0, c)
    if not rest:
        return Constant.of(1)
    return rest[0] if len(rest) == 1 else Product(rest)


def _make_negate(x: ExprNode) -> ExprNode:
    if isinstance(x, Constant):
        return fold_constant(Negate(x))
    if isinstance(x, Negate):
        return x.arg
    return Negate(x)


def _make_power(base: ExprNode, n: int) -> ExprNode:
    if n == 0:
        return Constant.of(1)
    if n == 1:
        return base
    if isinstance(base, Constant):
        return fold_constant(IntegerPower(base, n))
    return IntegerPower(base, n)


def differentiate(f: ExprNode) -> ExprNode:
    """d/dz by structural rules; the result is lightly simplified but not canonical."""
    if isinstance(f, Constant):
        return Constant.of(0)
    if isinstance(f, Variable):
        return Constant.of(1)
    if isinstance(f, Sum):
        return _make_sum([differentiate(t) for t in f.terms])
    if isinstance(f, Negate):
        return _make_negate(differentiate(f.arg))
    if isinstance(f, Product):
        terms = []
        for i, fi in enumerate(f.factors):
            d = differentiate(fi)
            if isinstance(d, Constant) and d.is_zero():
                continue
            terms.append(_make_product([*f.factors[:i], d, *f.factors[i + 1:]]))
        return _make_sum(terms)
    if isinstance(f, IntegerPower):
        if f.exponent == 0:
            return Constant.of(0)
        db = differentiate(f.base)
        return _make_product([Constant.of(f.exponent), _make_power(f.base, f.exponent - 1), db])
    if isinstance(f, Primitive):
        u = f.arg
        du = differentiate(u)
        outer = {
            "exp": lambda: f,
            "sin": lambda: Primitive("cos", u),
            "cos": lambda: _make_negate(Primitive("sin", u)),
            "sinh": lambda: Primitive("cosh", u),
            "cosh": lambda: Primitive("sinh", u),
        }[f.kind]()
        if isinstance(outer, Negate):
            return _make_negate(_make_product([outer.arg, du]))
        return _make_product([outer, du])
    raise TypeError(f"unknown node {f!r}")


def derivative_n(f: ExprNode, n: int) -> ExprNode:
    for _ in range(n):
        f = differentiate(f)
    return f


# ---------------------------------------------------------------- evaluation

_PRIM_SCALAR = {
    "exp": cmath.exp,
    "sin": cmath.sin,
    "cos": cmath.cos,
    "sinh": cmath.sinh,
    "cosh": cmath.cosh,
}
_PRIM_ARRAY = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
}


def _checked(v: complex) -> complex:
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise OverflowError("intermediate value exceeds the floating-point range")
    return v


def evaluate(f: ExprNode, z: complex) -> complex:
    """Value of f at z. Raises OverflowError instead of returning inf/nan."""
    z = complex(z)
    try:
        return _eval(f, z)
    except OverflowError:
        raise
    except (ValueError, ZeroDivisionError) as exc:  # pragma: no cover - entirety makes these unreachable
        raise OverflowError(str(exc)) from exc


def _eval(f: ExprNode, z: complex) -> complex:
    if isinstance(f, Constant):
        return f.value
    if isinstance(f, Variable):
        return z
    if isinstance(f, Sum):
        acc = 0j
        for t in f.terms:
            acc += _eval(t, z)
        return _checked(acc)
    if isinstance(f, Product):
        acc = 1 + 0j
        for t in f.factors:
            acc *= _eval(t, z)
        return _checked(acc)
    if isinstance(f, IntegerPower):
        return _checked(_eval(f.base, z) ** f.exponent)
    if isinstance(f, Negate):
        return -_eval(f.arg, z)
    if isinstance(f, Primitive):
        return _checked(_PRIM_SCALAR[f.kind](_eval(f.arg, z)))
    raise TypeError(f"unknown node {f!r}")


def evaluate_many(f: ExprNode, zs) -> np.ndarray:
    """Vectorised evaluate over an array of points; non-finite entries are left as inf/nan."""
    zs = np.asarray(zs, dtype=np.complex128)
    with np.errstate(all="ignore"):
        return _eval_arr(f, zs)


def _eval_arr(f: ExprNode, zs: np.ndarray) -> np.ndarray:
    if isinstance(f, Constant):
        return np.full(zs.shape, f.value, dtype=np.complex128)
    if isinstance(f, Variable):
        return zs
    if isinstance(f, Sum):
        acc = np.zeros(zs.shape, dtype=np.complex128)
        for t in f.terms:
            acc = acc + _eval_arr(t, zs)
        return acc
    if isinstance(f, Product):
        acc = np.ones(zs.shape, dtype=np.complex128)
        for t in f.factors:
            acc = acc * _eval_arr(t, zs)
        return acc
    if isinstance(f, IntegerPower):
        b = _eval_arr(f.base, zs)
        out = np.ones(zs.shape, dtype=np.complex128)
        for _ in range(f.exponent):
            out = out * b
        return out
    if isinstance(f, Negate):
        return -_eval_arr(f.arg, zs)
    if isinstance(f, Primitive):
        return _PRIM_ARRAY[f.kind](_eval_arr(f.arg, zs))
    raise TypeError(f"unknown node {f!r}")


# ---------------------------------------------------------------- polynomials


@dataclass(frozen=True)
class PolyForm:
    """Expanded polynomial, coefficients indexed by degree."""

    coefficients: tuple
    exact: bool
    exact_coefficients: Optional[tuple] = field(default=None, compare=False)

    @property
    def degree(self) -> int:
        if len(self.coefficients) == 1 and self.coefficients[0] == 0:
            return -1
        return len(self.coefficients) - 1

    def __call__(self, z):
        acc = 0j
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def derivative(self) -> "PolyForm":
        if self.exact:
            from .gaussian import poly_derivative
            return _polyform_exact(poly_derivative(list(self.exact_coefficients)))
        cs = [self.coefficients[k] * k for k in range(1, len(self.coefficients))] or [0j]
        return _polyform_numeric(cs)


def _polyform_exact(cs) -> PolyForm:
    cs = poly_trim(cs)
    return PolyForm(tuple(complex(c) for c in cs), True, tuple(cs))


def _polyform_numeric(cs) -> PolyForm:
    cs = [complex(c) for c in cs]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return PolyForm(tuple(cs or [0j]), False, None)


def _has_primitive(f: ExprNode) -> bool:
    if isinstance(f, Primitive):
        return not is_constant(f)
    return any(_has_primitive(c) for c in _children(f))


def _all_exact(f: ExprNode) -> bool:
    if isinstance(f, Constant):
        return f.exact is not None
    if isinstance(f, Primitive):
        return False
    return all(_all_exact(c) for c in _children(f))


def to_polynomial(f: ExprNode) -> Optional[PolyForm]:
    """Expanded coefficients when f has no (non-constant) primitive; otherwise None."""
    if _has_primitive(f):
        return None
    if _all_exact(f):
        return _polyform_exact(_expand_exact(f))
    return _polyform_numeric(_expand_numeric(f))


def _expand_exact(f: ExprNode) -> list:
    if isinstance(f, Constant):
        return [f.exact]
    if isinstance(f, Variable):
        return [ZERO, ONE]
    if isinstance(f, Sum):
        acc = [ZERO]
        for t in f.terms:
            acc = poly_add(acc, _expand_exact(t))
        return acc
    if isinstance(f, Product):
        acc = [ONE]
        for t in f.factors:
            acc = poly_mul(acc, _expand_exact(t))
        return acc
    if isinstance(f, IntegerPower):
        b = _expand_exact(f.base)
        acc = [ONE]
        for _ in range(f.exponent):
            acc = poly_mul(acc, b)
        return acc
    if isinstance(f, Negate):
        return [-c for c in _expand_exact(f.arg)]
    raise TypeError(f"cannot expand {f!r} exactly")


def _expand_numeric(f: ExprNode) -> np.ndarray:
    if is_constant(f):
        return np.array([fold_constant(f).value], dtype=np.complex128)
    if isinstance(f, Variable):
        return np.array([0, 1], dtype=np.complex128)
    if isinstance(f, Sum):
        parts = [_expand_numeric(t) for t in f.terms]
        out = np.zeros(max(len(p) for p in parts), dtype=np.complex128)
        for p in parts:
            out[: len(p)] += p
        return out
    if isinstance(f, Product):
        acc = np.array([1], dtype=np.complex128)
        for t in f.factors:
            acc = np.convolve(acc, _expand_numeric(t))
        return acc
    if isinstance(f, IntegerPower):
        b = _expand_numeric(f.base)
        acc = np.array([1], dtype=np.complex128)
        for _ in range(f.exponent):
            acc = np.convolve(acc, b)
        return acc
    if isinstance(f, Negate):
        return -_expand_numeric(f.arg)
    raise TypeError(f"cannot expand {f!r}")


Number = Union[int, float, complex, Fraction]

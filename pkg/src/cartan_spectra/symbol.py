"""Radial symbols as symmetric functions of the squared radial coordinates.

A symbol of arity ``r`` is evaluated at ``x = (x_1, ..., x_r)`` in ``[0, 1)^r``
where ``x_j = t_j^2`` and ``t_j`` are the radial coordinates of a point of the
domain. Expressions use the variables ``x1 .. x9`` and the grammar::

    expression := term (('+'|'-') term)*
    term       := factor (('*'|'/') factor)*
    factor     := ('+'|'-') factor | base ('^' integer)?
    base       := number | variable | function '(' expr (',' expr)* ')' | '(' expr ')'

Functions: exp, sqrt, abs, min, max, pow. ``log`` is deliberately absent.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

SYMMETRY_SEED = 20240917


class SymbolError(ValueError):
    pass


class SymbolSyntaxError(SymbolError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# --- expression tree -------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float

    def eval(self, x):
        return np.full(x.shape[1:], self.value)

    def degree(self):
        return 0


@dataclass(frozen=True)
class Var:
    index: int  # zero-based

    def eval(self, x):
        return x[self.index]

    def degree(self):
        return 1


@dataclass(frozen=True)
class Neg:
    operand: object

    def eval(self, x):
        return -self.operand.eval(x)

    def degree(self):
        return self.operand.degree()


_BINARY = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
}


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def eval(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return _BINARY[self.op](self.left.eval(x), self.right.eval(x))

    def degree(self):
        dl, dr = self.left.degree(), self.right.degree()
        if dl is None or dr is None:
            return None
        if self.op in "+-":
            return max(dl, dr)
        if self.op == "*":
            return dl + dr
        # division keeps polynomiality only for constant divisors
        return dl if dr == 0 else None


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int

    def eval(self, x):
        return self.base.eval(x) ** self.exponent

    def degree(self):
        d = self.base.degree()
        return None if d is None else d * self.exponent


def _pow(base, exponent):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.power(base, exponent)


def _sqrt(v):
    with np.errstate(invalid="ignore"):
        return np.sqrt(v)


_FUNCTIONS: dict[str, tuple[Callable, int | None]] = {
    "exp": (np.exp, 1),
    "sqrt": (_sqrt, 1),
    "abs": (np.abs, 1),
    "min": (lambda *args: np.minimum.reduce(np.broadcast_arrays(*args)), None),
    "max": (lambda *args: np.maximum.reduce(np.broadcast_arrays(*args)), None),
    "pow": (_pow, 2),
}


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple

    def eval(self, x):
        fn = _FUNCTIONS[self.name][0]
        with np.errstate(over="ignore"):
            return fn(*(arg.eval(x) for arg in self.args))

    def degree(self):
        degrees = [arg.degree() for arg in self.args]
        if all(d == 0 for d in degrees):
            return 0
        if self.name == "pow":
            base, expo = self.args
            if isinstance(expo, Num) and expo.value >= 0 and float(expo.value).is_integer():
                db = base.degree()
                return None if db is None else db * int(expo.value)
        return None


# --- tokenizer / parser ----------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SymbolSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, arity):
        self.tokens = _tokenize(text)
        self.i = 0
        self.arity = arity

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, value=None):
        kind, text, pos = self.tok
        if value is not None and text != value:
            shown = "end of input" if kind == "end" else repr(text)
            raise SymbolSyntaxError(f"expected {value!r}, found {shown}", pos)
        self.i += 1
        return kind, text, pos

    def parse(self):
        node = self.expression()
        kind, text, pos = self.tok
        if kind != "end":
            raise SymbolSyntaxError(f"unexpected {text!r}", pos)
        return node

    def expression(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.tok[0] == "op" and self.tok[1] in ("+", "-"):
            op = self.take()[1]
            inner = self.factor()
            return Neg(inner) if op == "-" else inner
        node = self.base()
        if self.tok[1] == "^" and self.tok[0] == "op":
            self.take()
            kind, text, pos = self.tok
            if kind != "num" or not float(text).is_integer():
                raise SymbolSyntaxError("'^' needs a nonnegative integer literal exponent", pos)
            self.take()
            node = Pow(node, int(float(text)))
        return node

    def base(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.take()
            return Num(float(text))
        if kind == "name":
            self.take()
            var = re.fullmatch(r"x([1-9])", text)
            if var:
                k = int(var.group(1))
                if k > self.arity:
                    raise SymbolSyntaxError(f"variable {text} exceeds arity r={self.arity}", pos)
                return Var(k - 1)
            if text not in _FUNCTIONS:
                raise SymbolSyntaxError(f"unknown identifier {text!r}", pos)
            self.take("(")
            args = [self.expression()]
            while self.tok[1] == ",":
                self.take()
                args.append(self.expression())
            self.take(")")
            nargs = _FUNCTIONS[text][1]
            if nargs is not None and len(args) != nargs:
                raise SymbolSyntaxError(f"{text}() takes {nargs} argument(s), got {len(args)}", pos)
            return Call(text, tuple(args))
        if text == "(":
            self.take()
            node = self.expression()
            self.take(")")
            return node
        shown = "end of input" if kind == "end" else repr(text)
        raise SymbolSyntaxError(f"unexpected {shown}", pos)


# --- symbols ---------------------------------------------------------------


@dataclass(frozen=True)
class RadialSymbol:
    """A bounded function of ``x in [0,1)^r``.

    ``degree`` is the total polynomial degree, or None when the body is not a
    polynomial. ``support`` is ``c`` when the symbol vanishes as soon as some
    ``x_j > c`` and is smooth on ``[0, c]^r``; quadrature uses it to integrate
    over the smaller cube instead of across the jump.
    """

    arity: int
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    name: str
    degree: int | None = None
    support: float = 1.0
    bounds: tuple[float, float] | None = None

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.arity:
            raise SymbolError(f"symbol {self.name!r} has arity {self.arity}, got {x.shape[0]} coordinates")
        return np.broadcast_to(self.func(x), x.shape[1:]).astype(float)

    @property
    def is_polynomial(self) -> bool:
        return self.degree is not None


def _sample_points(r, samples, rng):
    pts = rng.random((r, samples))
    # exercise the boundary of the closed-open cube as well
    corners = np.array(list(itertools.product((0.0, 1.0 - 1e-12), repeat=min(r, 6))), dtype=float).T
    if r > 6:
        corners = np.vstack([corners, np.zeros((r - 6, corners.shape[1]))])
    return np.concatenate([pts, corners], axis=1)


def parse_symbol(text: str, r: int) -> RadialSymbol:
    if r < 1:
        raise SymbolError(f"arity must be >= 1 (got {r})")
    tree = _Parser(text, r).parse()
    sym = RadialSymbol(r, tree.eval, text.strip(), degree=tree.degree())
    values = sym(_sample_points(r, 512, np.random.default_rng(SYMMETRY_SEED)))
    if not np.all(np.isfinite(values)):
        raise SymbolError(f"symbol {text!r} is not finite on [0,1)^{r}")
    return sym


def builtin_symbol(kind: str, params, r: int) -> RadialSymbol:
    """Built-in symbol families.

    ``const(c)``, ``power_sum(m)`` = sum x_j^m, ``elementary(k)`` = e_k(x),
    ``det_power(s)`` = prod x_j^s, ``ball_indicator(c)`` = [max x_j <= c].
    """
    if r < 1:
        raise SymbolError(f"arity must be >= 1 (got {r})")
    params = tuple(float(v) for v in (params if isinstance(params, (tuple, list)) else (params,)))

    def one(default=None):
        if len(params) == 0 and default is not None:
            return default
        if len(params) != 1:
            raise SymbolError(f"{kind} takes one parameter, got {len(params)}")
        return params[0]

    def int_degree(v, times):
        return int(v) * times if float(v).is_integer() else None

    if kind == "const":
        c = one()
        return RadialSymbol(r, lambda x: np.full(x.shape[1:], c), f"const({c:g})", 0, bounds=(c, c))
    if kind == "power_sum":
        m = one()
        if m < 0:
            raise SymbolError(f"power_sum exponent must be >= 0 (got {m:g})")
        return RadialSymbol(
            r, lambda x: np.sum(x**m, axis=0), f"power_sum({m:g})", int_degree(m, 1), bounds=(0.0, float(r))
        )
    if kind == "elementary":
        k = one()
        if not k.is_integer() or not 0 <= k <= r:
            raise SymbolError(f"elementary(k) requires integer 0 <= k <= r={r} (got {k:g})")
        k = int(k)
        return RadialSymbol(
            r, lambda x: _elementary(x, k), f"elementary({k})", k, bounds=(0.0, float(math.comb(r, k)))
        )
    if kind == "det_power":
        s = one()
        if s < 0:
            raise SymbolError(f"det_power exponent must be >= 0 (got {s:g})")
        return RadialSymbol(
            r, lambda x: np.prod(x**s, axis=0), f"det_power({s:g})", int_degree(s, r), bounds=(0.0, 1.0)
        )
    if kind == "ball_indicator":
        c = one()
        if not 0 <= c <= 1:
            raise SymbolError(f"ball_indicator radius must lie in [0, 1] (got {c:g})")
        return RadialSymbol(
            r,
            lambda x: (np.max(x, axis=0) <= c).astype(float),
            f"ball_indicator({c:g})",
            None if c < 1 else 0,
            support=c,
            bounds=(0.0, 1.0),
        )
    raise SymbolError(f"unknown builtin symbol {kind!r}")


def _elementary(x, k):
    # e_k via the generating polynomial prod (1 + x_j t)
    coeffs = [np.ones(x.shape[1:])] + [np.zeros(x.shape[1:]) for _ in range(k)]
    for row in x:
        for j in range(k, 0, -1):
            coeffs[j] = coeffs[j] + row * coeffs[j - 1]
    return coeffs[k]


def parse_builtin(text: str, r: int) -> RadialSymbol:
    """Parse the CLI form ``name:p1,p2`` (e.g. ``det_power:2``)."""
    kind, _, raw = text.partition(":")
    try:
        params = tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError:
        raise SymbolError(f"malformed builtin parameters in {text!r}") from None
    return builtin_symbol(kind.strip().lower(), params, r)


def check_symmetric(s: RadialSymbol, samples: int = 200, tol: float = 1e-12, seed: int = SYMMETRY_SEED) -> bool:
    """True when ``s`` is invariant under coordinate permutations at sampled points.

    For ``r <= 5`` every permutation is tried; above that, the adjacent
    transpositions (which generate the symmetric group) and a full cycle.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    r = s.arity
    if r == 1:
        return True
    x = np.random.default_rng(seed).random((r, samples))
    if r <= 5:
        perms = list(itertools.permutations(range(r)))[1:]
    else:
        perms = [tuple(range(j)) + (j + 1, j) + tuple(range(j + 2, r)) for j in range(r - 1)]
        perms.append(tuple(range(1, r)) + (0,))
    base = s(x)
    for perm in perms:
        moved = s(x[list(perm)])
        if np.any(np.abs(base - moved) > tol * (1 + np.abs(base))):
            return False
    return True

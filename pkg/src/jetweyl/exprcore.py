"""Exact symbolic kernel.

The whole verification stack works in one term language: rational functions,
with exact rational coefficients, in

* the base variables ``t, x, y`` (``y > 0`` so that the fractional powers
  appearing in the power-law solution family have a single real branch),
* jet coordinates ``u, v, u_t, u_tx, v_xxy, ...`` of the two dependent
  variables, and
* opaque formal functions of ``t`` alone (``a``, ``a'``, ``a''``, ...),
  closed under d/dt but otherwise uninterpreted.

Two measured extensions of the rational language are admitted:

* rational exponents on base variables only (``y^(2/3)`` and friends), and
* exponential atoms ``exp(q*t + r*y + s*x)`` with rational coefficients,
  which enter solely through the explicit-solution catalog and are disabled
  by default.

Everything else (arbitrary radicals, algebraic extensions, transcendental
simplification) is deliberately out of scope.

Canonical forms are produced by :func:`normalize`: fractional powers and
exponential atoms are rescaled to integer powers of auxiliary generators,
the result is put over a common denominator and gcd-reduced, and the
auxiliary generators are substituted back.  Equality of canonical forms is
exact equality of rational functions, which makes the zero test decidable
for the whole term language.

The module is backed by sympy for polynomial arithmetic; the classes here
pin down the term language, the canonical form, and the formal chain rule
``d/dt a^(k) = a^(k+1)`` that sympy's plain ``diff`` knows nothing about.
"""

from __future__ import annotations

import functools
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import sympy as sp

from .errors import (
    DivisionByZeroExpression,
    ExpAtomError,
    ExponentPolicyError,
    ExprError,
    JetOrderError,
    NegativeBaseFractionalPowerError,
    PoleAtPointError,
    SubstitutionDomainError,
    UnboundSymbolError,
    UnknownSymbolError,
)

__all__ = [
    "T",
    "X",
    "Y",
    "BASE_SYMBOLS",
    "MAX_JET_ORDER",
    "MultiIndex",
    "jet",
    "jet_info",
    "is_jet_symbol",
    "formal",
    "formal_info",
    "is_formal_symbol",
    "formal_shift",
    "resolve_symbol",
    "validate_kernel",
    "normalize",
    "is_zero",
    "equal",
    "partial",
    "substitute",
    "eval_numeric",
    "to_text",
    "Expr",
]

# Base variables.  y carries the positivity assumption so that sympy merges
# rational powers of y automatically; t and x stay merely real.
T = sp.Symbol("t", real=True)
X = sp.Symbol("x", real=True)
Y = sp.Symbol("y", positive=True)
BASE_SYMBOLS = (T, X, Y)

#: hard sanity cap on jet order; the working cap of the equation modules is
#: lower and configurable, this one only guards against runaway recursion.
MAX_JET_ORDER = 8

DEPENDENTS = ("u", "v")

_registry_lock = threading.Lock()
#: sympy Symbol -> ("u"|"v", MultiIndex)
_JET_REGISTRY: dict[sp.Symbol, tuple[str, "MultiIndex"]] = {}
#: sympy Symbol -> (name, derivative order)
_FORMAL_REGISTRY: dict[sp.Symbol, tuple[str, int]] = {}

_FORMAL_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")
_JET_WORD_RE = re.compile(r"^(?:[txy]\d*)+$")


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Symmetric derivative multi-index: counts of t-, x-, y-derivatives."""

    nt: int = 0
    nx: int = 0
    ny: int = 0

    def __post_init__(self):
        for n in (self.nt, self.nx, self.ny):
            if not isinstance(n, int) or n < 0:
                raise ValueError(f"multi-index entries must be non-negative ints, got {self!r}")

    @property
    def order(self) -> int:
        return self.nt + self.nx + self.ny

    @property
    def is_principal(self) -> bool:
        """Principal = at least one t- and one x-derivative; the equation
        expresses these coordinates through the remaining (internal) ones."""
        return self.nt >= 1 and self.nx >= 1

    @property
    def is_internal(self) -> bool:
        return not self.is_principal

    def bump(self, direction: sp.Symbol | str) -> "MultiIndex":
        d = _direction_name(direction)
        return MultiIndex(
            self.nt + (d == "t"), self.nx + (d == "x"), self.ny + (d == "y")
        )

    def drop(self, direction: sp.Symbol | str) -> "MultiIndex":
        d = _direction_name(direction)
        out = MultiIndex(
            self.nt - (d == "t"), self.nx - (d == "x"), self.ny - (d == "y")
        )
        return out

    def word(self) -> str:
        """Compact letter form: MultiIndex(1,2,0) -> 'txx'; empty for order 0."""
        return "t" * self.nt + "x" * self.nx + "y" * self.ny

    @staticmethod
    def from_word(word: str) -> "MultiIndex":
        """Parse 'txx', 't2x', 'x3y' style words (letters with optional counts)."""
        if word == "":
            return MultiIndex()
        if not _JET_WORD_RE.match(word):
            raise ValueError(f"bad jet index word {word!r}")
        counts = {"t": 0, "x": 0, "y": 0}
        for letter, num in re.findall(r"([txy])(\d*)", word):
            counts[letter] += int(num) if num else 1
        return MultiIndex(counts["t"], counts["x"], counts["y"])

    def __str__(self) -> str:
        return self.word() or "0"


def _direction_name(direction: sp.Symbol | str) -> str:
    if isinstance(direction, sp.Symbol):
        direction = direction.name
    if direction not in ("t", "x", "y"):
        raise ValueError(f"direction must be one of t,x,y, got {direction!r}")
    return direction


IndexLike = Union[MultiIndex, str, tuple]


def _as_index(index: IndexLike) -> MultiIndex:
    if isinstance(index, MultiIndex):
        return index
    if isinstance(index, str):
        return MultiIndex.from_word(index)
    return MultiIndex(*index)


def jet(dependent: str, index: IndexLike = MultiIndex()) -> sp.Symbol:
    """The jet coordinate symbol u_sigma / v_sigma.

    ``jet('u')`` is the dependent variable itself; ``jet('u', 'tx')`` and
    ``jet('u', (1, 1, 0))`` name the same symbol ``u_tx``.
    """
    if dependent not in DEPENDENTS:
        raise ValueError(f"dependent must be one of {DEPENDENTS}, got {dependent!r}")
    idx = _as_index(index)
    if idx.order > MAX_JET_ORDER:
        raise JetOrderError(
            f"jet order {idx.order} exceeds the hard cap {MAX_JET_ORDER}"
        )
    name = dependent if idx.order == 0 else f"{dependent}_{idx.word()}"
    sym = sp.Symbol(name, real=True)
    with _registry_lock:
        _JET_REGISTRY.setdefault(sym, (dependent, idx))
    return sym


def jet_info(symbol: sp.Symbol) -> tuple[str, MultiIndex]:
    """(dependent, MultiIndex) of a jet symbol; KeyError if not a jet symbol."""
    return _JET_REGISTRY[symbol]


def is_jet_symbol(symbol) -> bool:
    return symbol in _JET_REGISTRY


def jet_order(e) -> int:
    """Highest jet order among the jet symbols of e (0 if none)."""
    e = sp.sympify(e)
    orders = [0]
    for s in e.free_symbols:
        info = _JET_REGISTRY.get(s)
        if info is not None:
            orders.append(info[1].order)
    return max(orders)


_RESERVED_FORMAL = {"t", "x", "y", "u", "v", "exp"}


def formal(name: str, order: int = 0) -> sp.Symbol:
    """Opaque formal function of t: ``formal('a', 2)`` is a''(t).

    The symbol depends on t only through the chain rule implemented by
    :func:`partial`; sympy itself sees an independent real symbol.
    """
    if not _FORMAL_NAME_RE.match(name) or name in _RESERVED_FORMAL:
        raise ValueError(f"bad formal function name {name!r}")
    if name[0] in "uv" and (len(name) == 1 or name[1] == "_"):
        raise ValueError(f"formal name {name!r} collides with jet coordinates")
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    sym = sp.Symbol(name + "'" * order, real=True)
    with _registry_lock:
        _FORMAL_REGISTRY.setdefault(sym, (name, order))
    return sym


def formal_info(symbol: sp.Symbol) -> tuple[str, int]:
    return _FORMAL_REGISTRY[symbol]


def is_formal_symbol(symbol) -> bool:
    return symbol in _FORMAL_REGISTRY


def formal_shift(symbol: sp.Symbol, by: int = 1) -> sp.Symbol:
    """The formal symbol with derivative order raised by ``by``."""
    name, order = formal_info(symbol)
    return formal(name, order + by)


def resolve_symbol(name) -> sp.Symbol:
    """Map a name to a registered symbol, creating jet/formal symbols on
    demand.  Accepts 't', 'u_tx', 'u_t2x', \"f''\" and existing symbols."""
    if isinstance(name, sp.Symbol):
        if (
            name in BASE_SYMBOLS
            or name in _JET_REGISTRY
            or name in _FORMAL_REGISTRY
        ):
            return name
        name = name.name
    if not isinstance(name, str):
        raise UnknownSymbolError(f"cannot resolve {name!r} as a symbol")
    if name == "t":
        return T
    if name == "x":
        return X
    if name == "y":
        return Y
    if name in DEPENDENTS:
        return jet(name)
    m = re.match(r"^([uv])_((?:[txy]\d*)+)$", name)
    if m:
        return jet(m.group(1), MultiIndex.from_word(m.group(2)))
    m = re.match(r"^([A-Za-z][A-Za-z0-9]*)('*)$", name)
    if m and m.group(1) not in _RESERVED_FORMAL:
        return formal(m.group(1), len(m.group(2)))
    raise UnknownSymbolError(f"unknown symbol {name!r}")


# ---------------------------------------------------------------------------
# term-language validation


def _check_exp_argument(arg: sp.Expr) -> None:
    """exp arguments must be rational-linear forms in base variables."""
    poly = sp.Poly(arg, *BASE_SYMBOLS) if arg.free_symbols <= set(BASE_SYMBOLS) else None
    if poly is None or poly.total_degree() > 1:
        raise ExpAtomError(f"exp argument {arg} is not linear in t,x,y")
    for coeff in poly.coeffs():
        if not coeff.is_Rational:
            raise ExpAtomError(f"exp argument {arg} has a non-rational coefficient")


def validate_kernel(e, allow_exp: bool = False) -> sp.Expr:
    """Check that a sympy expression stays inside the term language.

    Returns the expression unchanged; raises an :class:`ExprError` subclass
    otherwise.  ``allow_exp=True`` admits exponential atoms (the explicit
    solution catalog needs them); the kernel default rejects them.
    """
    e = sp.sympify(e)
    if e.has(sp.zoo, sp.nan) or e.has(sp.oo, -sp.oo):
        raise DivisionByZeroExpression(f"expression contains an undefined value: {e}")
    for node in sp.preorder_traversal(e):
        if isinstance(node, sp.Symbol):
            if (
                node not in BASE_SYMBOLS
                and node not in _JET_REGISTRY
                and node not in _FORMAL_REGISTRY
                and not isinstance(node, sp.Dummy)
            ):
                raise UnknownSymbolError(f"unregistered symbol {node}")
        elif isinstance(node, sp.exp):
            if not allow_exp:
                raise ExpAtomError(
                    "exponential atoms are only admitted on the solution-catalog path"
                )
            _check_exp_argument(node.args[0])
        elif isinstance(node, sp.Pow):
            base, expo = node.args
            if isinstance(base, sp.exp):
                continue  # handled when the exp node itself is visited
            if not expo.is_Rational:
                raise ExponentPolicyError(f"non-rational exponent in {node}")
            if not expo.is_Integer:
                ok_base = base in BASE_SYMBOLS or (
                    base.is_Rational and base.is_positive
                )
                if not ok_base:
                    raise ExponentPolicyError(
                        f"fractional exponent on non-base expression in {node}"
                    )
        elif node.is_Atom:
            if node.is_Number and not node.is_Rational:
                raise ExprError(f"non-rational number {node}")
        elif not isinstance(node, (sp.Add, sp.Mul)):
            raise ExprError(f"disallowed operation {type(node).__name__} in {node}")
    return e


# ---------------------------------------------------------------------------
# canonicalization


def _rescaled(e: sp.Expr) -> tuple[sp.Expr, dict]:
    """Replace fractional powers of base variables and exponential atoms by
    integer powers of auxiliary positive generators, so that sympy's
    polynomial gcd machinery sees an honest rational function."""
    back: dict[sp.Symbol, sp.Expr] = {}
    if e.has(sp.exp):
        # split exp(a+b) into exp(a)*exp(b) so each atom has a single base var
        e = sp.powsimp(e, deep=True)
        e = sp.expand_power_exp(e)
        for base in BASE_SYMBOLS:
            coeffs = []
            for atom in e.atoms(sp.exp):
                c = atom.args[0].as_coefficient(base)
                if c is not None and c.is_Rational and c != 0:
                    coeffs.append(c)
            if not coeffs:
                continue
            scale = sp.Rational(1, functools.reduce(sp.ilcm, [c.q for c in coeffs], 1))
            gen = sp.Dummy(f"E{base.name}", positive=True)
            rep = {
                atom: gen ** int(atom.args[0].as_coefficient(base) / scale)
                for atom in e.atoms(sp.exp)
                if atom.args[0].as_coefficient(base) is not None
                and atom.args[0].as_coefficient(base).is_Rational
                and atom.args[0].as_coefficient(base) != 0
            }
            e = e.xreplace(rep)
            back[gen] = sp.exp(scale * base)
    for base in BASE_SYMBOLS:
        dens = [
            p.exp.q
            for p in e.atoms(sp.Pow)
            if p.base == base and p.exp.is_Rational and not p.exp.is_Integer
        ]
        if not dens:
            continue
        m = functools.reduce(sp.ilcm, dens, 1)
        gen = sp.Dummy(base.name.upper(), positive=True)
        e = e.xreplace({base: gen**m})
        back[gen] = base ** sp.Rational(1, m)
    return e, back


def normalize(e) -> sp.Expr:
    """Canonical form: expanded, gcd-reduced numerator/denominator over the
    discovered generators, with fractional powers and exponentials restored.

    Idempotent, and the zero test on canonical forms is exact for the
    term language.
    """
    e = sp.sympify(e)
    if e.is_Rational:
        return e
    scaled, back = _rescaled(sp.together(e))
    canon = sp.cancel(scaled)
    if canon.has(sp.zoo, sp.nan):
        raise DivisionByZeroExpression(f"canonicalization produced an undefined value from {e}")
    if back:
        canon = canon.xreplace(back)
    return canon


def is_zero(e) -> bool:
    """Exact zero test."""
    return normalize(e) == 0


def equal(a, b) -> bool:
    """Exact equality of rational functions."""
    return is_zero(sp.sympify(a) - sp.sympify(b))


# ---------------------------------------------------------------------------
# differentiation / substitution / evaluation


def partial(e, s) -> sp.Expr:
    """Partial derivative in the term language.

    For s = t the formal chain rule applies: each formal symbol a^(k) in e
    contributes a^(k+1) * d e/d a^(k).  Jet symbols are independent
    coordinates here; total derivatives live in the jet-calculus module.
    """
    e = sp.sympify(e)
    s = resolve_symbol(s)
    out = sp.diff(e, s)
    if s == T:
        for sym in e.free_symbols:
            if sym in _FORMAL_REGISTRY:
                out += formal_shift(sym) * sp.diff(e, sym)
    return out


def substitute(e, bindings: Mapping) -> sp.Expr:
    """Simultaneous substitution followed by canonicalization.

    Keys may be symbols or their names.  Raises SubstitutionDomainError if
    the result leaves the term language or hits a zero denominator.
    """
    e = sp.sympify(e)
    rep = {}
    for k, v in bindings.items():
        rep[resolve_symbol(k)] = sp.sympify(v)
    try:
        out = normalize(e.xreplace(rep))
    except DivisionByZeroExpression as exc:
        raise SubstitutionDomainError(str(exc)) from None
    if out.has(sp.zoo, sp.nan):
        raise SubstitutionDomainError(
            f"substitution produced an undefined value in {e}"
        )
    return out


def _coerce_rational(v) -> sp.Rational:
    if isinstance(v, Fraction):
        return sp.Rational(v.numerator, v.denominator)
    r = sp.sympify(v)
    if isinstance(v, str):
        r = sp.Rational(v)
    if not r.is_Rational:
        raise ExprError(f"expected a rational value, got {v!r}")
    return r


def eval_numeric(
    e,
    point: Mapping | None = None,
    formal_data: Mapping | None = None,
    dps: int = 50,
):
    """Evaluate at a rational point.

    ``point`` binds symbols (by symbol or name) to rationals; ``formal_data``
    binds pairs (name, derivative-order) to rationals.  The result is a
    ``Fraction`` whenever the value is exactly rational; otherwise a sympy
    Float carrying ``dps`` significant digits.
    """
    e = normalize(e)
    rep: dict[sp.Symbol, sp.Rational] = {}
    for k, v in (point or {}).items():
        rep[resolve_symbol(k)] = _coerce_rational(v)
    for (name, order), v in (formal_data or {}).items():
        rep[formal(name, order)] = _coerce_rational(v)
    missing = [s for s in e.free_symbols if s not in rep]
    if missing:
        raise UnboundSymbolError(
            "unbound symbols: " + ", ".join(sorted(map(str, missing)))
        )
    # fractional powers need positive bases at the point
    for p in e.atoms(sp.Pow):
        if p.exp.is_Rational and not p.exp.is_Integer and p.base in rep:
            if rep[p.base] <= 0:
                raise NegativeBaseFractionalPowerError(
                    f"{p.base} = {rep[p.base]} under fractional exponent {p.exp}"
                )
    num, den = sp.fraction(e)
    den_val = den.xreplace(rep)
    if den_val.is_zero or den_val.has(sp.zoo, sp.nan):
        raise PoleAtPointError(f"denominator {den} vanishes at the point")
    val = num.xreplace(rep) / den_val
    if val.has(sp.zoo, sp.nan):
        raise PoleAtPointError("evaluation produced an undefined value")
    val = sp.nsimplify(val, rational=False) if val.is_Rational is None else val
    if val.is_Rational:
        return Fraction(int(val.p), int(val.q))
    approx = val.evalf(dps)
    if approx.has(sp.zoo, sp.nan) or not approx.is_real:
        raise PoleAtPointError("evaluation produced an undefined value")
    return approx


# ---------------------------------------------------------------------------
# canonical text form


def _print_rational(q: sp.Rational) -> str:
    return str(q) if q >= 0 else f"({q})"


def _print_pow(base: sp.Expr, expo: sp.Rational) -> str:
    b = _print_term(base, wrap_mul=True)
    if expo.is_Integer and expo > 0:
        return f"{b}^{expo}"
    return f"{b}^({expo})"


def _print_term(e: sp.Expr, wrap_mul: bool = False) -> str:
    """Print one multiplicative factor or atom."""
    if e.is_Rational:
        return _print_rational(e)
    if isinstance(e, sp.Symbol):
        if e in _FORMAL_REGISTRY:
            return f"{e.name}(t)"
        return e.name
    if isinstance(e, sp.exp):
        return f"exp({_print_expr(e.args[0])})"
    if isinstance(e, sp.Pow):
        base, expo = e.args
        if isinstance(base, sp.exp) and expo.is_Rational:
            return f"exp({_print_expr(sp.expand(base.args[0] * expo))})"
        return _print_pow(base, expo)
    if isinstance(e, (sp.Add, sp.Mul)):
        inner = _print_expr(e)
        return f"({inner})" if (wrap_mul or isinstance(e, sp.Add)) else inner
    raise ExprError(f"cannot serialize node {e!r}")


def _print_product(e: sp.Expr) -> str:
    """Print a Mul with the sign pulled out; callers handle the sign."""
    coeff, rest = e.as_coeff_Mul()
    factors = [f for f in sp.Mul.make_args(rest) if f != 1]
    parts = []
    if coeff != 1 or not factors:
        parts.append(_print_rational(coeff))
    for f in sorted(factors, key=sp.default_sort_key):
        if isinstance(f, sp.Add):
            parts.append(f"({_print_expr(f)})")
        else:
            parts.append(_print_term(f, wrap_mul=True))
    return "*".join(parts)


def _print_sum(e: sp.Expr) -> str:
    terms = sorted(sp.Add.make_args(e), key=sp.default_sort_key)
    chunks = []
    for term in terms:
        coeff, _ = term.as_coeff_Mul()
        sign = "-" if coeff < 0 else "+"
        body = _print_product(-term if coeff < 0 else term)
        chunks.append((sign, body))
    first_sign, first_body = chunks[0]
    out = (first_sign if first_sign == "-" else "") + first_body
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def _print_expr(e: sp.Expr) -> str:
    if isinstance(e, sp.Add):
        return _print_sum(e)
    coeff, rest = e.as_coeff_Mul()
    if coeff < 0:
        return "-" + _print_product(-e)
    return _print_product(e)


def to_text(e) -> str:
    """Deterministic canonical text form, parsable by the DSL."""
    canon = normalize(e)
    if canon.is_Rational:
        return str(canon)
    num, den = sp.fraction(canon)
    if den == 1:
        return _print_expr(num)
    num_s = _print_expr(num)
    if isinstance(num, sp.Add) or num.as_coeff_Mul()[0] < 0:
        num_s = f"({num_s})"
    den_s = _print_term(den, wrap_mul=True)
    return f"{num_s}/{den_s}"


# ---------------------------------------------------------------------------
# the public wrapper


class Expr:
    """Immutable exact expression in the kernel's term language.

    Thin wrapper over a validated sympy expression.  Arithmetic produces
    canonical forms; equality and the zero test are exact.  The heavy
    modules work on raw sympy internally and wrap results at their API
    boundary.
    """

    __slots__ = ("_sym", "_canonical")

    def __init__(self, value, allow_exp: bool = False):
        if isinstance(value, Expr):
            self._sym = value._sym
            self._canonical = value._canonical
            return
        sym = sp.sympify(value, rational=True)
        validate_kernel(sym, allow_exp=allow_exp)
        self._sym = sym
        self._canonical = None

    @property
    def sym(self) -> sp.Expr:
        """The underlying sympy expression (not necessarily canonical)."""
        return self._sym

    @property
    def canonical(self) -> sp.Expr:
        if self._canonical is None:
            self._canonical = normalize(self._sym)
        return self._canonical

    # -- arithmetic ---------------------------------------------------------

    def _binop(self, other, op) -> "Expr":
        o = other._sym if isinstance(other, Expr) else sp.sympify(other, rational=True)
        out = Expr.__new__(Expr)
        out._sym = normalize(op(self._sym, o))
        out._canonical = out._sym
        return out

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other._sym if isinstance(other, Expr) else sp.sympify(other, rational=True)
        if is_zero(o):
            raise DivisionByZeroExpression("division by an expression equal to zero")
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        if self.is_zero():
            raise DivisionByZeroExpression("division by an expression equal to zero")
        return self._binop(other, lambda a, b: b / a)

    def __pow__(self, exponent):
        expo = sp.Rational(exponent)
        if expo.is_Integer and expo < 0 and self.is_zero():
            raise DivisionByZeroExpression("negative power of the zero expression")
        out = Expr.__new__(Expr)
        out._sym = normalize(self._sym**expo)
        validate_kernel(out._sym, allow_exp=True)
        out._canonical = out._sym
        return out

    def __neg__(self):
        return self._binop(sp.Integer(-1), lambda a, b: a * b)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.canonical == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Expr):
            other = other._sym
        else:
            try:
                other = sp.sympify(other, rational=True)
            except (sp.SympifyError, TypeError):
                return NotImplemented
        return is_zero(self._sym - other)

    def __hash__(self):
        return hash(sp.srepr(self.canonical))

    # -- calculus / evaluation ---------------------------------------------

    def partial(self, s) -> "Expr":
        out = Expr.__new__(Expr)
        out._sym = partial(self._sym, s)
        out._canonical = None
        return out

    def substitute(self, bindings: Mapping) -> "Expr":
        out = Expr.__new__(Expr)
        out._sym = substitute(self._sym, bindings)
        out._canonical = out._sym
        return out

    def eval(self, point=None, formal_data=None, dps: int = 50):
        return eval_numeric(self._sym, point, formal_data, dps)

    def free_symbols(self):
        return self.canonical.free_symbols

    # -- misc ---------------------------------------------------------------

    def to_text(self) -> str:
        return to_text(self.canonical)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Expr({self.to_text()!r})"

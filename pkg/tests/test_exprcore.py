"""Exact expression kernel: canonical forms, derivatives, evaluation."""

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from jetweyl.errors import (
    ExpAtomError,
    ExponentPolicyError,
    NegativeBaseFractionalPowerError,
    PoleAtPointError,
    SubstitutionDomainError,
    UnboundSymbolError,
    UnknownSymbolError,
)
from jetweyl.exprcore import (
    MAX_JET_ORDER,
    MultiIndex,
    T,
    X,
    Y,
    equal,
    eval_numeric,
    formal,
    formal_shift,
    is_zero,
    jet,
    jet_info,
    normalize,
    partial,
    substitute,
    to_text,
    validate_kernel,
)

u = jet("u")
v = jet("v")
u_x = jet("u", (0, 1, 0))
u_xx = jet("u", (0, 2, 0))
u_xy = jet("u", (0, 1, 1))
v_x = jet("v", (0, 1, 0))


def test_cancellation():
    assert equal((u_x + v_x) - v_x, u_x)


def test_factor_cancellation():
    assert equal((u_x**2 - u_xy**2) / (u_x - u_xy), u_x + u_xy)


def test_rational_exponent_product():
    assert equal(Y ** sp.Rational(2, 3) * Y ** sp.Rational(1, 3), Y)


def test_zero_test_sees_through_radicals():
    assert is_zero((Y ** sp.Rational(2, 3)) ** 3 - Y**2)


def test_partial_basic():
    assert equal(partial(u_x * v, v), u_x)
    assert equal(partial(Y ** sp.Rational(2, 3), Y), sp.Rational(2, 3) * Y ** sp.Rational(-1, 3))


def test_partial_formal_chain():
    # d/dt of a(t)*x introduces the next derivative symbol a'(t)
    a = formal("a")
    assert equal(partial(a * X, T), formal("a", 1) * X)
    assert formal_shift(a) == formal("a", 1)
    assert to_text(formal("a", 1)) == "a'(t)"


def test_substitute_expands():
    assert equal(substitute(u_x**2, {u_x: 1 + Y}), 1 + 2 * Y + Y**2)


def test_substitute_is_simultaneous():
    # swap must not chain: u_x -> v_x -> u_x would collapse to the identity
    swapped = substitute(u_x - v_x, {u_x: v_x, v_x: u_x})
    assert equal(swapped, v_x - u_x)


def test_substitute_zero_denominator_rejected():
    with pytest.raises(SubstitutionDomainError):
        substitute(1 / u_x, {u_x: 0})


def test_eval_exact_rational():
    assert eval_numeric(u_x / u_xx, {u_x: 2, u_xx: 4}) == Fraction(1, 2)


def test_eval_fractional_power_exact_when_rational():
    val = eval_numeric(Y ** sp.Rational(2, 3), {Y: 8})
    assert isinstance(val, Fraction) and val == 4


def test_eval_fractional_power_high_precision():
    val = eval_numeric(Y ** sp.Rational(1, 2), {Y: 2})
    assert not isinstance(val, Fraction)
    assert abs(float(val) - 2**0.5) < 1e-15


def test_eval_formal_data():
    val = eval_numeric(formal("a", 1) * X, {X: 3}, {("a", 1): Fraction(2)})
    assert val == 6


def test_eval_errors():
    with pytest.raises(UnboundSymbolError):
        eval_numeric(u_x, {})
    with pytest.raises(PoleAtPointError):
        eval_numeric(1 / X, {X: 0})
    with pytest.raises(NegativeBaseFractionalPowerError):
        eval_numeric(X ** sp.Rational(1, 2), {X: -1})


def test_kernel_policy():
    with pytest.raises(ExpAtomError):
        validate_kernel(sp.exp(Y))
    validate_kernel(sp.exp(Y), allow_exp=True)
    with pytest.raises(UnknownSymbolError):
        validate_kernel(sp.Symbol("zz"))
    with pytest.raises(ExponentPolicyError):
        # fractional powers are a base-variable privilege
        validate_kernel(u_x ** sp.Rational(1, 2))


def test_jet_symbols():
    assert jet_info(u_xy) == ("u", MultiIndex(0, 1, 1))
    assert jet("u", MultiIndex(0, 1, 1)) is jet("u", (0, 1, 1))
    assert MultiIndex(1, 2, 0).order == 3
    assert to_text(jet("u", (1, 2, 0))) == "u_txx"
    with pytest.raises(Exception):
        jet("u", (MAX_JET_ORDER + 1, 0, 0))


# -- randomized laws -------------------------------------------------------

_POOL = [T, X, Y, u, v, u_x, u_xy, v_x, formal("a"), formal("b", 1)]


def _random_expr(rng, depth=2):
    if depth == 0 or rng.random() < 0.35:
        if rng.random() < 0.3:
            return sp.Integer(rng.randint(-3, 3))
        return rng.choice(_POOL)
    op = rng.choice(("add", "mul", "pow"))
    lhs = _random_expr(rng, depth - 1)
    if op == "pow":
        return lhs ** rng.randint(1, 2)
    rhs = _random_expr(rng, depth - 1)
    return lhs + rhs if op == "add" else lhs * rhs


def test_ring_axioms_thousand_triples():
    """Associativity, commutativity, distributivity under canonical equality."""
    rng = random.Random(20240817)
    for _ in range(1000):
        a, b, c = (_random_expr(rng) for _ in range(3))
        assert equal((a + b) + c, a + (b + c))
        assert equal(a * b, b * a)
        assert equal(a * (b + c), a * b + a * c)


@given(st.integers(0, len(_POOL) - 1), st.integers(0, len(_POOL) - 1), st.integers(-4, 4))
def test_normalize_idempotent(i, j, k):
    e = normalize((_POOL[i] + k) * _POOL[j] - _POOL[i] ** 2)
    assert normalize(e) == e


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_partial_commutes(seed):
    rng = random.Random(seed)
    e = _random_expr(rng, depth=3)
    s1, s2 = rng.choice(_POOL[:8]), rng.choice(_POOL[:8])
    assert equal(partial(partial(e, s1), s2), partial(partial(e, s2), s1))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_eval_is_ring_homomorphism(seed):
    rng = random.Random(seed)
    a, b = _random_expr(rng), _random_expr(rng)
    point = {s: Fraction(rng.randint(1, 7), rng.randint(1, 5)) for s in _POOL[:8]}
    data = {("a", 0): Fraction(2, 3), ("b", 1): Fraction(-1, 2)}
    ea = eval_numeric(a, point, data)
    eb = eval_numeric(b, point, data)
    assert eval_numeric(a + b, point, data) == ea + eb
    assert eval_numeric(a * b, point, data) == ea * eb

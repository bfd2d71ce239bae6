"""Differential invariants, invariant derivations, and the counting series."""

from fractions import Fraction

import pytest
import sympy as sp

from jetweyl.exprcore import equal, is_zero, jet, substitute
from jetweyl.invariants import (
    apply_derivation,
    coframe_rewrite,
    counting,
    derivation_matrix,
    independence_rank,
    invariant,
    invariant_value,
    poincare_coefficients,
    poincare_function,
    structure_K,
    twelve_invariants,
    verify_derivation_commutators,
    verify_identities,
    verify_invariance,
)
from jetweyl.jets import ms_system

u_x = jet("u", (0, 1, 0))
u_xx = jet("u", (0, 2, 0))
u_xy = jet("u", (0, 1, 1))
u_yy = jet("u", (0, 0, 2))
v_x = jet("v", (0, 1, 0))
v_xx = jet("v", (0, 2, 0))
v_xy = jet("v", (1, 1, 0))  # placeholder, fixed below


def test_printed_forms():
    assert equal(invariant(1), (u_xy + v_xx) / u_x**2)
    assert equal(
        invariant(2),
        (u_x**2 * u_xy + u_x * u_xx * v_x + u_xx * u_yy - u_xy**2) / u_x**4,
    )
    vxy = jet("v", (0, 1, 1))
    assert equal(
        invariant(3),
        (u_x**2 * v_xx - u_x * u_xx * v_x + u_xx * vxy - u_xy * v_xx) / u_x**4,
    )
    with pytest.raises(ValueError):
        invariant(4)


def test_direct_substitution_value():
    assert substitute(invariant(1), {u_xy: 1, v_xx: 1, u_x: 1}) == 2


def test_invariant_value_at_a_jet_point():
    theta = ms_system().point(2, internal={"u_x": 1, "u_xx": 1, "u_xy": 1, "v_xx": 1})
    assert invariant_value(theta, invariant(1)) == Fraction(2)


def test_twelve_invariants_order():
    twelve = twelve_invariants()
    assert len(twelve) == 12
    assert equal(twelve[0], invariant(1))
    assert equal(twelve[3], apply_derivation(1, invariant(1)))
    assert equal(twelve[11], apply_derivation(3, invariant(3)))


def test_all_sixteen_quantities_are_invariant():
    system = ms_system()
    quantities = [invariant(i) for i in (1, 2, 3)]
    quantities += [structure_K(i) for i in (1, 2, 3, 4)]
    quantities += [
        apply_derivation(j, invariant(i), system) for i in (1, 2, 3) for j in (1, 2, 3)
    ]
    for q in quantities:
        assert verify_invariance(q, system=system) is True


def test_relative_invariant_has_a_witness():
    fam, witness = verify_invariance(u_x)
    assert fam == 4
    # residual stays proportional to u_x itself
    assert equal(witness / u_x, -sp.Symbol("d'") / 2) or not is_zero(witness)


def test_derivation_commutators_close():
    for rep in verify_derivation_commutators():
        assert rep.ok, rep


def test_structure_identities_hold():
    reports = verify_identities()
    assert len(reports) == 2
    assert all(rep.ok for rep in reports)


def test_derivation_matrix_first_row():
    # nabla_1 = (u_x/u_xx) D_x and nothing else
    m = derivation_matrix()
    assert equal(m[0, 1], u_x / u_xx)
    assert m[0, 0] == 0 and m[0, 2] == 0


def test_coframe_normal_form():
    rep = coframe_rewrite()
    assert rep.matches and rep.adjusted
    expected = sp.Matrix([[0, 0, 2], [0, -1, 1], [2, 1, 4 * invariant(2) - 1]])
    diff = rep.gprime - expected
    assert all(is_zero(diff[i, j]) for i in range(3) for j in range(3))


def test_coframe_determinant():
    m = derivation_matrix()
    assert equal(sp.det(m.inv()), -(u_x**3))


def test_independence_rank_is_twelve():
    theta = ms_system().point(
        3,
        internal={
            "u_x": Fraction(3, 2),
            "u_xx": Fraction(-2, 3),
            "u_y": Fraction(1, 5),
            "u_xy": Fraction(2, 7),
            "u_yy": Fraction(-1, 2),
            "v_x": Fraction(1, 3),
            "u_xxx": Fraction(5, 4),
            "v_xx": Fraction(-3, 5),
            "u_xxy": Fraction(1, 6),
            "v_xy": Fraction(2, 9),
        },
    )
    assert independence_rank(theta) == 12


# -- counting --------------------------------------------------------------


def test_counting_on_the_equation():
    for k in range(2, 7):
        rec = counting("ms", k)
        assert rec.s == 2 * k**2 - k - 3
        assert rec.h == (3 if k == 2 else 4 * k - 3)


def test_counting_off_equation_series():
    assert counting("weyl", 2).h == 13
    assert counting("ew-general", 2).h == 8
    for k in range(3, 7):
        assert counting("weyl", k).h == (5 * k**2 + 7 * k - 6) // 2
        assert counting("ew-general", k).h == 3 * (2 * k - 1)


def test_poincare_series_match_counting():
    for series in ("ms", "weyl", "ew-general"):
        coeffs = poincare_coefficients(series, 8)
        for k in range(2, 9):
            assert coeffs[k] == counting(series, k).h, (series, k)


def test_poincare_closed_form_ms():
    z = sp.Symbol("z")
    p = poincare_function("ms")
    expected = z**2 * (3 + 3 * z - 2 * z**2) / (1 - z) ** 2
    assert sp.simplify(p.subs(sp.Symbol("z"), z) - expected) == 0

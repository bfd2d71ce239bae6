"""End-to-end acceptance battery.

Each test covers one numbered requirement and prints a single
``criterion NN <label>: PASS|FAIL`` line (visible under ``pytest -s``)
before asserting, so a scan of the output gives the full scorecard.
"""

import random
import time
from fractions import Fraction

import pytest
import sympy as sp

from jetweyl.equivalence import compare, signature
from jetweyl.errors import SingularLocusError
from jetweyl.exprcore import T, X, Y, equal, formal, is_zero, jet, partial
from jetweyl.fields import PointField
from jetweyl.geometry import (
    CATALOG_IDS,
    apply_pseudogroup,
    build_pair,
    catalog,
    check_EW,
    invariants_on_solution,
    skew_anchor_residual,
    sl2_structure_report,
    weyl_connection,
)
from jetweyl.invariants import (
    apply_derivation,
    coframe_rewrite,
    counting,
    derivation_matrix,
    independence_rank,
    invariant,
    poincare_coefficients,
    structure_K,
    verify_derivation_commutators,
    verify_identities,
    verify_invariance,
)
from jetweyl.jets import internal_indices, ms_system
from jetweyl.symmetry import (
    PseudogroupElement,
    ShapeField,
    check_symmetry,
    generator,
    grading_check,
    lift_shape_field,
    orbit_dimension,
    orbit_expected_dimension,
    verify_commutation_table,
)

u_x = jet("u", (0, 1, 0))


def _line(num: int, label: str, ok: bool) -> None:
    print(f"criterion {num:02d} {label}: {'PASS' if ok else 'FAIL'}")


def test_criterion_01_commutator_table():
    t0 = time.monotonic()
    reports = verify_commutation_table()
    elapsed = time.monotonic() - t0
    ok = len(reports) == 25 and all(r.ok for r in reports) and elapsed < 30
    _line(1, "commutator table", ok)
    assert ok, f"elapsed {elapsed:.1f}s, failures {[r for r in reports if not r.ok]}"


def test_criterion_02_symmetries_and_grading():
    ok = all(check_symmetry(generator(i, formal("f"))) is True for i in range(1, 6))
    ok = ok and grading_check()
    _line(2, "symmetry families and grading", ok)
    assert ok


def test_criterion_03_shape_lift():
    names = {1: "a", 2: "b", 3: "c", 4: "d", 5: "e"}
    ok = True
    for fam, name in names.items():
        shape = ShapeField(**{name: formal(name)})
        lifted = lift_shape_field(shape).field
        target = generator(fam, formal(name))
        ok = ok and all(
            equal(getattr(lifted, s), getattr(target, s))
            for s in ("at", "ax", "ay", "fu", "fv")
        )
    chi = lift_shape_field(ShapeField(d=2 * formal("d"), e=formal("e"))).conformal
    ok = ok and equal(chi, 2 * (formal("e") + formal("d", 1)))
    _line(3, "shape-preserving lift", ok)
    assert ok


def test_criterion_04_orbit_dimensions():
    sys_ = ms_system()
    t0 = time.monotonic()
    generic = sys_.point(
        1,
        internal={
            "u": Fraction(1, 2),
            "v": Fraction(-2, 3),
            "u_t": Fraction(1, 4),
            "u_x": Fraction(3, 2),
            "u_y": Fraction(-1, 3),
            "v_t": Fraction(-1, 5),
            "v_x": Fraction(2, 5),
            "v_y": Fraction(1, 7),
        },
    )
    ok = orbit_dimension(1, generic) == 11 == orbit_expected_dimension(1)
    special = {"u_x": Fraction(1), "u_xx": Fraction(1)}
    ok = ok and orbit_dimension(2, sys_.point(2, internal=special)) == 18
    for k in (3, 4):
        ok = ok and orbit_dimension(k, sys_.point(k, internal=special)) == 5 * k + 8
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 120
    _line(4, "orbit dimensions", ok)
    assert ok, f"elapsed {elapsed:.1f}s"


def test_criterion_05_invariance_and_independence():
    sys_ = ms_system()
    quantities = [invariant(i) for i in (1, 2, 3)]
    quantities += [structure_K(i) for i in (1, 2, 3, 4)]
    quantities += [
        apply_derivation(j, invariant(i), sys_) for i in (1, 2, 3) for j in (1, 2, 3)
    ]
    ok = all(verify_invariance(q, system=sys_) is True for q in quantities)
    rng = random.Random(20260822)
    internal = {}
    for dep in ("u", "v"):
        for ix in internal_indices(3):
            internal[jet(dep, ix)] = Fraction(rng.randint(1, 9), rng.randint(1, 7))
    theta = sys_.point(3, internal=internal)
    ok = ok and independence_rank(theta) == 12
    _line(5, "invariance and rank 12", ok)
    assert ok


def test_criterion_06_commutators_and_identities():
    comm = verify_derivation_commutators()
    idents = verify_identities()
    ok = len(comm) == 3 and all(r.ok for r in comm)
    ok = ok and len(idents) == 2 and all(r.ok for r in idents)
    _line(6, "derivation commutators and identities", ok)
    assert ok


def test_criterion_07_coframe():
    rep = coframe_rewrite()
    expected = sp.Matrix([[0, 0, 2], [0, -1, 1], [2, 1, 4 * invariant(2) - 1]])
    diff = rep.gprime - expected
    ok = rep.matches and all(is_zero(diff[i, j]) for i in range(3) for j in range(3))
    ok = ok and equal(sp.det(derivation_matrix().inv()), -(u_x**3))
    _line(7, "invariant coframe", ok)
    assert ok


def test_criterion_08_counting():
    ok = True
    for k in range(2, 7):
        rec = counting("ms", k)
        ok = ok and rec.s == 2 * k**2 - k - 3
        ok = ok and rec.h == (3 if k == 2 else 4 * k - 3)
    ok = ok and counting("weyl", 2).h == 13
    ok = ok and counting("ew-general", 2).h == 8
    for k in range(3, 7):
        ok = ok and counting("weyl", k).h == (5 * k**2 + 7 * k - 6) // 2
        ok = ok and counting("ew-general", k).h == 3 * (2 * k - 1)
    for series in ("ms", "weyl", "ew-general"):
        coeffs = poincare_coefficients(series, 8)
        ok = ok and all(coeffs[k] == counting(series, k).h for k in range(2, 9))
    _line(8, "invariant counting", ok)
    assert ok


def _compat_residual(conn):
    g, w = conn.pair.g, conn.pair.omega
    coords = (T, X, Y)
    worst = []
    for k in range(3):
        for i in range(3):
            for j in range(3):
                nabla = partial(g[i, j], coords[k])
                nabla -= sum(conn[m, k, i] * g[m, j] for m in range(3))
                nabla -= sum(conn[m, k, j] * g[i, m] for m in range(3))
                worst.append(nabla - conn.compat_sign * w[k] * g[i, j])
    return worst


def test_criterion_09_catalog_geometry():
    ok = True
    sl2_points = None
    for cid in sorted(CATALOG_IDS):
        kwargs = {"f": 1, "h": 1} if cid == "exp-family" else {}
        sol = catalog(cid, **kwargs)
        conn = weyl_connection(build_pair(sol))
        ok = ok and all(is_zero(r) for r in _compat_residual(conn))
        anchor = skew_anchor_residual(conn)
        ok = ok and all(is_zero(anchor[i, j]) for i in range(3) for j in range(3))
        if cid.startswith("sl2"):
            rng = random.Random(7 if cid == "sl2-family" else 8)
            sl2_points = [
                (
                    Fraction(rng.randint(-3, 3)),
                    Fraction(rng.randint(-3, 3)),
                    Fraction(rng.randint(1, 9), rng.randint(1, 3)),
                )
                for _ in range(20)
            ]
            rep = check_EW(sol, pts=sl2_points)
            ok = ok and rep.exact and rep.ok
            ok = ok and len(rep.points) == 20
            ok = ok and all(c.residual <= 1e-9 for c in rep.points)
        else:
            rep = check_EW(sol)
            ok = ok and rep.exact and rep.ok
    constants = invariants_on_solution(catalog("sl2-family"))
    ok = ok and constants == (
        sp.Rational(-3, 25),
        sp.Rational(21, 100),
        sp.Rational(-147, 500),
    )
    # the four structure constants live on the u_xx = 0 stratum where their
    # defining quotients degenerate; record consistency of the cleared forms
    srep = sl2_structure_report(catalog("sl2-family"))
    ok = ok and all(e["numerator_vanishes"] for e in srep["entries"])
    _line(9, "catalog geometry", ok)
    assert ok


def _poly(rng):
    return rng.randint(-2, 2) * T + Fraction(rng.randint(-2, 2))


def _random_elements(rng, kind, count=10):
    out = []
    while len(out) < count:
        q = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        if kind == "cube":
            lam = rng.choice((1, 8, 27))
            el = PseudogroupElement.make(
                d=T + q, a=_poly(rng), b=0, c=_poly(rng), ee=lam
            )
        elif kind == "noshift":
            m = rng.choice((1, 2, 3))
            el = PseudogroupElement.make(
                d=m * m * T + q, a=_poly(rng), b=0, c=_poly(rng), ee=Fraction(rng.randint(1, 4))
            )
        else:
            m = rng.choice((1, 2, 3))
            el = PseudogroupElement.make(
                d=m * m * T + q,
                a=_poly(rng),
                b=_poly(rng),
                c=_poly(rng),
                ee=Fraction(rng.randint(1, 4)),
            )
        out.append(el)
    return out


def test_criterion_10_signature_equivalence():
    rng = random.Random(31415)
    ok = True
    setups = {
        "trivial": ({}, "free"),
        "dkp-partial": ({"h": 0}, "free"),
        "hierarchy": ({}, "free"),
        "exp-family": ({"f": 1, "h": 1}, "noshift"),
        "sl2-family": ({"f": 0, "h": 0}, "cube"),
        "sl2-degenerate": ({"f": 0, "h": 0}, "cube"),
    }
    for cid, (kwargs, kind) in setups.items():
        sol = catalog(cid, **kwargs)
        try:
            base = signature(sol)
        except SingularLocusError:
            base = None
        for el in _random_elements(rng, kind):
            moved = apply_pseudogroup(el, sol)
            if base is None:
                try:
                    signature(moved)
                    ok = False  # the singular branch must survive the action
                except SingularLocusError:
                    pass
                continue
            cloud = signature(moved)
            ok = ok and cloud.values == base.values
    c_sl2 = signature(catalog("sl2-family", f=0, h=0))
    c_exp = signature(catalog("exp-family", f=1, h=1))
    ok = ok and compare(c_sl2, c_exp).verdict == "distinct"
    try:
        signature(catalog("trivial"))
        ok = False
    except SingularLocusError as err:
        ok = ok and "u_x = 0 identically" in str(err)
    _line(10, "signature equivalence", ok)
    assert ok


def test_criterion_11_mutation_sanity():
    ok = True
    for cid in ("exp-family", "hierarchy", "sl2-family"):
        kwargs = {"f": 1, "h": 1} if cid == "exp-family" else {}
        if cid == "sl2-family":
            kwargs = {"f": 0, "h": 0}
        sol = catalog(cid, **kwargs)
        rep = check_EW(sol, correction_sign=+1)
        ok = ok and not rep.ok
        conn = weyl_connection(build_pair(sol), correction_sign=+1)
        anchor = skew_anchor_residual(conn)
        ok = ok and not all(is_zero(anchor[i, j]) for i in range(3) for j in range(3))
    _line(11, "mutation sanity", ok)
    assert ok

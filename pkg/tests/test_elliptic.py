"""Tate periods, elliptic logs, det_S / pi_S."""

import json
import random
from fractions import Fraction

import pytest

from plectic.elliptic import (LocalCurve, det_S, elliptic_log, pi_S,
                              point_log, tate_curve, tate_period, tate_point)
from plectic.errors import NotMultiplicative, PlecticError
from plectic.integrate import (TensorValue, digit_agreement,
                               tensor_digit_agreement)
from plectic.numberfield import (EFieldElement, PrimeSide,
                                 RealQuadraticField)
from plectic.padic import (PadicNumber, QuadExtElement, parse_digits,
                           render_digits)

from conftest import fixture_path

P = 3
F37 = RealQuadraticField(37)
AINVS = [F37(1), F37(0, 1), F37(1), F37(1, 1), F37(2)]


def curve_at_side(n, prec=14):
    side = PrimeSide(F37, P, n, prec)
    return LocalCurve.from_field_curve(AINVS, side), side


def test_j_of_tate_period_self_check():
    curve, _ = curve_at_side(1)
    q = tate_period(curve, 12)
    assert q.valuation() == -curve.j.valuation()
    # j of the Tate curve at q equals j of the curve, to working precision
    eq = tate_curve(q, 12)
    d = eq.j - curve.j
    assert d.is_zero


def test_tate_period_golden():
    with open(fixture_path("golden_tate_q_37_63_2d1_side1.json")) as fh:
        golden = json.load(fh)
    want = parse_digits(golden["q"], P)
    # recompute at two precisions; both must agree with the stored digits
    for prec in (12, 16):
        curve, _ = curve_at_side(1, prec)
        q = tate_period(curve, prec)
        assert digit_agreement(
            QuadExtElement.from_base(q),
            QuadExtElement.from_base(want)) >= golden["digits"] + q.valuation()


def test_one_split_one_nonsplit():
    kinds = []
    for n in (1, 2):
        curve, _ = curve_at_side(n)
        kinds.append(curve.is_split())
    assert sorted(kinds) == [False, True]


def _completed_square_twist(curve, d, prec):
    """Twist of y^2 = x^3 + (b2/4) x^2 + (b4/2) x + b6/4 by d."""
    p = curve.p
    zero = PadicNumber.zero(p)
    dd = PadicNumber.from_rational(p, Fraction(d), prec)
    return LocalCurve(zero, curve.b2 / 4 * dd, zero,
                      curve.b4 / 2 * dd * dd, curve.b6 / 4 * dd ** 3)


def test_unramified_twist_flips_split():
    rng = random.Random(2)
    for _ in range(20):
        qv = rng.randint(1, 2)
        unit = rng.choice([1, 2, 4, 5, 7, 8])
        q = PadicNumber.from_rational(P, unit * P ** qv, 12)
        curve = tate_curve(q, 12)
        assert curve.is_split()  # Tate curves are split by construction
        twisted = _completed_square_twist(curve, -1, 12)  # -1: non-residue
        assert not twisted.is_split()
        untwisted = _completed_square_twist(curve, 4, 12)  # square unit
        assert untwisted.is_split()


def test_elliptic_log_identity_is_zero():
    curve, _ = curve_at_side(1)
    q = tate_period(curve, 12)
    assert elliptic_log(None, curve, q).is_zero


def test_log_consistency_with_tate_series():
    prec = 12
    q = PadicNumber.from_rational(P, 6, prec)
    curve = tate_curve(q, prec)
    rng = random.Random(8)
    for _ in range(4):
        u = PadicNumber.from_rational(P, 1 + 3 * rng.randint(1, 20), prec)
        x, y = tate_point(u, q, prec)
        Pt = (QuadExtElement.from_base(x), QuadExtElement.from_base(y))
        assert curve.on_curve(Pt)
        got = elliptic_log(Pt, curve, q, target_prec=8)
        want = QuadExtElement.from_base(u.log_q(q))
        assert digit_agreement(got, want) >= 7


def test_log_is_odd_homomorphism():
    prec = 12
    q = PadicNumber.from_rational(P, 6, prec)
    curve = tate_curve(q, prec)
    u = PadicNumber.from_rational(P, 7, prec)
    x, y = tate_point(u, q, prec)
    Pt = (QuadExtElement.from_base(x), QuadExtElement.from_base(y))
    lp = elliptic_log(Pt, curve, q, target_prec=8)
    ln = elliptic_log(curve.neg(Pt), curve, q, target_prec=8)
    assert digit_agreement(lp + ln, lp - lp) >= 7
    l2 = elliptic_log(curve.mul(2, Pt), curve, q, target_prec=8)
    assert digit_agreement(l2, lp + lp) >= 7


def _instance_points(prec=14):
    beta = F37(62, -21)
    P1 = (EFieldElement(F37(3, -1), F37(0), beta),
          EFieldElement(F37(4, -1), F37(0), beta))
    P2 = (EFieldElement(F37(8, Fraction(-25, 9)), F37(0), beta),
          EFieldElement(F37(Fraction(-9, 2), Fraction(25, 18)),
                        F37(Fraction(17, 6), Fraction(-23, 27)), beta))
    s1 = PrimeSide(F37, P, 1, prec)
    s2 = PrimeSide(F37, P, 2, prec)
    return P1, P2, s1, s2


def test_det_S_antisymmetric():
    P1, P2, s1, s2 = _instance_points()
    a = det_S(P1, P2, AINVS, s1, s2, 10)
    b = det_S(P2, P1, AINVS, s1, s2, 10)
    assert all((x + y).is_zero for x, y in zip(a.coords(), b.coords()))


def test_point_not_on_curve_rejected():
    P1, P2, s1, s2 = _instance_points()
    bad = (P1[0], P1[1] + EFieldElement(F37(1), F37(0), F37(62, -21)))
    with pytest.raises(PlecticError):
        point_log(bad, AINVS, s1, 10)


def test_pi_S_kills_invariant_factor():
    # a tensor whose first leg is a base (Frobenius-fixed) element dies
    # under the factor-1 projector
    z = PadicNumber.from_rational(P, 5, 10)
    base_leg = QuadExtElement.from_base(z)
    alpha = QuadExtElement.from_pair(P, 0, 1, 10)
    x = TensorValue.tensor(base_leg, alpha)
    out = pi_S(x, [1], [])
    assert all(c.is_zero for c in out.coords())
    # but the projector keeps anti-invariant legs (up to a factor of 2)
    y = TensorValue.tensor(alpha, alpha)
    kept = pi_S(y, [1], [])
    assert not all(c.is_zero for c in kept.coords())


def test_nonmultiplicative_rejected():
    # y^2 = x^3 + 1 has good reduction at 3 on this model? j = 0 anyway:
    # v(j) >= 0 must be refused
    prec = 10
    zero = PadicNumber.zero(P)
    one = PadicNumber.from_rational(P, 1, prec)
    curve = LocalCurve(zero, zero, zero, zero, one)
    with pytest.raises(NotMultiplicative):
        curve.require_multiplicative()

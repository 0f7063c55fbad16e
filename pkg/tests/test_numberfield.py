"""Embeddings of the real quadratic field and its ATR extension."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plectic.errors import PrimeNotInert
from plectic.numberfield import (EFieldElement, PrimeSide,
                                 RealQuadraticField)

F37 = RealQuadraticField(37)


def side(n, prec=12):
    return PrimeSide(F37, 3, n, prec)


def test_embed_one():
    assert (side(1).embed(F37(1)) - 1).is_zero


def test_embed_w_side1_mod_27():
    # Hensel oracle: sqrt(37) = 19 mod 27 for the root = 1 mod 3, then
    # w = (1 + 19)/2 = 10
    assert side(1).embed(F37.w).lift() % 27 == 10


def test_embed_w_side2_mod_27():
    # the other root: sqrt(37) = 8 mod 27, (1+8)/2 = 9 * inverse(2) = 18
    assert side(2).embed(F37.w).lift() % 27 == 9 * pow(2, -1, 27) % 27 == 18


def test_sides_sum_to_trace():
    # the two images of w sum to 1 (trace of w)
    s = side(1).embed(F37.w) + side(2).embed(F37.w)
    assert (s - 1).is_zero


def test_beta_nonresidue_unit_side1():
    beta = F37(62, -21)
    img = side(1).embed(beta)
    assert img.valuation() == 0
    # brute force: 62 - 21*10 = -148 = 2 mod 3, the non-residue
    assert img.residue() == (62 - 21 * 10) % 3 == 2
    # hence sqrt_beta succeeds with a genuinely quadratic root
    root = side(1).sqrt_beta(beta)
    assert not root.b.is_zero
    assert (root * root - side(1).embed(beta)).is_zero


def test_square_beta_rejected():
    with pytest.raises(PrimeNotInert):
        side(1).sqrt_beta(F37(4))


coords = st.integers(-50, 50)


@given(coords, coords, coords, coords)
@settings(max_examples=40)
def test_embed_is_ring_hom(a, b, c, d):
    x = F37(a, b)
    y = F37(c, d)
    s = side(1)
    assert (s.embed(x * y) - s.embed(x) * s.embed(y)).is_zero
    assert (s.embed(x + y) - (s.embed(x) + s.embed(y))).is_zero


def test_embed_E_multiplicative():
    beta = F37(62, -21)
    z = EFieldElement(F37(2, 1), F37(1, -1), beta)
    w = EFieldElement(F37(Fraction(1, 2), 0), F37(0, 3), beta)
    s = side(1)
    lhs = s.embed_E(z * w)
    rhs = s.embed_E(z) * s.embed_E(w)
    assert (lhs - rhs).is_zero


def test_embed_E_conjugate_norm():
    beta = F37(62, -21)
    z = EFieldElement(F37(3, -1), F37(4, 0), beta)
    zbar = EFieldElement(z.x, -z.y, beta)
    n = side(1).embed_E(z) * side(1).embed_E(zbar)
    # norm to F lands in the base field Q_3
    assert n.b.is_zero

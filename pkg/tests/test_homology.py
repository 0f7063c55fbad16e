"""Fixed points of Moebius maps and the end-to-end pipeline."""

import random
from fractions import Fraction

import pytest

from plectic.bttree import mat_inv, mat_mul, moebius
from plectic.errors import EmbeddingNotInert, PlecticError
from plectic.homology import CycleData, fixed_points, plectic_invariant
from plectic.padic import PadicNumber, QuadExtElement
from plectic.shapiro import load_fixture

from conftest import fixture_path

P = 3


def test_rotation_fixed_points_are_pm_alpha():
    tau, taubar = fixed_points(((0, -1), (1, 0)), P, 12)
    # t = -1/t fixes t^2 = -1, i.e. +-alpha with alpha^2 = -1
    assert tau.a.is_zero and taubar.a.is_zero
    assert (tau + taubar).is_zero
    assert ((tau * tau) + 1).is_zero


def test_vieta_trace_and_product():
    rng = random.Random(14)
    checked = 0
    while checked < 50:
        mat = tuple(tuple(rng.randint(-9, 9) for _ in range(2))
                    for _ in range(2))
        (a, b), (c, d) = mat
        if a * d - b * c == 0 or c == 0:
            continue
        try:
            tau, taubar = fixed_points(mat, P, 12)
        except EmbeddingNotInert:
            continue
        lift = lambda n: QuadExtElement.from_base(
            PadicNumber.from_rational(P, Fraction(n), 12), tau.d)
        # c t^2 + (d - a) t - b = 0: sum and product by Vieta
        assert ((tau + taubar) * lift(c) - lift(a - d)).is_zero
        assert (tau * taubar * lift(c) + lift(b)).is_zero
        checked += 1


def test_conjugated_matrices_reverified():
    rng = random.Random(15)
    base = ((0, -1), (1, 0))
    done = 0
    while done < 20:
        g = tuple(tuple(rng.randint(-5, 5) for _ in range(2))
                  for _ in range(2))
        if g[0][0] * g[1][1] - g[0][1] * g[1][0] == 0:
            continue
        mat = mat_mul(mat_mul(g, base), mat_inv(g))
        try:
            tau, taubar = fixed_points(mat, P, 12)
        except EmbeddingNotInert:
            continue  # conjugation can make c = 0
        from plectic.shapiro import GroupElement
        CycleData(GroupElement(mat, mat), tau, taubar, tau, taubar).verify()
        done += 1


def test_degenerate_cases_rejected():
    with pytest.raises(EmbeddingNotInert):
        fixed_points(((1, 1), (0, 1)), P, 10)  # upper triangular
    with pytest.raises(EmbeddingNotInert):
        fixed_points(((0, 3), (1, 0)), P, 10)  # disc = 12: odd valuation
    with pytest.raises(EmbeddingNotInert):
        fixed_points(((2, 1), (1, 2)), P, 10)  # disc = 4: rational roots


def test_pipeline_on_demo_fixture():
    fx = load_fixture(fixture_path("curve_p3_m3_demo.json"))
    diag = plectic_invariant(fx, 2, 10)
    assert diag["cochain_support"] == 0  # zero-kappa demo fixture
    assert all(c.is_zero for c in diag["value"].coords())
    assert diag["solver"]["rows"] > 0


def test_pipeline_stage_tags():
    fx = load_fixture(fixture_path("synthetic_p3_m3_zero.json"))
    # no curve data and no explicit specs: the cycle stage must say so
    with pytest.raises(PlecticError) as exc:
        plectic_invariant(fx, 2, 10)
    assert "[stage cycle]" in str(exc.value)

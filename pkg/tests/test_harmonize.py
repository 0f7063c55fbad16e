"""Degeneration tables, the sparse lift, and the harmonicity correction."""

import random

import pytest

from plectic.bttree import act, base_edge, base_vertex, mat_inv
from plectic.cochain import (PairCochain, dirac_cochain, outgoing_edges,
                             tensor_cochain, vertices_up_to)
from plectic.errors import DegenerationUnderdetermined, LiftInconsistent
from plectic.harmonize import (SparseSystem, build_lift_system,
                               compute_degenerations, dense_solve, harmonize,
                               lift)
from plectic.shapiro import make_synthetic_fixture

P = 3
MOD_EXP = 7
MOD = P ** MOD_EXP


def even_edges(m):
    from plectic.harmonize import _even_edges
    return _even_edges(P, m)


def random_pair_cochain(m, rng, lo=-9, hi=9):
    c = PairCochain(P, m)
    evens = even_edges(m)
    for e1 in evens:
        for e2 in evens:
            v = rng.randint(lo, hi)
            if v:
                c.values[(e1.key(), e2.key())] = v
    return c


def coboundary_value_fn(D0):
    """(dD0)(g)(e1, e2) with reads outside the stored window counting 0."""
    def fn(g, e1, e2):
        return (D0(act(mat_inv(g.m1), e1), act(mat_inv(g.m2), e2))
                - D0(e1, e2))
    return fn


def phi1(D, v, e2):
    return sum(D(e, e2) for e in outgoing_edges(v))


def phi2(D, e1, v):
    return sum(D(e1, e) for e in outgoing_edges(v))


# -- degenerations ---------------------------------------------------------

def test_zero_cocycle_zero_tables(zero_kappa_fixture):
    t = compute_degenerations(zero_kappa_fixture, 2)
    assert all(v == 0 for v in t.d1.values())
    assert all(v == 0 for v in t.d2.values())
    assert t.base_constants == (0, 0, 0, 0)


def test_coboundary_degenerations_recovered(synthetic_fixture):
    # push dD0 through: recovered tables equal phi_i(D0) up to the
    # nu-kernel direction (t, -t, t, -t) realized through the base
    # constants
    rng = random.Random(17)
    m = 2
    D0 = random_pair_cochain(m, rng)
    t = compute_degenerations(synthetic_fixture, m,
                              value_fn=coboundary_value_fn(D0))
    # recovered tables differ from phi_i(D0) by a constant depending only
    # on the vertex parity (the nu-kernel's free direction)
    verts = vertices_up_to(P, m - 1)
    offs1, offs2 = {}, {}
    for v in verts:
        for e2 in even_edges(m):
            offs1.setdefault(v.even, set()).add(
                t.d1_at(v, e2) - phi1(D0, v, e2))
            offs2.setdefault(v.even, set()).add(
                t.d2_at(e2, v) - phi2(D0, e2, v))
    for table in (offs1, offs2):
        assert set(table) == {True, False}
        for parity, vals in table.items():
            assert len(vals) == 1


def test_nu_kernel_on_base_pairs(synthetic_fixture):
    rng = random.Random(19)
    D0 = random_pair_cochain(2, rng)
    t = compute_degenerations(synthetic_fixture, 2,
                              value_fn=coboundary_value_fn(D0))
    # nu2(D1) = nu1(D2) everywhere, in particular at the four base pairs
    assert t.nu_defect() == 0


def test_generic_kappa_is_refused(synthetic_fixture):
    # an arbitrary synthetic kappa is not cohomologous to a harmonic
    # cochain; the base-constant system detects it
    with pytest.raises(DegenerationUnderdetermined):
        compute_degenerations(synthetic_fixture, 2)


# -- lift ------------------------------------------------------------------

def test_zero_tables_zero_lift(zero_kappa_fixture):
    t = compute_degenerations(zero_kappa_fixture, 2)
    D, stats = lift(t, MOD_EXP)
    assert len(D.values) == 0
    assert stats["rows"] > 0 and stats["cols"] == len(even_edges(2)) ** 2


def test_lift_rows_have_at_most_p_plus_one_nonzeros(zero_kappa_fixture):
    t = compute_degenerations(zero_kappa_fixture, 2)
    system, _ = build_lift_system(t, MOD_EXP)
    for coeffs in system.rows:
        assert len(coeffs) <= P + 1


def test_lift_round_trip(synthetic_fixture):
    rng = random.Random(23)
    m = 2
    D0 = random_pair_cochain(m, rng)
    t = compute_degenerations(synthetic_fixture, m,
                              value_fn=coboundary_value_fn(D0))
    D, _ = lift(t, MOD_EXP)
    for v in vertices_up_to(P, m - 1):
        for e2 in even_edges(m):
            assert (phi1(D, v, e2) - t.d1_at(v, e2)) % MOD == 0
            assert (phi2(D, e2, v) - t.d2_at(e2, v)) % MOD == 0


# -- harmonize -------------------------------------------------------------

def test_harmonic_input_unchanged(synthetic_fixture):
    # a coboundary of a harmonic cochain is harmonic-valued; the correction
    # solves to zero under the free-variable convention
    Z = tensor_cochain(dirac_cochain(P, 2, 1, None),
                       dirac_cochain(P, 2, 0, 2))
    fn = coboundary_value_fn(Z)
    res = harmonize(synthetic_fixture, 2, MOD_EXP, value_fn=fn)
    assert len(res["corrector"].values) == 0
    g = synthetic_fixture.psi_u
    direct = PairCochain(P, 2)
    for e1 in even_edges(2):
        for e2 in even_edges(2):
            v = fn(g, e1, e2)
            if v:
                direct.values[(e1.key(), e2.key())] = v
    assert res["cochain"].equal_mod(direct, MOD)


def test_harmonize_coboundary_input(synthetic_fixture):
    rng = random.Random(29)
    m = 2
    D0 = random_pair_cochain(m, rng)
    fn = coboundary_value_fn(D0)
    g = synthetic_fixture.psi_u
    raw = PairCochain(P, m)
    for e1 in even_edges(m):
        for e2 in even_edges(m):
            v = fn(g, e1, e2)
            if v:
                raw.values[(e1.key(), e2.key())] = v
    # the raw value is generically not harmonic (non-commuting radial
    # collections), the corrected one must be, exactly mod 3^7
    assert not raw.is_harmonic(modulus=MOD)
    res = harmonize(synthetic_fixture, m, MOD_EXP, value_fn=fn)
    assert res["cochain"].is_harmonic(modulus=MOD)


# -- sparse solver ---------------------------------------------------------

def test_sparse_matches_dense_on_lift_system(synthetic_fixture):
    rng = random.Random(31)
    m = 1
    D0 = random_pair_cochain(m, rng)
    t = compute_degenerations(synthetic_fixture, m,
                              value_fn=coboundary_value_fn(D0))
    system, cols = build_lift_system(t, MOD_EXP)
    assert len(cols) == 16  # 4 even edges at m = 1, squared
    rows = list(zip([dict(c) for c in system.rows], system.rhs))
    x_sparse = system.solve(len(cols))
    x_dense = dense_solve([r for r, _ in rows], [b for _, b in rows],
                          len(cols), P, MOD_EXP)
    for coeffs, b in rows:
        s_sp = sum(v * x_sparse[i] for i, v in coeffs.items()) % MOD
        s_de = sum(v * x_dense[i] for i, v in coeffs.items()) % MOD
        assert s_sp == b % MOD == s_de


def test_sparse_solver_random_systems():
    rng = random.Random(37)
    for trial in range(25):
        n = rng.randint(3, 10)
        nrows = rng.randint(3, 12)
        x_true = [rng.randrange(MOD) for _ in range(n)]
        rows, rhs = [], []
        for _ in range(nrows):
            coeffs = {}
            for _ in range(rng.randint(1, 4)):
                j = rng.randrange(n)
                # occasionally force p-divisible coefficients to exercise
                # the division fallback
                c = rng.randrange(1, MOD)
                if trial % 3 == 0:
                    c *= P
                coeffs[j] = (coeffs.get(j, 0) + c) % MOD
            b = sum(c * x_true[j] for j, c in coeffs.items()) % MOD
            rows.append(coeffs)
            rhs.append(b)
        system = SparseSystem(P, MOD_EXP)
        for coeffs, b in zip(rows, rhs):
            system.add_row(dict(coeffs), b)
        x = system.solve(n)
        for coeffs, b in zip(rows, rhs):
            assert sum(c * x[j] for j, c in coeffs.items()) % MOD == b


def test_sparse_solver_detects_inconsistency():
    system = SparseSystem(P, MOD_EXP)
    system.add_row({0: 3}, 1)  # 3 x = 1 has no solution mod 3^7
    with pytest.raises(LiftInconsistent):
        system.solve(1)

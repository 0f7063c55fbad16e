"""Radial reductions, the two-tree cocycle, fixture serialization."""

import json
import os
import random

import pytest

from plectic.bttree import (act, act_vertex, base_edge, base_vertex,
                            edges_up_to, mat_det, outward_level)
from plectic.cochain import vertices_up_to
from plectic.errors import (DepthExceeded, OracleIncomplete,
                            RadialContractViolation, SchemaError)
from plectic.padic import valuation_of_rational
from plectic.shapiro import (GroupElement, KappaOracle, evaluate_cocycle,
                             load_fixture, make_synthetic_fixture,
                             reduce_edge, save_fixture, transporter)

P = 3


def even_edges(m):
    out = []
    for lvl in range(1, m + 1):
        for e in outward_level(P, lvl):
            out.append(e if e.even else e.opposite())
    return out


# -- construction / validation ---------------------------------------------

def test_minimal_fixture_validates():
    fx = make_synthetic_fixture(p=P, m_max=1, seed=0)
    fx.validate(depth=1)


def test_fixture_validates(synthetic_fixture):
    synthetic_fixture.validate(depth=2)


def test_radial_miss_raises(synthetic_fixture):
    deep = outward_level(P, synthetic_fixture.m_max + 1)[0]
    with pytest.raises(DepthExceeded):
        synthetic_fixture.radial_edge(deep, tree=1)


# -- reductions ------------------------------------------------------------

def test_reduce_identity(synthetic_fixture):
    e = base_edge(P)
    b, e2 = reduce_edge(synthetic_fixture, GroupElement.identity(), e,
                        tree=1)
    assert e2 == e
    # b = gamma_e gamma_e^-1: projectively trivial
    assert b.is_projective_identity()


def test_reduce_postcondition_500_random(synthetic_fixture):
    # gamma_e g = b gamma_{e'} with b in the base-edge stabilizer; checked
    # via the direct tree action
    fx = synthetic_fixture
    rng = random.Random(12)
    gens = list(fx.generators.values())
    edges = even_edges(2)  # radial systems index even edges
    e0 = base_edge(P)
    for _ in range(500):
        g = rng.choice(gens)
        if rng.random() < 0.5:
            g = g * rng.choice(gens)
        e = rng.choice(edges)
        b, e2 = reduce_edge(fx, g, e, tree=1)
        assert act(b.m1, e0) == e0
        # e' is g^{-1} e transported to the stored depth
        lhs = fx.radial_edge(e, tree=1) * g
        rhs = b * fx.radial_edge(e2, tree=1)
        assert lhs.fingerprint() == rhs.fingerprint()


def test_reduce_composition_coherence(synthetic_fixture):
    fx = synthetic_fixture
    rng = random.Random(13)
    gens = list(fx.generators.values())
    edges = even_edges(2)
    for _ in range(50):
        g, h = rng.choice(gens), rng.choice(gens)
        e = rng.choice(edges)
        b_gh, e_gh = reduce_edge(fx, g * h, e, tree=1)
        b_g, e_g = reduce_edge(fx, g, e, tree=1)
        b_h, e_h = reduce_edge(fx, h, e_g, tree=1)
        assert e_gh == e_h
        assert (b_g * b_h).fingerprint() == b_gh.fingerprint()


# -- cocycle ---------------------------------------------------------------

def test_zero_kappa_cocycle_vanishes(zero_kappa_fixture):
    fx = zero_kappa_fixture
    rng = random.Random(3)
    gens = list(fx.generators.values())
    evens = even_edges(2)
    for _ in range(30):
        g = rng.choice(gens) * rng.choice(gens)
        assert evaluate_cocycle(fx, g, rng.choice(evens),
                                rng.choice(evens)) == 0


def test_identity_cocycle_vanishes(synthetic_fixture):
    fx = synthetic_fixture
    for e in even_edges(1):
        assert evaluate_cocycle(fx, GroupElement.identity(), e, e) == 0


def test_cocycle_identity_random_pairs(synthetic_fixture):
    # c(gh)(e1,e2) = c(h)(g1^-1 e1, g2^-1 e2) + c(g)(e1, e2)
    fx = synthetic_fixture
    rng = random.Random(21)
    gens = list(fx.generators.values())
    evens = even_edges(2)
    from plectic.bttree import mat_inv
    for _ in range(60):
        g, h = rng.choice(gens), rng.choice(gens)
        e1, e2 = rng.choice(evens), rng.choice(evens)
        lhs = evaluate_cocycle(fx, g * h, e1, e2)
        rhs = (evaluate_cocycle(fx, h, act(mat_inv(g.m1), e1),
                                act(mat_inv(g.m2), e2))
               + evaluate_cocycle(fx, g, e1, e2))
        assert lhs == rhs


def test_cocycle_antisymmetry(synthetic_fixture):
    # F_0 in each variable: flipping one edge flips the sign
    fx = synthetic_fixture
    g = fx.psi_u
    e1, e2 = even_edges(2)[1], even_edges(2)[2]
    v = evaluate_cocycle(fx, g, e1, e2)
    assert evaluate_cocycle(fx, g, e1.opposite(), e2) == -v
    assert evaluate_cocycle(fx, g, e1, e2.opposite()) == -v
    assert evaluate_cocycle(fx, g, e1.opposite(), e2.opposite()) == v


# -- transporters ----------------------------------------------------------

def test_transporter_base_pair(synthetic_fixture):
    fx = synthetic_fixture
    g = transporter(fx, base_vertex(P), base_edge(P))
    assert g.is_projective_identity()


def test_transporter_moves_base_to_target(synthetic_fixture):
    fx = synthetic_fixture
    e0 = base_edge(P)
    for v in vertices_up_to(P, 2):
        for e2 in even_edges(2):
            g = transporter(fx, v, e2)
            base_v = fx.base_variant_vertex(v.even)
            from plectic.bttree import mat_inv
            assert act_vertex(mat_inv(g.m1), base_v) == v
            assert act(mat_inv(g.m2), e0) == e2
            # group membership: even determinant valuations
            for mat in (g.m1, g.m2):
                assert valuation_of_rational(mat_det(mat), P) % 2 == 0


# -- kappa oracle ----------------------------------------------------------

def test_kappa_additive_on_words(synthetic_fixture):
    fx = synthetic_fixture
    rng = random.Random(31)
    gens = list(fx.generators.values())
    for _ in range(100):
        g = rng.choice(gens)
        h = rng.choice(gens)
        assert (fx.oracle.kappa(g * h)
                == fx.oracle.kappa(g) + fx.oracle.kappa(h))
        assert fx.oracle.kappa(g * g.inv()) == 0


def test_kappa_table_miss_raises():
    oracle = KappaOracle(table={})
    g = GroupElement(((1, 1), (0, 1)), ((1, 0), (0, 1)))
    with pytest.raises(OracleIncomplete):
        oracle.kappa(g)


# -- serialization ---------------------------------------------------------

def test_save_load_round_trip(tmp_path, synthetic_fixture):
    fx = synthetic_fixture
    path = str(tmp_path / "fx.json")
    save_fixture(fx, path)
    fx2 = load_fixture(path)
    assert fx2.p == fx.p and fx2.m_max == fx.m_max
    assert sorted(fx2.generators) == sorted(fx.generators)
    rng = random.Random(41)
    evens = even_edges(2)
    for _ in range(20):
        g1 = rng.choice(sorted(fx.generators))
        e1, e2 = rng.choice(evens), rng.choice(evens)
        assert (evaluate_cocycle(fx2, fx2.generators[g1], e1, e2)
                == evaluate_cocycle(fx, fx.generators[g1], e1, e2))


def test_truncated_file_schema_error(tmp_path, synthetic_fixture):
    path = str(tmp_path / "fx.json")
    save_fixture(synthetic_fixture, path)
    with open(path) as fh:
        text = fh.read()
    with open(path, "w") as fh:
        fh.write(text[:len(text) // 2])
    with pytest.raises(SchemaError):
        load_fixture(path)


def test_wrong_schema_version(tmp_path, synthetic_fixture):
    path = str(tmp_path / "fx.json")
    save_fixture(synthetic_fixture, path)
    doc = json.load(open(path))
    doc["schema_version"] = 99
    json.dump(doc, open(path, "w"))
    with pytest.raises(SchemaError):
        load_fixture(path)


def test_broken_radial_names_culprit(tmp_path, synthetic_fixture):
    path = str(tmp_path / "fx.json")
    save_fixture(synthetic_fixture, path)
    doc = json.load(open(path))
    # corrupt one non-base tree-1 edge radial: the identity matrix cannot
    # carry the base edge to any other index
    ident = next(i for i in sorted(doc["radials"]["tree1_edges"])
                 if i != "1:0")
    doc["radials"]["tree1_edges"][ident]["m1"] = [[[1, 1], [0, 1]],
                                                 [[0, 1], [1, 1]]]
    json.dump(doc, open(path, "w"))
    with pytest.raises(RadialContractViolation) as exc:
        load_fixture(path)
    assert ident in str(exc.value)


def test_repo_fixture_files_load():
    from conftest import fixture_path
    for name in ("synthetic_p3_m3.json", "synthetic_p3_m3_zero.json",
                 "curve_p3_m3_demo.json"):
        fx = load_fixture(fixture_path(name))
        assert fx.p == P and len(fx.generators) > 0

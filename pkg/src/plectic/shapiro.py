"""Evaluation of the truncated cocycle c^m(g)(e1, e2) by radial reduction.

A fixture carries four "radial systems": for each tree, a group element per
even edge (depth <= m_max) and per vertex (depth <= m_max - 1), normalized so
that gamma_x^{-1} carries the base object to x.  Evaluating the cocycle at a
group element g and an even multiedge (e1, e2) is two reduction passes:

    gamma_{e1} * g       = b * gamma_{g^{-1} e1}     (b fixes the tree-1 base edge)
    gamma_{e2} * b       = h * gamma_{b^{-1} e2}     (h fixes both base edges)
    c^m(g)(e1, e2)       = kappa(h)

kappa is a homomorphism to Z on the base-edge stabilizer, supplied either as
values on atomic generators (synthetic fixtures, where every element carries
its word) or as a lookup table keyed by a canonical matrix fingerprint
(exported fixtures).

Group elements act on tree 1 through their first matrix and on tree 2 through
their second.  For fixtures over a real quadratic field the single matrix
over the field is stored too and the two rational matrices are its p-adic
integer lifts under the two embeddings; the lifts are exact enough for the
truncated tree action as long as the embedding precision well exceeds m_max.
"""

import json
import random
from fractions import Fraction

from .bttree import (act, act_vertex, base_edge, base_vertex, edge_from_id,
                     edge_id, edges_up_to, mat_inv, mat_mul, mat_scale_primitive,
                     outward_level, vertex_from_id, vertex_id, Edge, Vertex)
from .cochain import vertices_up_to
from .errors import (DepthExceeded, OracleIncomplete, RadialContractViolation,
                     SchemaError)

IDENT = ((1, 0), (0, 1))


def _word_mul(w1, w2):
    """Concatenate words with cancellation of adjacent inverse atoms."""
    out = list(w1)
    for atom, sign in w2:
        if out and out[-1][0] == atom and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((atom, sign))
    return tuple(out)


def _mat_fingerprint(m):
    """Scalar-normalized integer form: primitive entries, first nonzero
    entry positive."""
    m = mat_scale_primitive(m)
    flat = [m[0][0], m[0][1], m[1][0], m[1][1]]
    for x in flat:
        if x:
            if x < 0:
                flat = [-y for y in flat]
            break
    return ",".join(str(x) for x in flat)


class GroupElement:
    """A fixture group element: one matrix per tree plus (optionally) its
    word in the fixture's atomic generators, and (optionally) the exact
    matrix over the base field F as flat (x, y) coordinate pairs in the
    basis (1, w)."""

    __slots__ = ("m1", "m2", "word", "mf")

    def __init__(self, m1, m2, word=None, mf=None):
        self.m1 = m1
        self.m2 = m2
        self.word = word
        self.mf = mf

    @classmethod
    def identity(cls):
        return cls(IDENT, IDENT, word=())

    def __mul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        word = None
        if self.word is not None and other.word is not None:
            word = _word_mul(self.word, other.word)
        mf = None
        if self.mf is not None and other.mf is not None:
            mf = mat_mul(self.mf, other.mf)
        return GroupElement(mat_scale_primitive(mat_mul(self.m1, other.m1)),
                            mat_scale_primitive(mat_mul(self.m2, other.m2)),
                            word, mf)

    def inv(self):
        word = None
        if self.word is not None:
            word = tuple((a, -s) for a, s in reversed(self.word))
        mf = mat_inv(self.mf) if self.mf is not None else None
        return GroupElement(mat_scale_primitive(mat_inv(self.m1)),
                            mat_scale_primitive(mat_inv(self.m2)),
                            word, mf)

    def fingerprint(self):
        if self.mf is not None:
            return _field_mat_fingerprint(self.mf)
        return _mat_fingerprint(self.m1) + ";" + _mat_fingerprint(self.m2)

    def is_projective_identity(self):
        for m in (self.m1, self.m2):
            n = mat_scale_primitive(m)
            if n[0][1] or n[1][0] or n[0][0] != n[1][1]:
                return False
        return True

    def __repr__(self):
        return "<g %s | %s>" % (self.m1, self.m2)


def _field_mat_fingerprint(mf):
    """Canonical projective form of a matrix over F: divide by the first
    nonzero entry."""
    flat = [mf[0][0], mf[0][1], mf[1][0], mf[1][1]]
    pivot = next(x for x in flat if x.x or x.y)
    normed = [x / pivot for x in flat]
    return "|".join("%s,%s" % (e.x, e.y) for e in normed)


class KappaOracle:
    """kappa as a homomorphism: additive over words when atom values are
    known (synthetic fixtures), otherwise a fingerprint table populated out
    of band."""

    def __init__(self, atom_values=None, table=None):
        if atom_values is None and table is None:
            raise ValueError("oracle needs atom values or a table")
        self.atom_values = atom_values
        self.table = table

    def kappa(self, g):
        if self.atom_values is not None and g.word is not None:
            return sum(sign * self.atom_values.get(atom, 0)
                       for atom, sign in g.word)
        if g.is_projective_identity():
            return 0
        if self.table is not None:
            fp = g.fingerprint()
            try:
                return self.table[fp]
            except KeyError:
                raise OracleIncomplete("no kappa value for %s" % fp)
        raise OracleIncomplete("element carries no word and no table is loaded")


def _even_rep(e):
    return e if e.even else e.opposite()


def even_edge_keys(p, m):
    """Keys of the even oriented edges within depth m, enumeration order."""
    out = []
    for lvl in range(1, m + 1):
        for e in outward_level(p, lvl):
            out.append(_even_rep(e).key())
    return out


class Fixture:
    """Group data driving the cocycle evaluation; immutable after load."""

    def __init__(self, p, m_max, r1_edge, r1_vertex, r2_edge, r2_vertex,
                 oracle, generators=None, psi_u=None, field_disc=None,
                 beta=None, ainvs=None, expected=None):
        self.p = p
        self.m_max = m_max
        self.r1_edge = r1_edge
        self.r1_vertex = r1_vertex
        self.r2_edge = r2_edge
        self.r2_vertex = r2_vertex
        self.oracle = oracle
        self.generators = generators or {}
        self.psi_u = psi_u
        self.field_disc = field_disc
        self.beta = beta
        self.ainvs = ainvs
        self.expected = expected or {}
        self._cache = {}

    # -- radial lookups ----------------------------------------------------

    def _radial(self, table, key, what):
        try:
            return table[key]
        except KeyError:
            raise DepthExceeded("no radial element for %s %r" % (what, key))

    def radial_edge(self, e, tree):
        table = self.r1_edge if tree == 1 else self.r2_edge
        return self._radial(table, e.key(), "tree-%d edge" % tree)

    def radial_vertex(self, v, tree):
        table = self.r1_vertex if tree == 1 else self.r2_vertex
        return self._radial(table, v.key(), "tree-%d vertex" % tree)

    def base_variant_vertex(self, parity_even):
        """Base vertex for even targets, the base edge's far endpoint for
        odd ones."""
        if parity_even:
            return base_vertex(self.p)
        return base_edge(self.p).target()

    # -- validation --------------------------------------------------------

    def validate(self, depth=2):
        """Radial contracts at depth <= depth, stabilizer membership for the
        tree-2 systems, even determinant valuations throughout."""
        p = self.p
        e0 = base_edge(p)
        from .padic import valuation_of_rational

        def _check_even_det(g, label):
            for m in (g.m1, g.m2):
                d = mat_det_fraction(m)
                if d == 0:
                    raise RadialContractViolation("%s: singular matrix" % label)
                if valuation_of_rational(Fraction(d), p) % 2:
                    raise RadialContractViolation(
                        "%s: odd determinant valuation" % label)

        for key, g in self.r1_edge.items():
            e = Edge(p, key[0], key[2], key[1])
            _check_even_det(g, "tree-1 edge %s" % edge_id(e))
            if e.level() <= depth and act(g.inv().m1, e0) != e:
                raise RadialContractViolation(
                    "tree-1 edge radial %s does not carry the base edge to "
                    "its index" % edge_id(e))
        for key, g in self.r1_vertex.items():
            v = Vertex(p, key[1], key[0])
            _check_even_det(g, "tree-1 vertex %s" % vertex_id(v))
            bv = self.base_variant_vertex(v.even)
            if v.distance_to_base() <= depth and act_vertex(g.inv().m1, bv) != v:
                raise RadialContractViolation(
                    "tree-1 vertex radial %s does not carry its base variant "
                    "to its index" % vertex_id(v))
        for key, g in self.r2_edge.items():
            e = Edge(p, key[0], key[2], key[1])
            _check_even_det(g, "tree-2 edge %s" % edge_id(e))
            if act(g.m1, e0) != e0:
                raise RadialContractViolation(
                    "tree-2 edge radial %s does not stabilize the tree-1 "
                    "base edge" % edge_id(e))
            if e.level() <= depth and act(g.inv().m2, e0) != e:
                raise RadialContractViolation(
                    "tree-2 edge radial %s does not carry the base edge to "
                    "its index" % edge_id(e))
        for key, g in self.r2_vertex.items():
            v = Vertex(p, key[1], key[0])
            _check_even_det(g, "tree-2 vertex %s" % vertex_id(v))
            if act(g.m1, e0) != e0:
                raise RadialContractViolation(
                    "tree-2 vertex radial %s does not stabilize the tree-1 "
                    "base edge" % vertex_id(v))
            bv = self.base_variant_vertex(v.even)
            if v.distance_to_base() <= depth and act_vertex(g.inv().m2, bv) != v:
                raise RadialContractViolation(
                    "tree-2 vertex radial %s does not carry its base variant "
                    "to its index" % vertex_id(v))


def mat_det_fraction(m):
    (a, b), (c, d) = m
    return Fraction(a) * Fraction(d) - Fraction(b) * Fraction(c)


# -- the reduction ---------------------------------------------------------

def reduce_edge(fixture, g, e, tree):
    """gamma_e * g = b * gamma_{g^{-1} e}; returns (b, g^{-1} e).

    e must be even; the reduced edge is then even too and indexed, else
    DepthExceeded.  The stabilizer postcondition on b is asserted."""
    mat = g.m1 if tree == 1 else g.m2
    eprime = act(mat_inv(mat), e)
    b = fixture.radial_edge(e, tree) * g * fixture.radial_edge(eprime, tree).inv()
    e0 = base_edge(fixture.p)
    bmat = b.m1 if tree == 1 else b.m2
    if act(bmat, e0) != e0:
        raise RadialContractViolation(
            "reduction by-product does not stabilize the tree-%d base edge "
            "(radial system inconsistent)" % tree)
    return b, eprime


def evaluate_cocycle(fixture, g, e1, e2):
    """c^m(g)(e1, e2) = kappa(h).  Any parities accepted; odd members read
    through the F_0 sign flip.  Cached per (g, e1, e2)."""
    sign = 1
    if not e1.even:
        e1, sign = e1.opposite(), -sign
    if not e2.even:
        e2, sign = e2.opposite(), -sign
    key = (g.fingerprint(), e1.key(), e2.key())
    cached = fixture._cache.get(key)
    if cached is None:
        b, _ = reduce_edge(fixture, g, e1, tree=1)
        # The multiedge carrying the value (e1, e2) is reached from the base
        # pair by gamma_f * gamma_{e1} with f = gamma_{e1}(e2) on tree 2 (the
        # tree-1 radial need not act trivially there), so the second
        # reduction runs at f; this is what makes the two-stage evaluation a
        # genuine 1-cocycle for the diagonal action on multiedges.
        f = act(fixture.radial_edge(e1, tree=1).m2, e2)
        h, _ = reduce_edge(fixture, b, f, tree=2)
        e0 = base_edge(fixture.p)
        if act(h.m2, e0) != e0:
            raise RadialContractViolation(
                "final reduction element does not stabilize the tree-2 base "
                "edge (radial system inconsistent)")
        cached = fixture.oracle.kappa(h)
        fixture._cache[key] = cached
    return sign * cached


def transporter(fixture, t1, t2):
    """g with g^{-1} * (base pair) = (t1, t2) for a mixed pair: (vertex,
    edge) or (edge, vertex), the edge member even.

    The base pair is (base vertex or its odd variant, base edge) chosen by
    the vertex member's parity."""
    if isinstance(t1, Vertex) and isinstance(t2, Edge):
        g1 = fixture.radial_vertex(t1, tree=1)
        f = act(g1.m2, t2)
        g2 = fixture.radial_edge(f, tree=2)
        return g2 * g1
    if isinstance(t1, Edge) and isinstance(t2, Vertex):
        g1 = fixture.radial_edge(t1, tree=1)
        f = act_vertex(g1.m2, t2)
        g2 = fixture.radial_vertex(f, tree=2)
        return g2 * g1
    raise TypeError("transporter wants a (vertex, edge) or (edge, vertex) pair")


# -- synthetic fixtures ----------------------------------------------------

def _carrier(e):
    """Exact matrix sending the base edge to e (U_e = G_e(pZ_p) determines
    the oriented edge)."""
    return mat_scale_primitive(e.ball_matrix())


def _vertex_carrier(v):
    return ((Fraction(v.p) ** v.k, v.a), (0, 1))


def make_synthetic_fixture(p=3, m_max=3, seed=0, kappa_zero=False,
                           noncommuting=True, depth_preserving=True):
    """A fixture over the direct product of two rational matrix groups.

    Tree-1 radials carry random depth-preserving upper-triangular matrices
    in the tree-2 slot (so no query ever escapes the indexed range) and
    tree-2 radials carry base-edge stabilizers in the tree-1 slot; with
    noncommuting=True the two collections do not commute, which is the case
    the Step 3 correction exists for.  Every radial element is an atom of
    the word oracle with a small random kappa value.
    """
    rng = random.Random(seed)
    e0 = base_edge(p)

    def rand_dp():
        # depth-preserving on every level: unit diagonal ratio, integral shift
        if not depth_preserving or not noncommuting:
            return IDENT
        u = rng.choice([1, 2])
        b = rng.randrange(-2, 3)
        return ((u, b), (0, 1))

    def rand_stab():
        # stabilizer of the base edge: t -> u t + p b maps pZ_p onto itself
        if not noncommuting:
            return IDENT
        u = rng.choice([1, 2])
        b = rng.randrange(-2, 3)
        return ((u, p * b), (0, 1))

    atoms = {}

    def kval():
        return 0 if kappa_zero else rng.randrange(-5, 6)

    r1_edge, r2_edge = {}, {}
    for lvl in range(1, m_max + 1):
        for e in outward_level(p, lvl):
            ee = _even_rep(e)
            if ee.key() in r1_edge:
                continue
            a1 = "r1e:" + edge_id(ee)
            g = GroupElement(mat_scale_primitive(mat_inv(_carrier(ee))),
                             rand_dp(), word=((a1, 1),))
            assert act(g.inv().m1, e0) == ee
            r1_edge[ee.key()] = g
            atoms[a1] = kval()
            a2 = "r2e:" + edge_id(ee)
            g = GroupElement(rand_stab(),
                             mat_scale_primitive(mat_inv(_carrier(ee))),
                             word=((a2, 1),))
            r2_edge[ee.key()] = g
            atoms[a2] = kval()

    vhat = base_edge(p).target()
    r1_vertex, r2_vertex = {}, {}
    for v in vertices_up_to(p, m_max - 1):
        if v.even:
            minv = _vertex_carrier(v)
        else:
            minv = mat_mul(_vertex_carrier(v),
                           mat_inv(_vertex_carrier(vhat)))
        m = mat_scale_primitive(mat_inv(minv))
        a1 = "r1v:" + vertex_id(v)
        r1_vertex[v.key()] = GroupElement(m, rand_dp(), word=((a1, 1),))
        atoms[a1] = kval()
        a2 = "r2v:" + vertex_id(v)
        r2_vertex[v.key()] = GroupElement(rand_stab(), m, word=((a2, 1),))
        atoms[a2] = kval()

    # base-object radials get trivial free parts so the base-pair
    # transporter is projectively the identity
    bk = e0.key()
    r1_edge[bk] = GroupElement(r1_edge[bk].m1, IDENT, word=r1_edge[bk].word)
    r2_edge[bk] = GroupElement(IDENT, r2_edge[bk].m2, word=r2_edge[bk].word)
    vk = base_vertex(p).key()
    r1_vertex[vk] = GroupElement(r1_vertex[vk].m1, IDENT,
                                 word=r1_vertex[vk].word)
    r2_vertex[vk] = GroupElement(IDENT, r2_vertex[vk].m2,
                                 word=r2_vertex[vk].word)

    generators = {}
    for i in range(3):
        name = "g%d" % i
        generators[name] = GroupElement(rand_dp() if depth_preserving
                                        else rand_stab(),
                                        rand_dp(), word=((name, 1),))
        atoms[name] = kval()

    fx = Fixture(p, m_max, r1_edge, r1_vertex, r2_edge, r2_vertex,
                 KappaOracle(atom_values=atoms), generators=generators,
                 psi_u=generators["g0"] * generators["g1"])
    fx.validate(depth=min(2, m_max))
    return fx


# -- JSON fixture files ----------------------------------------------------

_SCHEMA_VERSION = 1


def _mat_to_json(m):
    return [[[Fraction(x).numerator, Fraction(x).denominator] for x in row]
            for row in m]


def _mat_from_json(j):
    try:
        return tuple(tuple(Fraction(n, d) for n, d in row) for row in j)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError("bad matrix entry: %s" % exc)


def _elem_to_json(g):
    out = {"m1": _mat_to_json(g.m1), "m2": _mat_to_json(g.m2)}
    if g.word is not None:
        out["word"] = [[a, s] for a, s in g.word]
    return out


def _elem_from_json(j):
    if not isinstance(j, dict) or "m1" not in j or "m2" not in j:
        raise SchemaError("group element needs m1 and m2")
    word = None
    if j.get("word") is not None:
        word = tuple((str(a), int(s)) for a, s in j["word"])
    return GroupElement(_mat_from_json(j["m1"]), _mat_from_json(j["m2"]), word)


def save_fixture(fixture, path):
    def radial_json(table, keyfn):
        return {keyfn(k): _elem_to_json(g) for k, g in sorted(
            table.items(), key=lambda kv: repr(kv[0]))}

    p = fixture.p
    doc = {
        "schema_version": _SCHEMA_VERSION,
        "p": p,
        "m_max": fixture.m_max,
        "field": ({"D": fixture.field_disc} if fixture.field_disc else None),
        "beta": fixture.beta,
        "ainvs": fixture.ainvs,
        "generators": [dict(_elem_to_json(g), id=name,
                            kappa=fixture.oracle.atom_values.get(name)
                            if fixture.oracle.atom_values else None)
                       for name, g in sorted(fixture.generators.items())],
        "psi_u": _elem_to_json(fixture.psi_u) if fixture.psi_u else None,
        "radials": {
            "tree1_edges": radial_json(fixture.r1_edge,
                                       lambda k: edge_id(Edge(p, k[0], k[2], k[1]))),
            "tree1_vertices": radial_json(fixture.r1_vertex,
                                          lambda k: vertex_id(Vertex(p, k[1], k[0]))),
            "tree2_edges": radial_json(fixture.r2_edge,
                                       lambda k: edge_id(Edge(p, k[0], k[2], k[1]))),
            "tree2_vertices": radial_json(fixture.r2_vertex,
                                          lambda k: vertex_id(Vertex(p, k[1], k[0]))),
        },
        "kappa_atoms": fixture.oracle.atom_values,
        "kappa_table": ([[k, v] for k, v in sorted(fixture.oracle.table.items())]
                        if fixture.oracle.table else None),
        "expected": fixture.expected or None,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)


def load_fixture(path, validate_depth=2):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("fixture is not valid JSON: %s" % exc)
    if not isinstance(doc, dict):
        raise SchemaError("fixture document must be an object")
    if doc.get("schema_version") != _SCHEMA_VERSION:
        raise SchemaError("unsupported schema version %r"
                          % doc.get("schema_version"))
    for req in ("p", "m_max", "radials"):
        if req not in doc:
            raise SchemaError("missing field %r" % req)
    p = int(doc["p"])
    m_max = int(doc["m_max"])
    radials = doc["radials"]

    def radial_table(section, keyfn):
        if section not in radials:
            raise SchemaError("missing radial section %r" % section)
        out = {}
        for ident, j in radials[section].items():
            out[keyfn(ident)] = _elem_from_json(j)
        return out

    try:
        r1e = radial_table("tree1_edges", lambda i: edge_from_id(p, i).key())
        r2e = radial_table("tree2_edges", lambda i: edge_from_id(p, i).key())
        r1v = radial_table("tree1_vertices",
                           lambda i: vertex_from_id(p, i).key())
        r2v = radial_table("tree2_vertices",
                           lambda i: vertex_from_id(p, i).key())
    except ValueError as exc:
        raise SchemaError(str(exc))

    atoms = doc.get("kappa_atoms")
    table = None
    if doc.get("kappa_table") is not None:
        table = {str(k): int(v) for k, v in doc["kappa_table"]}
    if atoms is None and table is None:
        raise SchemaError("fixture carries neither kappa atoms nor a table")
    oracle = KappaOracle(atom_values=atoms, table=table)

    generators = {}
    for j in doc.get("generators") or []:
        if "id" not in j:
            raise SchemaError("generator without id")
        generators[j["id"]] = _elem_from_json(j)
    psi_u = _elem_from_json(doc["psi_u"]) if doc.get("psi_u") else None

    fx = Fixture(p, m_max, r1e, r1v, r2e, r2v, oracle, generators=generators,
                 psi_u=psi_u,
                 field_disc=(doc.get("field") or {}).get("D"),
                 beta=doc.get("beta"), ainvs=doc.get("ainvs"),
                 expected=doc.get("expected"))
    fx.validate(depth=validate_depth)
    return fx

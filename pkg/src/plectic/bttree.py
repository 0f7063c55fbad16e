"""The Bruhat-Tits tree of PGL_2(Q_p) in the ball model.

Vertices are the discs B(a, k) = {t : v(t - a) >= k} of P^1(Q_p), k any
integer, a rational and canonically reduced mod p^k.  B(a, k) is adjacent to
B(a, k-1).  An oriented edge is a disc together with an orientation:

  kind "A", params (a, k):  from B(a, k-1) to B(a, k),   U_e = B(a, k)
  kind "B", params (a, k):  from B(a, k) to B(a, k-1),   U_e = P^1 - B(a, k)

where U_e is the set of ends the edge points toward.  The base vertex is
B(0, 0) = Z_p and the base edge is A(0, 1), so U_{e0} = p Z_p.

GL_2(Q) acts through Moebius transformations on ends; the induced action on
edges is computed exactly by tracking images of discs.  All arithmetic is
exact (Fractions and integer valuations), so no precision questions arise
at the tree level.

The point at infinity of P^1 is represented by None.
"""

from fractions import Fraction

from .errors import OutOfDepth
from .padic import valuation_of_rational

INFTY = None  # the point at infinity of P^1(Q_p)


# -- exact 2x2 matrices ----------------------------------------------------

def mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h),
            (c * e + d * g, c * f + d * h))


def mat_det(m):
    (a, b), (c, d) = m
    return a * d - b * c


def mat_inv(m):
    """Inverse up to scalar (adjugate); fine for a projective action."""
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


def mat_scale_primitive(m):
    """Clear denominators and common factors so entries are coprime ints."""
    entries = [Fraction(x) for row in m for x in row]
    from math import gcd, lcm
    L = lcm(*(e.denominator for e in entries))
    ints = [int(e * L) for e in entries]
    g = gcd(*ints)
    if g:
        ints = [x // g for x in ints]
    return ((ints[0], ints[1]), (ints[2], ints[3]))


def moebius(m, t):
    """Apply the matrix to a point of P^1 (None = infinity)."""
    (a, b), (c, d) = m
    if t is INFTY:
        if c == 0:
            return INFTY
        return Fraction(a, c)
    num = a * t + b
    den = c * t + d
    if den == 0:
        return INFTY
    return Fraction(num) / Fraction(den)


def _val(x, p):
    """Valuation of a rational, infinity for 0."""
    if x == 0:
        return float("inf")
    return valuation_of_rational(x, p)


def _reduce_mod(a, p, k):
    """Canonical representative of a modulo p^k: keep only digits at
    positions v(a) .. k-1."""
    a = Fraction(a)
    if a == 0:
        return a
    v = valuation_of_rational(a, p)
    if v >= k:
        return Fraction(0)
    n = k - v
    m = p ** n
    u = a / Fraction(p) ** v
    r = (u.numerator % m) * pow(u.denominator % m, -1, m) % m
    return Fraction(r) * Fraction(p) ** v


class Vertex:
    """The disc B(a, k), a reduced mod p^k."""

    __slots__ = ("p", "a", "k")

    def __init__(self, p, a, k):
        self.p = p
        self.k = k
        self.a = _reduce_mod(a, p, k)

    def key(self):
        return (self.k, self.a)

    def distance_to_base(self):
        v = _val(self.a, self.p)
        return self.k - 2 * min(0, self.k, v if v != float("inf") else self.k)

    @property
    def even(self):
        return self.distance_to_base() % 2 == 0

    def __eq__(self, other):
        return (isinstance(other, Vertex) and other.p == self.p
                and other.key() == self.key())

    def __hash__(self):
        return hash((self.p, self.key()))

    def __repr__(self):
        return "V(%s; %d)" % (self.a, self.k)


class Edge:
    """Oriented edge of the tree; see module docstring for the two kinds."""

    __slots__ = ("p", "kind", "a", "k")

    def __init__(self, p, kind, a, k):
        if kind not in ("A", "B"):
            raise ValueError("kind must be 'A' or 'B'")
        self.p = p
        self.kind = kind
        self.k = k
        self.a = _reduce_mod(a, p, k)

    def key(self):
        return (self.kind, self.k, self.a)

    def opposite(self):
        return Edge(self.p, "B" if self.kind == "A" else "A", self.a, self.k)

    def source(self):
        if self.kind == "A":
            return Vertex(self.p, self.a, self.k - 1)
        return Vertex(self.p, self.a, self.k)

    def target(self):
        if self.kind == "A":
            return Vertex(self.p, self.a, self.k)
        return Vertex(self.p, self.a, self.k - 1)

    @property
    def even(self):
        return self.source().even

    def level(self):
        """Distance of the far endpoint from the base vertex.  For edges
        pointing away from the base this is the outward level (>= 1)."""
        return self.target().distance_to_base()

    def is_outward(self):
        return self.target().distance_to_base() == self.source().distance_to_base() + 1

    def contains(self, t):
        """Membership of a point of P^1 (None = infinity) in U_e."""
        if self.kind == "A":
            if t is INFTY:
                return False
            return _val(Fraction(t) - self.a, self.p) >= self.k
        if t is INFTY:
            return True
        return _val(Fraction(t) - self.a, self.p) < self.k

    def sample_point(self):
        """A point of U_e: the center for a ball, infinity for a complement."""
        if self.kind == "A":
            return self.a
        return INFTY

    def ball_matrix(self):
        """g with U_e = g(pZ_p): [[p^(k-1), a], [0, 1]] for a ball,
        [[a, p^k], [1, 0]] for a complement."""
        p, a, k = self.p, self.a, self.k
        if self.kind == "A":
            return ((Fraction(p) ** (k - 1), a), (0, 1))
        return ((a, Fraction(p) ** k), (1, 0))

    def outward_children(self):
        """The p outward edges past the target (partition of U_e)."""
        p, a, k = self.p, self.a, self.k
        if self.kind == "A":
            return [Edge(p, "A", a + c * Fraction(p) ** k, k + 1)
                    for c in range(p)]
        out = [Edge(p, "B", a, k - 1)]
        out += [Edge(p, "A", a + c * Fraction(p) ** (k - 1), k)
                for c in range(1, p)]
        return out

    def __eq__(self, other):
        return (isinstance(other, Edge) and other.p == self.p
                and other.key() == self.key())

    def __hash__(self):
        return hash((self.p, self.key()))

    def __repr__(self):
        return "E%s(%s; %d)" % (self.kind, self.a, self.k)


def base_edge(p):
    return Edge(p, "A", 0, 1)


def base_vertex(p):
    return Vertex(p, 0, 0)


def outward_level(p, m):
    """The (p+1) * p^(m-1) outward edges at level m; their U_e sets
    partition P^1(Q_p)."""
    if m < 1:
        raise ValueError("level must be >= 1")
    level = [Edge(p, "A", c, 1) for c in range(p)] + [Edge(p, "B", 0, 0)]
    for _ in range(m - 1):
        level = [child for e in level for child in e.outward_children()]
    return level


def edges_up_to(p, m):
    """All oriented edges within outward level m, both orientations."""
    out = []
    level = outward_level(p, 1)
    for n in range(1, m + 1):
        out.extend(level)
        out.extend(e.opposite() for e in level)
        if n < m:
            level = [child for e in level for child in e.outward_children()]
    return out


def act(m, e):
    """Image of the oriented edge under the Moebius action of an invertible
    rational matrix.  Exact."""
    p = e.p
    w = mat_scale_primitive(mat_mul(m, e.ball_matrix()))
    (A, B), (C, D) = w
    det = mat_det(w)
    vC = _val(C, p)
    vD = _val(D, p)
    if vD > vC:
        # pole of w inside pZ_p: the image contains infinity, so it is a
        # complement; classify via the image of the complementary disc
        h0 = ((0, p), (1, 0))
        w2 = mat_scale_primitive(mat_mul(w, h0))
        (A, B), (C, D) = w2
        det = mat_det(w2)
        vD = _val(D, p)
        a = Fraction(B) / Fraction(D)
        k = _val(det, p) + 1 - 2 * vD
        return Edge(p, "B", a, int(k))
    a = Fraction(B) / Fraction(D)
    k = _val(det, p) + 1 - 2 * vD
    return Edge(p, "A", a, int(k))


def act_vertex(m, v):
    """Induced action on vertices."""
    return act(m, Edge(v.p, "A", v.a, v.k)).target()


def path_to_base(e):
    """Edges from e back toward the base edge region, for an outward edge:
    e itself, its outward parent, ..., down to level 1."""
    if not e.is_outward():
        raise OutOfDepth("edge does not point away from the base vertex")
    chain = [e]
    cur = e
    while cur.level() > 1:
        cur = outward_parent(cur)
        chain.append(cur)
    return chain


def edge_id(e):
    """Stable serialization id: level and the child-index digits of the
    outward path from the base vertex; inward edges prefix '~'."""
    if not e.is_outward():
        return "~" + edge_id(e.opposite())
    chain = [e]
    cur = e
    while cur.level() > 1:
        cur = outward_parent(cur)
        chain.append(cur)
    chain.reverse()
    first = outward_level(e.p, 1)
    digits = [first.index(chain[0])]
    for parent, child in zip(chain, chain[1:]):
        digits.append(parent.outward_children().index(child))
    return "%d:%s" % (e.level(), "".join(str(d) for d in digits))


def edge_from_id(p, ident):
    if ident.startswith("~"):
        return edge_from_id(p, ident[1:]).opposite()
    lvl_s, digits = ident.split(":")
    e = outward_level(p, 1)[int(digits[0])]
    for d in digits[1:]:
        e = e.outward_children()[int(d)]
    if e.level() != int(lvl_s):
        raise ValueError("corrupt edge id %r" % ident)
    return e


def vertex_id(v):
    """'base' for the base vertex, else the id of the outward edge whose
    target is v."""
    if v == base_vertex(v.p):
        return "base"
    for f in incoming_edges(v):
        if f.is_outward():
            return edge_id(f)
    raise ValueError("unreachable")


def vertex_from_id(p, ident):
    if ident == "base":
        return base_vertex(p)
    return edge_from_id(p, ident).target()


def incoming_edges(v):
    """The p+1 oriented edges with target v."""
    p, r, j = v.p, v.a, v.k
    out = [Edge(p, "A", r, j)]
    out += [Edge(p, "B", r + c * Fraction(p) ** j, j + 1) for c in range(p)]
    return out


def outward_parent(e):
    """The outward edge whose children include e (unique; tree)."""
    if e.level() <= 1:
        raise OutOfDepth("level-1 edge has no outward parent")
    rev = e.opposite()
    for f in incoming_edges(e.source()):
        if f != rev and f.is_outward():
            return f
    raise OutOfDepth("no outward parent found")  # unreachable on a tree

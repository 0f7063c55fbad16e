"""Finite cochains on the tree, F_0 sign condition built in.

A cochain of depth m assigns an integer to every oriented edge whose
underlying unoriented edge lies within outward level m, subject to
c(opposite(e)) = -c(e).  Only values on *even* edges (source vertex at even
distance from the base vertex) are stored; odd edges read through the sign
flip, which is consistent because opposite() flips the source parity.

A cochain is harmonic when the values on the p+1 edges out of each vertex
at depth <= m-1 sum to zero; equivalently the induced measure on the level
sets is finitely additive under the child partition.
"""

from .bttree import (Edge, Vertex, act, base_vertex, incoming_edges,
                     mat_inv, outward_level)
from .errors import OutOfDepth


def outgoing_edges(v):
    """The p+1 oriented edges with source v."""
    return [e.opposite() for e in incoming_edges(v)]


def vertices_up_to(p, n):
    """All vertices at distance <= n from the base vertex."""
    out = [base_vertex(p)]
    for lvl in range(1, n + 1):
        out.extend(e.target() for e in outward_level(p, lvl))
    return out


def edge_in_domain(e, m):
    """Is the underlying unoriented edge within outward level m?"""
    rep = e if e.is_outward() else e.opposite()
    return rep.is_outward() and 1 <= rep.level() <= m


class FiniteCochain:
    """Depth-m cochain; see the module docstring for conventions."""

    def __init__(self, p, m, values=None):
        self.p = p
        self.m = m
        self.values = {}
        if values:
            for key, val in values.items():
                self.values[key] = val

    @classmethod
    def from_function(cls, p, m, fn):
        """Build from a function on oriented edges (must itself satisfy the
        sign condition; only even edges are sampled)."""
        c = cls(p, m)
        for lvl in range(1, m + 1):
            for e in outward_level(p, lvl):
                ee = e if e.even else e.opposite()
                v = fn(ee)
                if v:
                    c.values[ee.key()] = v
        return c

    def _even_key(self, e):
        if not edge_in_domain(e, self.m):
            raise OutOfDepth("edge %r outside depth %d" % (e, self.m))
        if e.even:
            return e.key(), 1
        return e.opposite().key(), -1

    def __call__(self, e):
        key, sign = self._even_key(e)
        return sign * self.values.get(key, 0)

    def set(self, e, val):
        key, sign = self._even_key(e)
        if sign * val:
            self.values[key] = sign * val
        else:
            self.values.pop(key, None)

    def copy(self):
        return FiniteCochain(self.p, self.m, dict(self.values))

    def __add__(self, other):
        if not isinstance(other, FiniteCochain):
            return NotImplemented
        if other.p != self.p or other.m != self.m:
            raise ValueError("mismatched cochain domains")
        out = self.copy()
        for key, val in other.values.items():
            new = out.values.get(key, 0) + val
            if new:
                out.values[key] = new
            else:
                out.values.pop(key, None)
        return out

    def __neg__(self):
        return FiniteCochain(self.p, self.m,
                             {k: -v for k, v in self.values.items()})

    def __sub__(self, other):
        if not isinstance(other, FiniteCochain):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return FiniteCochain(self.p, self.m)
        return FiniteCochain(self.p, self.m,
                             {k: n * v for k, v in self.values.items()})

    def __eq__(self, other):
        if not isinstance(other, FiniteCochain):
            return NotImplemented
        if other.p != self.p or other.m != self.m:
            return False
        keys = set(self.values) | set(other.values)
        return all(self.values.get(k, 0) == other.values.get(k, 0)
                   for k in keys)

    def reduce_mod(self, modulus):
        out = FiniteCochain(self.p, self.m)
        for k, v in self.values.items():
            r = v % modulus
            if r:
                out.values[k] = r
        return out

    def vertex_sums(self):
        """phi(c): vertex -> sum of c over the outgoing edges, at every
        vertex of depth <= m-1.  Zero entries are kept (callers compare
        against explicit targets)."""
        out = {}
        for v in vertices_up_to(self.p, self.m - 1):
            out[v.key()] = sum(self(e) for e in outgoing_edges(v))
        return out

    def is_harmonic(self, modulus=None):
        for total in self.vertex_sums().values():
            if modulus is None:
                if total != 0:
                    return False
            elif total % modulus != 0:
                return False
        return True

    def act(self, g):
        """(g * c)(e) = c(g^{-1} e).  Raises OutOfDepth when g^{-1} moves
        some domain edge outside the stored depth."""
        ginv = mat_inv(g)
        out = FiniteCochain(self.p, self.m)
        for lvl in range(1, self.m + 1):
            for e in outward_level(self.p, lvl):
                ee = e if e.even else e.opposite()
                v = self(act(ginv, ee))
                if v:
                    out.values[ee.key()] = v
        return out

    def support_size(self):
        return len(self.values)

    def __repr__(self):
        return "<cochain p=%d m=%d, %d nonzero>" % (self.p, self.m,
                                                    len(self.values))


def measure(c, edges):
    """Finitely additive measure of a disjoint union of edge balls.

    `edges` must be pairwise disjoint as subsets of P^1 (the caller's
    responsibility; the ball algebra makes overlap a containment, which we
    reject)."""
    for i, e in enumerate(edges):
        for f in edges[i + 1:]:
            s = e.sample_point()
            t = f.sample_point()
            if f.contains(s) or e.contains(t):
                raise OutOfDepth("edge balls overlap: %r, %r" % (e, f))
    return sum(c(e) for e in edges)


def coboundary(D, g):
    """(dD)(g) = g*D - D for a depth-m cochain D."""
    return D.act(g) - D


def dirac_value(e, x, y):
    """[x in U_e] - [y in U_e]; works on any edge of the tree."""
    return int(e.contains(x)) - int(e.contains(y))


def dirac_cochain(p, m, x, y):
    """The harmonic cochain attached to the divisor (x) - (y) on P^1.

    x, y are points of P^1(Q_p) (Fractions, or None for infinity)."""
    return FiniteCochain.from_function(p, m, lambda e: dirac_value(e, x, y))


class PairCochain:
    """Cochain on pairs of edges (one per tree), F_0 in each variable.

    Values are stored on pairs of even edges; reading a pair with odd
    members flips the sign once per odd member."""

    def __init__(self, p, m, values=None):
        self.p = p
        self.m = m
        self.values = dict(values) if values else {}

    def _even_pair(self, e1, e2):
        sign = 1
        for e in (e1, e2):
            if not edge_in_domain(e, self.m):
                raise OutOfDepth("edge %r outside depth %d" % (e, self.m))
        if not e1.even:
            e1 = e1.opposite()
            sign = -sign
        if not e2.even:
            e2 = e2.opposite()
            sign = -sign
        return (e1.key(), e2.key()), sign

    def __call__(self, e1, e2):
        key, sign = self._even_pair(e1, e2)
        return sign * self.values.get(key, 0)

    def set(self, e1, e2, val):
        key, sign = self._even_pair(e1, e2)
        if sign * val:
            self.values[key] = sign * val
        else:
            self.values.pop(key, None)

    def add_to(self, e1, e2, val):
        self.set(e1, e2, self(e1, e2) + val)

    def copy(self):
        return PairCochain(self.p, self.m, dict(self.values))

    def __add__(self, other):
        if not isinstance(other, PairCochain):
            return NotImplemented
        out = self.copy()
        for k, v in other.values.items():
            n = out.values.get(k, 0) + v
            if n:
                out.values[k] = n
            else:
                out.values.pop(k, None)
        return out

    def __neg__(self):
        return PairCochain(self.p, self.m,
                           {k: -v for k, v in self.values.items()})

    def __sub__(self, other):
        if not isinstance(other, PairCochain):
            return NotImplemented
        return self + (-other)

    def reduce_mod(self, modulus):
        out = PairCochain(self.p, self.m)
        for k, v in self.values.items():
            r = v % modulus
            if r:
                out.values[k] = r
        return out

    def equal_mod(self, other, modulus):
        keys = set(self.values) | set(other.values)
        return all((self.values.get(k, 0) - other.values.get(k, 0)) % modulus == 0
                   for k in keys)

    def act(self, gpair):
        """(g * c)(e1, e2) = c(g1^{-1} e1, g2^{-1} e2) for a pair of
        matrices, one per tree."""
        g1, g2 = gpair
        i1, i2 = mat_inv(g1), mat_inv(g2)
        out = PairCochain(self.p, self.m)
        evens = []
        for lvl in range(1, self.m + 1):
            for e in outward_level(self.p, lvl):
                evens.append(e if e.even else e.opposite())
        for e1 in evens:
            f1 = act(i1, e1)
            for e2 in evens:
                v = self(f1, act(i2, e2))
                if v:
                    out.values[(e1.key(), e2.key())] = v
        return out

    def is_harmonic(self, modulus=None):
        """Harmonic in each variable separately at depth <= m-1."""
        p, m = self.p, self.m
        verts = vertices_up_to(p, m - 1)
        evens = []
        for lvl in range(1, m + 1):
            for e in outward_level(p, lvl):
                evens.append(e if e.even else e.opposite())
        for v in verts:
            outs = outgoing_edges(v)
            for e2 in evens:
                t1 = sum(self(e, e2) for e in outs)
                t2 = sum(self(e2, e) for e in outs)
                for t in (t1, t2):
                    if modulus is None:
                        if t != 0:
                            return False
                    elif t % modulus != 0:
                        return False
        return True

    def __repr__(self):
        return "<pair cochain p=%d m=%d, %d nonzero>" % (self.p, self.m,
                                                         len(self.values))


def tensor_cochain(c1, c2):
    """PairCochain (e1, e2) -> c1(e1) * c2(e2)."""
    if c1.p != c2.p or c1.m != c2.m:
        raise ValueError("mismatched cochain domains")
    out = PairCochain(c1.p, c1.m)
    for k1, v1 in c1.values.items():
        for k2, v2 in c2.values.items():
            out.values[(k1, k2)] = v1 * v2
    return out

"""Harmonization of the truncated cocycle: c^m - dD.

The value cochains of the two-stage evaluation need not be harmonic (the two
radial collections rarely commute).  The correction is a pair cochain D
within depth m whose degenerations

    phi1(D)(v1, e2) = sum over edges out of v1 of D(., e2)
    phi2(D)(e1, v2) = sum over edges out of v2 of D(e1, .)

match the tables D1, D2 attached to the cocycle by

    phi_i(c^m)(g) = (g - 1) * D_i.

D1 and D2 are computed by transporting each pair to one of the base pairs;
that determines them up to four additive constants (one per parity class),
which the nu-compatibility conditions at the four base pairs pin down up to
a one-dimensional kernel.  The kernel direction is realized by the parity
cochain (sign of source parity in each variable), whose coboundary vanishes
for the parity-preserving elements we evaluate at, so the free parameter is
fixed to the zero-free-variable solution.

The lift itself is a sparse linear solve modulo p^M: one row per (vertex,
even edge) and (even edge, vertex) pair with the vertex at depth <= m-1
(both vertex parities -- rows at odd vertices carry -1 coefficients through
the sign convention and are what make the output exactly harmonic at every
vertex, not only at the even ones), p+1 nonzero +-1 coefficients per row,
one column per even multiedge of depth <= m.
"""

from fractions import Fraction

from .bttree import act, base_edge, base_vertex, mat_inv, outward_level
from .cochain import PairCochain, outgoing_edges, vertices_up_to
from .errors import DegenerationUnderdetermined, LiftInconsistent
from .shapiro import evaluate_cocycle, transporter


def _even_edges(p, m):
    out = []
    for lvl in range(1, m + 1):
        for e in outward_level(p, lvl):
            out.append(e if e.even else e.opposite())
    return out


class DegenerationTable:
    """D1 on (vertices <= m-1) x (even edges <= m) and D2 transposed, plus
    the four solved base constants; F_0 in the edge variable."""

    def __init__(self, p, m, d1, d2, base_constants):
        self.p = p
        self.m = m
        self.d1 = d1
        self.d2 = d2
        self.base_constants = base_constants

    def d1_at(self, v, e2):
        if e2.even:
            return self.d1[(v.key(), e2.key())]
        return -self.d1[(v.key(), e2.opposite().key())]

    def d2_at(self, e1, v):
        if e1.even:
            return self.d2[(e1.key(), v.key())]
        return -self.d2[(e1.opposite().key(), v.key())]

    def nu_defect(self):
        """max |nu2(D1) - nu1(D2)| over all vertex pairs in range."""
        worst = 0
        verts = vertices_up_to(self.p, self.m - 1)
        for v1 in verts:
            for v2 in verts:
                n2 = sum(self.d1_at(v1, e) for e in outgoing_edges(v2))
                n1 = sum(self.d2_at(e, v2) for e in outgoing_edges(v1))
                worst = max(worst, abs(n2 - n1))
        return worst


def cocycle_cochain(fixture, g, m):
    """The value c^m(g) as a PairCochain."""
    out = PairCochain(fixture.p, m)
    evens = _even_edges(fixture.p, m)
    for e1 in evens:
        for e2 in evens:
            v = evaluate_cocycle(fixture, g, e1, e2)
            if v:
                out.values[(e1.key(), e2.key())] = v
    return out


def compute_degenerations(fixture, m, value_fn=None):
    """D1, D2 tables for the cocycle; value_fn(g, e1, e2) overrides the
    fixture's own evaluation (used to push synthetic cocycles through the
    same plumbing).

    Raises DegenerationUnderdetermined when the base-constant system is
    inconsistent or the nu-compatibility fails somewhere in range."""
    p = fixture.p
    if value_fn is None:
        value_fn = lambda g, e1, e2: evaluate_cocycle(fixture, g, e1, e2)
    e0 = base_edge(p)
    v0 = base_vertex(p)
    vhat = e0.target()
    verts = vertices_up_to(p, m - 1)
    evens = _even_edges(p, m)

    # raw values: phi_i(c(g)) at the matching base pair, g the transporter
    raw1, raw2 = {}, {}
    for v1 in verts:
        bv = v0 if v1.even else vhat
        outs = outgoing_edges(bv)
        for e2 in evens:
            g = transporter(fixture, v1, e2)
            raw1[(v1.key(), e2.key())] = sum(value_fn(g, e, e0) for e in outs)
    for v2 in verts:
        bv = v0 if v2.even else vhat
        outs = outgoing_edges(bv)
        for e1 in evens:
            g = transporter(fixture, e1, v2)
            raw2[(e1.key(), v2.key())] = sum(value_fn(g, e0, e) for e in outs)

    def raw1_at(vkey, e2):
        if e2.even:
            return raw1[(vkey, e2.key())]
        return -raw1[(vkey, e2.opposite().key())]

    def raw2_at(e1, vkey):
        if e1.even:
            return raw2[(e1.key(), vkey)]
        return -raw2[(e1.opposite().key(), vkey)]

    # base constants (delta1_even, delta1_odd, delta2_even, delta2_odd) from
    # the nu conditions at the four base vertex pairs
    rows, rhs = [], []
    # at m = 1 only even vertices are in range and the odd-parity nu rows
    # would read past the stored window
    variants = (v0, vhat) if m >= 2 else (v0,)
    for va in variants:
        for vb in variants:
            row = [Fraction(0)] * 4
            const = Fraction(0)
            for e2 in outgoing_edges(vb):
                const += raw1_at(va.key(), e2)
                row[0 if va.even else 1] += 1 if e2.even else -1
            for e1 in outgoing_edges(va):
                const -= raw2_at(e1, vb.key())
                row[2 if vb.even else 3] -= 1 if e1.even else -1
            rows.append(row)
            rhs.append(-const)
    delta = _solve_small(rows, rhs)

    parity = {v.key(): v.even for v in verts}
    d1 = {}
    for (vk, ek), val in raw1.items():
        d1[(vk, ek)] = val + delta[0 if parity[vk] else 1]
    d2 = {}
    for (ek, vk), val in raw2.items():
        d2[(ek, vk)] = val + delta[2 if parity[vk] else 3]

    table = DegenerationTable(p, m, d1, d2, tuple(delta))
    if table.nu_defect() != 0:
        raise DegenerationUnderdetermined(
            "nu-compatibility fails away from the base pairs; the evaluator "
            "is not a cocycle of the expected class at depth %d" % m)
    return table


def _solve_small(rows, rhs):
    """Exact Gaussian elimination over Q, free variables set to 0;
    DegenerationUnderdetermined on inconsistency."""
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        piv = aug[r][c]
        aug[r] = [x / piv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, len(aug)):
        if aug[i][n] != 0:
            raise DegenerationUnderdetermined(
                "base-constant system is inconsistent")
    x = [Fraction(0)] * n
    for rr, c in pivots:
        x[c] = aug[rr][n]
    return x


# -- sparse solve ----------------------------------------------------------

def _as_residue(x, modulus):
    """Fraction/int -> canonical residue; denominator must be prime to p."""
    x = Fraction(x)
    if x.denominator % modulus == 0 or _gcd(x.denominator, modulus) != 1:
        raise LiftInconsistent("non-p-integral degeneration value %s" % x)
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


class SparseSystem:
    """Rows of +-1 stencils over the even-multiedge columns, solved modulo
    p^M by elimination with unit pivots and Markowitz-style pivot choice."""

    def __init__(self, p, modulus_exp):
        self.p = p
        self.modulus = p ** modulus_exp
        self.rows = []   # list of dict col -> coefficient
        self.rhs = []
        self.stats = {"rows": 0, "cols": 0, "nonzeros": 0, "fill_in": 0,
                      "pivots": 0, "p_divisions": 0}

    def add_row(self, coeffs, b):
        self.rows.append(dict(coeffs))
        self.rhs.append(b % self.modulus)

    def solve(self, ncols):
        p, modulus = self.p, self.modulus
        rows = [dict(r) for r in self.rows]
        rhs = list(self.rhs)
        row_mod = [modulus] * len(rows)
        self.stats["rows"] = len(rows)
        self.stats["cols"] = ncols
        base_nnz = sum(len(r) for r in rows)
        self.stats["nonzeros"] = base_nnz

        col_rows = {}
        for i, r in enumerate(rows):
            for c in r:
                col_rows.setdefault(c, set()).add(i)

        active = set(range(len(rows)))
        pivots = []

        def eliminate(pr, pc):
            a = rows[pr][pc]
            for i in sorted(col_rows.get(pc, ())):
                if i == pr or i not in active:
                    continue
                mod = row_mod[i]
                f = (rows[i][pc] * pow(a % mod, -1, mod)) % mod
                for c, v in rows[pr].items():
                    new = (rows[i].get(c, 0) - f * v) % mod
                    if new:
                        if c not in rows[i]:
                            col_rows.setdefault(c, set()).add(i)
                        rows[i][c] = new
                    elif c in rows[i]:
                        del rows[i][c]
                        col_rows[c].discard(i)
                rhs[i] = (rhs[i] - f * rhs[pr]) % mod

        while True:
            best = None
            for i in sorted(active):
                if not rows[i]:
                    continue
                for c in sorted(rows[i]):
                    if rows[i][c] % p == 0:
                        continue
                    cost = (len(rows[i]) - 1) * (len(col_rows.get(c, ())) - 1)
                    cand = (cost, c, i)
                    if best is None or cand < best:
                        best = cand
            if best is None:
                # no unit entry anywhere: divide stuck rows by p
                stuck = [i for i in sorted(active) if rows[i]]
                if not stuck:
                    break
                for i in stuck:
                    if any(v % p for v in rows[i].values()):
                        raise LiftInconsistent("mixed-unit row escaped "
                                               "pivot search")
                    if rhs[i] % p:
                        raise LiftInconsistent(
                            "row forces a non-integral value")
                    rows[i] = {c: v // p for c, v in rows[i].items()}
                    rhs[i] //= p
                    row_mod[i] //= p
                    self.stats["p_divisions"] += 1
                    if row_mod[i] == 1:
                        for c in rows[i]:
                            col_rows[c].discard(i)
                        rows[i] = {}
                continue
            _, pc, pr = best
            eliminate(pr, pc)
            pivots.append((pr, pc))
            active.discard(pr)
            self.stats["pivots"] += 1

        for i in active:
            if not rows[i] and rhs[i] % row_mod[i]:
                raise LiftInconsistent("zero row with nonzero right-hand side")

        x = [0] * ncols
        for pr, pc in reversed(pivots):
            mod = row_mod[pr]
            acc = rhs[pr]
            for c, v in rows[pr].items():
                if c != pc:
                    acc -= v * x[c]
            a = rows[pr][pc] % mod
            x[pc] = (acc * pow(a, -1, mod)) % mod

        self.stats["fill_in"] = max(0, sum(len(r) for r in rows) - base_nnz)

        # direct substitution check against the original system
        for r, b in zip(self.rows, self.rhs):
            if (sum(v * x[c] for c, v in r.items()) - b) % modulus:
                raise LiftInconsistent("solution fails direct substitution "
                                       "(precision lost in p-divisions)")
        return x


def dense_solve(rows, rhs, ncols, p, modulus_exp):
    """Brute-force reference solver for small systems (tests only)."""
    modulus = p ** modulus_exp
    aug = [[r.get(c, 0) % modulus for c in range(ncols)] + [b % modulus]
           for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(aug)) if aug[i][c] % p), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        inv = pow(aug[r][c], -1, modulus)
        aug[r] = [(x * inv) % modulus for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % modulus for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, len(aug)):
        if any(aug[i][:ncols]):
            raise LiftInconsistent("dense solver: row not eliminated")
        if aug[i][ncols]:
            raise LiftInconsistent("dense solver: inconsistent system")
    x = [0] * ncols
    for rr, c in pivots:
        x[c] = aug[rr][ncols]
    return x


def build_lift_system(table, modulus_exp):
    """Rows phi1(D) = D1 and phi2(D) = D2 over all vertices at depth <= m-1
    (both parities) and all even edges of depth <= m."""
    p, m = table.p, table.m
    evens = _even_edges(p, m)
    cols = {}
    for e1 in evens:
        for e2 in evens:
            cols[(e1.key(), e2.key())] = len(cols)
    modulus = p ** modulus_exp
    system = SparseSystem(p, modulus_exp)
    verts = vertices_up_to(p, m - 1)
    for v1 in verts:
        outs = outgoing_edges(v1)
        for e2 in evens:
            coeffs = {}
            for e in outs:
                sign = 1
                ee = e
                if not ee.even:
                    ee, sign = ee.opposite(), -1
                idx = cols[(ee.key(), e2.key())]
                coeffs[idx] = (coeffs.get(idx, 0) + sign) % modulus
            system.add_row(coeffs, _as_residue(table.d1[(v1.key(), e2.key())],
                                               modulus))
    for v2 in verts:
        outs = outgoing_edges(v2)
        for e1 in evens:
            coeffs = {}
            for e in outs:
                sign = 1
                ee = e
                if not ee.even:
                    ee, sign = ee.opposite(), -1
                idx = cols[(e1.key(), ee.key())]
                coeffs[idx] = (coeffs.get(idx, 0) + sign) % modulus
            system.add_row(coeffs, _as_residue(table.d2[(e1.key(), v2.key())],
                                               modulus))
    return system, cols


def lift(table, modulus_exp):
    """Solve for D with phi_i(D) = D_i modulo p^modulus_exp; free variables
    zero.  Returns (PairCochain, solver stats)."""
    system, cols = build_lift_system(table, modulus_exp)
    x = system.solve(len(cols))
    D = PairCochain(table.p, table.m)
    for key, idx in cols.items():
        if x[idx]:
            D.values[key] = x[idx]
    return D, system.stats


def harmonize(fixture, m, modulus_exp, g=None, value_fn=None):
    """End-to-end Step 3: degenerations, lift, corrected cochain for g
    (default: the fixture's distinguished element).

    Returns a dict with the corrected cochain ('cochain'), the correction
    ('corrector'), the degeneration table and solver statistics.  The
    corrected cochain's harmonicity modulo p^modulus_exp is asserted, not
    assumed."""
    if g is None:
        g = fixture.psi_u
    if g is None:
        raise ValueError("no group element to harmonize at")
    table = compute_degenerations(fixture, m, value_fn=value_fn)
    D, stats = lift(table, modulus_exp)
    if value_fn is None:
        c_g = cocycle_cochain(fixture, g, m)
    else:
        c_g = PairCochain(fixture.p, m)
        evens = _even_edges(fixture.p, m)
        for e1 in evens:
            for e2 in evens:
                v = value_fn(g, e1, e2)
                if v:
                    c_g.values[(e1.key(), e2.key())] = v
    shift = D.act((g.m1, g.m2)) - D
    corrected = (c_g - shift).reduce_mod(fixture.p ** modulus_exp)
    if not corrected.is_harmonic(modulus=fixture.p ** modulus_exp):
        raise LiftInconsistent("corrected cochain fails harmonicity; the "
                               "degeneration data does not match the cocycle")
    return {
        "cochain": corrected,
        "corrector": D,
        "degenerations": table,
        "stats": stats,
    }

"""Riemann-sum integration of log_q integrands against tree cochains.

Only the logarithm of the multiplicative double integral is ever computed
(the invariant is compared in log form); single-prime multiplicative
integrals exist for oracle testing.

The double sum runs over outward_level(m) x outward_level(m).  Since the
integrand factors and the cochain is stored sparsely, the sum iterates the
nonzero cochain entries against precomputed per-edge log factors; the
reduction order is the deterministic sorted key order, so results are
bit-identical regardless of how the factor evaluations are parallelized.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .bttree import INFTY, outward_level
from .errors import InvalidPeriod, PlecticError
from .padic import PadicNumber, QuadExtElement, render_digits


class TensorValue:
    """Element of E_{p1} (x) E_{p2} over Q_p in the basis {1,a}(x){1,a}.

    Coordinates c00, c01, c10, c11 are PadicNumber; cij multiplies
    (alpha^i (x) alpha^j)."""

    __slots__ = ("p", "c00", "c01", "c10", "c11")

    def __init__(self, p, c00, c01, c10, c11):
        self.p = p
        self.c00 = c00
        self.c01 = c01
        self.c10 = c10
        self.c11 = c11

    @classmethod
    def zero(cls, p):
        z = PadicNumber.zero(p)
        return cls(p, z, z, z, z)

    @classmethod
    def tensor(cls, x, y):
        """x (x) y for QuadExtElement factors."""
        return cls(x.p, x.a * y.a, x.a * y.b, x.b * y.a, x.b * y.b)

    def coords(self):
        return (self.c00, self.c01, self.c10, self.c11)

    def __add__(self, other):
        if not isinstance(other, TensorValue):
            return NotImplemented
        return TensorValue(self.p, *(a + b for a, b in
                                     zip(self.coords(), other.coords())))

    def __neg__(self):
        return TensorValue(self.p, *(-a for a in self.coords()))

    def __sub__(self, other):
        if not isinstance(other, TensorValue):
            return NotImplemented
        return self + (-other)

    def scale(self, n):
        return TensorValue(self.p, *(a * n for a in self.coords()))

    def frobenius_factor(self, which):
        """Partial Frobenius on tensor factor 1 or 2."""
        c00, c01, c10, c11 = self.coords()
        if which == 1:
            return TensorValue(self.p, c00, c01, -c10, -c11)
        if which == 2:
            return TensorValue(self.p, c00, -c01, c10, -c11)
        raise ValueError("factor must be 1 or 2")

    def swap_factors(self):
        return TensorValue(self.p, self.c00, self.c10, self.c01, self.c11)

    def cap_abs_prec(self, k):
        return TensorValue(self.p, *(a.cap_abs_prec(k) for a in self.coords()))

    def is_alpha_tensor_alpha(self):
        """True when the 00/01/10 coordinates vanish to tracked precision."""
        return all(c.is_zero for c in (self.c00, self.c01, self.c10))

    def render(self):
        """Four digit strings, or the scalar * (sqrt(-1) (x) sqrt(-1)) form
        when only the alpha(x)alpha coordinate survives (p = 3 tables)."""
        if self.is_alpha_tensor_alpha() and not self.c11.is_zero:
            return "(%s)·(√−1⊗√−1)" % render_digits(self.c11)
        return " | ".join(render_digits(c) for c in self.coords())

    def __repr__(self):
        return "<TensorValue %s>" % self.render()


class IntegrandSpec:
    """Per-prime integration data: fixed points (tau, taubar) in the
    quadratic extension and the Tate period q."""

    def __init__(self, tau, taubar, q):
        if tau.b.is_zero:
            raise PlecticError("tau lies in P^1(Q_p); not in H_p")
        if taubar.b.is_zero:
            raise PlecticError("taubar lies in P^1(Q_p); not in H_p")
        qv = q.valuation()
        if not (0 < qv < float("inf")):
            raise InvalidPeriod("Tate period must have positive valuation")
        self.tau = tau
        self.taubar = taubar
        self.q = q

    def swap(self):
        return IntegrandSpec(self.taubar, self.tau, self.q)


def log_factor(t, spec):
    """log_q((t - tau)/(t - taubar)) at a sample point t of P^1(Q_p).

    t = infinity gives ratio 1, log 0."""
    if t is INFTY:
        zero = PadicNumber.zero(spec.tau.p)
        return QuadExtElement(zero, zero, spec.tau.d)
    tq = QuadExtElement.from_base(
        PadicNumber.from_rational(spec.tau.p, Fraction(t),
                                  max(spec.tau.a.prec, spec.tau.b.prec, 20)),
        spec.tau.d)
    ratio = (tq - spec.tau) / (tq - spec.taubar)
    return ratio.log_q(spec.q)


def _level_factor_table(p, m, spec, threads=1):
    """even-edge-key -> (log factor, sign) for the level-m outward edges."""
    edges = outward_level(p, m)
    reps = []
    for e in edges:
        if e.even:
            reps.append((e.key(), e, 1))
        else:
            reps.append((e.opposite().key(), e, -1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(lambda r: log_factor(r[1].sample_point(), spec),
                                 reps))
    else:
        vals = [log_factor(e.sample_point(), spec) for _, e, _ in reps]
    return {key: (val, sign) for (key, _, sign), val in zip(reps, vals)}


def riemann_log_integral(c, spec1, spec2, m=None, threads=1):
    """Sum of log_{q1}((t1-tau1)/(t1-taubar1)) (x) log_{q2}(...) * c(e1,e2)
    over the level-m partition squared.

    c is a two-tree PairCochain; m defaults to c.m.  The result's precision
    is the p-adic propagated precision; covering error is the caller's
    concern (empirically about m-2 digits for harmonic cochains)."""
    if m is None:
        m = c.m
    p = c.p
    t1 = _level_factor_table(p, m, spec1, threads)
    t2 = _level_factor_table(p, m, spec2, threads)
    total = TensorValue.zero(p)
    for key in sorted(c.values, key=repr):
        k1, k2 = key
        if k1 not in t1 or k2 not in t2:
            continue
        f1, s1 = t1[k1]
        f2, s2 = t2[k2]
        v = c.values[key] * s1 * s2
        if v:
            total = total + TensorValue.tensor(f1, f2).scale(v)
    return total


def mult_integral_single(c, x, y, m=None):
    """Single-prime multiplicative Riemann integral of f(t) = (t-x)/(t-y)
    against the measure of a FiniteCochain: product of f(t_e)^c(e) over the
    level-m partition.  x, y are QuadExtElement points of H_p."""
    if m is None:
        m = c.m
    p = c.p
    one = QuadExtElement.from_pair(p, 1, 0,
                                   max(x.a.prec, x.b.prec, 20), x.d)
    total = one
    for e in outward_level(p, m):
        v = c(e)
        if not v:
            continue
        t = e.sample_point()
        if t is INFTY:
            continue  # f(infinity) = 1 projectively
        tq = QuadExtElement.from_base(
            PadicNumber.from_rational(p, Fraction(t), max(x.a.prec, 20)), x.d)
        f = (tq - x) / (tq - y)
        total = total * f ** v
    return total


def _indistinguishable_to(x):
    """Exponent below which a PadicNumber is indistinguishable from 0:
    infinite for exact zero, the absolute precision for an inexact zero,
    the valuation for a certified nonzero."""
    if x.exact_zero:
        return float("inf")
    return x.val


def digit_agreement(a, b):
    """Exponent up to which two QuadExtElements agree (digits at exponents
    below the returned value coincide)."""
    d = a - b
    return min(_indistinguishable_to(d.a), _indistinguishable_to(d.b))


def tensor_digit_agreement(x, y):
    return min(_indistinguishable_to(a - b)
               for a, b in zip(x.coords(), y.coords()))


def coboundary_invariance_check(c, d_cochain, gpair, spec1, spec2, m=None):
    """Cap-product well-definedness: integrating c and c + (g*D - D) against
    a cycle whose tau's are fixed by g must agree.

    Returns a report dict with both values and the digit-agreement count."""
    from .cochain import coboundary
    shifted = c + coboundary(d_cochain, gpair)
    base = riemann_log_integral(c, spec1, spec2, m)
    moved = riemann_log_integral(shifted, spec1, spec2, m)
    return {
        "base": base,
        "shifted": moved,
        "agreement": tensor_digit_agreement(base, moved),
    }

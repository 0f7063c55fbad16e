"""The point side: Tate periods, split/non-split detection, the p-adic
elliptic logarithm over the quadratic extension, det_S and pi_S.

Normalization chain for the logarithm.  For a curve A/Q_p with
multiplicative reduction and Tate period q, the Tate parametrization
phi: Q_p^x / q^Z -> A(Q_p) rescales the invariant differential by a factor
mu with mu^2 = c6(A) c4(q) / (c4(A) c6(q)); the formal-group logarithm
lambda_A of the given model then satisfies

    log_q(u_P) = mu * lambda_A(t(kP)) / k

once k is a multiple of the order of the reduction quotient (we use
k = v(q) * (p^2 - 1) * p^a, valid over the unramified quadratic extension
without point counting).  Dividing by k lands on the log_q branch
automatically: u_{kP} is a 1-unit, so its Iwasawa log needs no branch
correction, and the period contribution q^j is divided away exactly.
The sign of mu is the canonical-root choice; all downstream comparisons
are up to sign.
"""

import math
from fractions import Fraction

from .errors import (InsufficientPrecision, NotASquare, NotMultiplicative,
                     PlecticError)
from .integrate import TensorValue
from .padic import PadicNumber, QuadExtElement, smallest_nonresidue


# -- q-expansion helpers (integer arithmetic modulo p^K) -------------------

def _sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def _qexp_eval(coeffs_fn, q_int, qval, p, K):
    """Sum_{n>=1} a_n q^n mod p^K for q = q_int (valuation qval >= 1)."""
    M = p ** K
    total = 0
    qn = 1
    n = 1
    while n * qval < K:
        qn = qn * q_int % M
        total = (total + coeffs_fn(n) * qn) % M
        n += 1
    return total


def eisenstein_c4(q_int, qval, p, K):
    """c4 of the Tate curve: E4(q) = 1 + 240 sum sigma3(n) q^n."""
    return (1 + 240 * _qexp_eval(lambda n: _sigma(3, n), q_int, qval, p, K)) % p ** K


def eisenstein_c6(q_int, qval, p, K):
    """c6 of the Tate curve: -E6(q) = -(1 - 504 sum sigma5(n) q^n)."""
    return (-(1 - 504 * _qexp_eval(lambda n: _sigma(5, n), q_int, qval, p, K))) % p ** K


def _weight_product(q_int, qval, p, K):
    """prod_{n>=1} (1 - q^n)^24 mod p^K."""
    M = p ** K
    total = 1
    qn = 1
    n = 1
    while n * qval < K:
        qn = qn * q_int % M
        total = total * pow(1 - qn, 24, M) % M
        n += 1
    return total


def tate_curve_coefficients(q, prec=None):
    """(a4, a6) of the Tate curve y^2 + xy = x^3 + a4 x + a6:
    a4 = -5 s3(q), a6 = -(5 s3(q) + 7 s5(q))/12, with the division by 12
    done coefficientwise in Z (the combination is integral)."""
    p = q.p
    qval = q.valuation()
    if prec is None:
        prec = int(q.abs_prec)
    K = prec
    M = p ** K
    q_int = q.lift() % M
    a4 = (-5 * _qexp_eval(lambda n: _sigma(3, n), q_int, qval, p, K)) % M
    a6 = _qexp_eval(lambda n: -(5 * _sigma(3, n) + 7 * _sigma(5, n)) // 12,
                    q_int, qval, p, K) % M
    return (PadicNumber(p, 0, a4, K) if a4 else PadicNumber.inexact_zero(p, K),
            PadicNumber(p, 0, a6, K) if a6 else PadicNumber.inexact_zero(p, K))


class LocalCurve:
    """Weierstrass curve over Q_p with multiplicative reduction.

    a-invariants are PadicNumber (already embedded); the standard
    b/c-invariants, discriminant and j are derived."""

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6
        self.p = a1.p
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3
              - a4 * a4)
        self.b2, self.b4, self.b6, self.b8 = b2, b4, b6, b8
        self.c4 = b2 * b2 - 24 * b4
        self.c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
        self.disc = (-(b2 * b2) * b8 - 8 * b4 ** 3 - 27 * b6 * b6
                     + 9 * b2 * b4 * b6)
        self.j = self.c4 ** 3 / self.disc

    @classmethod
    def from_field_curve(cls, ainvs, side):
        """Embed exact F-rational a-invariants through a PrimeSide."""
        return cls(*(side.embed(a) for a in ainvs))

    def require_multiplicative(self):
        if self.j.valuation() >= 0:
            raise NotMultiplicative("v(j) = %s >= 0" % self.j.valuation())
        if self.c4.valuation() != 0:
            raise NotMultiplicative("c4 not a unit; reduction not "
                                    "multiplicative on this model")

    # -- reduction type -------------------------------------------------

    def is_split(self):
        """Split multiplicative reduction: the tangent directions at the
        node of the reduced curve are rational over F_p.

        Works with the full tangent quadratic at the translated singular
        point (valid at p = 3 where c6 shortcuts fail)."""
        self.require_multiplicative()
        p = self.p
        a = [x.lift() % p if not x.is_zero else 0
             for x in (self.a1, self.a2, self.a3, self.a4, self.a6)]
        a1, a2, a3, a4, a6 = a

        def f(x, y):
            return (y * y + a1 * x * y + a3 * y
                    - x ** 3 - a2 * x * x - a4 * x - a6) % p

        def fx(x, y):
            return (a1 * y - 3 * x * x - 2 * a2 * x - a4) % p

        def fy(x, y):
            return (2 * y + a1 * x + a3) % p

        node = None
        for x0 in range(p):
            for y0 in range(p):
                if f(x0, y0) == 0 and fx(x0, y0) == 0 and fy(x0, y0) == 0:
                    node = (x0, y0)
                    break
            if node:
                break
        if node is None:
            raise NotMultiplicative("reduced curve is smooth (good reduction)")
        x0, _ = node
        # tangent cone at the node: Y^2 + a1 XY - (3 x0 + a2) X^2
        disc = (a1 * a1 + 4 * (3 * x0 + a2)) % p
        if disc == 0:
            raise NotMultiplicative("cusp: additive reduction")
        return pow(disc, (p - 1) // 2, p) == 1

    def reduction_type(self):
        try:
            return "split" if self.is_split() else "non-split"
        except NotMultiplicative:
            return "good"

    # -- group law (affine, general Weierstrass form) -------------------

    def _coeffs_ext(self, d):
        return [QuadExtElement.from_base(a, d)
                for a in (self.a1, self.a2, self.a3, self.a4, self.a6)]

    def on_curve(self, P, d=None):
        if P is None:
            return True
        x, y = P
        d = d if d is not None else x.d
        a1, a2, a3, a4, a6 = self._coeffs_ext(d)
        lhs = y * y + a1 * x * y + a3 * y
        rhs = x * x * x + a2 * x * x + a4 * x + a6
        return (lhs - rhs).is_zero

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        a1, a3 = self._coeffs_ext(x.d)[0], self._coeffs_ext(x.d)[2]
        return (x, -y - a1 * x - a3)

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        a1, a2, a3, a4, a6 = self._coeffs_ext(x1.d)
        if (x1 - x2).is_zero:
            if (y1 + y2 + a1 * x2 + a3).is_zero:
                return None
            lam = (3 * (x1 * x1) + 2 * (a2 * x1) + a4 - a1 * y1) \
                / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (x3, y3)

    def mul(self, n, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = None
        Q = P
        while n:
            if n & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            n >>= 1
        return R

    # -- formal group logarithm -----------------------------------------

    def formal_log_series(self, nterms):
        """Coefficients of lambda(t) = t + ... as PadicNumber, in
        t = -x/y; lambda'(t) = (-2s + t s') / (-2s + a1 t s + a3 t^3)
        where 1/s = w(t)/t^3 and w solves the Weierstrass recursion."""
        p = self.p
        L = nterms
        prec = min(int(a.abs_prec) for a in
                   (self.a1, self.a2, self.a3, self.a4, self.a6)
                   if not a.exact_zero) if any(
                       not a.exact_zero for a in
                       (self.a1, self.a2, self.a3, self.a4, self.a6)) else 40

        def pn(x):
            return PadicNumber.from_rational(p, x, prec)

        zero = PadicNumber.zero(p)
        one = pn(1)

        def ps_mul(u, v):
            out = [zero] * L
            for i, ui in enumerate(u):
                if ui.is_zero and ui.exact_zero:
                    continue
                for j, vj in enumerate(v):
                    if i + j >= L:
                        break
                    out[i + j] = out[i + j] + ui * vj
            return out

        def ps_add(u, v):
            return [a + b for a, b in zip(u, v)]

        def shift(u, n):
            return [zero] * n + u[:L - n]

        def scal(c, u):
            return [c * x for x in u]

        a1, a2, a3, a4, a6 = (self.a1, self.a2, self.a3, self.a4, self.a6)
        # h with w = t^3 (1 + h); iterate the Weierstrass recursion on
        # w-hat(t) = w / t^3:  wh = 1 + a1 t wh + a2 t^2 wh + a3 t^3 wh^2
        #                          + a4 t^4 wh^2 + a6 t^6 wh^3
        wh = [one] + [zero] * (L - 1)
        for _ in range(L):
            wh2 = ps_mul(wh, wh)
            wh3 = ps_mul(wh2, wh)
            new = [one] + [zero] * (L - 1)
            new = ps_add(new, scal(a1, shift(wh, 1)))
            new = ps_add(new, scal(a2, shift(wh, 2)))
            new = ps_add(new, scal(a3, shift(wh2, 3)))
            new = ps_add(new, scal(a4, shift(wh2, 4)))
            new = ps_add(new, scal(a6, shift(wh3, 6)))
            wh = new
        # s = 1 / wh  (unit constant term)
        s = [one / wh[0]] + [zero] * (L - 1)
        for n in range(1, L):
            acc = zero
            for i in range(1, n + 1):
                acc = acc + wh[i] * s[n - i]
            s[n] = -acc / wh[0]
        sprime = [s[n + 1] * (n + 1) for n in range(L - 1)] + [zero]
        num = ps_add(scal(pn(-2), s), shift(sprime, 1))
        den = ps_add(ps_add(scal(pn(-2), s), scal(a1, shift(s, 1))),
                     [zero] * 3 + [a3] + [zero] * (L - 4))
        # lambda' = num / den  (den has unit constant term -2 s0)
        lp = [num[0] / den[0]] + [zero] * (L - 1)
        for n in range(1, L):
            acc = num[n]
            for i in range(1, n + 1):
                acc = acc - den[i] * lp[n - i]
            lp[n] = acc / den[0]
        # integrate
        return [lp[n] / (n + 1) for n in range(L)]  # coeff of t^(n+1)

    def formal_log(self, t, nterms=None):
        """Evaluate lambda at t (QuadExtElement, v(t) >= 1)."""
        if t.valuation() < 1:
            raise InsufficientPrecision("point not in the formal disk")
        if nterms is None:
            nterms = int(min(t.a.abs_prec if not t.a.exact_zero else 40,
                             t.b.abs_prec if not t.b.exact_zero else 40)) + 4
        coeffs = self.formal_log_series(nterms)
        acc = QuadExtElement.from_pair(self.p, 0, 0, nterms + 4, t.d)
        tn = QuadExtElement.from_pair(self.p, 1, 0, nterms + 4, t.d)
        for c in coeffs:
            tn = tn * t
            acc = acc + tn * c
        return acc


def tate_period(curve, prec):
    """Invert j(q) = q^-1 + 744 + ... by fixed-point iteration on
    q = E4(q)^3 / (j * prod (1-q^n)^24)."""
    curve.require_multiplicative()
    p = curve.p
    j = curve.j
    h = -j.valuation()
    K = prec + h
    M = p ** K
    uj_inv = pow(j.unit, -1, M)
    q = p ** h * uj_inv % M
    for _ in range(K):
        e4 = eisenstein_c4(q, h, p, K)
        pr = _weight_product(q, h, p, K)
        q_new = pow(e4, 3, M) * p ** h % M * uj_inv % M * pow(pr, -1, M) % M
        if q_new == q:
            break
        q = q_new
    n = min(K - h, j.prec)
    return PadicNumber(p, h, q // p ** h, n)


def is_split(curve):
    return curve.is_split()


def elliptic_log(P, curve, q, target_prec=None):
    """log_q(u_P) for a point P = (x, y) with QuadExtElement coordinates
    (or None for the identity).  See the module docstring for the
    normalization."""
    p = curve.p
    if P is None:
        z = PadicNumber.zero(p)
        return QuadExtElement(z, z, smallest_nonresidue(p))
    qval = q.valuation()
    k = qval * (p * p - 1)
    Q = curve.mul(k, P)
    guard = 0
    while Q is not None:
        x, y = Q
        t = -x / y
        if t.valuation() >= 1:
            break
        Q = curve.mul(p, Q)
        k *= p
        guard += 1
        if guard > 40:
            raise InsufficientPrecision("point never entered the formal disk")
    if Q is None:
        z = PadicNumber.zero(p)
        return QuadExtElement(z, z, P[0].d)
    nterms = target_prec + 6 if target_prec else None
    lam = curve.formal_log(t, nterms)
    K = int(q.abs_prec)
    q_int = q.lift() % p ** K
    c4q_i = eisenstein_c4(q_int, qval, p, K)
    c6q_i = eisenstein_c6(q_int, qval, p, K)
    c4q = PadicNumber(p, 0, c4q_i, K)
    c6q = PadicNumber(p, 0, c6q_i, K)
    mu_sq = curve.c6 * c4q / (curve.c4 * c6q)
    d = P[0].d
    mu = QuadExtElement.from_base(mu_sq, d).sqrt()
    out = mu * lam
    return QuadExtElement(out.a / k, out.b / k, d)


# -- Tate parametrization series (oracle) ----------------------------------

def _s_k(k, q, prec):
    """s_k(q) = sum n^k q^n / (1 - q^n)."""
    p = q.p
    total = PadicNumber.zero(p)
    qn = PadicNumber.from_rational(p, 1, prec)
    n = 1
    while n * q.valuation() < prec:
        qn = qn * q
        total = total + (n ** k) * qn / (1 - qn)
        n += 1
    return total


def tate_point(u, q, prec):
    """(x(u, q), y(u, q)) on the Tate curve y^2 + xy = x^3 + a4 x + a6,
    for a unit u (PadicNumber or exact rational, u not 1 mod high power)."""
    p = q.p
    if not isinstance(u, PadicNumber):
        u = PadicNumber.from_rational(p, u, prec)
    one = PadicNumber.from_rational(p, 1, prec)
    uinv = one / u
    x = u / ((1 - u) * (1 - u)) - 2 * _s_k(1, q, prec)
    y = (u * u) / ((1 - u) ** 3) + _s_k(1, q, prec)
    qn = one
    n = 1
    while n * q.valuation() < prec:
        qn = qn * q
        for uu in (u, uinv):
            z = qn * uu
            x = x + z / ((1 - z) * (1 - z))
        y = y + (qn * u) ** 2 / ((1 - qn * u) ** 3)
        y = y - (qn * uinv) / ((1 - qn * uinv) ** 3)
        n += 1
    return x, y


def tate_curve(q, prec=None):
    """The Tate curve E_q as a LocalCurve."""
    p = q.p
    a4, a6 = tate_curve_coefficients(q, prec)
    one = PadicNumber.from_rational(p, 1, prec or int(q.abs_prec))
    zero = PadicNumber.zero(p)
    return LocalCurve(one, zero, zero, a4, a6)


# -- det_S and pi_S --------------------------------------------------------

def point_log(point, ainvs, side, prec):
    """log at one side: embed the curve and an E-rational point, then
    elliptic_log with that side's Tate period."""
    curve = LocalCurve.from_field_curve(ainvs, side)
    curve.require_multiplicative()
    q = tate_period(curve, prec)
    x, y = point
    P = (side.embed_E(x), side.embed_E(y))
    if not curve.on_curve(P):
        raise PlecticError("embedded point not on the embedded curve")
    return elliptic_log(P, curve, q, target_prec=prec)


def det_S(P1, P2, ainvs, side1, side2, prec):
    """log of det(iota_{p_i}(P_j)):
    tensor(log1(P1), log2(P2)) - tensor(log1(P2), log2(P1))."""
    l1p1 = point_log(P1, ainvs, side1, prec)
    l1p2 = point_log(P2, ainvs, side1, prec)
    l2p1 = point_log(P1, ainvs, side2, prec)
    l2p2 = point_log(P2, ainvs, side2, prec)
    return TensorValue.tensor(l1p1, l2p2) - TensorValue.tensor(l1p2, l2p1)


def pi_S(x, s_plus, s_minus):
    """Plectic projector at log level.

    At split primes log commutes with the partial Frobenius, so (1 - sigma*)
    becomes (1 - frobenius).  At non-split primes the Tate parameter of
    sigma(P) is sigma(u_P)^{-1}, so log of sigma* is -frobenius and
    (1 + sigma*) also becomes (1 - frobenius).  Either way every factor
    named in the pattern gets (1 - frobenius)."""
    out = x
    for which in sorted(set(s_plus) | set(s_minus)):
        out = out - out.frobenius_factor(which)
    return out

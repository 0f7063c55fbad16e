"""p-adic arithmetic with explicit precision tracking.

A nonzero element of Q_p is stored as p^v * u where u is a unit known
modulo p^N, so the element is known modulo p^(v+N).  Precision is absolute
and propagates through arithmetic the usual way: addition keeps the minimum
absolute precision, multiplication keeps the minimum relative precision.

Zero needs two flavours.  An *exact* zero (infinite precision) arises from
integer inputs; an *inexact* zero O(p^k) arises from cancellation and
remembers only its absolute precision k.
"""

from fractions import Fraction
import math
import re

from .errors import InsufficientPrecision, NotASquare, InvalidPeriod

INF = math.inf


def valuation_of_int(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation_of_rational(x, p):
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    return valuation_of_int(x.numerator, p) - valuation_of_int(x.denominator, p)


class PadicNumber:
    """Element of Q_p with tracked precision.

    Canonical form: either an exact zero, or an inexact zero O(p^k)
    (unit == 0, prec == 0, val == k), or p^val * unit with unit a unit
    modulo p^prec, 0 < unit < p^prec.
    """

    __slots__ = ("p", "val", "unit", "prec", "exact_zero")

    def __init__(self, p, val, unit, prec, _exact_zero=False):
        self.p = p
        if _exact_zero:
            self.exact_zero = True
            self.val = INF
            self.unit = 0
            self.prec = 0
            return
        self.exact_zero = False
        if prec <= 0:
            # nothing is known beyond O(p^(val+prec))
            self.val = val + prec
            self.unit = 0
            self.prec = 0
            return
        u = unit % (p ** prec)
        if u == 0:
            self.val = val + prec
            self.unit = 0
            self.prec = 0
            return
        s = valuation_of_int(u, p)
        if s >= prec:
            self.val = val + prec
            self.unit = 0
            self.prec = 0
            return
        self.val = val + s
        self.prec = prec - s
        self.unit = (u // (p ** s)) % (p ** self.prec)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, p):
        return cls(p, 0, 0, 0, _exact_zero=True)

    @classmethod
    def from_rational(cls, p, x, prec):
        """Embed an exact rational with `prec` digits of relative precision."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        v = valuation_of_rational(x, p)
        y = x / Fraction(p) ** v
        m = p ** prec
        u = (y.numerator % m) * pow(y.denominator % m, -1, m) % m
        return cls(p, v, u, prec)

    @classmethod
    def inexact_zero(cls, p, abs_prec):
        return cls(p, abs_prec, 0, 0)

    # -- predicates -----------------------------------------------------

    @property
    def is_zero(self):
        """True when the value is indistinguishable from zero."""
        return self.unit == 0

    @property
    def abs_prec(self):
        """The element is known modulo p^abs_prec."""
        if self.exact_zero:
            return INF
        return self.val + self.prec

    def valuation(self):
        """Certified valuation; raises on inexact zeros."""
        if self.exact_zero:
            return INF
        if self.unit == 0:
            raise InsufficientPrecision(
                "value is O(%d^%d); valuation not certified" % (self.p, self.val))
        return self.val

    def residue(self):
        """Leading digit (the unit's residue mod p)."""
        if self.is_zero:
            return 0
        return self.unit % self.p

    def lift(self):
        """Integer representative p^val * unit (valuation must be >= 0)."""
        if self.is_zero:
            return 0
        if self.val < 0:
            raise ValueError("negative valuation; no integer lift")
        return self.p ** self.val * self.unit

    def unit_part(self):
        if self.unit == 0:
            raise InsufficientPrecision("unit part of (apparent) zero")
        return PadicNumber(self.p, 0, self.unit, self.prec)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            prec = self.prec if self.prec > 0 else 1
            return PadicNumber.from_rational(self.p, other, max(prec, 32))
        if not isinstance(other, PadicNumber):
            return NotImplemented
        if other.p != self.p:
            raise ValueError("mixed primes %d and %d" % (self.p, other.p))
        return other

    def __add__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        a = self
        if a.exact_zero:
            return b
        if b.exact_zero:
            return a
        k = min(a.abs_prec, b.abs_prec)
        if a.unit == 0 and b.unit == 0:
            return PadicNumber.inexact_zero(a.p, k)
        m = min(a.val if a.unit else k, b.val if b.unit else k)
        n = k - m
        if n <= 0:
            return PadicNumber.inexact_zero(a.p, k)
        total = 0
        if a.unit:
            total += a.unit * a.p ** (a.val - m)
        if b.unit:
            total += b.unit * a.p ** (b.val - m)
        return PadicNumber(a.p, m, total, n)

    __radd__ = __add__

    def __neg__(self):
        if self.exact_zero:
            return self
        if self.unit == 0:
            return self
        return PadicNumber(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        a = self
        if a.exact_zero or b.exact_zero:
            return PadicNumber.zero(a.p)
        if a.unit == 0 or b.unit == 0:
            # O(p^j) * (p^v unit) = O(p^(j+v)); O * O keeps the sum
            return PadicNumber.inexact_zero(a.p, a.val + b.val)
        n = min(a.prec, b.prec)
        return PadicNumber(a.p, a.val + b.val, a.unit * b.unit, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        if b.exact_zero:
            raise ZeroDivisionError("p-adic division by exact zero")
        if b.unit == 0:
            raise InsufficientPrecision("division by O(%d^%d)" % (b.p, b.val))
        if self.exact_zero:
            return self
        if self.unit == 0:
            return PadicNumber.inexact_zero(self.p, self.val - b.val)
        n = min(self.prec, b.prec)
        inv = pow(b.unit, -1, self.p ** n)
        return PadicNumber(self.p, self.val - b.val, self.unit * inv, n)

    def __rtruediv__(self, other):
        b = self._check(other)
        if b is NotImplemented:
            return b
        return b / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            prec = self.prec if self.prec else 32
            return PadicNumber(self.p, 0, 1, prec)
        if n < 0:
            base = 1 / self
            n = -n
        else:
            base = self
        out = base
        for _ in range(n - 1):
            out = out * base
        return out

    def __eq__(self, other):
        """Agreement modulo p^min(abs_prec): indistinguishability."""
        b = self._check(other)
        if b is NotImplemented:
            return b
        d = self - b
        return d.is_zero

    def __hash__(self):
        raise TypeError("PadicNumber compares by indistinguishability; unhashable")

    def cap_abs_prec(self, k):
        """Forget digits at and above p^k (no-op if already coarser)."""
        if self.abs_prec <= k:
            return self
        if self.exact_zero or self.unit == 0:
            return PadicNumber.inexact_zero(self.p, k)
        return PadicNumber(self.p, self.val, self.unit, k - self.val)

    # -- structure ------------------------------------------------------

    def teichmuller(self):
        """Teichmuller lift of the leading digit, to this element's
        relative precision."""
        if self.is_zero:
            raise InsufficientPrecision("teichmuller of zero")
        m = self.p ** self.prec
        z = self.unit % m
        for _ in range(self.prec + 1):
            z = pow(z, self.p, m)
        return PadicNumber(self.p, 0, z, self.prec)

    def iwasawa_log(self):
        """Iwasawa branch logarithm: log(p) = 0, log of Teichmuller roots
        is 0, so log(x) = log(u / teich(u)) computed by the usual series."""
        if self.is_zero:
            raise InsufficientPrecision("log of zero")
        p = self.p
        u1 = self.unit_part() / self.teichmuller()
        z = u1 - 1
        target = self.prec  # absolute target precision of the result
        if z.is_zero:
            return PadicNumber.inexact_zero(p, z.abs_prec if z.abs_prec != INF else target)
        vz = z.valuation()
        acc = PadicNumber.zero(p)
        zk = PadicNumber.from_rational(p, 1, target + 8)
        k = 1
        while True:
            # tail bound: v(z^k / k) >= k*vz - floor(log_p k)
            if k * vz - int(math.log(k, p)) > target and k > 1:
                break
            zk = zk * z
            term = zk / k
            if k % 2 == 0:
                term = -term
            acc = acc + term
            k += 1
        return acc

    def sqrt(self):
        """Canonical square root by Hensel lifting (odd p).

        Of the two roots the one whose leading digit lies in
        {1, ..., (p-1)/2} is returned.  Raises NotASquare when the unit
        part is a non-residue, InsufficientPrecision on odd valuation of
        an inexact value.
        """
        p = self.p
        if p == 2:
            raise NotImplementedError("p = 2 square roots not supported")
        if self.exact_zero:
            return self
        if self.unit == 0:
            raise InsufficientPrecision("sqrt of O(p^k) value")
        if self.val % 2 != 0:
            raise NotASquare("odd valuation %d" % self.val)
        a = self.unit
        r0 = None
        for c in range(1, p):
            if (c * c - a) % p == 0:
                r0 = c
                break
        if r0 is None:
            raise NotASquare("unit %d is a non-residue mod %d" % (a % p, p))
        n = self.prec
        r = r0
        k = 1
        while k < n:
            k = min(2 * k, n)
            m = p ** k
            r = (r + (a % m) * pow(r, -1, m)) * pow(2, -1, m) % m
        if r % p > (p - 1) // 2:
            r = (-r) % (p ** n)
        return PadicNumber(p, self.val // 2, r, n)

    def log_q(self, q):
        """Branch of log with log(q) = 0:  log(x) - (v(x)/v(q)) * log(q)."""
        if not isinstance(q, PadicNumber):
            raise TypeError("period must be a PadicNumber")
        vq = q.valuation()
        if vq == INF or vq <= 0:
            raise InvalidPeriod("period must have positive valuation")
        vx = self.valuation()
        base = self.iwasawa_log()
        corr = q.iwasawa_log() * Fraction(vx, vq)
        return base - corr

    # -- rendering ------------------------------------------------------

    def digits(self):
        """List of (digit, exponent) pairs for the known digits."""
        if self.is_zero:
            return []
        out = []
        u = self.unit
        e = self.val
        while u:
            d = u % self.p
            if d:
                out.append((d, e))
            u //= self.p
            e += 1
        return out

    def __repr__(self):
        return "<%s mod %d^%s>" % (render_digits(self), self.p,
                                   self.abs_prec if self.abs_prec != INF else "oo")

    def __str__(self):
        return render_digits(self)


def render_digits(x):
    """Digit-string form  c0*p^v + c1*p^(v+1) + ... + O(p^k).

    Uses a middle dot between coefficient and power, caret exponents,
    and omits unit coefficients and ^1/^0 the way the tables print them.
    """
    if x.exact_zero:
        return "0"
    parts = []
    for d, e in x.digits():
        if e == 0:
            parts.append(str(d))
        elif e == 1:
            parts.append("%d" % x.p if d == 1 else "%d·%d" % (d, x.p))
        else:
            parts.append("%d^%d" % (x.p, e) if d == 1 else "%d·%d^%d" % (d, x.p, e))
    parts.append("O(%d^%d)" % (x.p, x.abs_prec))
    return " + ".join(parts)


_TERM_RE = re.compile(
    r"^\s*(?:(?P<c>-?\d+)\s*[·*]\s*)?(?P<p>\d+)(?:\^(?P<e>-?\d+))?\s*$")
_O_RE = re.compile(r"^\s*O\(\s*(?P<p>\d+)\^(?P<k>-?\d+)\s*\)\s*$")


def parse_digits(s, p=None):
    """Parse the digit-string format back into a PadicNumber.

    Accepts both the middle dot and '*' as the coefficient separator.
    A bare integer term is treated as digit * p^0.
    """
    s = s.strip()
    if s == "0":
        if p is None:
            raise ValueError("cannot infer prime from '0'")
        return PadicNumber.zero(p)
    terms = [t for t in s.split("+")]
    total = Fraction(0)
    prec = None
    seen_p = p
    for t in terms:
        m = _O_RE.match(t)
        if m:
            seen_p = int(m.group("p"))
            prec = int(m.group("k"))
            continue
        m = _TERM_RE.match(t)
        if not m:
            raise ValueError("bad term %r" % t)
        if m.group("e") is None and m.group("c") is None:
            # bare integer: digit at exponent 0
            total += int(m.group("p"))
            continue
        c = int(m.group("c") or 1)
        base = int(m.group("p"))
        e = int(m.group("e") or 1)
        seen_p = seen_p or base
        total += Fraction(c) * Fraction(base) ** e
    if seen_p is None:
        raise ValueError("cannot infer prime from %r" % s)
    if prec is None:
        raise ValueError("missing O(p^k) term in %r" % s)
    v = valuation_of_rational(total, seen_p) if total else prec
    return PadicNumber.from_rational(seen_p, total, max(prec - v, 1))


def smallest_nonresidue(p):
    """Canonical generator of the unramified quadratic extension: -1 when
    p = 3 mod 4, else the smallest positive quadratic non-residue."""
    if p % 4 == 3:
        return -1
    for d in range(2, p):
        if pow(d, (p - 1) // 2, p) == p - 1:
            return d
    raise ValueError("no non-residue found for p=%d" % p)


class QuadExtElement:
    """Element a + b*alpha of the unramified quadratic extension Q_p(alpha),
    alpha^2 = d with d a non-residue."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        if not isinstance(a, PadicNumber) or not isinstance(b, PadicNumber):
            raise TypeError("components must be PadicNumber")
        if a.p != b.p:
            raise ValueError("mixed primes")
        self.a = a
        self.b = b
        self.d = d

    @property
    def p(self):
        return self.a.p

    @classmethod
    def from_base(cls, x, d=None):
        if d is None:
            d = smallest_nonresidue(x.p)
        return cls(x, PadicNumber.zero(x.p), d)

    @classmethod
    def from_pair(cls, p, a, b, prec, d=None):
        if d is None:
            d = smallest_nonresidue(p)
        return cls(PadicNumber.from_rational(p, a, prec),
                   PadicNumber.from_rational(p, b, prec), d)

    def _coerce(self, other):
        if isinstance(other, QuadExtElement):
            if other.d != self.d or other.p != self.p:
                raise ValueError("mixed extensions")
            return other
        if isinstance(other, PadicNumber):
            return QuadExtElement.from_base(other, self.d)
        if isinstance(other, (int, Fraction)):
            prec = 32
            for c in (self.a, self.b):
                if c.prec:
                    prec = c.prec
                    break
            return QuadExtElement.from_pair(self.p, other, 0, prec, self.d)
        return NotImplemented

    @property
    def is_zero(self):
        return self.a.is_zero and self.b.is_zero

    def valuation(self):
        """min of the component valuations (the extension is unramified)."""
        va = self.a.valuation() if not self.a.is_zero else INF
        vb = self.b.valuation() if not self.b.is_zero else INF
        if va == INF and vb == INF:
            if self.a.exact_zero and self.b.exact_zero:
                return INF
            raise InsufficientPrecision("valuation of (apparent) zero")
        return min(va, vb)

    def frobenius(self):
        """a + b*alpha -> a - b*alpha (the nontrivial automorphism)."""
        return QuadExtElement(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - (self.b * self.b) * self.d

    def trace(self):
        return self.a + self.a

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a = self.a * o.a + (self.b * o.b) * self.d
        b = self.a * o.b + self.b * o.a
        return QuadExtElement(a, b, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        return QuadExtElement((self * o.frobenius()).a / n,
                              (self * o.frobenius()).b / n, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (1 / self) ** (-n)
        out = QuadExtElement.from_pair(self.p, 1, 0, 64, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self.a == o.a) and (self.b == o.b)

    def __hash__(self):
        raise TypeError("unhashable")

    def unit_part(self):
        v = self.valuation()
        if v == INF:
            raise InsufficientPrecision("unit part of zero")
        pv = PadicNumber.from_rational(self.p, Fraction(self.p) ** (-v), 64)
        return self * QuadExtElement.from_base(pv, self.d)

    def teichmuller(self):
        """Teichmuller representative: iterate z -> z^(p^2) to the fixed
        point of order dividing p^2 - 1."""
        u = self.unit_part()
        prec = max((c.abs_prec for c in (u.a, u.b) if c.abs_prec != INF),
                   default=32)
        prec = int(prec)
        z = u
        for _ in range(prec + 1):
            z = z ** (self.p * self.p)
        return z

    def iwasawa_log(self):
        """Iwasawa logarithm on the quadratic extension (log p = 0)."""
        u = self.unit_part()
        z = u / u.teichmuller() - 1
        if z.is_zero:
            k = min(z.a.abs_prec, z.b.abs_prec)
            zero = PadicNumber.inexact_zero(self.p, int(k) if k != INF else 64)
            return QuadExtElement(zero, PadicNumber.zero(self.p), self.d)
        vz = z.valuation()
        target = int(min(c.abs_prec for c in (u.a, u.b) if not c.exact_zero))
        acc = QuadExtElement.from_pair(self.p, 0, 0, target + 8, self.d)
        zk = QuadExtElement.from_pair(self.p, 1, 0, target + 8, self.d)
        k = 1
        while True:
            if k > 1 and k * vz - int(math.log(k, self.p)) > target:
                break
            zk = zk * z
            term = QuadExtElement(zk.a / k, zk.b / k, self.d)
            if k % 2 == 0:
                term = -term
            acc = acc + term
            k += 1
        return acc

    def log_q(self, q):
        """Branch with log(q) = 0 for a period q of positive valuation.

        q may be a PadicNumber or a QuadExtElement; the correction term is
        (v(x)/v(q)) * log(q)."""
        if isinstance(q, PadicNumber):
            q = QuadExtElement.from_base(q, self.d)
        vq = q.valuation()
        if vq == INF or vq <= 0:
            raise InvalidPeriod("period must have positive valuation")
        vx = self.valuation()
        lq = q.iwasawa_log()
        ratio = Fraction(vx) / Fraction(vq)
        corr = QuadExtElement(lq.a * ratio, lq.b * ratio, self.d)
        return self.iwasawa_log() - corr

    def sqrt(self):
        """Square root in the quadratic extension, canonical choice.

        For base elements of even valuation this defers to the base sqrt
        (taking alpha * sqrt(u/d) for non-residues).  General elements use
        the norm trick: if y^2 = x then y = a + b*alpha with
        a^2 = (x.a + sqrt(N(x))) / 2 for the right choice of sign."""
        p = self.p
        if self.is_zero:
            return self
        if self.b.is_zero:
            x = self.a
            if x.val % 2 != 0:
                raise NotASquare("odd valuation")
            try:
                return QuadExtElement.from_base(x.sqrt(), self.d)
            except NotASquare:
                # x = d * (x/d), and x/d is then a residue
                xd = x / PadicNumber.from_rational(p, self.d, x.prec)
                r = xd.sqrt()
                return QuadExtElement(PadicNumber.zero(p), r, self.d)
        n = self.norm()
        # try both signs of sqrt(norm); one makes (x.a + s)/2 a square
        s = n.sqrt()
        for sign in (1, -1):
            t = (self.a + s * sign) / 2
            try:
                a = t.sqrt()
            except NotASquare:
                continue
            if a.is_zero:
                continue
            b = self.b / (a * 2)
            cand = QuadExtElement(a, b, self.d)
            if (cand * cand) == self:
                return _canonical_quad_root(cand)
        raise NotASquare("no square root in the quadratic extension")

    def __repr__(self):
        return "(%s) + (%s)·α" % (self.a, self.b)


def _canonical_quad_root(y):
    """Of {y, -y} pick the one whose first nonzero leading digit (a first,
    then b) lies in {1, ..., (p-1)/2}."""
    p = y.p
    for comp in (y.a, y.b):
        if not comp.is_zero:
            if comp.residue() > (p - 1) // 2:
                return -y
            return y
    return y

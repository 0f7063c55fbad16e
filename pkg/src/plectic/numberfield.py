"""Real quadratic fields F = Q(sqrt(D)) and quadratic extensions E = F(sqrt(beta)).

Elements are exact (Fraction coordinates).  For D = 1 mod 4 the generator is
w = (1 + sqrt(D)) / 2 with w^2 = w + (D-1)/4, matching the integral basis the
curve models are written in; otherwise w = sqrt(D).

A `PrimeSide` fixes a rational prime p split in F together with a choice of
root of D in Q_p, i.e. one of the two primes of F above p.  Side 1 takes the
canonical square root (leading digit in the lower half); side 2 its negative,
so the two images of w always sum to 1 (resp. 0).
"""

from fractions import Fraction

from .errors import EmbeddingUnavailable, PrimeNotInert
from .padic import PadicNumber, QuadExtElement, smallest_nonresidue


class RealQuadraticField:
    """Q(sqrt(D)) for a squarefree positive non-square D."""

    def __init__(self, D):
        if D <= 1:
            raise ValueError("D must exceed 1")
        self.D = D
        self.mod4 = D % 4

    def __eq__(self, other):
        return isinstance(other, RealQuadraticField) and other.D == self.D

    def __hash__(self):
        return hash(("F", self.D))

    def __call__(self, x, y=0):
        return FieldElement(self, Fraction(x), Fraction(y))

    @property
    def w(self):
        return FieldElement(self, Fraction(0), Fraction(1))

    def gen_square(self):
        """(s, t) with w^2 = s + t*w."""
        if self.mod4 == 1:
            return Fraction(self.D - 1, 4), Fraction(1)
        return Fraction(self.D), Fraction(0)

    def __repr__(self):
        return "Q(sqrt(%d))" % self.D


class FieldElement:
    """x + y*w in a real quadratic field, exact coordinates."""

    __slots__ = ("field", "x", "y")

    def __init__(self, field, x, y):
        self.field = field
        self.x = Fraction(x)
        self.y = Fraction(y)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.x, -self.y)

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
        s, t = self.field.gen_square()
        yy = self.y * o.y
        return FieldElement(self.field,
                            self.x * o.x + s * yy,
                            self.x * o.y + self.y * o.x + t * yy)

    __rmul__ = __mul__

    def conjugate(self):
        """Galois conjugate: w -> 1 - w (D = 1 mod 4) or w -> -w."""
        if self.field.mod4 == 1:
            return FieldElement(self.field, self.x + self.y, -self.y)
        return FieldElement(self.field, self.x, -self.y)

    def norm(self):
        return (self * self.conjugate()).x

    def trace(self):
        return (self + self.conjugate()).x

    @property
    def is_zero(self):
        return self.x == 0 and self.y == 0

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        c = self.conjugate()
        return FieldElement(self.field, c.x / n, c.y / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElement(self.field, 1, 0)
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
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.field.D, self.x, self.y))

    def __repr__(self):
        if self.y == 0:
            return str(self.x)
        return "%s + %s*w" % (self.x, self.y)


class EFieldElement:
    """x + y*sqrt(beta) with x, y, beta in F.  Exact."""

    __slots__ = ("x", "y", "beta")

    def __init__(self, x, y, beta):
        if not isinstance(beta, FieldElement):
            raise TypeError("beta must be a FieldElement")
        self.beta = beta
        f = beta.field
        self.x = x if isinstance(x, FieldElement) else f(x)
        self.y = y if isinstance(y, FieldElement) else f(y)

    def _coerce(self, other):
        if isinstance(other, EFieldElement):
            if other.beta != self.beta:
                raise ValueError("mixed extensions")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return EFieldElement(other, 0, self.beta)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return EFieldElement(self.x + o.x, self.y + o.y, self.beta)

    __radd__ = __add__

    def __neg__(self):
        return EFieldElement(-self.x, -self.y, self.beta)

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
        return EFieldElement(self.x * o.x + self.beta * self.y * o.y,
                             self.x * o.y + self.y * o.x, self.beta)

    __rmul__ = __mul__

    def conjugate_E(self):
        """sqrt(beta) -> -sqrt(beta)."""
        return EFieldElement(self.x, -self.y, self.beta)

    def norm_to_F(self):
        return (self * self.conjugate_E()).x

    def inverse(self):
        n = self.norm_to_F()
        if n.is_zero:
            raise ZeroDivisionError("zero has no inverse")
        c = self.conjugate_E()
        return EFieldElement(c.x / n, c.y / n, self.beta)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y, hash(self.beta)))

    @property
    def is_zero(self):
        return self.x.is_zero and self.y.is_zero

    def __repr__(self):
        if self.y.is_zero:
            return repr(self.x)
        return "(%r) + (%r)*sqrt(beta)" % (self.x, self.y)


class PrimeSide:
    """A prime of F above a split rational prime p.

    `side` is 1 or 2; side 1 maps sqrt(D) to the canonical p-adic root,
    side 2 to its negative.  `prec` is the working relative precision for
    the embedding.
    """

    def __init__(self, field, p, side, prec=20):
        if side not in (1, 2):
            raise ValueError("side must be 1 or 2")
        self.field = field
        self.p = p
        self.side = side
        self.prec = prec
        D = PadicNumber.from_rational(p, field.D, prec)
        try:
            r = D.sqrt()
        except Exception as exc:
            raise EmbeddingUnavailable(
                "p=%d does not split in Q(sqrt(%d))" % (p, field.D)) from exc
        self.root = r if side == 1 else -r

    def other(self):
        return PrimeSide(self.field, self.p, 3 - self.side, self.prec)

    def embed(self, x):
        """Image of a FieldElement (or rational) in Q_p."""
        if isinstance(x, (int, Fraction)):
            return PadicNumber.from_rational(self.p, x, self.prec)
        if x.field != self.field:
            raise ValueError("element of a different field")
        if self.field.mod4 == 1:
            w_img = (self.root + 1) / 2
        else:
            w_img = self.root
        return (PadicNumber.from_rational(self.p, x.x, self.prec)
                + w_img * PadicNumber.from_rational(self.p, x.y, self.prec))

    def sqrt_beta(self, beta):
        """Canonical square root of beta's image in the unramified quadratic
        extension.  Raises PrimeNotInert when the image is already a square
        in Q_p (then p is not inert in E at this side)."""
        img = self.embed(beta)
        if img.valuation() % 2 == 0:
            try:
                img.unit_part().sqrt()
            except Exception:
                pass
            else:
                raise PrimeNotInert(
                    "beta is a square at side %d of p=%d" % (self.side, self.p))
        d = smallest_nonresidue(self.p)
        return QuadExtElement.from_base(img, d).sqrt()

    def embed_ext(self, u, v, beta):
        """Image of u + v*sqrt(beta) (u, v in F) in the quadratic extension."""
        sb = self.sqrt_beta(beta)
        d = sb.d
        return (QuadExtElement.from_base(self.embed(u), d)
                + QuadExtElement.from_base(self.embed(v), d) * sb)

    def embed_E(self, z):
        """Image of an EFieldElement in the quadratic extension of Q_p."""
        return self.embed_ext(z.x, z.y, z.beta)

    def __repr__(self):
        return "side %d of p=%d in %r" % (self.side, self.p, self.field)

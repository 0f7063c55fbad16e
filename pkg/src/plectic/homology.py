"""Cycle data and the end-to-end invariant.

The cycle attached to a fixture is ([tau1] - [taubar1]) (x) ([tau2] -
[taubar2]) (x) psi(u): per prime, the two fixed points of the Moebius action
of psi(u)'s image, which live in the quadratic extension exactly when the
characteristic polynomial stays irreducible p-adically.

plectic_invariant chains the stages: harmonize the cocycle at psi(u), build
per-prime integrand data (fixed points plus Tate periods), and integrate.
Stage failures are re-raised annotated with the stage name.
"""

from fractions import Fraction

from .bttree import moebius
from .errors import EmbeddingNotInert, PlecticError
from .harmonize import harmonize
from .integrate import IntegrandSpec, riemann_log_integral
from .padic import PadicNumber, QuadExtElement, smallest_nonresidue


def fixed_points(mat, p, prec, d=None):
    """The two fixed points of t -> (at+b)/(ct+d) in the quadratic
    extension, (tau, taubar) with tau carrying the canonical square root.

    Raises EmbeddingNotInert when the fixed points are rational (square
    discriminant, or c = 0) or lie in a ramified extension (odd
    discriminant valuation)."""
    (a, b), (c, dd) = (tuple(map(Fraction, row)) for row in mat)
    if d is None:
        d = smallest_nonresidue(p)
    if c == 0:
        raise EmbeddingNotInert("upper-triangular matrix fixes points of "
                                "P^1(Q_p)")
    disc = (a + dd) ** 2 - 4 * (a * dd - b * c)
    if disc == 0:
        raise EmbeddingNotInert("parabolic element: single rational fixed "
                                "point")
    z = QuadExtElement.from_base(PadicNumber.from_rational(p, disc, prec), d)
    try:
        s = z.sqrt()
    except PlecticError as exc:
        raise EmbeddingNotInert("discriminant has odd valuation: fixed "
                                "points ramified (%s)" % exc)
    if s.b.is_zero:
        raise EmbeddingNotInert("square discriminant: fixed points rational")
    two_c = QuadExtElement.from_base(PadicNumber.from_rational(p, 2 * c, prec), d)
    shift = QuadExtElement.from_base(PadicNumber.from_rational(p, a - dd, prec), d)
    tau = (shift + s) / two_c
    taubar = (shift - s) / two_c
    return tau, taubar


class CycleData:
    """Fixed points per prime plus the group element they come from."""

    def __init__(self, psi, tau1, taubar1, tau2, taubar2):
        self.psi = psi
        self.tau1 = tau1
        self.taubar1 = taubar1
        self.tau2 = tau2
        self.taubar2 = taubar2

    @classmethod
    def from_element(cls, g, p, prec, d=None):
        t1, tb1 = fixed_points(g.m1, p, prec, d)
        t2, tb2 = fixed_points(g.m2, p, prec, d)
        return cls(g, t1, tb1, t2, tb2)

    def verify(self, digits=3):
        """Re-check that the Moebius maps fix their tau's."""
        for mat, pts in ((self.psi.m1, (self.tau1, self.taubar1)),
                         (self.psi.m2, (self.tau2, self.taubar2))):
            (a, b), (c, d) = mat
            for t in pts:
                p = t.p
                prec = max(t.a.prec, t.b.prec, digits + 2)

                def lift(x):
                    return QuadExtElement.from_base(
                        PadicNumber.from_rational(p, Fraction(x), prec), t.d)

                # (a t + b) - t (c t + d) vanishes iff t is fixed
                defect = lift(a) * t + lift(b) - t * (lift(c) * t + lift(d))
                for coord in (defect.a, defect.b):
                    if not coord.is_zero and coord.valuation() < digits:
                        raise EmbeddingNotInert(
                            "fixed-point verification failed: defect %r"
                            % defect)


def plectic_invariant(fixture, m, prec, modulus_exp=None, specs=None,
                      threads=1, value_fn=None):
    """log of the plectic invariant: harmonized cochain at psi(u) integrated
    against the psi(u)-cycle.

    specs overrides the per-prime integrand data (required for synthetic
    fixtures without curve data).  Returns a dict with 'value' and per-stage
    diagnostics."""
    if modulus_exp is None:
        modulus_exp = prec + 1
    diagnostics = {}

    def stage(name, fn):
        try:
            return fn()
        except PlecticError as exc:
            raise type(exc)("[stage %s] %s" % (name, exc))

    g = fixture.psi_u
    if g is None:
        raise PlecticError("fixture carries no distinguished element psi(u)")

    result = stage("harmonize",
                   lambda: harmonize(fixture, m, modulus_exp, g=g,
                                     value_fn=value_fn))
    cochain = result["cochain"]
    diagnostics["solver"] = result["stats"]
    diagnostics["cochain_support"] = len(cochain.values)

    if specs is None:
        specs = stage("cycle", lambda: _field_specs(fixture, prec))
    spec1, spec2 = specs

    value = stage("integrate",
                  lambda: riemann_log_integral(cochain, spec1, spec2, m,
                                               threads=threads))
    diagnostics["value"] = value
    return diagnostics


def _field_specs(fixture, prec):
    """IntegrandSpec pair from a field fixture: Tate periods of the curve at
    the two primes above p and fixed points of psi(u)."""
    from .elliptic import LocalCurve, tate_period
    from .numberfield import PrimeSide, RealQuadraticField

    if fixture.field_disc is None or fixture.ainvs is None:
        raise PlecticError("fixture has no curve data; pass specs explicitly")
    field = RealQuadraticField(fixture.field_disc)
    p = fixture.p
    ainvs = [field(Fraction(x), Fraction(y)) for x, y in fixture.ainvs]
    specs = []
    for side, mat in ((1, fixture.psi_u.m1), (2, fixture.psi_u.m2)):
        ps = PrimeSide(field, p, side, prec)
        curve = LocalCurve.from_field_curve(ainvs, ps)
        curve.require_multiplicative()
        q = tate_period(curve, prec)
        tau, taubar = fixed_points(mat, p, prec)
        specs.append(IntegrandSpec(tau, taubar, q))
    return tuple(specs)

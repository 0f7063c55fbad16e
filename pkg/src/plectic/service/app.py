"""HTTP service exposing the invariant pipeline.

Thin wrappers: parse exact data out of the request models, call into the
library, serialize digit strings back.  Every domain failure surfaces as a
422 whose body names the error class, so clients can map it to an exit
code without string matching.
"""

from fractions import Fraction

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..bttree import Edge, edge_from_id, edge_id
from ..cochain import PairCochain, dirac_cochain, tensor_cochain
from ..elliptic import LocalCurve, det_S, pi_S, tate_period
from ..errors import PlecticError
from ..harmonize import harmonize
from ..homology import fixed_points, plectic_invariant
from ..integrate import (IntegrandSpec, TensorValue, riemann_log_integral,
                         tensor_digit_agreement)
from ..numberfield import EFieldElement, PrimeSide, RealQuadraticField
from ..padic import PadicNumber, parse_digits, render_digits
from .models import (CheckFixtureRequest, CheckFixtureResponse,
                     CompareRequest, CompareResponse, HarmonizeRequest,
                     HarmonizeResponse, IntegrateRequest, IntegrateResponse,
                     PlecticRequest, PlecticResponse, PointSideRequest,
                     PointSideResponse, TensorOut)
from ..shapiro import load_fixture

app = FastAPI(title="plectic", version="0.1.0")


@app.exception_handler(PlecticError)
def _domain_error(request, exc):
    return JSONResponse(status_code=422,
                        content={"error": type(exc).__name__,
                                 "message": str(exc)})


@app.exception_handler(FileNotFoundError)
def _missing_file(request, exc):
    return JSONResponse(status_code=404,
                        content={"error": "FileNotFound",
                                 "message": str(exc)})


# -- serialization helpers -------------------------------------------------

def _tensor_out(v):
    return TensorOut(p=v.p, coords=[render_digits(c) for c in v.coords()],
                     rendered=v.render())


def _field_elem(field, j):
    return field(Fraction(j.x), Fraction(j.y))


def _ext_elem(field, beta, j):
    return EFieldElement(_field_elem(field, j.a), _field_elem(field, j.b),
                         beta)


def _edge_key_id(p, key):
    return edge_id(Edge(p, key[0], key[2], key[1]))


def _cochain_entries(c):
    p = c.p
    return sorted((_edge_key_id(p, k1), _edge_key_id(p, k2), int(v))
                  for (k1, k2), v in c.values.items() if v)


# -- endpoints -------------------------------------------------------------

@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/check-fixture", response_model=CheckFixtureResponse)
def check_fixture(req: CheckFixtureRequest):
    fx = load_fixture(req.path, validate_depth=req.depth)
    return CheckFixtureResponse(
        ok=True, p=fx.p, m_max=fx.m_max,
        generators=sorted(fx.generators),
        radial_counts={"tree1_edges": len(fx.r1_edge),
                       "tree1_vertices": len(fx.r1_vertex),
                       "tree2_edges": len(fx.r2_edge),
                       "tree2_vertices": len(fx.r2_vertex)},
        has_curve_data=fx.field_disc is not None and fx.ainvs is not None)


@app.post("/harmonize", response_model=HarmonizeResponse)
def harmonize_endpoint(req: HarmonizeRequest):
    fx = load_fixture(req.fixture_path)
    g = None
    if req.element is not None:
        if req.element not in fx.generators:
            raise PlecticError("unknown generator %r" % req.element)
        g = fx.generators[req.element]
    result = harmonize(fx, req.depth, req.modulus_exp, g=g)
    cochain = result["cochain"]
    return HarmonizeResponse(
        support=len(cochain.values),
        entries=_cochain_entries(cochain),
        corrector_support=len(result["corrector"].values),
        solver=result["stats"])


@app.post("/integrate", response_model=IntegrateResponse)
def integrate_endpoint(req: IntegrateRequest):
    p = req.p
    specs = []
    for fs in (req.spec1, req.spec2):
        mat = [[Fraction(x) for x in row] for row in fs.matrix]
        tau, taubar = fixed_points(mat, p, req.prec)
        q = PadicNumber.from_rational(p, Fraction(fs.q), req.prec)
        specs.append(IntegrandSpec(tau, taubar, q))
    if (req.divisor1 is None) != (req.divisor2 is None):
        raise PlecticError("divisors must be given for both factors")
    if req.divisor1 is not None:
        if req.entries:
            raise PlecticError("give either divisors or entries, not both")

        def pt(s):
            return None if s == "inf" else Fraction(s)

        c = tensor_cochain(
            dirac_cochain(p, req.depth, pt(req.divisor1[0]),
                          pt(req.divisor1[1])),
            dirac_cochain(p, req.depth, pt(req.divisor2[0]),
                          pt(req.divisor2[1])))
    elif not req.entries:
        raise PlecticError("no cochain data: give divisors or entries")
    else:
        c = PairCochain(p, req.depth)
        for i1, i2, val in req.entries:
            # storage is on even edges; an odd edge means the flipped value
            # at its opposite
            sign, pair = 1, []
            for ident in (i1, i2):
                e = edge_from_id(p, ident)
                if not e.even:
                    e = e.opposite()
                    sign = -sign
                pair.append(e.key())
            k = tuple(pair)
            c.values[k] = c.values.get(k, 0) + sign * int(val)
    value = riemann_log_integral(c, specs[0], specs[1], req.depth,
                                 threads=req.threads)
    return IntegrateResponse(value=_tensor_out(value))


@app.post("/point-side", response_model=PointSideResponse)
def point_side(req: PointSideRequest):
    field = RealQuadraticField(req.field_disc)
    beta = _field_elem(field, req.beta)
    ainvs = [_field_elem(field, j) for j in req.ainvs]
    if len(ainvs) != 5:
        raise PlecticError("expected 5 a-invariants, got %d" % len(ainvs))
    if len(req.points) != 2:
        raise PlecticError("expected 2 points, got %d" % len(req.points))
    pts = [(_ext_elem(field, beta, P.x), _ext_elem(field, beta, P.y))
           for P in req.points]
    side1 = PrimeSide(field, req.p, 1, req.prec)
    side2 = PrimeSide(field, req.p, 2, req.prec)
    split, qvals = [], []
    for side in (side1, side2):
        curve = LocalCurve.from_field_curve(ainvs, side)
        curve.require_multiplicative()
        split.append(curve.is_split())
        qvals.append(tate_period(curve, req.prec).valuation())
    raw = det_S(pts[0], pts[1], ainvs, side1, side2, req.prec)
    s_plus = [i for i, s in enumerate(split, start=1) if s]
    s_minus = [i for i, s in enumerate(split, start=1) if not s]
    value = pi_S(raw, s_plus, s_minus)
    return PointSideResponse(value=_tensor_out(value), split=split,
                             tate_valuations=qvals)


@app.post("/plectic", response_model=PlecticResponse)
def plectic_endpoint(req: PlecticRequest):
    fx = load_fixture(req.fixture_path)
    diag = plectic_invariant(fx, req.depth, req.prec,
                             modulus_exp=req.modulus_exp,
                             threads=req.threads)
    return PlecticResponse(value=_tensor_out(diag["value"]),
                           cochain_support=diag["cochain_support"],
                           solver=diag["solver"])


# -- comparison up to symmetry ---------------------------------------------

def _parse_tensor(p, coords):
    if len(coords) != 4:
        raise PlecticError("a tensor value needs 4 coordinates")
    c = [parse_digits(s, p) for s in coords]
    return TensorValue(p, c[0], c[1], c[2], c[3])


def symmetry_orbit(v):
    """The 16 images of v under global sign, factor swap and per-factor
    conjugation, with a printable description of each transform."""
    out = []
    for swap in (False, True):
        base = v.swap_factors() if swap else v
        for f1 in (False, True):
            w1 = base.frobenius_factor(1) if f1 else base
            for f2 in (False, True):
                w2 = w1.frobenius_factor(2) if f2 else w1
                for sign in (1, -1):
                    w = w2 if sign == 1 else -w2
                    tags = [t for t, on in (("swap", swap), ("conj1", f1),
                                            ("conj2", f2),
                                            ("-1", sign < 0)) if on]
                    out.append((w, "·".join(tags) or "id"))
    return out


def best_symmetry_agreement(a, b):
    """Max digit agreement of a against the symmetry orbit of b."""
    best, how = None, "id"
    for w, tag in symmetry_orbit(b):
        d = tensor_digit_agreement(a, w)
        if best is None or d > best:
            best, how = d, tag
    return best, how


@app.post("/compare", response_model=CompareResponse)
def compare(req: CompareRequest):
    a = _parse_tensor(req.p, req.a)
    b = _parse_tensor(req.p, req.b)
    best, how = best_symmetry_agreement(a, b)
    agreement = None if best == float("inf") else int(best)
    matched = None
    if req.digits is not None:
        matched = best >= req.digits
    return CompareResponse(agreement=agreement, transform=how,
                           matched=matched)

"""Request/response schemas for the HTTP surface.

All exact quantities travel as strings ("a/b" rationals) so nothing is
rounded in transit; p-adic outputs travel as digit strings in the same
format the tables print.
"""

from typing import List, Optional, Tuple

from pydantic import BaseModel


class FieldElemIn(BaseModel):
    """x + y*w in the real quadratic field, rational coordinates."""
    x: str = "0"
    y: str = "0"


class ExtElemIn(BaseModel):
    """a + b*sqrt(beta) with a, b in F."""
    a: FieldElemIn
    b: FieldElemIn = FieldElemIn()


class PointIn(BaseModel):
    x: ExtElemIn
    y: ExtElemIn


class TensorOut(BaseModel):
    """A value of Q_p^2 (x) Q_p^2: four digit strings on the basis
    1(x)1, 1(x)a, a(x)1, a(x)a, plus the compact rendering."""
    p: int
    coords: List[str]
    rendered: str


class CheckFixtureRequest(BaseModel):
    path: str
    depth: int = 2


class CheckFixtureResponse(BaseModel):
    ok: bool
    p: int
    m_max: int
    generators: List[str]
    radial_counts: dict
    has_curve_data: bool


class HarmonizeRequest(BaseModel):
    fixture_path: str
    depth: int
    modulus_exp: int
    element: Optional[str] = None  # generator id; default psi(u)


class HarmonizeResponse(BaseModel):
    support: int
    entries: List[Tuple[str, str, int]]  # (edge1 id, edge2 id, value)
    corrector_support: int
    solver: dict


class FactorSpecIn(BaseModel):
    """One integration factor: tau, taubar are the fixed points of the
    matrix; q is the rational Tate parameter."""
    matrix: List[List[str]]
    q: str


class IntegrateRequest(BaseModel):
    """Either a pair of degree-zero divisors (x) - (y) on P^1 ("inf"
    allowed), whose harmonic dirac cochains are tensored, or explicit
    entries supported at the integration depth."""
    p: int = 3
    depth: int
    prec: int
    threads: int = 1
    spec1: FactorSpecIn
    spec2: FactorSpecIn
    divisor1: Optional[Tuple[str, str]] = None
    divisor2: Optional[Tuple[str, str]] = None
    entries: Optional[List[Tuple[str, str, int]]] = None


class IntegrateResponse(BaseModel):
    value: TensorOut


class PointSideRequest(BaseModel):
    field_disc: int
    p: int = 3
    beta: FieldElemIn
    ainvs: List[FieldElemIn]
    points: List[PointIn]
    prec: int = 16


class PointSideResponse(BaseModel):
    value: TensorOut
    split: List[bool]  # reduction type at side 1, side 2
    tate_valuations: List[int]


class PlecticRequest(BaseModel):
    fixture_path: str
    depth: int
    prec: int
    modulus_exp: Optional[int] = None
    threads: int = 1


class PlecticResponse(BaseModel):
    value: TensorOut
    cochain_support: int
    solver: dict


class CompareRequest(BaseModel):
    p: int = 3
    a: List[str]
    b: List[str]
    digits: Optional[int] = None


class CompareResponse(BaseModel):
    agreement: Optional[int]  # None means the values are indistinguishable
    transform: str
    matched: Optional[bool]  # set when a digit threshold was requested


class ErrorBody(BaseModel):
    error: str
    message: str

#!/usr/bin/env python3
"""Regenerate the synthetic fixtures under fixtures/ and sanity-check the
golden files against a fresh computation.

The request payloads (curve_37_63_2d1_instance*.json, the integrate
example) are hand-written data and are left alone; this script rebuilds
everything that is derived from code (synthetic radial systems, the demo
fixture, the backend dump consumed by the exporter) and recomputes the
golden values so drift is caught at generation time rather than in CI.

Usage: python3 scripts/make_fixtures.py [--check-only]
"""

import argparse
import json
import os
import sys

FIXDIR = os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), "fixtures")

DEMO_CURVE = {
    "field_disc": 37,
    "beta": ["62", "-21"],
    "ainvs": [["1", "0"], ["0", "1"], ["1", "0"], ["1", "1"], ["2", "0"]],
    "expected": {"log_S": "2·3^2 + 3^6 + O(3^7)"},
}


def make_synthetic(path, seed, kappa_zero):
    from plectic.shapiro import make_synthetic_fixture, save_fixture
    fx = make_synthetic_fixture(3, 3, seed=seed, kappa_zero=kappa_zero)
    save_fixture(fx, path)
    return fx


def make_demo(path):
    """Zero-kappa synthetic radial systems + the 37.63-2d1 curve data and
    an inert psi_u, so the whole pipeline runs end to end on it."""
    from plectic.shapiro import (GroupElement, make_synthetic_fixture,
                                 save_fixture)
    fx = make_synthetic_fixture(3, 3, seed=11, kappa_zero=True)
    psi = GroupElement(((0, -1), (1, 0)), ((1, -1), (1, 1)),
                       word=(("psi", 1),))
    fx.generators["psi"] = psi
    fx.oracle.atom_values["psi"] = 0
    fx.psi_u = psi
    fx.field_disc = DEMO_CURVE["field_disc"]
    fx.beta = DEMO_CURVE["beta"]
    fx.ainvs = DEMO_CURVE["ainvs"]
    fx.expected = DEMO_CURVE["expected"]
    save_fixture(fx, path)
    return fx


def make_backend_dump(path):
    """Input file for the exporter: the same group data as the demo
    fixture, in the raw shape a computer-algebra backend run would hand
    over (no schema_version, provenance fields at top level)."""
    demo_path = os.path.join(FIXDIR, "curve_p3_m3_demo.json")
    with open(demo_path) as fh:
        doc = json.load(fh)
    dump = {
        "backend": "synthetic",
        "backend_version": "0",
        "curve_label": "37.63-2d1",
        "seed": 11,
        "p": doc["p"],
        "m_max": doc["m_max"],
        "field": doc["field"],
        "beta": doc["beta"],
        "ainvs": doc["ainvs"],
        "expected": doc["expected"],
        "generators": doc["generators"],
        "psi_u": doc["psi_u"],
        "radials": doc["radials"],
        "kappa_atoms": doc["kappa_atoms"],
    }
    with open(path, "w") as fh:
        json.dump(dump, fh, indent=1, sort_keys=True)


def check_goldens():
    """Recompute the stored golden values through the service layer."""
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient
    from plectic.service import app
    client = TestClient(app)
    failures = 0
    for req, gold in (("curve_37_63_2d1_instance1.json",
                       "golden_point_side_instance1.json"),
                      ("curve_37_63_2d1_instance2.json",
                       "golden_point_side_instance2.json")):
        payload = json.load(open(os.path.join(FIXDIR, req)))
        golden = json.load(open(os.path.join(FIXDIR, gold)))
        r = client.post("/point-side", json=payload)
        if r.status_code != 200:
            print("FAIL %s: %s" % (req, r.text))
            failures += 1
            continue
        cmp = client.post("/compare", json={
            "p": 3, "a": r.json()["value"]["coords"], "b": golden["coords"],
            "digits": golden["digits"]}).json()
        status = "ok" if cmp["matched"] else "FAIL"
        failures += 0 if cmp["matched"] else 1
        print("%s %s vs %s: agreement=%s transform=%s"
              % (status, req, gold, cmp["agreement"], cmp["transform"]))

    # Tate period golden: recompute at two precisions
    from fractions import Fraction

    from plectic.elliptic import LocalCurve, tate_period
    from plectic.numberfield import (FieldElement, PrimeSide,
                                     RealQuadraticField)
    from plectic.padic import render_digits
    golden = json.load(open(os.path.join(
        FIXDIR, "golden_tate_q_37_63_2d1_side1.json")))
    F = RealQuadraticField(37)
    ainvs = [FieldElement(F, Fraction(x), Fraction(y))
             for x, y in DEMO_CURVE["ainvs"]]
    qs = []
    for prec in (14, 22):
        curve = LocalCurve.from_field_curve(ainvs, PrimeSide(F, 3, 1, prec))
        qs.append(tate_period(curve, prec))
    lo = render_digits(qs[0].cap_abs_prec(12))
    hi = render_digits(qs[1].cap_abs_prec(12))
    ok = lo == hi == golden["q"]
    print("%s tate period side 1: %s" % ("ok" if ok else "FAIL", lo))
    return failures + (0 if ok else 1)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check-only", action="store_true",
                    help="only verify goldens, do not rewrite fixtures")
    args = ap.parse_args(argv)

    if not args.check_only:
        make_synthetic(os.path.join(FIXDIR, "synthetic_p3_m3.json"),
                       seed=7, kappa_zero=False)
        make_synthetic(os.path.join(FIXDIR, "synthetic_p3_m3_zero.json"),
                       seed=7, kappa_zero=True)
        make_demo(os.path.join(FIXDIR, "curve_p3_m3_demo.json"))
        make_backend_dump(os.path.join(FIXDIR,
                                       "backend_dump_37_63_2d1.json"))
        print("fixtures rewritten")
    sys.exit(1 if check_goldens() else 0)


if __name__ == "__main__":
    main()

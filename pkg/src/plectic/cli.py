"""Command-line client.

All computation happens behind the HTTP surface; this module only builds
request payloads, prints responses and maps error classes to exit codes.
By default the service runs in-process, --server points it at a remote
instance instead.

Golden files are JSON documents {"p": 3, "coords": [four digit strings],
"digits": n}: a computed value matches its golden when the best agreement
over the 16-element symmetry group (global sign, factor swap, per-factor
conjugation) reaches the stated digit count.
"""

import argparse
import json
import sys

import httpx

EXIT_CODES = {
    "SchemaError": 2,
    "RadialContractViolation": 3,
    "OracleIncomplete": 4,
    "DepthExceeded": 5,
    "DegenerationUnderdetermined": 6,
    "LiftInconsistent": 7,
    "EmbeddingNotInert": 8,
    "EmbeddingUnavailable": 8,
    "PrimeNotInert": 8,
    "NotMultiplicative": 9,
    "InsufficientPrecision": 10,
    "FileNotFound": 11,
}
EXIT_GOLDEN_MISMATCH = 12


def make_client(server=None):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    # in-process: the ASGI app served through a test transport
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app
    return TestClient(app)


def post(client, path, payload):
    try:
        r = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        print(json.dumps({"error": "ConnectionError", "message": str(exc)}),
              file=sys.stderr)
        sys.exit(1)
    if r.status_code >= 400:
        try:
            body = r.json()
        except ValueError:
            body = {"error": "HTTPError", "message": r.text}
        print(json.dumps(body), file=sys.stderr)
        sys.exit(EXIT_CODES.get(body.get("error"), 1))
    return r.json()


def emit(args, result, human):
    if args.emit_json:
        print(json.dumps(result, indent=1, sort_keys=True))
    else:
        print(human)


def check_golden(client, args, value):
    """Compare a computed TensorOut against args.golden; exits nonzero on
    a mismatch."""
    if not args.golden:
        return
    with open(args.golden) as fh:
        golden = json.load(fh)
    digits = getattr(args, "digits", None) or golden.get("digits")
    res = post(client, "/compare", {
        "p": value["p"], "a": value["coords"], "b": golden["coords"],
        "digits": digits})
    line = "golden: agreement=%s transform=%s" % (res["agreement"],
                                                  res["transform"])
    if res["matched"] is False:
        print(line + " MISMATCH (wanted %s digits)" % digits,
              file=sys.stderr)
        sys.exit(EXIT_GOLDEN_MISMATCH)
    print(line)


# -- subcommands -----------------------------------------------------------

def cmd_check_fixture(client, args):
    res = post(client, "/check-fixture", {"path": args.fixture,
                                          "depth": args.depth})
    counts = res["radial_counts"]
    emit(args, res,
         "ok: p=%d m_max=%d generators=%s radials=%s curve_data=%s"
         % (res["p"], res["m_max"], ",".join(res["generators"]) or "-",
            "/".join(str(counts[k]) for k in sorted(counts)),
            res["has_curve_data"]))


def cmd_harmonize(client, args):
    res = post(client, "/harmonize", {
        "fixture_path": args.fixture, "depth": args.depth,
        "modulus_exp": args.prec, "element": args.element})
    emit(args, res,
         "harmonic cochain: support=%d corrector_support=%d pivots=%d"
         % (res["support"], res["corrector_support"],
            res["solver"].get("pivots", 0)))


def cmd_integrate(client, args):
    with open(args.spec) as fh:
        payload = json.load(fh)
    if args.threads is not None:
        payload["threads"] = args.threads
    res = post(client, "/integrate", payload)
    emit(args, res, res["value"]["rendered"])
    check_golden(client, args, res["value"])


def cmd_point_side(client, args):
    with open(args.curve) as fh:
        payload = json.load(fh)
    if args.prec is not None:
        payload["prec"] = args.prec
    res = post(client, "/point-side", payload)
    emit(args, res, res["value"]["rendered"])
    check_golden(client, args, res["value"])


def cmd_plectic(client, args):
    res = post(client, "/plectic", {
        "fixture_path": args.fixture, "depth": args.depth,
        "prec": args.prec, "threads": args.threads})
    emit(args, res, res["value"]["rendered"])
    check_golden(client, args, res["value"])


def cmd_compare(client, args):
    def load(path):
        with open(path) as fh:
            return json.load(fh)

    a, b = load(args.a), load(args.b)
    res = post(client, "/compare", {
        "p": a.get("p", 3), "a": a["coords"], "b": b["coords"],
        "digits": args.digits})
    emit(args, res, "agreement=%s transform=%s"
         % (res["agreement"], res["transform"]))
    if res["matched"] is False:
        sys.exit(1)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="plectic",
        description="plectic p-adic invariants of modular elliptic curves")
    ap.add_argument("--server", default=None,
                    help="base URL of a running service "
                         "(default: in-process)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--emit-json", action="store_true",
                        help="print the full response as JSON")

    sp = sub.add_parser("check-fixture", help="validate a fixture file")
    sp.add_argument("--fixture", required=True)
    sp.add_argument("--depth", type=int, default=2,
                    help="radial-contract check depth")
    common(sp)
    sp.set_defaults(fn=cmd_check_fixture)

    sp = sub.add_parser("harmonize",
                        help="harmonic cochain for a fixture's cocycle")
    sp.add_argument("--fixture", required=True)
    sp.add_argument("--depth", type=int, required=True,
                    help="covering depth m")
    sp.add_argument("--prec", type=int, required=True,
                    help="work modulo p^prec")
    sp.add_argument("--element", default=None,
                    help="generator id (default: the distinguished element)")
    common(sp)
    sp.set_defaults(fn=cmd_harmonize)

    sp = sub.add_parser("integrate",
                        help="Riemann-sum log integral of a cochain")
    sp.add_argument("--spec", required=True,
                    help="JSON file with the integration request")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--golden", default=None)
    sp.add_argument("--digits", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_integrate)

    sp = sub.add_parser("point-side",
                        help="pi_S(det_S) of two global points")
    sp.add_argument("--curve", required=True,
                    help="JSON file with field, curve and point data")
    sp.add_argument("--prec", type=int, default=None)
    sp.add_argument("--golden", default=None)
    sp.add_argument("--digits", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_point_side)

    sp = sub.add_parser("plectic",
                        help="end-to-end invariant for a fixture")
    sp.add_argument("--fixture", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--prec", type=int, required=True)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--golden", default=None)
    sp.add_argument("--digits", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=cmd_plectic)

    sp = sub.add_parser("compare",
                        help="digit agreement of two values up to symmetry")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--digits", type=int, default=None,
                    help="required agreement; exit 1 below it")
    common(sp)
    sp.set_defaults(fn=cmd_compare)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    client = make_client(args.server)
    try:
        args.fn(client, args)
    finally:
        client.close()


if __name__ == "__main__":
    main()

"""Command-line front end: states, spectra, correlators, probabilities, and
the verification suites, with CSV/JSON output suitable for regenerating every
reported number."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__, cgproj, suites, transfercorr, vbsstate
from .qnum import parse_q


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _strip_elapsed(obj):
    if isinstance(obj, dict):
        return {k: _strip_elapsed(v) for k, v in obj.items() if k != "elapsed_s"}
    if isinstance(obj, list):
        return [_strip_elapsed(v) for v in obj]
    return obj


def _json_text(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def cmd_state(args):
    q0 = parse_q(args.q)
    if args.bc == "pbc":
        st = vbsstate.build_pbc(args.spin, args.length)
    else:
        st = vbsstate.build_open(args.spin, args.length, args.p1, args.p2)
    source = "chain_state_%s" % args.bc
    if args.exact:
        payload = {
            "spin": args.spin,
            "length": args.length,
            "bc": args.bc,
            "source": source,
            "amplitude_convention": "monomial gauge; physical amplitude is "
                                    "value * sqrt(prod_l [S+m_l]! [S-m_l]!) "
                                    "* prefactor",
            "prefactor": str(st.prefactor),
            "amplitudes": {
                ";".join(str(m) for m in k): v.to_json_obj()
                for k, v in sorted(st.amps.items())
            },
        }
        if args.bc == "open":
            payload["p1"], payload["p2"] = args.p1, args.p2
        _emit(_json_text(payload), args.output)
        return 0
    rows = []
    for k in sorted(st.amps):
        val = st.spin_amplitude(k).eval_float(q0)
        rows.append([";".join(str(m) for m in k), repr(val), source])
    _emit(_csv_text(["m", "value", "source"], rows), args.output)
    return 0


def cmd_eigenvalues(args):
    q0 = parse_q(args.q)
    es = transfercorr.eigensystem(transfercorr.transfer_matrix(args.spin, q0))
    payload = {
        "spin": args.spin,
        "q": str(q0),
        "eigenvalues": [float(v) for v in es.eigenvalues],
        "degeneracies": [m for _, m in es.groups],
        "group_values": [v for v, _ in es.groups],
        "conjecture_match": None,
        "source": "transfer_matrix_spectrum",
    }
    if args.check_conjecture:
        payload["conjecture_match"] = transfercorr.conjecture_check(
            args.spin, q0)["match"]
    if args.exact:
        payload["exact_closed_form"] = [
            transfercorr.conjectured_eigenvalue(args.spin, l).to_json_obj()
            for l in range(args.spin + 1)
        ]
    _emit(_json_text(payload), args.output)
    return 0


def cmd_correlator(args):
    q0 = parse_q(args.q)
    if args.op != "sz":
        raise ValueError("only the sz correlator is implemented")
    if args.r_min < 2:
        raise ValueError("r starts at 2")
    if args.r_max < args.r_min:
        raise ValueError("empty r range")
    rows = []
    closed_available = args.mode == "thermo" and args.spin in (2, 3)
    for r in range(args.r_min, args.r_max + 1):
        if args.mode == "thermo":
            val = transfercorr.two_point_thermo("sz", "sz", args.spin, q0, r)
            source = "two_point_spectral_thermo"
        else:
            if not args.length:
                raise ValueError("finite mode needs --length")
            val = transfercorr.two_point_finite(
                "sz", "sz", args.spin, q0, args.length, r)
            source = "two_point_trace_finite"
        if closed_available:
            cf = transfercorr.closed_form_szsz(args.spin, q0, r)
            rows.append([r, repr(val), repr(cf), repr(abs(val - cf)), source])
        else:
            rows.append([r, repr(val), "", "", source])
    _emit(_csv_text(["r", "value", "closed_form_value", "abs_diff", "source"],
                    rows), args.output)
    return 0


def cmd_prob(args):
    q0 = parse_q(args.q)
    probs = transfercorr.sz_distribution(args.spin, q0)
    rows = [[m, repr(p), "sz_probability_thermo"]
            for m, p in zip(range(-args.spin, args.spin + 1), probs)]
    _emit(_csv_text(["m", "probability", "source"], rows), args.output)
    return 0


def cmd_verify(args):
    if args.suite == "divisibility" and args.spin is not None:
        items = cgproj.check_divisibility(args.spin)
        payload = {"suite": "divisibility", "items": items,
                   "passed": all(r["remainder_zero"] for r in items),
                   "source": "bond_product_divisibility"}
    else:
        fn = suites.SUITE_BY_NAME.get(args.suite)
        if fn is None:
            raise ValueError("unknown suite %r; choose from %s" % (
                args.suite, ", ".join(sorted(suites.SUITE_BY_NAME))))
        rep = fn(seed=args.seed) if fn is suites.suite_ground_state else fn()
        payload = _strip_elapsed(rep)
    _emit(_json_text(payload), args.output)
    return 0 if payload["passed"] else 1


def cmd_reproduce(args):
    rep = suites.run_acceptance(
        seed=args.seed,
        progress=lambda line: print(line, file=sys.stderr))
    payload = _strip_elapsed(rep)
    out = args.output or "qvbs_reproduce_paper.json"
    _emit(_json_text(payload), out)
    for item in rep["items"]:
        print("criterion %d %-26s %s" % (
            item["criterion"], item["id"],
            "PASS" if item["passed"] else "FAIL"))
    print("report written to %s" % out)
    return 0 if rep["passed"] else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="qvbs",
        description="deformed valence-bond chain states, spectra, and "
                    "correlators, with verification suites")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("state", help="dump chain state amplitudes")
    sp.add_argument("--spin", type=int, required=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--bc", choices=("pbc", "open"), default="pbc")
    sp.add_argument("--p1", type=int, default=1)
    sp.add_argument("--p2", type=int, default=1)
    sp.add_argument("--q", default="1")
    sp.add_argument("--exact", action="store_true",
                    help="emit exact Laurent amplitudes as JSON")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_state)

    se = sub.add_parser("eigenvalues", help="transfer-matrix spectrum")
    se.add_argument("--spin", type=int, required=True)
    se.add_argument("--q", default="1")
    se.add_argument("--exact", action="store_true",
                    help="include the exact closed-form eigenvalues")
    se.add_argument("--check-conjecture", action="store_true")
    se.add_argument("--output")
    se.set_defaults(func=cmd_eigenvalues)

    sc = sub.add_parser("correlator", help="two-point spin correlator")
    sc.add_argument("--spin", type=int, required=True)
    sc.add_argument("--q", default="1")
    sc.add_argument("--op", default="sz")
    sc.add_argument("--mode", choices=("thermo", "finite"), default="thermo")
    sc.add_argument("--length", type=int)
    sc.add_argument("--r-min", type=int, default=2)
    sc.add_argument("--r-max", type=int, default=8)
    sc.add_argument("--output")
    sc.set_defaults(func=cmd_correlator)

    sb = sub.add_parser("prob", help="spin-resolved probabilities")
    sb.add_argument("--spin", type=int, required=True)
    sb.add_argument("--q", default="1")
    sb.add_argument("--output")
    sb.set_defaults(func=cmd_prob)

    sv = sub.add_parser("verify", help="run one verification suite")
    sv.add_argument("--suite", required=True)
    sv.add_argument("--spin", type=int)
    sv.add_argument("--seed", type=int, default=0)
    sv.add_argument("--output")
    sv.set_defaults(func=cmd_verify)

    sr = sub.add_parser("reproduce-paper",
                        help="run the full acceptance battery")
    sr.add_argument("--seed", type=int, default=0)
    sr.add_argument("--output")
    sr.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, cgproj.BudgetError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 a verification that should hold failed.
Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import arrangement as arr
from . import cellini, descent, shuffles, verify
from .coxeter import UnsupportedGroupError, build_group, parse_type
from .group_algebra import SymbolicMeasure, total_variation
from .serialize import dumps, frac_str, jsonable, parse_rational, render_table

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 2, 3


class InputError(ValueError):
    pass


# --------------------------------------------------------------------------
# argument helpers


def _group(args):
    if not args.type:
        raise InputError("--type is required (e.g. --type B --rank 3, or --type G2)")
    return build_group(*parse_type(args.type, args.rank))


def _x_value(args, allow_symbolic=True):
    if getattr(args, "symbolic", False) or (args.x is not None and args.x.strip().lower() == "symbolic"):
        if not allow_symbolic:
            raise InputError("this command needs a numeric --x")
        return "symbolic"
    if args.x is None:
        if allow_symbolic:
            return "symbolic"
        raise InputError("--x is required (exact rational p/q)")
    x = parse_rational(args.x)
    if x == 0:
        raise InputError("x must be nonzero")
    return x


def _params(args, **extra) -> dict:
    skip = {"func", "format", "cmd", "what", "precision", "workers", "output"}
    out = {k: v for k, v in vars(args).items() if k not in skip and v is not None and v is not False}
    out.update(extra)
    return out


def _emit(args, command, params, result, table=None, csv_text=None):
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        text = dumps({"command": command, "params": params, "result": result})
    elif fmt == "csv":
        if csv_text is None:
            raise InputError(f"csv output is not available for '{command}'")
        text = csv_text.rstrip("\n")
    else:
        head = "# " + json.dumps(jsonable(params), sort_keys=True)
        text = head + "\n" + (table if table is not None else dumps(result))
    out = getattr(args, "output", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _value_str(v):
    return frac_str(v) if isinstance(v, (Fraction, int)) else str(v)


# --------------------------------------------------------------------------
# group


def cmd_group(args):
    G = _group(args)
    summary = G.summary()
    rows = [(k, summary[k]) for k in ("type", "rank", "order", "n_roots", "exponents", "crystallographic",
                                      "bad_primes", "longest_element_word")]
    rows.append(("subset_classes", len(summary["subset_classes"])))
    _emit(args, "group", _params(args, type=G.label), summary, render_table(["field", "value"], rows))
    return EXIT_OK


# --------------------------------------------------------------------------
# measure


def _measure(args, G):
    if args.what == "cellini":
        if args.k is None:
            raise InputError("cellini needs --k (positive integer)")
        if args.k < 1:
            raise InputError("k must be a positive integer")
        m = cellini.measure_xk(G, args.k)
        return m, {"k": args.k, "convention": cellini.DEFAULT_CONVENTION.label()}
    x = _x_value(args)
    if args.what == "descent":
        return descent.measure_M(G, x), {"x": x}
    return arr.measure_H(G, x), {"x": x}


def _measure_rows(G, m):
    """Rows keyed by descent count when the measure is constant there, else by descent set."""
    symbolic = isinstance(m, SymbolicMeasure)
    vals = m.numerators if symbolic else m.coeffs
    by_mask: dict[int, object] = {}
    uniform_mask = True
    for w, v in enumerate(vals):
        d = G.descent_masks[w]
        if by_mask.setdefault(d, v) != v:
            uniform_mask = False
    if not uniform_mask:
        return "element", [(list(G.words[w]), G.descent_count(w), v) for w, v in enumerate(vals)]
    by_count: dict[int, object] = {}
    uniform_count = True
    for d, v in by_mask.items():
        c = bin(d).count("1")
        if by_count.setdefault(c, v) != v:
            uniform_count = False
    if uniform_count:
        return "descents", sorted(by_count.items())
    return "descent_set", [(G.subset_of(d), v) for d, v in sorted(by_mask.items())]


def cmd_measure(args):
    G = _group(args)
    m, extra = _measure(args, G)
    params = _params(args, type=G.label, measure=args.what, **extra)
    symbolic = isinstance(m, SymbolicMeasure)
    key, rows = _measure_rows(G, m)
    fmtv = (lambda p: f"({p}) / x^{m.degree}") if symbolic else _value_str
    if key == "element":
        json_rows = [{"word": r[0], "descents": r[1], "value": r[2]} for r in rows]
    else:
        json_rows = [{key: r[0], "value": r[1]} for r in rows]
    result = {"group": G.label, "symbolic": symbolic, "keyed_by": key, "rows": json_rows}
    if symbolic:
        result["denominator_degree"] = m.degree
    if args.elements:
        result["elements"] = [{"word": list(G.words[w]), "value": v}
                              for w, v in enumerate(m.numerators if symbolic else m.coeffs)]
    if key == "element":
        table = render_table(["word", "descents", "value"], [(" ".join(map(str, r[0])) or "e", r[1], fmtv(r[2]))
                                                              for r in rows])
        csv_rows = [(" ".join(map(str, r[0])), r[1], fmtv(r[2])) for r in rows]
        header = "word,descents,value"
    else:
        table = render_table([key, "value"], [(r[0], fmtv(r[1])) for r in rows])
        csv_rows = [(r[0] if key == "descents" else " ".join(map(str, sorted(r[0]))), fmtv(r[1])) for r in rows]
        header = f"{key},value"
    csv_text = "# " + json.dumps(jsonable(params), sort_keys=True) + "\n" + header + "\n" + \
        "\n".join(",".join(str(c) for c in r) for r in csv_rows)
    _emit(args, "measure", params, result, table, csv_text)
    return EXIT_OK


# --------------------------------------------------------------------------
# arrangement


def cmd_arrangement(args):
    if args.file:
        A = arr.load_arrangement(args.file)
        label = A.name if hasattr(A, "name") else args.file
    elif args.test:
        tests = arr.test_arrangements()
        if args.test not in tests:
            raise InputError(f"unknown test arrangement {args.test!r}; choose from {', '.join(sorted(tests))}")
        A = tests[args.test]
        label = args.test
    else:
        G = _group(args)
        A = arr.reflection_arrangement(G)
        label = G.label
    L = A.lattice
    result = {"arrangement": label, "kind": A.kind, "dim": A.dim, "n_hyperplanes": A.n_hyperplanes,
              "central": A.is_central, "n_flats": len(L), "n_faces": len(A.face_arrays()[0]),
              "n_chambers": A.n_chambers, "charpoly": L.charpoly(0),
              "eigen_profile": {int(k): int(v) for k, v in sorted(L.eigen_profile().items())}}
    params = _params(args, arrangement=label)
    if args.x is not None:
        x = _x_value(args)
        fw = arr.face_weights(A, x)
        result["weights_total"] = fw.total()
        params["x"] = x
    if args.full:
        result["lattice"] = L.to_json()
    rows = [(k, result[k] if k != "charpoly" else result[k].to_json()) for k in result if k != "lattice"]
    _emit(args, "arrangement", params, result, render_table(["field", "value"], rows))
    return EXIT_OK


# --------------------------------------------------------------------------
# spectrum


def cmd_spectrum(args):
    G = _group(args)
    x = _x_value(args, allow_symbolic=False)
    result = {"group": G.label, "x": x,
              "M": {"eigenvalues": [{"value": e, "multiplicity": m} for e, m in descent.spectrum_M(G, x)]},
              "BHR": {"eigenvalues": [{"value": e, "multiplicity": m}
                                      for e, m in arr.bhr_spectrum(arr.reflection_arrangement(G), x)]}}
    status = EXIT_OK
    if args.check:
        status_name, detail = verify.check_spectrum(G, x)
        result["check"] = {"status": status_name, **detail}
        if status_name == "FAIL":
            status = EXIT_FAILED
    rows = [("M", _value_str(r["value"]), r["multiplicity"]) for r in result["M"]["eigenvalues"]]
    rows += [("BHR", _value_str(r["value"]), r["multiplicity"]) for r in result["BHR"]["eigenvalues"]]
    table = render_table(["operator", "eigenvalue", "multiplicity"], rows)
    if args.check:
        table += f"\nspectrum check: {result['check']['status']}"
    _emit(args, "spectrum", _params(args, type=G.label, x=x), result, table)
    return status


# --------------------------------------------------------------------------
# verify


_VERIFY_LABELS = {
    "agree": "H=M",
    "endpoints": "endpoint formulas",
    "convolution": "convolution",
    "spectrum": "spectrum",
    "identities": "lattice identities",
    "h-routes": "parabolic formula = face weights",
    "good-prime": "face weight signs",
    "generic": "generic arrangements",
    "cellini": "Cellini measure",
    "coincide": "x_k=M=H",
    "oracle": "shuffle oracle",
}


def _verify_item(args) -> dict:
    w = args.what
    if w == "generic":
        return {"check": "generic", **({"name": args.test} if args.test else {})}
    if w == "oracle":
        item = {"check": "oracle", "model": args.model, "encoding": args.encoding}
        if args.model == "x2_physical":
            item["N"] = args.N
        else:
            item["n"] = args.n
            item["a" if args.model == "gsr" else "k"] = args.a if args.model == "gsr" else args.k
        if any(v is None for v in item.values()):
            raise InputError("oracle needs --model with --n/--a (gsr), --n/--k (typeC_flip) or --N (x2_physical)")
        return item
    G = _group(args)
    label = G.label
    if w == "agree":
        return {"check": "agree", "group": label, "x": _x_value(args)}
    if w == "endpoints":
        return {"check": "endpoints", "group": label, "x": _x_value(args)}
    if w == "convolution":
        if args.k is not None and args.h is not None:
            return {"check": "cellini_convolution", "group": label, "k": args.k, "h": args.h}
        return {"check": "convolution", "group": label, "a": parse_rational(args.a_value or "2"),
                "b": parse_rational(args.b_value or "3")}
    if w == "spectrum":
        return {"check": "spectrum", "group": label, "x": _x_value(args, allow_symbolic=False) if args.x else 2}
    if w == "identities":
        return {"check": "identities", "group": label, "x": _x_value(args)}
    if w == "h-routes":
        return {"check": "h_routes", "group": label}
    if w == "good-prime":
        if args.p is None:
            raise InputError("good-prime needs --p")
        return {"check": "good_prime", "group": label, "p": args.p}
    if w == "cellini":
        if args.k is None:
            raise InputError("cellini needs --k")
        return {"check": "cellini_measure", "group": label, "k": args.k}
    if w == "coincide":
        if G.family != "C":
            raise InputError("coincide is stated for type C only")
        if args.k is None or args.k % 2 == 0:
            raise InputError("coincide needs an odd --k")
        return {"check": "coincide", "group": label, "k": args.k}
    raise InputError(f"unknown verification {w!r}")


def cmd_verify(args):
    if args.what == "all":
        scope = None
        if args.scope:
            with open(args.scope) as fh:
                scope = json.load(fh)
        report = verify.verify_all(scope)
        results = report["results"]
        lines = [r.line() for r in results] + [f"overall: {report['status']}"]
        if report.get("warning"):
            print(f"warning: {report['warning']}", file=sys.stderr)
        _emit(args, "verify", _params(args, scope=args.scope or "default"),
              {**report, "results": [r.to_json() for r in results]}, "\n".join(lines))
        return EXIT_FAILED if report["status"] == "FAIL" else EXIT_OK
    item = _verify_item(args)
    res = verify.run_check(item)
    label = _VERIFY_LABELS.get(args.what, args.what)
    line = f"{label}: {res.status}"
    if res.status == "EXPECTED" and "note" in res.detail:
        line += f" ({res.detail['note']})"
    params = {"verification": args.what, **{k: v for k, v in item.items() if k != "check"}}
    _emit(args, "verify", params, res.to_json(), line)
    return EXIT_FAILED if res.failed else EXIT_OK


# --------------------------------------------------------------------------
# simulate / compare


def _model_params(args) -> dict:
    m = args.model
    if m == "gsr":
        need = {"n": args.n, "a": args.a}
    elif m == "typeC_flip":
        need = {"n": args.n, "k": args.k}
    else:
        need = {"N": args.N}
    missing = [k for k, v in need.items() if v is None]
    if missing:
        raise InputError(f"model {m} needs --{' --'.join(missing)}")
    if any(v < 1 for v in need.values()):
        raise InputError("model parameters must be positive integers")
    if m != "typeC_flip" and need.get("n", need.get("N")) < 2:
        raise InputError("deck needs at least 2 cards")
    return need


def cmd_simulate(args):
    params = _model_params(args)
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    emp = shuffles.monte_carlo(args.model, params, args.trials, args.seed, args.encoding, args.workers)
    result = emp.to_json(args.precision)
    table_lines = [f"model {args.model} {params} trials={args.trials} seed={args.seed} encoding={args.encoding}"]
    if args.compare == "exact":
        exact = shuffles.exact_model_distribution(args.model, params, args.encoding)
        tv = emp.tv_to(exact)
        result["tv_to_exact"] = f"{tv:.{args.precision}f}"
        table_lines.append(f"TV distance to exact law: {tv:.{args.precision}f}")
    full = _params(args, **params)
    if args.format == "table":
        for e in result["entries"]:
            table_lines.append(f"{' '.join(map(str, e['word'])) or 'e'}\t{e['descents']}\t{e['count']}\t{e['frequency']}")
    csv_text = emp.to_csv(args.precision)
    if "tv_to_exact" in result:
        csv_text = f"# tv_to_exact {result['tv_to_exact']}\n" + csv_text
    _emit(args, "simulate", full, result, "\n".join(table_lines), csv_text)
    return EXIT_OK


def _parse_operand(G, text: str, args):
    """'M:x', 'H:x', 'xk:k', 'uniform', 'id', optionally prefixed by 'inv:' for the inverse pushforward."""
    from .group_algebra import SignedMeasure, GroupAlgebraElement
    inv = text.startswith("inv:")
    body = text[4:] if inv else text
    kind, _, val = body.partition(":")
    if kind == "M":
        m = descent.measure_M(G, parse_rational(val))
    elif kind == "H":
        m = arr.measure_H(G, parse_rational(val))
    elif kind == "xk":
        m = cellini.measure_xk(G, int(val))
    elif kind == "uniform":
        m = GroupAlgebraElement.uniform(G)
    elif kind == "id":
        m = GroupAlgebraElement.identity(G)
    else:
        raise InputError(f"cannot parse operand {text!r}; use M:x, H:x, xk:k, uniform or id (prefix inv: to invert)")
    if inv:
        m = m.inverse_pushforward()
    return SignedMeasure(G, m.coeffs)


def cmd_compare(args):
    if args.model:
        if args.left:
            raise InputError("with --model the left operand is the model law; drop --left")
        params = _model_params(args)
        left = shuffles.exact_model_distribution(args.model, params, args.encoding)
        G = left.group
        left_name = f"{args.model} exact ({args.encoding})"
        extra = dict(params)
    else:
        G = _group(args)
        if not args.left:
            raise InputError("compare needs --model or --left")
        left = _parse_operand(G, args.left, args)
        left_name = args.left
        extra = {}
        args.encoding = None
    if not args.right:
        raise InputError("compare needs --right")
    right = _parse_operand(G, args.right, args)
    tv = total_variation(left, right)
    result = {"group": G.label, "left": left_name, "right": args.right, "tv": tv, "equal": tv == 0}
    _emit(args, "compare", _params(args, type=G.label, **extra), result,
          f"TV({left_name}, {args.right}) = {frac_str(tv)}")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_group(p, required=False):
    p.add_argument("--type", required=required, help="family or full label: A, B, C, D, G2, F4, H3, H4, I2(m)")
    p.add_argument("--rank", type=int, help="rank (omit when the label includes it)")


def _add_format(p, choices=("json", "table")):
    p.add_argument("--format", choices=choices, default="json")
    p.add_argument("--output", help="write to this file instead of stdout")


def _add_model(p):
    p.add_argument("--model", choices=shuffles.MODELS)
    p.add_argument("--n", type=int, help="deck size (gsr, typeC_flip)")
    p.add_argument("--a", type=int, help="number of piles (gsr)")
    p.add_argument("--k", type=int, help="stack parameter: 2k+1 stacks (typeC_flip)")
    p.add_argument("--N", type=int, help="deck size (x2_physical)")
    p.add_argument("--encoding", choices=shuffles.ENCODINGS, default="position",
                   help="deck-to-element encoding (default: position i -> card c_i)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coxshuffle", description="Riffle-shuffle measures on finite Coxeter groups.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("group", help="group summary")
    _add_group(p)
    _add_format(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("measure", help="evaluate a shuffle measure")
    p.add_argument("what", choices=("descent", "hyperplane", "cellini"))
    _add_group(p)
    p.add_argument("--x", help="exact rational p/q or 'symbolic'")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--k", type=int, help="Cellini parameter")
    p.add_argument("--elements", action="store_true", help="include the per-element values")
    _add_format(p, ("json", "csv", "table"))
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("arrangement", help="intersection lattice and face data")
    _add_group(p)
    p.add_argument("--file", help="generic arrangement file (JSON or text)")
    p.add_argument("--test", help="built-in test arrangement name")
    p.add_argument("--x", help="evaluate face weights at x")
    p.add_argument("--full", action="store_true", help="include the whole lattice")
    _add_format(p)
    p.set_defaults(func=cmd_arrangement)

    p = sub.add_parser("spectrum", help="predicted eigenvalues of the M and BHR operators")
    _add_group(p)
    p.add_argument("--x", required=True)
    p.add_argument("--check", action="store_true", help="also verify against exact matrices")
    _add_format(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("what", choices=sorted(_VERIFY_LABELS) + ["all"])
    _add_group(p)
    p.add_argument("--x")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--k", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--p", type=int, help="prime for good-prime")
    p.add_argument("--a-value", dest="a_value", help="first convolution parameter (default 2)")
    p.add_argument("--b-value", dest="b_value", help="second convolution parameter (default 3)")
    p.add_argument("--test", help="generic arrangement name")
    p.add_argument("--scope", help="JSON file with a list of check items (for 'all')")
    p.add_argument("--model", choices=shuffles.MODELS)
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--encoding", choices=shuffles.ENCODINGS, default="card")
    _add_format(p, ("table", "json"))
    p.set_defaults(func=cmd_verify, format="table")

    p = sub.add_parser("simulate", help="Monte Carlo simulation of a physical shuffle")
    _add_model(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, help="threads (default: COXSHUFFLE_THREADS or CPU count)")
    p.add_argument("--compare", choices=("exact",))
    p.add_argument("--precision", type=int, default=8)
    _add_format(p, ("table", "json", "csv"))
    p.set_defaults(func=cmd_simulate, format="table")

    p = sub.add_parser("compare", help="exact total variation distance")
    _add_group(p)
    _add_model(p)
    p.add_argument("--left", help="M:x, H:x, xk:k, uniform, id (prefix inv: for the inverse)")
    p.add_argument("--right", help="same forms as --left")
    _add_format(p, ("table", "json"))
    p.set_defaults(func=cmd_compare, format="table")
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if args.cmd == "simulate" and not args.model:
        print("error: simulate needs --model", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except (InputError, UnsupportedGroupError, cellini.NotApplicableError, arr.NotApplicableError,
            arr.ResourceLimitError, shuffles.ResourceLimitError, ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except arr.IdentityFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

Exit codes: 0 ok, 1 failed check or route disagreement, 2 unparsable input,
3 input outside an operation's domain.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence

from . import cache, derivative, grassmann, weyl
from .core import (
    Multisegment,
    ParseError,
    below_set,
    ell,
    enumerate_weight,
    gamma_set,
    leq,
    normalized_multisegments,
    parse_ms,
    prec_k,
    prec_k_via_truncated_below,
)
from .derivative import ROUTES, RingVector

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3


class CheckFailed(Exception):
    """A computed identity did not hold; the payload is printed as is."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("error", "check failed"))
        self.payload = payload


def _ms(text: str) -> Multisegment:
    return parse_ms(text)


def _vec(x: RingVector) -> List[dict]:
    return x.to_json()


# subcommands -------------------------------------------------------------------------


def cmd_parse(args) -> dict:
    a = _ms(args.ms)
    return {"input": args.ms, "canonical": str(a), "degree": a.degree, "segments": len(a),
            "weight": str(a.weight())}


def cmd_poset(args) -> dict:
    b, a = _ms(args.b), _ms(args.a)
    if args.rel == "leq":
        val = leq(b, a)
    else:
        if args.k is None:
            raise ValueError("--rel preck needs --k")
        val = prec_k(b, a, args.k)
        if val != prec_k_via_truncated_below(b, a, args.k):
            raise CheckFailed({"error": "prec_k characterisations disagree", "b": str(b), "a": str(a), "k": args.k})
    return {"rel": args.rel, "k": args.k, "b": str(b), "a": str(a), "value": val}


def cmd_sab(args) -> dict:
    a = _ms(args.ms)
    rows = sorted(((ell(b, a), str(b)) for b in below_set(a)))
    return {"input": str(a), "size": len(rows), "members": [{"ms": s, "ell": d} for d, s in rows]}


def cmd_kl(args) -> dict:
    x, y = weyl.parse_perm(args.x), weyl.parse_perm(args.y)
    p = weyl.kl_poly(x, y)
    return {"x": weyl.fmt_perm(x), "y": weyl.fmt_perm(y), "poly": str(p), "coeffs": p.to_list(),
            "mu": weyl.mu(x, y)}


def cmd_pkl(args) -> dict:
    J = weyl.parse_J(args.J)
    w, v = weyl.parse_perm(args.w), weyl.parse_perm(args.v)
    p = weyl.parabolic_kl(J, w, v)
    return {"J": weyl.fmt_J(J), "w": weyl.fmt_perm(w), "v": weyl.fmt_perm(v), "poly": str(p), "coeffs": p.to_list()}


def cmd_mult(args) -> dict:
    a = _ms(args.ms)
    x = derivative.to_irreducible(RingVector.standard(a))
    return {"input": str(a), "basis": "irreducible", "terms": _vec(x), "text": str(x)}


def _derive_payload(a: Multisegment, k: int, routes: Sequence[str]) -> dict:
    results = {r: derivative.derive_irreducible(a, k, r) for r in routes}
    first = results[routes[0]]
    agree = all(v == first for v in results.values())
    out = {
        "input": str(a),
        "k": k,
        "basis": "irreducible",
        "terms": _vec(first),
        "route": "+".join(routes),
        "agreement": agree if len(routes) > 1 else None,
        "text": str(first),
    }
    if not agree:
        out["error"] = "routes disagree"
        out["by_route"] = {r: _vec(v) for r, v in results.items()}
        raise CheckFailed(out)
    return out


def cmd_derive(args) -> dict:
    a = _ms(args.ms)
    if args.route == "all":
        routes = list(ROUTES)
    elif args.route:
        routes = [args.route]
    else:
        routes = ["quantum", "basis_change"]
    return _derive_payload(a, args.k, routes)


def cmd_theta(args) -> dict:
    a = _ms(args.ms)
    x, red = derivative.derive_theta(a, args.k)
    return {
        "input": str(a), "k": args.k, "basis": "irreducible", "terms": _vec(x), "route": "parabolic_theta",
        "agreement": None, "text": str(x),
        "reduction": {"target": str(red.target), "rights": red.rights, "lefts": red.lefts},
    }


def cmd_grassmann(args) -> dict:
    if args.base:
        base = _ms(args.base)
    else:
        base = grassmann.GrassmannBase.packed(args.r, args.l, args.k - args.r - args.l).multisegment()
    gb = grassmann.GrassmannBase.of(base, args.k)
    if (gb.r, gb.ell) != (args.r, args.l):
        raise ValueError("base has r=%d, ell=%d" % (gb.r, gb.ell))
    rows = grassmann.orbit_table(base, args.k, args.route)
    out = {
        "base": str(base), "k": args.k, "r": gb.r, "ell": gb.ell, "route": args.route,
        "rows": [{"mu": str(x.mu), "r0": x.r0, "a_mu": str(x.a_mu), "a_flat": str(x.a_flat),
                  "orbit_count": x.orbit_count, "derivative": x.derivative, "agree": x.agree} for x in rows],
    }
    out["agreement"] = all(x.agree for x in rows)
    if not out["agreement"]:
        out["error"] = "orbit count differs from the derivative coefficient"
        raise CheckFailed(out)
    return out


def _suite_exp(cases) -> int:
    bad = 0
    for a, k in cases:
        x = RingVector.standard(a)
        bad += derivative.dk_via_exp(x, k) != derivative.dk_standard(x, k)
    return bad


def _suite_routes(cases) -> int:
    bad = 0
    for a, k in cases:
        bad += derivative.derive_quantum(a, k) != derivative.derive_basis_change(a, k)
    return bad


def _suite_support(cases) -> int:
    bad = 0
    for a, k in cases:
        x = derivative.to_irreducible(derivative.dk_standard(RingVector.standard(a), k))
        if any(c < 0 for c in x.terms.values()) or set(x.terms) != gamma_set(a, k):
            bad += 1
    return bad


def _suite_prec(cases) -> int:
    bad = 0
    for a, k in cases:
        phi = a.weight()
        for j in range(a.n_ending(k) + 1):
            w = phi.try_minus(type(phi)({k: j}))
            if w is None:
                continue
            for b in enumerate_weight(w) if w else [Multisegment()]:
                bad += prec_k(b, a, k) != prec_k_via_truncated_below(b, a, k)
    return bad


SUITES: Dict[str, Callable] = {
    "exp_vs_standard": _suite_exp,
    "prec_equivalence": _suite_prec,
    "support_law": _suite_support,
    "routes": _suite_routes,
}


def cmd_crosscheck(args) -> dict:
    cases = []
    for a in normalized_multisegments(args.deg):
        ks = [args.k] if args.k is not None else sorted({s.end for s in a})
        cases.extend((a, k) for k in ks)
    names = args.suite or list(SUITES)
    report = {name: {"cases": len(cases), "failures": SUITES[name](cases)} for name in names}
    out = {"deg": args.deg, "k": args.k, "suites": report, "agreement": all(r["failures"] == 0 for r in report.values())}
    if not out["agreement"]:
        out["error"] = "crosscheck failures"
        raise CheckFailed(out)
    return out


def cmd_cache(args) -> dict:
    store = cache.active() or cache.Store()
    if args.action == "clear":
        return {"root": str(store.root), "removed": store.clear()}
    return {"root": str(store.root), "version": store.version, "entries": store.entries(),
            "bytes": store.size_bytes()}


# rendering ---------------------------------------------------------------------------------


def _render_text(cmd: str, res: dict) -> str:
    if "text" in res:
        return res["text"]
    if cmd == "poset":
        return "true" if res["value"] else "false"
    if cmd == "parse":
        return res["canonical"]
    if cmd == "sab":
        return "\n".join("%s\t%d" % (m["ms"], m["ell"]) for m in res["members"])
    if cmd in ("kl", "pkl"):
        return res["poly"]
    if cmd == "grassmann":
        lines = ["mu\tr0\torbits\tderivative"]
        lines += ["%s\t%d\t%d\t%d%s" % (r["mu"], r["r0"], r["orbit_count"], r["derivative"], "" if r["agree"] else "\t!")
                  for r in res["rows"]]
        return "\n".join(lines)
    if cmd == "crosscheck":
        return "\n".join("%s\t%d/%d failed" % (n, r["failures"], r["cases"]) for n, r in res["suites"].items())
    return json.dumps(res, sort_keys=True)


def _emit(cmd: str, res: dict, as_text: bool, stream) -> None:
    if as_text:
        print(_render_text(cmd, res), file=stream)
    else:
        print(json.dumps(res, sort_keys=True), file=stream)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multiseg", description="Multisegment combinatorics and partial derivatives.")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="text", action="store_false", help="JSON output (default)")
    fmt.add_argument("--text", dest="text", action="store_true", help="plain text output")
    p.set_defaults(text=False)
    p.add_argument("--no-cache", action="store_true", help="do not read or write the on-disk cache")
    p.add_argument("--cache-dir", default=None, help="cache directory (else $%s)" % cache.ENV_VAR)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("parse", help="echo the canonical form")
    s.add_argument("ms")
    s.set_defaults(fn=cmd_parse)

    s = sub.add_parser("poset", help="test b <= a or b preceq_k a")
    s.add_argument("--rel", choices=("leq", "preck"), default="leq")
    s.add_argument("--k", type=int)
    s.add_argument("b")
    s.add_argument("a")
    s.set_defaults(fn=cmd_poset)

    s = sub.add_parser("sab", help="list S(a) with chain lengths")
    s.add_argument("ms")
    s.set_defaults(fn=cmd_sab)

    s = sub.add_parser("kl", help="KL polynomial P_{x,y}")
    s.add_argument("x")
    s.add_argument("y")
    s.set_defaults(fn=cmd_kl)

    s = sub.add_parser("pkl", help="parabolic KL polynomial")
    s.add_argument("--J", required=True, help="e.g. s1,s3")
    s.add_argument("w")
    s.add_argument("v")
    s.set_defaults(fn=cmd_pkl)

    s = sub.add_parser("mult", help="pi(a) in the irreducible basis")
    s.add_argument("ms")
    s.set_defaults(fn=cmd_mult)

    s = sub.add_parser("derive", help="D^k(L_a)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--route", choices=ROUTES + ("all",))
    s.add_argument("ms")
    s.set_defaults(fn=cmd_derive)

    s = sub.add_parser("theta", help="D^k(L_a) through theta values and the reduction")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("ms")
    s.set_defaults(fn=cmd_theta)

    s = sub.add_parser("grassmann", help="orbit count against the derivative coefficient")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--base", help="defaults to begins k-r-l .. k-1")
    s.add_argument("--route", choices=("quantum", "basis_change"), default="quantum")
    s.set_defaults(fn=cmd_grassmann)

    s = sub.add_parser("crosscheck", help="run the invariant suites")
    s.add_argument("--deg", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--suite", action="append", choices=sorted(SUITES))
    s.set_defaults(fn=cmd_crosscheck)

    s = sub.add_parser("cache", help="inspect or clear the cache")
    s.add_argument("action", choices=("stats", "clear"))
    s.set_defaults(fn=cmd_cache)
    return p


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    store = None
    if not args.no_cache:
        store = cache.install(args.cache_dir)
    try:
        res = args.fn(args)
    except ParseError as exc:
        print("parse error: %s" % exc, file=stderr)
        return EXIT_PARSE
    except CheckFailed as exc:
        _emit(args.cmd, exc.payload, args.text, stdout)
        print("check failed: %s" % exc, file=stderr)
        return EXIT_FAIL
    except (ValueError, KeyError, IndexError) as exc:
        print("precondition failed: %s" % exc, file=stderr)
        return EXIT_DOMAIN
    except AssertionError as exc:
        print("assertion failed: %s" % exc, file=stderr)
        return EXIT_FAIL
    finally:
        if store is not None:
            store.flush_kl()
            cache.uninstall()
    _emit(args.cmd, res, args.text, stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

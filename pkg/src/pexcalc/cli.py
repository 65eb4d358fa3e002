"""pexcalc command line.

Exit codes: 0 computed (negative verdicts included), 1 precondition or
internal assertion failure, 2 parse error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .algebra import format_poly
from .ideal import ResourceLimitExceeded, dim, order_from_name, step_limit
from .lattice import EmptyTorusPart
from .pairs import (
    PairError,
    adim_bound,
    associated_preimage,
    axiom_instance,
    cut,
    freeness,
    normal_check,
    reduce,
)
from .parser import (
    ConfigDocument,
    PairDocument,
    ParseError,
    config_document,
    parse,
    print_document,
)
from .predim import (
    ConfigurationError,
    InternalInconsistency,
    delta,
    delta_rel,
    dim_q,
    kernel_demo,
    partial_dim,
    strong_ext,
    trdeg_x,
    trdeg_y,
)

DEFAULT_HEIGHT = 3
DEFAULT_KCAP = 5

PAIR_COMMANDS = ("free", "normal", "check-axiom", "reduce", "cut", "root", "adim")
CONFIG_COMMANDS = ("delta", "delta-rel", "partial-dim", "strong-ext")


class UsageError(ValueError):
    pass


def _frac(c: Fraction) -> str:
    return str(Fraction(c))


def _vec(v) -> list:
    return [int(a) for a in v]


def _dependence(d):
    if d is None:
        return None
    return {"m": _vec(d.m), "c": _frac(d.c)}


def parse_subset(text, n):
    """'' -> empty, 'all' -> every generator, '1,3' -> indices, '[1 -2; 0 1]' -> rows."""
    if text is None:
        return None
    text = text.strip()
    if text == "":
        return []
    if text == "all":
        return list(range(n))
    if text.startswith("["):
        if not text.endswith("]"):
            raise UsageError(f"unterminated row list {text!r}")
        rows = []
        for chunk in text[1:-1].split(";"):
            if chunk.strip():
                try:
                    rows.append([int(a) for a in chunk.split()])
                except ValueError:
                    raise UsageError(f"bad row {chunk.strip()!r}") from None
        return rows
    try:
        idx = [int(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise UsageError(f"bad subset {text!r}") from None
    if any(not 1 <= i <= n for i in idx):
        raise UsageError(f"subset index out of range 1..{n}")
    return [i - 1 for i in idx]


def _height(args, doc) -> int:
    if args.height is not None:
        return args.height
    if getattr(doc, "height", None) is not None:
        return doc.height
    return DEFAULT_HEIGHT


def _pair_text(q) -> str:
    doc = PairDocument(
        q.n,
        tuple(q.I_V.generators),
        tuple(q.I_W.generators),
        irreducible=tuple(s for s, f in (("V", q.irreducible_v), ("W", q.irreducible_w)) if f),
        generic=tuple(q.generic_forms),
    )
    return print_document(doc)


def _run_pair(cmd, args, doc: PairDocument) -> dict:
    p = doc.pair()
    H = _height(args, doc)
    if cmd == "dim":
        order = order_from_name(args.order)
        return {
            "status": "ok",
            "result": {"dim_V": dim(p.I_V, order).dim, "dim_W": dim(p.torus_w, order).dim,
                       "n": p.n, "excess": p.excess, "order": args.order},
        }
    if cmd == "free":
        fr = freeness(p, H)
        return {
            "status": "Free" if fr.free else "Dependent",
            "bound": H,
            "result": {"additive": _dependence(fr.additive),
                       "multiplicative": _dependence(fr.multiplicative)},
        }
    if cmd == "normal":
        v = normal_check(p, H)
        res = {}
        if not v.normal:
            a, b, k = v.dims
            res = {"witness": [_vec(r) for r in v.witness.basis],
                   "dim_V_image": a, "dim_W_image": b, "k": k}
        return {"status": "NormalUpTo" if v.normal else "NotNormal", "bound": H, "result": res}
    if cmd == "check-axiom":
        rep = axiom_instance(p, H)
        res = {
            "additive": _dependence(rep.freeness.additive),
            "multiplicative": _dependence(rep.freeness.multiplicative),
            "normal": rep.normality.normal,
            "irreducible_V": rep.irreducible_v,
            "irreducible_W": rep.irreducible_w,
            "reasons": list(rep.reasons),
        }
        if not rep.normality.normal:
            res["witness"] = [_vec(r) for r in rep.normality.witness.basis]
        return {"status": "Qualifies" if rep.qualifies else "Disqualified", "bound": H, "result": res}
    if cmd == "reduce":
        iv, iw = doc.sub_ideals()
        kcap = args.k_cap if args.k_cap is not None else (doc.kcap or DEFAULT_KCAP)
        q, cert = reduce(p, iv, iw, H, kcap)
        return {
            "status": "ok",
            "bound": H,
            "result": {
                "k": cert.k,
                "n": q.n,
                "v_equation": None if cert.v_equation is None else format_poly(cert.v_equation),
                "w_equation": None if cert.w_equation is None else format_poly(cert.w_equation),
                "new_x": None if cert.v_var is None else f"x{cert.v_var + 1}",
                "new_y": None if cert.w_var is None else f"y{cert.w_var + 1}",
                "V": [format_poly(g) for g in q.I_V.generators],
                "W": [format_poly(g) for g in q.I_W.generators],
                "notes": list(cert.notes),
                "pair": _pair_text(q),
            },
        }
    if cmd == "cut":
        seed = args.seed if args.seed is not None else (doc.seed if doc.seed is not None else 0)
        steps = []
        q = p
        for _ in range(args.times):
            q, rep = cut(q, seed, H, allow_curve=args.allow_curve)
            steps.append({
                "coefficients": [_frac(c) for c in rep.coefficients],
                "dim_V": [rep.dim_before, rep.dim_after],
                "excess": [rep.excess_before, rep.excess_after],
                "free": rep.freeness.free,
                "normal": rep.normality.normal,
                "ok": rep.ok,
            })
        ok = all(s["ok"] for s in steps)
        return {
            "status": "ok" if ok else "CutFlagged",
            "bound": H,
            "result": {"seed": seed, "steps": steps,
                       "V": [format_poly(g) for g in q.I_V.generators], "pair": _pair_text(q)},
        }
    if cmd == "root":
        if args.l is None:
            raise UsageError("root needs --l")
        if args.l < 1:
            raise UsageError("--l must be positive")
        J = associated_preimage(p, args.l)
        return {"status": "ok", "result": {"l": args.l, "ideal": [format_poly(g) for g in J.generators]}}
    if cmd == "adim":
        rep = adim_bound(p, H)
        return {"status": "ok", "bound": H,
                "result": {"adim_lower_bound": rep.bound, "exact": rep.exact, "notes": list(rep.notes)}}
    raise UsageError(f"{cmd} does not apply to a pair document")


def _run_config(cmd, args, doc: ConfigDocument) -> dict:
    c = doc.configuration()
    H = _height(args, doc)
    subset = parse_subset(args.subset, c.n)
    cache = {}
    if cmd == "dim":
        X = list(range(c.n)) if subset is None else subset
        return {"status": "ok", "result": {"dim_q": dim_q(c, X), "trdeg_x": trdeg_x(c, X),
                                           "trdeg_y": trdeg_y(c, X)}}
    if cmd == "delta":
        X = list(range(c.n)) if subset is None else subset
        return {"status": "ok", "result": {"delta": delta(c, X, cache)}}
    if cmd == "delta-rel":
        X = list(range(c.n)) if subset is None else subset
        over = parse_subset(args.over, c.n) or []
        return {"status": "ok", "result": {"delta_rel": delta_rel(c, X, over, cache)}}
    if cmd == "partial-dim":
        X = [] if subset is None else subset
        return {"status": "ok", "bound": H, "result": {"partial_dim": partial_dim(c, X, H, cache)}}
    if cmd == "strong-ext":
        A = [] if subset is None else subset
        v = strong_ext(c, A, H, cache)
        res = {}
        if not v.strong:
            res = {"witness": [_vec(r) for r in v.witness], "delta_rel": v.value}
        return {"status": "Strong" if v.strong else "NotStrong", "bound": H, "result": res}
    raise UsageError(f"{cmd} does not apply to a config document")


def _human(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    if "bound" in report:
        lines.append(f"  height bound: {report['bound']}")
    pair_text = None
    for k, v in report.get("result", {}).items():
        if k == "pair":
            pair_text = v
            continue
        if isinstance(v, list) and v and isinstance(v[0], dict):
            for i, item in enumerate(v, 1):
                lines.append(f"  {k}[{i}]: " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            lines.append(f"  {k}: {v}")
    if "error" in report:
        lines.append(f"  {report['error']['kind']}: {report['error']['message']}")
    if "timings" in report:
        lines.append(f"  time: {report['timings']['total_s']:.3f}s")
    if pair_text:
        lines.append(pair_text.rstrip())
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pexcalc", description="Predimension and pair calculus.")
    ap.add_argument("command", choices=("dim",) + CONFIG_COMMANDS + PAIR_COMMANDS + ("kernel-demo",))
    ap.add_argument("document", nargs="?", default="-", help="document file, '-' for stdin")
    ap.add_argument("--height", type=int, default=None, help="height bound (default 3, demonstration scale)")
    ap.add_argument("--k-cap", type=int, default=None, help="largest exponent tried by reduce (default 5)")
    ap.add_argument("--order", choices=("lex", "grevlex"), default="grevlex")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--json", action="store_true", help="single JSON object on stdout")
    ap.add_argument("--steps", type=int, default=None, help="reduction step limit")
    ap.add_argument("--no-timings", action="store_true")
    ap.add_argument("--subset", default=None, help="'1,3', '[1 -2; 0 1]', 'all' or ''")
    ap.add_argument("--over", default=None, help="base subset for delta-rel")
    ap.add_argument("--l", type=int, default=None, help="root order for root")
    ap.add_argument("--size", type=int, default=None, help="kernel-demo size")
    ap.add_argument("--times", type=int, default=1, help="number of successive cuts")
    ap.add_argument("--allow-curve", action="store_true",
                    help="let cut act on a curve V when W is the whole torus")
    return ap


def run(args) -> tuple:
    """(report dict, exit code, extra text) for parsed arguments."""
    cmd = args.command
    if cmd == "kernel-demo":
        if args.size is None or args.size < 1:
            raise UsageError("kernel-demo needs --size N with N >= 1")
        c = kernel_demo(args.size, args.height or DEFAULT_HEIGHT)
        text = print_document(config_document(c))
        return {"status": "ok", "result": {"size": args.size, "config": text}}, text
    if args.document == "-":
        text = sys.stdin.read()
    else:
        with open(args.document, encoding="utf-8") as fh:
            text = fh.read()
    doc = parse(text)
    if isinstance(doc, PairDocument):
        if cmd in CONFIG_COMMANDS:
            raise UsageError(f"{cmd} needs a config document")
        return _run_pair(cmd, args, doc), None
    if cmd in PAIR_COMMANDS:
        raise UsageError(f"{cmd} needs a pair document")
    return _run_config(cmd, args, doc), None


_ERRORS = (
    (ParseError, 2, "ParseError"),
    (ResourceLimitExceeded, 3, "ResourceLimitExceeded"),
    (InternalInconsistency, 1, "InternalInconsistency"),
    (EmptyTorusPart, 1, "EmptyTorusPart"),
    (PairError, 1, "PreconditionFailed"),
    (ConfigurationError, 1, "PreconditionFailed"),
    (UsageError, 1, "PreconditionFailed"),
    (OSError, 1, "IOError"),
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    extra = None
    try:
        if args.steps is not None:
            with step_limit(args.steps):
                report, extra = run(args)
        else:
            report, extra = run(args)
        code = 0
    except Exception as exc:
        for kind, code, name in _ERRORS:
            if isinstance(exc, kind):
                break
        else:
            raise
        report = {"status": "error", "error": {"kind": name, "message": str(exc)}}
    report = {"command": args.command, **report}
    if not args.no_timings:
        report["timings"] = {"total_s": round(time.perf_counter() - t0, 6)}
    if args.json:
        print(json.dumps(report, sort_keys=True))
    elif extra is not None and code == 0:
        sys.stdout.write(extra)
    else:
        out = sys.stdout if code == 0 else sys.stderr
        print(_human(report), file=out)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Claim verification engine and the ``mordell-bounds`` command line."""

from __future__ import annotations

import argparse
import enum
import json
import multiprocessing
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction

from . import __version__
from . import descent_bounds as D
from . import hyperbolic as H
from . import mordell_counts as M
from . import sphere_packing as S
from .claims import Claim, ClaimKind, claims_from_document, get_claim, load_catalog, parse_number
from .errors import (
    BoundsError,
    CertificationFailed,
    HypothesisUnverified,
    PrecisionExhausted,
)
from .numerics import DEFAULT_BITS, Interval, working_precision

MAX_DOUBLINGS = 4
RENDER_DIGITS = 20

# errors that mean "try again with more bits" rather than "the claim is broken"
_RETRYABLE = (HypothesisUnverified, PrecisionExhausted, CertificationFailed)


class Verdict(str, enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    UNDECIDED = "undecided"


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def render(q, up: bool) -> str:
    """Directed decimal rendering with a fixed number of significant digits."""
    q = Fraction(q)
    if q == 0:
        return "0"
    ctx = Context(prec=RENDER_DIGITS, rounding=ROUND_CEILING if up else ROUND_FLOOR)
    d = ctx.divide(Decimal(int(q.numerator)), Decimal(int(q.denominator)))
    return f"{d:.{RENDER_DIGITS - 1}E}"


def render_interval(x: Interval) -> list:
    lo, hi = x.fractions()
    return [render(lo, up=False), render(hi, up=True)]


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


def _bounds(x):
    if isinstance(x, Interval):
        return x.fractions()
    q = Fraction(x)
    return q, q


def _as_interval(x):
    return x if isinstance(x, Interval) else Interval(Fraction(x))


def _compare(lhs, rhs, relation):
    """Tri-state decision of ``lhs relation rhs`` from enclosures."""
    (a_lo, a_hi), (b_lo, b_hi) = _bounds(lhs), _bounds(rhs)
    if relation == "<":
        return True if a_hi < b_lo else False if a_lo >= b_hi else None
    if relation == "<=":
        return True if a_hi <= b_lo else False if a_lo > b_hi else None
    if relation == ">":
        return True if a_lo > b_hi else False if a_hi <= b_lo else None
    return True if a_lo >= b_hi else False if a_hi < b_lo else None


def _verdict(flag):
    if flag is None:
        return Verdict.UNDECIDED
    return Verdict.CERTIFIED if flag else Verdict.REFUTED


def decide(claim: Claim, value):
    """(Verdict, enclosure or None) for an evaluated expression."""
    kind = claim.kind
    target = claim.target_value
    if kind is ClaimKind.DECIMAL_APPROX:
        tol = Fraction(1, 10 ** (claim.digits - 1)) if claim.digits >= 1 else Fraction(10 ** (1 - claim.digits))
        lo, hi = _bounds(value)
        if target - tol < lo and hi < target + tol:
            flag = True
        elif hi <= target - tol or lo >= target + tol:
            flag = False
        else:
            flag = None
        return _verdict(flag), _as_interval(value)
    if kind is ClaimKind.STRICT_INEQ:
        return _verdict(_compare(value, target, claim.relation)), _as_interval(value)
    if kind is ClaimKind.NONNEG_GAP:
        return _verdict(_compare(value, 0, ">=")), _as_interval(value)
    if kind is ClaimKind.TABLE_ROW:
        if value is None or isinstance(value, bool):
            return _verdict(value), None
        lhs, rhs = value
        flag = _compare(lhs, rhs, claim.relation)
        margin = _as_interval(rhs) - _as_interval(lhs)
        if claim.relation in (">", ">="):
            margin = -margin
        return _verdict(flag), margin
    # identity
    if value is None:
        return Verdict.UNDECIDED, None
    if isinstance(value, bool) or isinstance(target, bool):
        return _verdict(value == target), None
    if isinstance(value, Interval):
        if not value.contains(target):
            return Verdict.REFUTED, value
        return (Verdict.CERTIFIED if value.is_point() else Verdict.UNDECIDED), value
    return _verdict(Fraction(value) == target), Interval(Fraction(value))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    claim_id: str
    kind: str
    verdict: Verdict
    enclosure: Interval | None
    precision_used: int
    runtime_ms: float
    target: str | None = None
    error: str | None = None

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "id": self.claim_id,
            "kind": self.kind,
            "verdict": self.verdict.value,
            "enclosure": None if self.enclosure is None else render_interval(self.enclosure),
            "precision_used": self.precision_used,
            "target": self.target,
        }
        if self.error is not None:
            out["error"] = self.error
        if timings:
            out["runtime_ms"] = round(self.runtime_ms, 3)
        return out


def _bits_of(prec) -> int:
    if prec is None:
        return DEFAULT_BITS
    return int(getattr(prec, "bits", prec))


def verify_claim(c: Claim, prec=None) -> Certificate:
    """Evaluate a claim, doubling the precision up to four times while undecided."""
    if isinstance(c, str):
        c = get_claim(c)
    start = time.perf_counter()
    bits = _bits_of(prec)
    verdict, enclosure, used, error = Verdict.UNDECIDED, None, bits, None
    for _ in range(MAX_DOUBLINGS + 1):
        effective = bits if c.max_bits is None else min(bits, c.max_bits)
        used = effective
        try:
            with working_precision(effective):
                verdict, enclosure = decide(c, c.evaluate())
            error = None
        except _RETRYABLE as exc:
            verdict, enclosure, error = Verdict.UNDECIDED, None, f"{type(exc).__name__}: {exc}"
        except BoundsError as exc:
            # a claim that cannot be evaluated at all is reported, not retried
            verdict, enclosure, error = Verdict.UNDECIDED, None, f"{type(exc).__name__}: {exc}"
            break
        if verdict is not Verdict.UNDECIDED:
            break
        if c.max_bits is not None and effective >= c.max_bits:
            break
        bits *= 2
    runtime = (time.perf_counter() - start) * 1000
    return Certificate(c.id, c.kind.value, verdict, enclosure, used, runtime, c.target, error)


@dataclass
class Report:
    certificates: list
    precision: int
    filter: tuple = ()
    extra: dict = field(default_factory=dict)

    @property
    def summary(self) -> dict:
        counts = {v.value: 0 for v in Verdict}
        for cert in self.certificates:
            counts[cert.verdict.value] += 1
        counts["total"] = len(self.certificates)
        return counts

    @property
    def exit_status(self) -> int:
        return 1 if self.summary["refuted"] else 0

    def to_json(self, timings: bool = False) -> dict:
        doc = {
            "version": __version__,
            "precision": self.precision,
            "filter": list(self.filter),
            "claims": [c.to_json(timings) for c in self.certificates],
            "summary": self.summary,
        }
        if timings:
            doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return doc

    def canonical(self) -> str:
        return canonical_json(self.to_json(timings=False))


def _select(claims, tags):
    if not tags:
        return list(claims)
    wanted = set(tags)
    return [c for c in claims if wanted.intersection(c.tags)]


def _verify_task(args):
    claim, bits = args
    return verify_claim(claim, bits)


def verify_all(filter=None, prec=None, parallelism: int = 1, claims=None, extra_claims=()) -> Report:
    """Verify every selected claim; the report is ordered by claim id."""
    base = load_catalog() if claims is None else list(claims)
    by_id = {c.id: c for c in base}
    for c in extra_claims:
        by_id[c.id] = c
    tags = tuple(sorted(filter)) if filter else ()
    selected = sorted(_select(by_id.values(), tags), key=lambda c: c.id)
    bits = _bits_of(prec)
    tasks = [(c, bits) for c in selected]
    if parallelism and parallelism > 1 and len(tasks) > 1:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=parallelism, mp_context=ctx) as pool:
            certs = list(pool.map(_verify_task, tasks, chunksize=1))
    else:
        certs = [_verify_task(t) for t in tasks]
    certs.sort(key=lambda cert: cert.claim_id)
    return Report(certs, bits, tags)


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


class UsageError(Exception):
    pass


def _number(text):
    try:
        return parse_number(text)
    except BoundsError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _count_json(bound, extra=None) -> dict:
    out = {
        "value": render_interval(bound.value),
        "value_log2": render_interval(bound.log2),
        "floor": bound.integer,
    }
    out.update(extra or {})
    return out


def _log_json(bound) -> dict:
    value = bound.value
    return {
        "value_log2": render_interval(bound.log2),
        "value_log10": render_interval(bound.log10),
        "value": None if value is None else render_interval(value),
        "floor": None if value is None else S.integer_bound(value),
    }


_CURVE_KEYS = {
    "g": "g",
    "genus": "g",
    "d": "d",
    "degree": "d",
    "abs_disc_k": "abs_disc_K",
    "n0": "N0",
    "abs_norm_disc_f": "abs_norm_disc_f",
    "deg_f": "deg_f",
    "s_size": "S_size",
    "cl2_dims": "cl2_dims",
    "cl2_base": "cl2_base",
}


def _integer(value, name):
    q = parse_number(value) if not isinstance(value, (int, Fraction)) else Fraction(value)
    if q.denominator != 1:
        raise UsageError(f"{name} must be an integer")
    return int(q)


def curve_params_from_document(doc: dict) -> D.CurveParams:
    kwargs = {}
    for key, value in doc.items():
        name = _CURVE_KEYS.get(key.lower())
        if name is None:
            raise UsageError(f"unknown curve field {key!r}")
        if name == "cl2_dims":
            kwargs[name] = [_integer(v, key) for v in value]
        elif value is not None:
            kwargs[name] = _integer(value, key)
    if "g" not in kwargs:
        raise UsageError("curve document needs a genus field 'g'")
    return D.CurveParams(**kwargs)


def _curve_params(args) -> D.CurveParams:
    doc = {}
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
    for key in ("genus", "degree", "abs_disc_k", "n0", "abs_norm_disc_f", "deg_f"):
        value = getattr(args, key, None)
        if value is not None:
            doc[key] = str(value)
    if "genus" in doc and "g" in doc:
        doc.pop("genus")
    return curve_params_from_document(doc)


def _cmd_bound(args):
    kind, g = args.kind, args.genus
    if kind == "mordell":
        r = M.mordell_bound(M.CountQuery(g, args.rank, M.Setting(args.setting)))
        return _count_json(r, {"branch": r.branch, "setting": r.setting.value if hasattr(r.setting, "value") else r.setting})
    if kind == "manin-mumford":
        return _count_json(M.manin_mumford_bound(g))
    if kind == "bogomolov":
        return _count_json(M.bogomolov_small(g, args.radius), {"strict": True})
    if kind == "geometric":
        ball, cone = M.geometric_bogomolov_bounds(g, args.radius, args.kappa, _theta_arg(args.theta))
        return {"ball": _count_json(ball), "cone": None if cone is None else _count_json(cone)}
    if kind == "medium":
        return _count_json(M.medium_bound(g, args.n, setting=M.Setting(args.setting)))
    if kind == "large":
        return _count_json(M.large_bound(g, args.n, M.LargeVariant(args.variant)))
    if kind == "bad-reduction":
        b = D.bad_reduction_bound(_curve_params(args))
        out = _log_json(b)
        out.update({"c1_log2": render_interval(b.c1_log2), "c2": render_interval(b.c2), "c3": render_interval(b.c3)})
        return out
    if kind == "hyperelliptic":
        return _log_json(D.hyperelliptic_count_bound(_curve_params(args)))
    if kind == "average":
        v = D.average_bounds(g, D.Marked(args.marked))
        return {"value": render_interval(v), "floor": S.integer_bound(v)}
    raise UsageError(f"unknown bound {kind!r}")


def _theta_arg(value):
    if value is None:
        return None
    return Interval(value)


def _cmd_rank(args):
    if args.kind == "descent":
        dims = [int(x) for x in args.cl2_dims.split(",")] if args.cl2_dims else []
        value = D.descent_general(args.genus, args.s_size, dims, args.cl2_base, odd_degree_orbit=args.odd_orbit)
        return {"value": value, "floor": value}
    p = _curve_params(args)
    if args.kind == "hyperelliptic":
        r = D.rank_bound_hyperelliptic(p)
    else:
        r = D.remond_rank(p)
    return {"value": render_interval(r), "floor": S.integer_bound(r)}


def _cmd_packing(args):
    methods = [m for m in S.Method] if args.method == "all" else [S.Method(args.method)]
    theta = Interval(args.theta)
    out = {"n": args.n, "theta": str(args.theta), "bounds": {}}
    for method in methods:
        try:
            res = S.packing_bound(S.PackingQuery(args.n, theta, method))
        except BoundsError as exc:
            out["bounds"][method.value] = {"error": f"{type(exc).__name__}: {exc}"}
            continue
        entry = {"value": render_interval(res.value), "integer": res.integer, "method": res.method}
        if "m" in res.detail:
            entry["m"] = res.detail["m"]
        out["bounds"][method.value] = entry
    if args.greedy_trials:
        out["greedy_lower_bound"] = S.greedy_lower_bound(args.n, float(args.theta), args.greedy_trials, args.seed)
    return out


def _cmd_hyperbolic(args):
    kind = args.kind
    if kind == "collar":
        geom = H.collar_from_length(args.ell)
        return {
            name: render_interval(getattr(geom, name))
            for name in ("ell", "width", "nu", "inner_radius", "outer_radius", "geodesic_radius", "gap")
        }
    if kind == "heat":
        if args.a is None:
            value, below = H.heat_diag_constant()
            return {"diag_constant": render_interval(value), "below_3e-5": below}
        u, majorant = H.heat_u_bound(args.a, args.t)
        return {"u": render_interval(u), "majorant": render_interval(majorant)}
    s = H.SurfaceParams(args.genus, sys=args.sys, ell_sigma=args.ell_sigma, phi=args.phi)
    if kind == "lambda1":
        b = H.lambda1_lower(s)
        return {"value": render_interval(b.value), "case": b.case, "normalisation": b.normalisation,
                "conditional": b.conditional}
    if kind == "phi":
        return {"lower": render_interval(H.phi_lower(s)), "upper": render_interval(H.phi_upper(s))}
    if kind == "fe":
        return {"value": render_interval(H.fe_lower(args.genus, args.n, H.FEMode(args.mode), s))}
    if kind == "registry":
        if not args.name:
            return {name: {"description": e.description, "required": list(e.required), "optional": list(e.optional)}
                    for name, e in sorted(H.BOUND_REGISTRY.items())}
        params = {}
        for item in args.param or []:
            key, sep, value = item.partition("=")
            if not sep:
                raise UsageError(f"parameters are given as key=value, not {item!r}")
            params[key] = value if key in ("z0", "z1", "ells") else parse_number(value)
        return {"name": args.name, "value": render_interval(H.named_bound(args.name, params))}
    raise UsageError(f"unknown hyperbolic command {kind!r}")


def _cmd_verify(args):
    extra = []
    if args.claims:
        with open(args.claims, encoding="utf-8") as fh:
            extra = claims_from_document(json.load(fh))
    tags = [t for t in (args.filter or "").split(",") if t]
    report = verify_all(tags, args.precision, args.parallelism, extra_claims=extra)
    return report


def _common_flags(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--precision", type=int, default=default(DEFAULT_BITS), help="working precision in bits")
    parser.add_argument("--json", action="store_true", default=default(False), help="print a JSON document")
    parser.add_argument("--seed", type=int, default=default(0), help="seed for randomised searches")
    parser.add_argument("--parallelism", type=int, default=default(1), help="worker processes for verify")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mordell-bounds", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    _common_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _common_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", parents=[common], help="point-count bounds")
    b.add_argument("kind", choices=["mordell", "manin-mumford", "bogomolov", "medium", "large", "geometric",
                                    "bad-reduction", "hyperelliptic", "average"])
    b.add_argument("--genus", type=int)
    b.add_argument("--rank", type=int, default=0)
    b.add_argument("--n", type=int, default=1)
    b.add_argument("--setting", choices=[s.value for s in M.Setting], default=M.Setting.NUMBER_FIELD.value)
    b.add_argument("--variant", choices=[v.value for v in M.LargeVariant], default=M.LargeVariant.RANKIN.value)
    b.add_argument("--radius", type=_number, default=Fraction(0))
    b.add_argument("--kappa", type=_number)
    b.add_argument("--theta", type=_number)
    b.add_argument("--marked", choices=[m.value for m in D.Marked], default=D.Marked.WEIERSTRASS.value)
    _curve_flags(b)

    r = sub.add_parser("rank", parents=[common], help="Mordell-Weil rank bounds")
    r.add_argument("kind", choices=["descent", "hyperelliptic", "remond"])
    r.add_argument("--genus", type=int)
    r.add_argument("--s-size", type=int, default=0)
    r.add_argument("--cl2-dims", default="")
    r.add_argument("--cl2-base", type=int, default=0)
    r.add_argument("--odd-orbit", action="store_true")
    _curve_flags(r)

    p = sub.add_parser("packing", parents=[common], help="spherical code bounds A(n, theta)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=_number, required=True)
    p.add_argument("--method", choices=[m.value for m in S.Method] + ["all"], default="all")
    p.add_argument("--greedy-trials", type=int, default=0)

    h = sub.add_parser("hyperbolic", parents=[common], help="hyperbolic surface estimates")
    h.add_argument("kind", choices=["collar", "heat", "lambda1", "phi", "fe", "registry"])
    h.add_argument("--genus", type=int, default=2)
    h.add_argument("--ell", type=_number)
    h.add_argument("--a", type=_number)
    h.add_argument("--t", type=_number, default=Fraction(1, 20))
    h.add_argument("--sys", type=_number)
    h.add_argument("--ell-sigma", type=_number)
    h.add_argument("--phi", type=_number)
    h.add_argument("--n", type=int, default=2)
    h.add_argument("--mode", choices=[m.value for m in H.FEMode], default=H.FEMode.PHI.value)
    h.add_argument("--name")
    h.add_argument("--param", action="append")

    v = sub.add_parser("verify", parents=[common], help="certify the claim catalog")
    v.add_argument("--filter", help="comma-separated tags")
    v.add_argument("--claims", help="JSON file with additional claims")
    v.add_argument("--output", help="write the report to this file")
    v.add_argument("--timings", action="store_true", help="include runtimes and a timestamp")
    return parser


def _curve_flags(parser):
    parser.add_argument("--input", help="JSON document with curve parameters")
    parser.add_argument("--degree", type=int, help="[K:Q]")
    parser.add_argument("--abs-disc-k", type=int)
    parser.add_argument("--n0", type=int)
    parser.add_argument("--abs-norm-disc-f", type=int)
    parser.add_argument("--deg-f", type=int)


def _needs_genus(args):
    if args.command == "bound" and args.kind in ("bad-reduction", "hyperelliptic"):
        return False
    if args.command == "rank" and args.kind != "descent":
        return False
    return args.command in ("bound", "rank")


def _emit(doc, args, out):
    if args.json:
        out.write(canonical_json(doc))
        return
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, list) and len(value) == 2 and all(isinstance(x, str) for x in value):
            value = f"[{value[0]}, {value[1]}]"
        elif isinstance(value, dict):
            value = json.dumps(value, sort_keys=True)
        out.write(f"{key}: {value}\n")


def cli_main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    if args.precision < 24:
        err.write("error: --precision must be at least 24 bits\n")
        return 2
    if args.parallelism < 1:
        err.write("error: --parallelism must be positive\n")
        return 2
    if _needs_genus(args) and args.genus is None:
        err.write("error: --genus is required\n")
        return 2
    try:
        if args.command == "verify":
            report = _cmd_verify(args)
            text = canonical_json(report.to_json(timings=args.timings))
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            if args.json:
                out.write(text)
            else:
                s = report.summary
                for cert in report.certificates:
                    if cert.verdict is not Verdict.CERTIFIED:
                        out.write(f"{cert.verdict.value}: {cert.claim_id}\n")
                out.write(f"certified {s['certified']}, refuted {s['refuted']}, undecided {s['undecided']}"
                          f" of {s['total']}\n")
            return report.exit_status
        with working_precision(args.precision):
            handler = {"bound": _cmd_bound, "rank": _cmd_rank, "packing": _cmd_packing,
                       "hyperbolic": _cmd_hyperbolic}[args.command]
            doc = handler(args)
    except (UsageError, BoundsError, OSError, json.JSONDecodeError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    _emit(doc, args, out)
    return 0


def main() -> None:
    sys.exit(cli_main())

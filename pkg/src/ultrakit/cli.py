"""Command-line front end: JSON request in, canonical JSON report out.

Exit status: 0 all checks pass, 1 a property is violated, 2 bad input,
3 some checks were inconclusive and none failed.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
import time
from fractions import Fraction
from typing import Any, Callable

from . import gauge, groups, scalars, semimetric, topology
from .errors import InputError, ResourceError, UltrakitError
from .reports import Report, Verdict
from .scalars import Magnitude, format_rational

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


# -- canonical JSON ----------------------------------------------------------

def jsonable(obj) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, float):
        return scalars.format_q(obj) if obj == scalars.INFINITY else repr(obj)
    if isinstance(obj, Magnitude):
        return obj.to_json()
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted((jsonable(x) for x in obj), key=sort_key)
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def sort_key(x) -> tuple:
    """Total order on JSON values: numbers, then strings, then lists, then objects."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, str):
        return (2, x)
    if isinstance(x, list):
        return (3, tuple(sort_key(y) for y in x))
    if isinstance(x, dict):
        return (4, json.dumps(x, sort_keys=True))
    return (5, repr(x))


def emit_report(report: dict, pretty: bool = False) -> str:
    return json.dumps(report, sort_keys=True, indent=2 if pretty else None,
                      separators=None if pretty else (",", ":"), ensure_ascii=False)


def _witnesses(items, points=None) -> list:
    out = []
    for w in items:
        if points is not None and isinstance(w, tuple):
            w = tuple(points[i] for i in w)
        out.append(jsonable(w))
    return sorted(out, key=sort_key)


def _report_json(r: Report, points=None) -> dict:
    return {
        "name": r.name,
        "verdict": r.verdict.value,
        "checked": r.checked,
        "violations": _witnesses(r.violations, points),
        "inconclusive": _witnesses(r.inconclusive, points),
    }


class Context:
    def __init__(self, args):
        self.precision_bits = args.precision_bits
        self.max_points = args.max_points
        self.max_group_order = args.max_group_order
        self.reports: list[Report] = []

    def track(self, r: Report) -> Report:
        self.reports.append(r)
        return r

    def matrix(self, data) -> semimetric.DistanceMatrix:
        D = semimetric.DistanceMatrix.from_json(data)
        cap = self.max_points or semimetric.DEFAULT_MAX_POINTS
        if D.size > cap:
            raise ResourceError(f"{D.size} points exceeds the bound {cap}")
        return D

    def verdict(self) -> Verdict:
        merged = Report("all")
        for r in self.reports:
            merged.violations.extend(r.violations)
            merged.inconclusive.extend(r.inconclusive)
        return merged.verdict


def _need(req: dict, key: str):
    if key not in req:
        raise InputError(f"missing field {key!r}")
    return req[key]


def _rational(x) -> Fraction:
    return scalars.parse_rational(str(x))


# -- commands ----------------------------------------------------------------

def cmd_validate_metric(req: dict, ctx: Context) -> dict:
    D = ctx.matrix(_need(req, "matrix"))
    q = scalars.parse_q(req.get("q", "1"))
    r = ctx.track(semimetric.check_q_semimetric(D, q, ctx.precision_bits))
    return {"q": scalars.format_q(q), "check": _report_json(r, D.points)}


def cmd_padic_table(req: dict, ctx: Context) -> dict:
    p = _need(req, "p")
    if not isinstance(p, int) or isinstance(p, bool) or not scalars.is_prime(p):
        raise InputError(f"p must be a prime integer, got {p!r}")
    rows = []
    for x in _need(req, "rationals"):
        x = _rational(x)
        v = scalars.padic_valuation(x, p)
        rows.append({"x": x, "valuation": "inf" if v == scalars.INFINITY else v,
                     "abs": scalars.abs_value(scalars.PAdic(p), x)})
    return {"p": p, "rows": jsonable(rows)}


def cmd_abs_value(req: dict, ctx: Context) -> dict:
    op = req.get("op", "classify")
    if op == "classify":
        spec = scalars.spec_from_json(_need(req, "spec"))
        arch = scalars.is_archimedean(spec)
        disc = scalars.is_discrete(spec)
        return {"op": op, "spec": scalars.spec_to_json(spec),
                "archimedean": arch.archimedean, "archimedean_witness": arch.witness,
                "discrete": disc.discrete, "rho1": disc.rho1}
    if op == "equivalent":
        s1 = scalars.spec_from_json(_need(req, "spec1"))
        s2 = scalars.spec_from_json(_need(req, "spec2"))
        a = scalars.equivalent(s1, s2)
        return {"op": op, "equivalent": a is not None, "exponent": a,
                "witness": None if a is not None else scalars.nonequivalence_witness(s1, s2)}
    if op == "triangle":
        spec = scalars.spec_from_json(_need(req, "spec"))
        q = scalars.parse_q(req.get("q", "1"))
        pairs = [(_rational(x), _rational(y)) for x, y in _need(req, "pairs")]
        r = ctx.track(scalars.check_q_triangle(spec, q, pairs, ctx.precision_bits))
        return {"op": op, "q": scalars.format_q(q), "check": _report_json(r)}
    raise InputError(f"unknown abs-value op {op!r}")


def cmd_combine(req: dict, ctx: Context) -> dict:
    mode = _need(req, "mode")
    mats = [ctx.matrix(m) for m in _need(req, "matrices")]
    if not mats:
        raise InputError("need at least one matrix")
    # the regime the inputs are meant to satisfy; every combination keeps it
    q = scalars.parse_q(req.get("q", "1"))
    if mode == "max":
        out = semimetric.combine_max(mats)
    elif mode == "sum":
        out = semimetric.combine_sum(mats)
    elif mode == "power":
        out = semimetric.combine_power(mats, _rational(_need(req, "r")))
    elif mode == "metrize":
        out = semimetric.metrize(mats)
    else:
        raise InputError(f"unknown combine mode {mode!r}")
    check = ctx.track(semimetric.check_q_semimetric(out, q, ctx.precision_bits))
    return {"mode": mode, "q": scalars.format_q(q), "matrix": out.to_json(),
            "zero_partition": semimetric.zero_partition(out) if check.holds else None,
            "check": _report_json(check, out.points)}


def cmd_cover(req: dict, ctx: Context) -> dict:
    D = ctx.matrix(_need(req, "matrix"))
    subset = req.get("subset")
    subset = None if subset is None else [semimetric.label_from_json(x) for x in subset]
    kind = req.get("kind", "closed")
    cover = semimetric.covering_number(D, subset, _rational(_need(req, "radius")), kind)
    return {"count": cover.count, "centers": jsonable(list(cover.centers)), "exact": cover.exact,
            "diameter": semimetric.diameter(D, subset)}


_TOPOLOGY_CHECKS = ("clopen", "tau0", "dimension-zero", "totally-separated",
                    "separation", "components", "embedding")


def cmd_topology(req: dict, ctx: Context) -> dict:
    cap = ctx.max_points or topology.DEFAULT_MAX_POINTS
    source = req.get("source", "opens")
    if source == "opens":
        T = topology.FiniteTopology.from_json(_need(req, "topology"), cap)
    elif source == "semimetrics":
        mats = [ctx.matrix(m) for m in _need(req, "matrices")]
        if mats and mats[0].size > cap:
            raise ResourceError(f"{mats[0].size} points exceeds the bound {cap}")
        T = topology.topology_from_semimetrics(mats)
    else:
        raise InputError(f"unknown topology source {source!r}")
    checks = req.get("checks", list(_TOPOLOGY_CHECKS[:-1]))
    out: dict = {"topology": T.to_json()}
    for c in checks:
        if c == "clopen":
            out["clopen"] = jsonable(topology.clopen_sets(T))
        elif c == "tau0":
            out["tau0"] = topology.tau0(T).to_json()
        elif c == "dimension-zero":
            out["dimension_zero"] = topology.is_dimension_zero(T)
        elif c == "totally-separated":
            out["totally_separated"] = topology.is_totally_separated(T)
        elif c == "separation":
            ax = topology.separation_axioms(T)
            out["separation"] = dict(ax._asdict(), t3=ax.t3, t4=ax.t4)
        elif c == "components":
            out["components"] = topology.connected_components(T).to_json()
        elif c == "embedding":
            W = [[semimetric.label_from_json(x) for x in w] for w in _need(req, "embedding")]
            out["embedding"] = topology.product_embedding(T, W).to_json()
        else:
            raise InputError(f"unknown topology check {c!r}")
    return out


def cmd_group(req: dict, ctx: Context) -> dict:
    G = groups.FiniteAbelianGroup.from_json(_need(req, "group"), ctx.max_group_order)
    action = _need(req, "action")
    if action == "subgroup":
        notes: list = []
        H = groups.subgroup_generated(G, G.elements_from_json(_need(req, "generators")), notes)
        Q = groups.quotient_group(G, H)
        return {"action": action, "subgroup": H.to_json(), "notes": notes, "quotient": Q.to_json()}
    if action == "semimetric":
        H = groups.Subgroup(G, G.elements_from_json(_need(req, "subgroup")))
        D = groups.subgroup_semimetric(G, H)
        balls = ctx.track(groups.balls_at_zero_are_subgroups(G, D))
        return {"action": action, "matrix": D.to_json(),
                "translation_invariant": groups.is_translation_invariant(G, D),
                "cosets": groups.coset_partition(G, H).to_json(),
                "balls": _report_json(balls)}
    if action == "weak-connectedness":
        family = [groups.Subgroup(G, G.elements_from_json(h)) for h in _need(req, "family")]
        T, nondegenerate = groups.topology_from_subgroup_family(G, family)
        opens = groups.open_subgroups(G, T)
        return {"action": action, "nondegenerate": nondegenerate,
                "open_subgroups": sorted((H.to_json() for H in opens), key=sort_key),
                "weakly_connected": groups.weakly_connected(G, T)}
    if action == "u-separated":
        B = G.elements_from_json(_need(req, "B"))
        C = G.elements_from_json(_need(req, "C"))
        U = G.elements_from_json(_need(req, "U"))
        out = {"action": action, "separated": groups.u_separated(G, B, C, U)}
        if B and C == frozenset(G.elements) - B and out["separated"]:
            r = ctx.track(groups.separated_implies_subgroup_invariance(G, B, U))
            out["invariance"] = _report_json(r)
        return out
    raise InputError(f"unknown group action {action!r}")


def cmd_minkowski(req: dict, ctx: Context) -> dict:
    A = gauge.set_from_json(_need(req, "set"))
    allow = req.get("allow_zero_scalar", True)
    if not isinstance(allow, bool):
        raise InputError("allow_zero_scalar must be a boolean")
    rows = []
    for v in _need(req, "vectors"):
        vec = gauge.vector(_rational(x) for x in v)
        rows.append({"v": vec, "gauge": gauge.minkowski_functional(A, vec, allow)})
    info = gauge.is_absorbing(A)
    out = {"values": jsonable(rows),
           "absorbing": {"absorbing": info.absorbing, "witness": jsonable(info.witness)}}
    if req.get("recovery") and isinstance(A, (gauge.ClosedUnitBall, gauge.OpenUnitBall)):
        vecs = [gauge.vector(_rational(x) for x in v) for v in req["vectors"]]
        r = ctx.track(gauge.theorem_unit_ball_recovery(A.norm, vecs))
        out["recovery"] = _report_json(r)
    return out


COMMANDS: dict[str, Callable[[dict, Context], dict]] = {
    "validate-metric": cmd_validate_metric,
    "padic-table": cmd_padic_table,
    "abs-value": cmd_abs_value,
    "combine": cmd_combine,
    "cover": cmd_cover,
    "topology": cmd_topology,
    "group": cmd_group,
    "minkowski": cmd_minkowski,
}


def run(command: str, req, args) -> tuple[dict, int]:
    """Execute one command; returns the report and its exit status."""
    if not isinstance(req, dict):
        raise InputError("request must be a JSON object")
    ctx = Context(args)
    if command == "batch":
        items = _need(req, "commands")
        if not isinstance(items, list):
            raise InputError("'commands' must be a list")
        results, codes = [], []
        for item in items:
            if not isinstance(item, dict) or "command" not in item:
                raise InputError("each batch item needs a 'command'")
            sub = {k: v for k, v in item.items() if k != "command"}
            if item["command"] not in COMMANDS:
                raise InputError(f"unknown command {item['command']!r}")
            report, code = run(item["command"], sub, args)
            results.append(report)
            codes.append(code)
        code = (EXIT_VIOLATION if EXIT_VIOLATION in codes
                else EXIT_INCONCLUSIVE if EXIT_INCONCLUSIVE in codes else EXIT_OK)
        return {"command": "batch", "results": results, "status": code}, code
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    result = COMMANDS[command](req, ctx)
    verdict = ctx.verdict()
    code = {Verdict.HOLDS: EXIT_OK, Verdict.FAILS: EXIT_VIOLATION,
            Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict]
    return {"command": command, "request": req, "result": result, "verdict": verdict.value}, code


class _Parser(argparse.ArgumentParser):
    """Argument errors become input errors so they share the JSON error path."""

    def error(self, message):
        raise InputError(message)


def _fail(exc: Exception) -> int:
    sys.stderr.write(emit_report({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="JSON request file (default: stdin)")
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")
    common.add_argument("--precision-bits", type=int, default=scalars.DEFAULT_PRECISION_BITS)
    common.add_argument("--max-points", type=int, default=None)
    common.add_argument("--max-group-order", type=int, default=groups.DEFAULT_MAX_ORDER)
    parser = _Parser(prog="ultrakit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in [*COMMANDS, "batch"]:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InputError as exc:
        return _fail(exc)
    except SystemExit as exc:  # --help
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        if args.precision_bits < 16:
            raise InputError("--precision-bits must be at least 16")
        if args.input:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
        try:
            req = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        report, code = run(args.command, req, args)
    except (UltrakitError, ValueError, TypeError, KeyError, OSError) as exc:
        # every failure here is an input problem: bad JSON shape, bad values, unmet preconditions
        return _fail(exc)
    if not args.no_timing:
        report["timing"] = {"seconds": f"{time.perf_counter() - start:.6f}"}
    sys.stdout.write(emit_report(jsonable(report), args.pretty) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

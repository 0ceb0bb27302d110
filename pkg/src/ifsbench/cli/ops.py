"""Task operations callable from a config: name -> (category, runner)."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from ..properties import (FAIL, INCONCLUSIVE, PASS, PropertyReport, SegmentSpec, check_lws,
                          check_shadowing, check_specification, check_ssp, detect_periodicity,
                          drift_pseudo_orbit, estimate_spec_constant, gen_pseudo_orbit,
                          periodicity_audit, probe_mixing_exact)
from ..properties.shadowing import PseudoOrbit
from ..properties.specification import random_point
from ..symbolic.covers import fischer_cover
from ..symbolic.shifts import GraphBacked
from ..systems.family import is_surjective, orbit
from ..systems.intervals import IntervalUnion
from ..systems.spaces import Circle
from ..transfer import (promote_periodic_sft, promote_periodic_sofic, transfer_periodic_transitive,
                        transfer_shadowing, transfer_specification)

Table = Optional[Dict[str, list]]
HORIZON_KEYS = ("horizon", "periodic_horizon", "search_horizon")


def _points(ctx, spec, rng) -> List:
    if isinstance(spec, dict):
        return [random_point(ctx.space, rng, int(spec.get("denominator", 997)))
                for _ in range(int(spec["random"]))]
    if isinstance(spec, list):
        return [ctx.point(p) for p in spec]
    return [ctx.point(spec)]


def _spec(ctx, d) -> SegmentSpec:
    return SegmentSpec(tuple(ctx.point(p) for p in d["points"]), tuple(tuple(p) for p in d["pairs"]),
                       int(d.get("gap", 1)))


def _union(ctx, intervals, closed):
    return IntervalUnion.of([tuple(iv) for iv in intervals], closed=closed,
                            circle=isinstance(ctx.space, Circle))


def op_orbit(ctx, p, seed):
    seg = orbit(ctx.ifs, ctx.point(p["point"]), ctx.stream(p["stream"]), int(p["n"]))
    rows = [list(r) for r in seg.rows(ctx.space)]
    rep = PropertyReport("orbit", PASS, {"last": ctx.space.format_point(seg.points[-1])},
                         {"n": int(p["n"])})
    return rep, {"columns": ["step", "exact", "float"], "rows": rows}


def op_check_specification(ctx, p, seed):
    return check_specification(ctx.ifs, ctx.stream(p["stream"]), p["eps"], _spec(ctx, p["spec"]),
                               int(p.get("grid", 4096))), None


def op_check_ssp(ctx, p, seed):
    return check_ssp(ctx.ifs, ctx.stream(p["stream"]), p["eps"], _spec(ctx, p["spec"]),
                     int(p.get("grid", 4096)), int(p.get("period_horizon", 16)),
                     int(p.get("periodic_horizon", 256))), None


def op_check_lws(ctx, p, seed):
    return check_lws(ctx.ifs, ctx.stream(p["stream"]), p["eps"], int(p["N"]), p["delta"],
                     [ctx.point(x) for x in p["chain"]], int(p["n"]), int(p.get("grid", 4096))), None


def op_estimate_spec_constant(ctx, p, seed):
    N = estimate_spec_constant(ctx.ifs, ctx.stream(p["stream"]), p["eps"], int(p.get("trials", 100)),
                               int(p.get("cap", 12)), int(p.get("seed", seed)), int(p.get("grid", 4096)))
    params = {"eps": p["eps"], "trials": p.get("trials", 100), "cap": p.get("cap", 12)}
    if N is None:
        return PropertyReport("spec-constant", FAIL, None, params, True,
                              ["no gap up to the cap made every random spec pass"]), None
    return PropertyReport("spec-constant", PASS, {"N": N}, params, True), None


def _pseudo_orbit(ctx, stream, d, seed):
    kind = d.get("kind", "random")
    if kind == "random":
        return gen_pseudo_orbit(ctx.ifs, stream, ctx.point(d["x0"]), d["delta"], int(d["length"]),
                                int(d.get("seed", seed)))
    if kind == "drift":
        return drift_pseudo_orbit(ctx.ifs, stream, d["step"], int(d["length"]), d.get("delta"))
    if kind == "explicit":
        from ..properties.reports import as_tolerance
        return PseudoOrbit([ctx.point(x) for x in d["points"]], as_tolerance(d["delta"]), stream)
    raise ValueError(f"unknown pseudo-orbit kind {kind!r}")


def op_check_shadowing(ctx, p, seed):
    stream = ctx.stream(p["stream"])
    count = int(p.get("count", 1))
    d = dict(p["pseudo_orbit"])
    base_seed = int(d.pop("seed", seed))
    verdicts, witnesses, last = [], [], None
    rows = []
    for c in range(count):
        po = _pseudo_orbit(ctx, stream, dict(d, seed=base_seed + c), base_seed + c)
        rep = check_shadowing(ctx.ifs, stream, po, p["eps"], p.get("method", "grid"),
                              int(p.get("grid", 4096)))
        verdicts.append(rep.verdict)
        witnesses.append(rep.witness)
        last = rep
        if c == 0:
            rows = [[i, ctx.space.format_point(x), ctx.space.to_float(x)] for i, x in enumerate(po.points)]
    if count == 1:
        return last, {"columns": ["step", "exact", "float"], "rows": rows}
    verdict = FAIL if FAIL in verdicts else INCONCLUSIVE if INCONCLUSIVE in verdicts else PASS
    params = dict(last.parameters, count=count)
    return PropertyReport("shadowing", verdict, {"per_orbit": verdicts, "first": witnesses[0]},
                          params), None


def op_probe_mixing(ctx, p, seed):
    closed = bool(p.get("closed", False))
    U = _union(ctx, p["U"], closed)
    V = _union(ctx, p["V"], closed) if p.get("V") is not None else None
    return probe_mixing_exact(ctx.ifs, ctx.stream(p["stream"]), U, V, int(p.get("N", 1)),
                              int(p.get("horizon", 64)), p.get("mode", "mixing")), None


def op_detect_periodicity(ctx, p, seed):
    rng = random.Random(seed)
    pts = _points(ctx, p.get("points", p.get("point")), rng)
    stream = ctx.stream(p["stream"])
    kw = dict(p=p.get("p"), horizon=int(p.get("horizon", 1024)),
              threshold=int(p.get("threshold", 3)), sub=p.get("sub"))
    reps = [detect_periodicity(ctx.ifs, stream, x, p["kind"], **kw) for x in pts]
    if len(reps) == 1:
        rep = reps[0]
        table = None
        if rep.witness and "returns" in rep.witness:
            table = {"columns": ["return", "time"],
                     "rows": [[i, r] for i, r in enumerate(rep.witness["returns"])]}
        return rep, table
    verdicts = [r.verdict for r in reps]
    failing = [i for i, v in enumerate(verdicts) if v != PASS]
    verdict = PASS if not failing else FAIL
    wit = {"points": len(reps), "passed": len(reps) - len(failing)}
    if failing:
        r = reps[failing[0]]
        wit["first_failure"] = {"x": r.parameters["x"], "witness": r.witness}
    return PropertyReport(reps[0].name, verdict, wit, dict(reps[0].parameters, x=None),
                          any(r.horizon_limited for r in reps)), None


def op_periodicity_audit(ctx, p, seed):
    rng = random.Random(seed)
    pts = _points(ctx, p.get("points", p.get("point")), rng)
    stream = ctx.stream(p["stream"])
    violations, table = [], []
    for x in pts:
        verdicts, bad = periodicity_audit(ctx.ifs, stream, x, int(p["p"]), int(p.get("horizon", 256)),
                                          int(p.get("threshold", 3)))
        table.append([ctx.space.format_point(x)] + [verdicts[k] for k in
                                                    ("orbitally", "regularly", "periodic", "weakly")])
        violations.extend(f"{ctx.space.format_point(x)}: {v}" for v in bad)
    rep = PropertyReport("periodicity-audit", FAIL if violations else PASS,
                         {"violations": violations}, {"p": p["p"], "points": len(pts)})
    return rep, {"columns": ["x", "orbitally", "regularly", "periodic", "weakly"], "rows": table}


def op_is_surjective(ctx, p, seed):
    flags = is_surjective(ctx.family)
    verdict = PASS if all(flags.values()) else FAIL
    return PropertyReport("surjective", verdict, {str(a): v for a, v in flags.items()}, {}), None


def op_transfer_specification(ctx, p, seed):
    return transfer_specification(ctx.ifs, ctx.stream(p["t"]), ctx.stream(p["sigma"]), p["eps"],
                                  _spec(ctx, p["spec"]), int(p.get("search_horizon", 1 << 16)),
                                  p.get("N"), int(p.get("trials", 20)), int(p.get("cap", 12)),
                                  int(p.get("seed", seed)), int(p.get("grid", 4096))), None


def op_transfer_shadowing(ctx, p, seed):
    sigma = ctx.stream(p["sigma"])
    alpha = _pseudo_orbit(ctx, sigma, p["pseudo_orbit"], seed)
    return transfer_shadowing(ctx.ifs, ctx.stream(p["t"]), sigma, alpha, p["eps"],
                              [int(n) for n in p.get("ladder", [])], int(p.get("tail", 8)),
                              int(p.get("search_horizon", 1 << 16))), None


def _cert_report(name, cert, space, extra=None):
    wit = cert.to_dict(space)
    if extra:
        wit.update(extra)
    return PropertyReport(name, PASS if cert.verified else FAIL, wit,
                          {"p": cert.p, "M": cert.M})


def op_promote_periodic_sft(ctx, p, seed):
    cert = promote_periodic_sft(ctx.shift, ctx.stream(p["sigma"]), ctx.family, ctx.point(p["point"]),
                                int(p["p"]), int(p.get("horizon", 1024)), ctx.space)
    return _cert_report("promotion-sft", cert, ctx.space), None


def op_promote_periodic_sofic(ctx, p, seed):
    cert, info = promote_periodic_sofic(ctx.shift, ctx.stream(p["sigma"]), ctx.family,
                                        ctx.point(p["point"]), int(p["p"]), int(p.get("horizon", 1024)),
                                        ctx.space)
    return _cert_report("promotion-sofic", cert, ctx.space,
                        {"cover": info["cover"], "start_vertex": info["start_vertex"]}), None


def op_transfer_periodic_transitive(ctx, p, seed):
    k, rep = transfer_periodic_transitive(ctx.ifs, ctx.stream(p["t"]), ctx.stream(p["sigma"]),
                                          ctx.point(p["point"]), int(p["p"]), int(p.get("horizon", 256)))
    if k is None:
        return PropertyReport("transfer-periodic", FAIL, {"per_k": [r.verdict for r in rep]},
                              {"p": p["p"]}, True), None
    return PropertyReport("transfer-periodic", PASS, {"k": k, "report": rep.to_dict()},
                          {"p": p["p"]}, True, list(rep.notes)), None


def op_fischer_cover(ctx, p, seed):
    if not isinstance(ctx.shift, GraphBacked):
        raise TypeError("the subshift has no finite graph presentation")
    cover = fischer_cover(ctx.shift.presentation)
    return PropertyReport("fischer-cover", PASS, {"graph": cover.to_dict(), "dot": cover.to_dot()},
                          {"vertices": len(cover.vertices)}), None


CHECK, TRANSFER, UTIL = "check", "transfer", "util"
OPS: Dict[str, Tuple[str, Callable]] = {
    "orbit": (UTIL, op_orbit),
    "is_surjective": (CHECK, op_is_surjective),
    "check_specification": (CHECK, op_check_specification),
    "check_ssp": (CHECK, op_check_ssp),
    "check_lws": (CHECK, op_check_lws),
    "estimate_spec_constant": (CHECK, op_estimate_spec_constant),
    "check_shadowing": (CHECK, op_check_shadowing),
    "probe_mixing": (CHECK, op_probe_mixing),
    "detect_periodicity": (CHECK, op_detect_periodicity),
    "periodicity_audit": (CHECK, op_periodicity_audit),
    "transfer_specification": (TRANSFER, op_transfer_specification),
    "transfer_shadowing": (TRANSFER, op_transfer_shadowing),
    "promote_periodic_sft": (TRANSFER, op_promote_periodic_sft),
    "promote_periodic_sofic": (TRANSFER, op_promote_periodic_sofic),
    "transfer_periodic_transitive": (TRANSFER, op_transfer_periodic_transitive),
    "fischer_cover": (UTIL, op_fischer_cover),
}


def scale_horizons(params: dict, scale: float) -> dict:
    if scale == 1:
        return params
    out = dict(params)
    for key in HORIZON_KEYS:
        if key in out:
            out[key] = max(1, int(round(int(out[key]) * scale)))
    return out

"""Batch command-line interface.

Non-interactive front-end: load or generate a graph, run one analysis,
emit a JSON report (stdout or --out).  Exit codes: 0 success, 2 when
the analysis itself raises warnings (non-adapted metric, failed
checks, truncated profiles), 1 on input or solver errors.

Reports with equal inputs, parameters, and seed are byte-identical;
wall-clock timings are attached only under --timings for that reason.
Figures are opt-in via --figures DIR and never feed back into results.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Dict, List, Optional, Tuple

from . import families
from .completeness import SolverError, incompleteness_defect
from .graph import (
    BallCapError,
    GraphFormatError,
    WeightedGraph,
    ball_window,
    full_window,
    load_graph,
    save_graph,
    validate,
)
from .growth import grigoryan_integral, growth_fit, save_profile, volume_profile
from .metric_graph import build, dump_metric_graph, interpolation_bounds_check, sobolev_check
from .metrics import EdgeLengths, PathMetric, check_adapted, degree_metric, load_metric
from .report import build_report, fingerprint_file, jsonable, write_report
from .simulate import simulate_ensemble


def _parse_radii(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ValueError(f"--radii expects comma-separated numbers, got {text!r}") from None


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", help="write the JSON report here instead of stdout")
    sp.add_argument("--seed", type=int, default=0, help="seed for all randomized steps")
    sp.add_argument("--timings", action="store_true",
                    help="attach wall-clock timings (breaks byte-identity)")
    sp.add_argument("--figures", metavar="DIR",
                    help="also render matplotlib figures into DIR")


def _add_source(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--graph", help="graph file (vertex/edge records)")
    sp.add_argument("--family",
                    choices=["birth_death", "anti_tree", "lattice", "random_tree"],
                    help="generate a canonical family instead of loading a file")
    sp.add_argument("--alpha", type=float, default=1.0,
                    help="birth-death weight exponent (family birth_death)")
    sp.add_argument("--a", type=float, default=3.0,
                    help="anti-tree sphere exponent (family anti_tree)")
    sp.add_argument("--n", type=int, default=100,
                    help="vertex count (family random_tree)")
    sp.add_argument("--center", type=int, default=None,
                    help="center vertex (default: family origin or smallest id)")


def _add_metric(sp: argparse.ArgumentParser, default: str) -> None:
    sp.add_argument("--metric", default=default,
                    help=f"edge lengths: 'unit', 'degree', or a metric file "
                         f"(default {default})")
    sp.add_argument("--c0", type=float, default=None,
                    help="jump size bound (default: metric file value or 1)")


def _resolve_graph(args) -> Tuple[WeightedGraph, Dict[str, str], bool, int]:
    """Returns (graph, input fingerprints, finite?, default center)."""
    if args.graph and args.family:
        raise ValueError("--graph and --family are mutually exclusive")
    if args.graph:
        g = load_graph(args.graph)
        center = min(g.vertex_ids)
        return g, {"graph": fingerprint_file(args.graph)}, True, center
    if not args.family:
        raise ValueError("one of --graph or --family is required")
    if args.family == "birth_death":
        return families.birth_death(args.alpha), {}, False, 0
    if args.family == "anti_tree":
        return families.anti_tree(args.a), {}, False, 0
    if args.family == "lattice":
        return families.lattice(), {}, False, families.lattice_origin()
    g = families.random_tree(args.n, seed=args.seed)
    return g, {}, True, 0


def _resolve_metric(g, args, inputs: Dict[str, str]):
    """Returns (EdgeLengths or None for unit lengths, c0)."""
    spec = args.metric
    if spec == "unit":
        c0 = args.c0 if args.c0 is not None else 1.0
        return None, c0
    if spec == "degree":
        c0 = args.c0 if args.c0 is not None else 1.0
        return degree_metric(g, c0=c0), c0
    lengths = load_metric(spec)
    inputs["metric"] = fingerprint_file(spec)
    c0 = args.c0 if args.c0 is not None else lengths.c0
    return lengths, c0


def _as_lengths(lengths, c0: float) -> EdgeLengths:
    if lengths is None:
        return EdgeLengths(lambda x, y: 1.0, c0=c0)
    return lengths


def _window_for(g, lengths, center: int, radius: Optional[float], finite: bool):
    if finite and radius is None:
        return full_window(g)
    r = radius if radius is not None else 8.0
    return ball_window(g, lengths, center, r)


# ----------------------------------------------------------------- commands


def _cmd_check_adapted(args, timings) -> Tuple[int, Dict, List[str], Dict]:
    g, inputs, finite, center0 = _resolve_graph(args)
    lengths, c0 = _resolve_metric(g, args, inputs)
    center = args.center if args.center is not None else center0
    t0 = time.perf_counter()
    window = _window_for(g, lengths, center, args.radius, finite)
    problems = validate(g, window)
    pm = PathMetric(g, _as_lengths(lengths, c0))
    rep = check_adapted(g, pm, c0, window)
    timings["check_adapted"] = time.perf_counter() - t0
    analyses = {"adaptedness": {
        "verdict": rep.verdict,
        "worst_sum": rep.worst_sum,
        "worst_vertex": rep.worst_vertex,
        "longest_edge": rep.longest_edge,
        "c0": rep.c0,
        "window_vertices": len(window),
        "graph_problems": problems,
    }}
    warnings = [f"graph validation: {p}" for p in problems]
    if rep.verdict != "adapted":
        warnings.append(f"metric not adapted: {rep}")
    return (2 if warnings else 0), analyses, warnings, inputs


def _cmd_resolvent(args, timings) -> Tuple[int, Dict, List[str], Dict]:
    g, inputs, finite, center0 = _resolve_graph(args)
    lengths, c0 = _resolve_metric(g, args, inputs)
    center = args.center if args.center is not None else center0
    radii = _parse_radii(args.radii)
    t0 = time.perf_counter()
    profile = incompleteness_defect(g, lengths, center, lam=args.lam, radii=radii)
    timings["resolvent"] = time.perf_counter() - t0
    analyses = {"resolvent": {
        "lambda": profile.lam,
        "center": profile.x0,
        "radii": list(profile.radii),
        "deficiency": list(profile.deficiency),
        "residuals": list(profile.residuals),
        "verdict": profile.verdict,
        "seed": args.seed,
    }}
    figs = {}
    if args.figures:
        from .figures import resolvent_figure

        figs["resolvent"] = resolvent_figure(profile, args.figures)
    if figs:
        analyses["figures"] = figs
    return 0, analyses, [], inputs


def _cmd_simulate(args, timings) -> Tuple[int, Dict, List[str], Dict]:
    g, inputs, finite, center0 = _resolve_graph(args)
    lengths, c0 = _resolve_metric(g, args, inputs)
    center = args.center if args.center is not None else center0
    t0 = time.perf_counter()
    ens = simulate_ensemble(g, center, args.trajectories, horizon=args.horizon,
                            jump_cap=args.jump_cap, radius_cap=args.radius_cap,
                            d=lengths if args.radius_cap is not None else None,
                            seed=args.seed)
    timings["simulate"] = time.perf_counter() - t0
    counts = ens.status_counts
    analyses = {"monte_carlo": {
        "trajectories": args.trajectories,
        "horizon": args.horizon,
        "jump_cap": args.jump_cap,
        "radius_cap": args.radius_cap,
        "seed": args.seed,
        "status_counts": counts,
        "fractions": {k: v / args.trajectories for k, v in counts.items()},
        "mean_jumps": float(sum(ens.jumps)) / args.trajectories,
        "mean_final_time": float(sum(ens.final_times)) / args.trajectories,
    }}
    figs = {}
    if args.figures:
        from .figures import ensemble_figure

        figs["simulate"] = ensemble_figure(ens, args.figures)
    if figs:
        analyses["figures"] = figs
    return 0, analyses, [], inputs


def _cmd_metric_verify(args, timings) -> Tuple[int, Dict, List[str], Dict]:
    import numpy as np

    from .graph import VertexFunction, energy
    from .metric_graph import energy_form, interpolate

    g, inputs, finite, center0 = _resolve_graph(args)
    lengths, c0 = _resolve_metric(g, args, inputs)
    center = args.center if args.center is not None else center0
    t0 = time.perf_counter()
    window = _window_for(g, lengths, center, args.radius, finite)
    pm = PathMetric(g, _as_lengths(lengths, c0))
    adapt = check_adapted(g, pm, c0, window)
    X = build(g, pm, window)
    warnings = list(X.warnings)
    if args.radii:
        radii = _parse_radii(args.radii)
    else:
        spread = max(X.vertex_distances(center).values()) or 1.0
        radii = tuple(spread * (k + 1) / 16 for k in range(16))
    from .metric_graph import compare_lemma

    comp = compare_lemma(g, pm, X, center, radii)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    worst_interp = 0.0
    worst_energy = 0.0
    for _ in range(5):
        # zero on the window boundary: the discrete energy treats values
        # as finitely supported, so edges leaving the window must carry no mass
        w = VertexFunction({x: (float(rng.uniform(-2, 2)) if x in window.interior
                                else 0.0) for x in window.vertices},
                           window)
        rep = interpolation_bounds_check(X, w)
        worst_interp = max(worst_interp, rep.energy_residual, rep.l2_residual)
        wh = interpolate(X, w)
        e_disc = energy(g, w, w)
        diff = abs(energy_form(X, wh, wh) - e_disc) / max(1.0, abs(e_disc))
        worst_energy = max(worst_energy, diff)
    sob = sobolev_check(X, n_samples=100, seed=args.seed)
    timings["metric_verify"] = time.perf_counter() - t0
    if args.dump_medge:
        dump_metric_graph(X, args.dump_medge)
    analyses = {"metric_graph": {
        "edges": X.n_edges,
        "total_measure": X.total_measure(),
        "adaptedness": adapt.verdict,
        "comparison": {
            "metric_margin": comp.metric_margin,
            "metric_worst_pair": list(comp.metric_worst_pair) if comp.metric_worst_pair else None,
            "volume_margin": comp.volume_margin,
            "volume_worst_radius": comp.volume_worst_radius,
            "radii": list(radii),
            "ok": comp.ok,
        },
        "identity_residuals": {
            "interpolation": worst_interp,
            "energy_match": worst_energy,
        },
        "sobolev": {
            "samples": sob.n_samples,
            "interval_violations": sob.interval_violations,
            "weighted_violations": sob.weighted_violations,
            "trace_violations": sob.trace_violations,
        },
    }}
    bad = (not comp.ok or adapt.verdict != "adapted"
           or sob.interval_violations or sob.trace_violations
           or worst_interp > 1e-12 or worst_energy > 1e-10)
    if adapt.verdict != "adapted":
        warnings.append(f"metric not adapted: {adapt}")
    if not comp.ok:
        warnings.append("comparison lemma margins negative")
    return (2 if bad or warnings else 0), analyses, warnings, inputs


def _cmd_volume(args, timings) -> Tuple[int, Dict, List[str], Dict]:
    g, inputs, finite, center0 = _resolve_graph(args)
    lengths, c0 = _resolve_metric(g, args, inputs)
    center = args.center if args.center is not None else center0
    t0 = time.perf_counter()
    profile = volume_profile(g, lengths, center, args.r_max, steps=args.steps)
    gri = grigoryan_integral(profile, r_min=args.r_min)
    fit = growth_fit(profile)
    timings["volume"] = time.perf_counter() - t0
    warnings = []
    if profile.truncated:
        warnings.append("ball search hit the vertex cap; volumes are lower bounds")
    if args.csv:
        save_profile(profile, args.csv)
    analyses = {"volume": {
        "center": profile.center,
        "metric": profile.metric,
        "r_max": args.r_max,
        "steps": args.steps,
        "truncated": profile.truncated,
        "profile": [[r, v] for r, v in zip(profile.rs, profile.volumes)],
        "grigoryan": {
            "value": gri.value,
            "diagnostic": gri.diagnostic,
            "tail_slope": gri.tail_slope,
            "tail_r2": gri.tail_r2,
            "r_min": args.r_min,
        },
        "growth_fit": {"a": fit.a, "b": fit.b, "flag": fit.flag},
    }}
    figs = {}
    if args.figures:
        from .figures import volume_figure

        figs["volume"] = volume_figure(profile, gri, args.figures)
    if figs:
        analyses["figures"] = figs
    return (2 if warnings else 0), analyses, warnings, inputs


def _cmd_family(args, timings) -> Tuple[int, Dict, List[str], Dict]:
    if not args.family:
        raise ValueError("family requires --family KIND")
    g, inputs, finite, center0 = _resolve_graph(args)
    center = args.center if args.center is not None else center0
    t0 = time.perf_counter()
    window = None
    if not finite:
        window = ball_window(g, None, center, args.depth)
    if not args.graph_out:
        raise ValueError("family requires --graph-out FILE for the graph records")
    save_graph(g, args.graph_out, window=window)
    timings["family"] = time.perf_counter() - t0
    analyses = {"family": {
        "kind": args.family,
        "written": args.graph_out,
        "vertices": len(window) if window is not None else len(g.vertex_ids),
        "depth": args.depth if window is not None else None,
    }}
    return 0, analyses, [], inputs


def _cmd_verify_all(args, timings) -> Tuple[int, Dict, List[str], Dict]:
    from .verification import run_checks

    names = args.checks.split(",") if args.checks else None
    t0 = time.perf_counter()
    results = run_checks(names, seed=args.seed)
    timings["verify_all"] = time.perf_counter() - t0
    failed = [r.name for r in results if not r.passed]
    analyses = {"verification": {
        "seed": args.seed,
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                   for r in results],
        "passed": len(results) - len(failed),
        "failed": failed,
    }}
    warnings = [f"check failed: {n}" for n in failed]
    return (2 if failed else 0), analyses, warnings, {}


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for analysis-level warnings; usage errors are 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="sclab",
        description="Numerical laboratory for stochastic completeness of weighted graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check-adapted", help="adaptedness report for a metric")
    _add_source(sp)
    _add_metric(sp, default="degree")
    sp.add_argument("--radius", type=float, default=None,
                    help="window radius for infinite graphs (default 8)")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_check_adapted)

    sp = sub.add_parser("resolvent", help="Dirichlet resolvent deficiency along an exhaustion")
    _add_source(sp)
    _add_metric(sp, default="unit")
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0,
                    help="resolvent parameter (default 1)")
    sp.add_argument("--radii", default="4,8,16",
                    help="comma-separated exhaustion radii (default 4,8,16)")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_resolvent)

    sp = sub.add_parser("simulate", help="minimal-chain Monte Carlo ensemble")
    _add_source(sp)
    _add_metric(sp, default="unit")
    sp.add_argument("--trajectories", type=int, default=100)
    sp.add_argument("--horizon", type=float, default=10.0)
    sp.add_argument("--jump-cap", type=int, default=100_000)
    sp.add_argument("--radius-cap", type=float, default=None,
                    help="stop trajectories leaving this metric ball")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_simulate)

    sp = sub.add_parser("metric-verify",
                        help="build the metric graph and verify its lemmas")
    _add_source(sp)
    _add_metric(sp, default="degree")
    sp.add_argument("--radius", type=float, default=None)
    sp.add_argument("--radii", default=None,
                    help="comparison radii (default: 16 up to the window spread)")
    sp.add_argument("--dump-medge", help="write medge records of the built metric graph")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_metric_verify)

    sp = sub.add_parser("volume", help="ball volume profile and growth diagnostics")
    _add_source(sp)
    _add_metric(sp, default="unit")
    sp.add_argument("--r-max", type=float, default=16.0)
    sp.add_argument("--r-min", type=float, default=1.0,
                    help="lower integration bound (default 1)")
    sp.add_argument("--steps", type=int, default=64)
    sp.add_argument("--csv", help="also write the r,volume table here")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_volume)

    sp = sub.add_parser("family", help="emit a generated family as graph records")
    _add_source(sp)
    sp.add_argument("--depth", type=float, default=8.0,
                    help="ball radius to materialize for infinite families")
    sp.add_argument("--graph-out", help="path for the graph records")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_family)

    sp = sub.add_parser("verify-all", help="run the named property-check registry")
    sp.add_argument("--checks", default=None,
                    help="comma-separated subset (default: all checks)")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_verify_all)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    timings: Dict[str, float] = {}
    try:
        code, analyses, warnings, inputs = args.fn(args, timings)
    except (GraphFormatError, SolverError, BallCapError, FileNotFoundError,
            ValueError, KeyError) as exc:
        print(f"sclab: error: {exc}", file=sys.stderr)
        return 1
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("fn", "out", "timings", "figures") and v is not None}
    rep = build_report(args.command, jsonable(params), analyses,
                       inputs=inputs, warnings=warnings,
                       timings=timings if args.timings else None)
    write_report(rep, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver: pipelines, verification suites, cached runs.

Subcommands: construct | barrier | minimize | destroy-check | sweep | dioph
| verify.  Every run folds its inputs into a RunConfig whose hash keys the
result cache; a cache hit replays the stored record byte for byte.  Exit
codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import cfrac, forge, lemmas
from .minimizer import (BudgetExceeded, ConvergenceError, MinimizeOptions,
                        SaddlePointError, WindowError, minimize_periodic)
from .peierls import barrier_profile, greene_residue, has_invariant_circle
from .runcfg import (RunConfig, ResultRecord, cache_load, cache_store,
                     csv_table, read_config_file)
from .trigpoly import TrigPoly
from .twist_core import (ContractViolation, RotationSymbol, TwistSolveError,
                         cosine_well_family, integrable, standard_family,
                         with_potential)

__version__ = "0.1.0"

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ------------------------------------------------------------------- plumbing
def _parse_symbol(text: str) -> RotationSymbol:
    text = text.strip()
    side = 0
    if text.endswith("+"):
        side, text = 1, text[:-1]
    elif text.endswith("-"):
        side, text = -1, text[:-1]
    if "/" in text:
        p_str, _, q_str = text.partition("/")
        p, q = int(p_str), int(q_str)
        if side > 0:
            return RotationSymbol.plus(p, q)
        if side < 0:
            return RotationSymbol.minus(p, q)
        return RotationSymbol.rational(p, q)
    if side != 0:
        raise ContractViolation("one-sided symbols need a p/q body")
    return RotationSymbol.irrational(float(text))


def _parse_quotients(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _family(params: dict):
    name = params.get("family", "standard")
    if name == "standard":
        return standard_family(float(params.get("kick", 0.3)))
    if name == "well":
        return cosine_well_family(float(params.get("n", 4)), float(params.get("a", 1.0)))
    if name == "integrable":
        return integrable()
    raise ContractViolation(f"unknown family {name!r} (standard | well | integrable)")


def _resolve_frequency(params: dict, depth_default: int = 30):
    """(omega, quotients, depth) with the rational degenerate case rejected."""
    quotients = params.get("quotients")
    if isinstance(quotients, str):
        quotients = _parse_quotients(quotients)
    depth = params.get("depth")
    depth = int(depth) if depth is not None else None
    omega = params.get("omega")
    if quotients is None:
        omega = GOLDEN if omega is None else float(omega)
        cf = cfrac.expand(omega, depth or depth_default)
        if cf.rational and not cf.exhausted_precision:
            raise ContractViolation(
                f"frequency {omega} is rational at working precision; "
                "circle destruction targets irrational frequencies")
    return omega, quotients, depth


def _rescaled_json(poly: forge.RescaledPoly) -> str:
    return json.dumps({
        "kind": "rescaled",
        "q": poly.q,
        "scale": poly.scale,
        "degree": poly.degree,
        "base": json.loads(poly.base.to_json()),
    }, sort_keys=True)


# ------------------------------------------------------------------- commands
def cmd_construct(cfg: RunConfig, workers: int = 1):
    p = cfg.params
    route = p.get("route", "norm")
    eps = float(p.get("eps", 1e-1))
    r = float(p.get("r", 2.0))
    max_degree = int(p.get("max_degree", 8192))
    omega, quotients, depth = _resolve_frequency(p)
    if route == "norm":
        poly, rep = forge.destroy_with_small_norm(
            omega if omega is not None else 0.0, eps, r,
            depth=depth, k=p.get("k"), max_degree=max_degree,
            quotients=quotients)
        scalars = {
            "route": route, "omega": rep.omega, "eps": eps, "r": r,
            "a": rep.a, "delta": rep.delta, "k": rep.k,
            "freq_exponent": rep.freq_exponent, "chosen_q": rep.chosen_q,
            "achieved_norm": rep.rows[-1][3], "slope": rep.slope,
            "slope_bound": rep.slope_bound,
        }
        tables = {"ladder": csv_table(
            "construct_ladder", ["q", "degree", "err_budget", "cr_norm"], rep.rows)}
    elif route == "degree":
        m = int(p.get("m", 2))
        k = int(p.get("k", 2))
        if omega is None:
            omega = cfrac.from_quotients(quotients).omega
        poly, rep = forge.destroy_with_low_degree(
            omega, eps, r, m, k, depth=depth or 30, max_degree=max_degree,
            bad_bound=int(p.get("bad_bound", 20)))
        scalars = {
            "route": route, "omega": rep.omega, "eps": eps, "r": r,
            "a": rep.a, "delta": rep.delta, "m": m, "k": k,
            "chosen_q": rep.chosen_q, "total_degree": rep.total_degree,
            "support_degree": rep.support_degree, "gamma": rep.gamma,
            "gamma_boundary": rep.gamma_boundary,
            "achieved_norm": rep.rows[-1][3],
        }
        tables = {"ladder": csv_table(
            "construct_ladder", ["q", "degree", "total_degree", "cr_norm"], rep.rows)}
    else:
        raise ContractViolation(f"unknown route {route!r} (norm | degree)")
    artifacts = {"perturbation": _rescaled_json(poly)}
    return scalars, tables, artifacts


def cmd_barrier(cfg: RunConfig, workers: int = 1):
    p = cfg.params
    h = _family(p)
    sym = _parse_symbol(str(p.get("symbol", "1/3+")))
    if sym.kind == "irrational":
        raise ContractViolation("barrier profiles use rational or one-sided symbols")
    count = int(p.get("xi_count", 32))
    opts = MinimizeOptions(seed=cfg.seed,
                           window_halflength=p.get("window"))
    xis = (np.arange(count) + 0.5) / count
    vals = barrier_profile(h, sym, xis, opts)
    scalars = {
        "family": p.get("family", "standard"), "symbol": str(sym),
        "xi_count": count, "sup_barrier": float(np.max(vals)),
        "min_barrier": float(np.min(vals)),
    }
    tables = {"profile": csv_table(
        "barrier_profile", ["xi", "barrier"],
        [(float(x), float(v)) for x, v in zip(xis, vals)])}
    return scalars, tables, {}


def cmd_minimize(cfg: RunConfig, workers: int = 1):
    p = cfg.params
    h = _family(p)
    pq_p, pq_q = int(p.get("p", 1)), int(p.get("q", 2))
    opts = MinimizeOptions(seed=cfg.seed)
    res = minimize_periodic(h, pq_p, pq_q, opts)
    residue = greene_residue(h, pq_p, pq_q, opts)
    scalars = {
        "family": p.get("family", "standard"), "p": pq_p, "q": pq_q,
        "action": res.action, "residual": res.residual,
        "iterations": res.iterations, "starts_converged": res.n_starts_converged,
        "certificate": res.certificate, "greene_residue": residue,
    }
    tables = {"orbit": csv_table(
        "orbit", ["i", "x"],
        [(i, float(x)) for i, x in enumerate(res.configuration.points)])}
    return scalars, tables, {}


def cmd_destroy_check(cfg: RunConfig, workers: int = 1):
    p = cfg.params
    route = p.get("route", "norm")
    omega, quotients, _ = _resolve_frequency(p, depth_default=12)
    target = omega if omega is not None else cfrac.from_quotients(quotients).omega
    artifacts = {}
    tables = {}
    scalars = {"route": route, "omega": target}
    if route == "none":
        h = integrable()
    else:
        sub = RunConfig(command="construct", params=cfg.params,
                        seed=cfg.seed, out_dir=cfg.out_dir)
        cons_scalars, cons_tables, cons_artifacts = cmd_construct(sub, workers)
        poly = forge.RescaledPoly(
            TrigPoly.from_json(json.dumps(
                json.loads(cons_artifacts["perturbation"])["base"])),
            int(cons_scalars["chosen_q"]),
            float(json.loads(cons_artifacts["perturbation"])["scale"]))
        h = with_potential(poly)
        scalars.update({k: cons_scalars[k] for k in
                        ("eps", "r", "a", "chosen_q", "achieved_norm")})
        tables["ladder"] = cons_tables["ladder"]
        artifacts.update(cons_artifacts)
    opts = MinimizeOptions(seed=cfg.seed,
                           convergent_depth=int(p.get("check_depth", 8)))
    ev = has_invariant_circle(
        h, target, opts,
        theta_pos=float(p.get("theta_pos", 1e-5)),
        theta_zero=float(p.get("theta_zero", 1e-9)),
        grid_size=int(p.get("grid", 16)), tail=int(p.get("tail", 3)))
    scalars.update({
        "verdict": ev.verdict,
        "refined_sup": ev.refined_sup,
        "deepest_sup": ev.levels[-1][2] if ev.levels else None,
    })
    tables["levels"] = csv_table(
        "circle_levels", ["symbol", "q", "sup_barrier"], ev.levels)
    artifacts["verdict"] = json.dumps(
        {"verdict": ev.verdict, "omega": ev.omega, "grid_size": ev.grid_size,
         "theta_pos": ev.theta_pos, "theta_zero": ev.theta_zero,
         "refined_sup": ev.refined_sup}, sort_keys=True)
    return scalars, tables, artifacts


def cmd_sweep(cfg: RunConfig, workers: int = 1):
    p = cfg.params
    eps_grid = p.get("eps_grid")
    if isinstance(eps_grid, str):
        eps_grid = [float(tok) for tok in eps_grid.replace(",", " ").split()]
    if eps_grid is None:
        lo, hi = p.get("eps_lo"), p.get("eps_hi")
        count = int(p.get("eps_count", 0))
        if lo is None or hi is None or count < 1:
            raise ContractViolation(
                "sweep needs eps_grid or eps_lo/eps_hi/eps_count")
        eps_grid = [float(v) for v in np.geomspace(float(lo), float(hi), count)]
    if not eps_grid:
        raise ContractViolation("sweep needs a nonempty eps grid")
    eps_grid = sorted(set(float(e) for e in eps_grid), reverse=True)
    r = float(p.get("r", 1.0))
    m = int(p.get("m", 4))
    k = int(p.get("k", 8))
    depth = int(p.get("depth", 30))
    max_degree = int(p.get("max_degree", 8192))
    omega, quotients, _ = _resolve_frequency(p, depth_default=depth)
    target = omega if omega is not None else cfrac.from_quotients(quotients).omega

    def one(eps: float):
        _, rep = forge.destroy_with_low_degree(
            target, eps, r, m, k, depth=depth, max_degree=max_degree,
            bad_bound=int(p.get("bad_bound", 20)))
        return (eps, rep.chosen_q, rep.total_degree, rep.support_degree,
                rep.gamma, rep.gamma_boundary)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, eps_grid))
    else:
        rows = [one(e) for e in eps_grid]
    rows.sort(key=lambda row: -row[0])
    gamma = rows[0][4]
    xs = np.log([1.0 / row[0] for row in rows])
    ys = np.log([row[2] for row in rows])
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(rows) > 1 else math.nan
    scalars = {
        "r": r, "m": m, "k": k, "omega": target, "points": len(rows),
        "gamma": gamma, "gamma_boundary": rows[0][5],
        "fitted_slope": slope,
        "slope_gamma_gap": abs(slope - gamma) if len(rows) > 1 else math.nan,
    }
    tables = {"sweep": csv_table(
        "degree_sweep", ["eps", "chosen_q", "total_degree", "support_degree"],
        [row[:4] for row in rows])}
    return scalars, tables, {}


def cmd_dioph(cfg: RunConfig, workers: int = 1):
    p = cfg.params
    quotients = p.get("quotients")
    if isinstance(quotients, str):
        quotients = _parse_quotients(quotients)
    depth = int(p.get("depth", 30))
    if quotients is not None:
        cf = cfrac.from_quotients(quotients, depth)
    else:
        cf = cfrac.expand(float(p.get("omega", GOLDEN)), depth)
    mu = cfrac.approximation_exponent(cf) if any(
        c.q >= 2 and c.error > 0 for c in cf.convergents) else math.nan
    scalars = {
        "omega": cf.omega, "depth": cf.depth, "rational": cf.rational,
        "exhausted_precision": cf.exhausted_precision,
        "approximation_exponent": mu,
        "jarnik_dimension": cfrac.jarnik_dimension(mu) if mu == mu else math.nan,
        "badly_approximable": cfrac.is_badly_approximable(
            cf, int(p.get("bad_bound", 20))),
        "max_denominator_ratio": cfrac.successive_denominator_ratio(cf),
    }
    tables = {"convergents": csv_table(
        "convergents", ["k", "quotient", "p", "q", "error"],
        [(i, c.a, c.p, c.q, c.error) for i, c in enumerate(cf.convergents)])}
    return scalars, tables, {}


def cmd_verify(cfg: RunConfig, workers: int = 1):
    p = cfg.params
    forced = bool(p.get("forced_failure", False))
    opts = MinimizeOptions(seed=cfg.seed)
    rows = []

    def add(check: str, passed: bool, value: float, note: str = ""):
        rows.append((check, "pass" if passed else "FAIL", float(value), note))

    # step bound + ladder counts + edge triples on one minimizer sweep
    constants = []
    ladder_reports = []
    for n in (4, 8, 16):
        res = minimize_periodic(cosine_well_family(n, 1.0), 1, 89, opts)
        rep = lemmas.verify_step_bound(res.configuration, n, 1.0)
        if forced and n == 4:
            # flipped direction: the margin ledger changes sign wholesale
            margin = float(np.min(-rep.margins))
            add(f"step-bound-n{n}", margin >= -1e-8, margin,
                "inequality direction flipped")
        else:
            add(f"step-bound-n{n}", rep.worst_margin >= -1e-8, rep.worst_margin, "")
        constants.append(rep.details["step_constant"])
        ladder_reports.append(
            lemmas.verify_counting_rational_gap(res.configuration, n, 1.0, 0.5))
        if n in (4, 8):
            trep = lemmas.verify_gap_triples(res.configuration, n, 1.0, 0.25)
            add(f"gap-triples-n{n}", trep.passed, trep.worst_margin)
    ratio = max(constants) / min(constants)
    add("step-constant-stability", ratio <= 2.0, ratio, "max/min over sweep")
    slope, r2 = lemmas.fit_count_exponent(ladder_reports)
    add("count-ladder-exponent", slope <= 1.45 and r2 >= 0.9, slope,
        f"r2={r2:.4f}")

    # rotation-number interval counts
    for k in (1, 2, 5):
        lin = lemmas.linear_orbit(GOLDEN, 24 + 2 * k)
        rep = lemmas.verify_counting_irrational(lin, GOLDEN, k)
        add(f"count-rotation-linear-k{k}", rep.passed, rep.worst_margin)
    std = minimize_periodic(standard_family(0.3), 34, 55, opts)
    for k in (1, 2, 5):
        rep = lemmas.verify_counting_irrational(std.configuration, GOLDEN, k,
                                                tol_count=1.0)
        add(f"count-rotation-34-55-k{k}", rep.passed, rep.worst_margin)

    # module invariants
    poly = TrigPoly(np.array([0.3, 0.1, -0.05]), np.array([0.0, 0.2, 0.07]))
    grid = np.arange(256) / 256.0
    round_err = float(np.max(np.abs(
        TrigPoly.from_json(poly.to_json())(grid) - poly(grid))))
    add("trigpoly-roundtrip", round_err < 1e-10, round_err)
    scaled = forge.period_rescale(poly, 7)
    add("rescale-degree-law", scaled.degree == 7 * poly.degree,
        scaled.degree - 7 * poly.degree)
    for r in (1.0, 2.0):
        a = 1.0 - (3.0 - r) / (2.0 * 4)
        gap = abs(forge.gamma_exponent(a, r, 8)
                  - sum(forge.gamma_decomposition(a, r, 8)))
        add(f"gamma-identity-r{r:g}", gap <= 1e-12, gap)
    triv = lemmas.verify_step_bound(lemmas.linear_orbit(0.5, 24), 4, 1.0,
                                    potential=TrigPoly.zero())
    add("step-bound-free", triv.passed, triv.worst_margin)

    failed = sum(1 for row in rows if row[1] == "FAIL")
    scalars = {
        "all_passed": failed == 0, "checks": len(rows), "failed": failed,
        "forced_failure": forced,
    }
    tables = {"checks": csv_table(
        "verify_checks", ["check", "status", "value", "note"], rows)}
    return scalars, tables, {}


COMMANDS = {
    "construct": cmd_construct,
    "barrier": cmd_barrier,
    "minimize": cmd_minimize,
    "destroy-check": cmd_destroy_check,
    "sweep": cmd_sweep,
    "dioph": cmd_dioph,
    "verify": cmd_verify,
}


# ------------------------------------------------------------------ execution
def execute(cfg: RunConfig, workers: int = 1, fresh: bool = False
            ) -> tuple[ResultRecord, Path, bool]:
    """Run or replay a config; returns (record, run directory, was_cached)."""
    key = cfg.cache_key()
    run_dir = Path(cfg.out_dir) / f"{cfg.command}-{key[:12]}"
    if not fresh:
        payload = cache_load(key, cfg.out_dir)
        if payload is not None:
            record = ResultRecord.from_json(payload.decode())
            _emit(record, run_dir, payload)
            return record, run_dir, True
    t0 = time.perf_counter()
    scalars, tables, artifacts = COMMANDS[cfg.command](cfg, workers)
    record = ResultRecord(
        config_hash=key, command=cfg.command, scalars=scalars,
        tables=dict(tables, **{f"{k}.json": v for k, v in artifacts.items()}),
        wall_time=time.perf_counter() - t0, version=__version__)
    payload = record.to_json().encode()
    cache_store(key, payload, cfg.out_dir)
    _emit(record, run_dir, payload)
    return record, run_dir, False


def _emit(record: ResultRecord, run_dir: Path, payload: bytes):
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "record.json").write_bytes(payload)
    for name, text in record.tables.items():
        suffix = "" if name.endswith(".json") else ".csv"
        (run_dir / f"{name}{suffix}").write_text(text)


# ----------------------------------------------------------------- entrypoint
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistlab",
        description="twist-map laboratory: barriers, minimizers, destruction pipelines")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value parameter file")
        sp.add_argument("--out", default="runs", help="output root directory")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--fresh", action="store_true",
                        help="ignore cached records for this run")

    sp = sub.add_parser("construct", help="build a circle-destroying perturbation")
    common(sp)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--quotients", help="comma separated partial quotients")
    sp.add_argument("--eps", type=float)
    sp.add_argument("--r", type=float)
    sp.add_argument("--route", choices=["norm", "degree"])
    sp.add_argument("--m", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--max-degree", dest="max_degree", type=int)

    sp = sub.add_parser("barrier", help="barrier profile over a xi grid")
    common(sp)
    sp.add_argument("--family", choices=["standard", "well", "integrable"])
    sp.add_argument("--kick", type=float)
    sp.add_argument("--n", type=float)
    sp.add_argument("--a", type=float)
    sp.add_argument("--symbol")
    sp.add_argument("--xi-count", dest="xi_count", type=int)
    sp.add_argument("--window", type=int)

    sp = sub.add_parser("minimize", help="periodic minimal configuration")
    common(sp)
    sp.add_argument("--family", choices=["standard", "well", "integrable"])
    sp.add_argument("--kick", type=float)
    sp.add_argument("--n", type=float)
    sp.add_argument("--a", type=float)
    sp.add_argument("--p", type=int)
    sp.add_argument("--q", type=int)

    sp = sub.add_parser("destroy-check", help="construct, then test the circle")
    common(sp)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--quotients")
    sp.add_argument("--eps", type=float)
    sp.add_argument("--r", type=float)
    sp.add_argument("--route", choices=["norm", "degree", "none"])
    sp.add_argument("--m", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--check-depth", dest="check_depth", type=int)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--tail", type=int)
    sp.add_argument("--theta-pos", dest="theta_pos", type=float)
    sp.add_argument("--theta-zero", dest="theta_zero", type=float)
    sp.add_argument("--max-degree", dest="max_degree", type=int)

    sp = sub.add_parser("sweep", help="degree against norm-target sweep")
    common(sp)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--quotients")
    sp.add_argument("--r", type=float)
    sp.add_argument("--m", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--eps-grid", dest="eps_grid")
    sp.add_argument("--eps-lo", dest="eps_lo", type=float)
    sp.add_argument("--eps-hi", dest="eps_hi", type=float)
    sp.add_argument("--eps-count", dest="eps_count", type=int)
    sp.add_argument("--max-degree", dest="max_degree", type=int)

    sp = sub.add_parser("dioph", help="continued fraction diagnostics")
    common(sp)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--quotients")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--bad-bound", dest="bad_bound", type=int)

    sp = sub.add_parser("verify", help="run the inequality suites")
    common(sp)
    sp.add_argument("--forced-failure", dest="forced_failure",
                    action="store_true", default=None,
                    help="flip one inequality to prove the gate trips")

    return parser


_META = {"command", "config", "out", "workers", "seed", "fresh"}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params: dict = {}
    if args.config:
        params.update(read_config_file(args.config))
    for key, value in vars(args).items():
        if key not in _META and value is not None:
            params[key] = value
    return RunConfig(command=args.command, params=params,
                     seed=args.seed, out_dir=args.out)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        record, run_dir, cached = execute(cfg, workers=args.workers,
                                          fresh=args.fresh)
    except (ContractViolation, FileNotFoundError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (BudgetExceeded, ConvergenceError, SaddlePointError,
            TwistSolveError, WindowError) as exc:
        print(f"did not converge: {exc}", file=sys.stderr)
        return 3
    tag = "cached" if cached else f"{record.wall_time:.2f}s"
    summary = {k: v for k, v in list(record.scalars.items())[:6]}
    print(f"{cfg.command} [{tag}] -> {run_dir}")
    print(json.dumps(summary, default=str))
    if cfg.command == "verify" and not record.scalars.get("all_passed"):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

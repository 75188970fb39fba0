"""Command line runner: ``run``, ``sweep``, ``verify`` and ``simulate``.

Configs are YAML files with the sections ``model``, ``task``, ``grid``,
``output`` and ``tolerances``; see ``configs/`` in the repository. Unknown
keys are rejected. Exit codes: 0 success, 2 config error, 3 validation
error, 4 solver failure, 5 internal assertion failure.
"""

from __future__ import annotations

import argparse
import copy
import csv
import datetime as _dt
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import yaml

from . import analysis, benchmarks, pooling, screening
from .core import ModelParams, canonical_params, validate_params
from .engine import simulate, solve_profile
from .errors import AgendaGameError, ConfigError, ConvergenceError, RegimeError, ValidationError
from .verification import poisson_suite, ranking_suite

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_SOLVER, EXIT_INTERNAL = 0, 2, 3, 4, 5

SCHEMA: Dict[str, Dict[str, Any]] = {
    "model": {k: None for k in canonical_params().to_dict()},
    "task": {"kind": "analysis", "informed_voter": 1, "profile": "screening",
             "episodes": 10_000, "suite": "all", "sweep": "coase-figure", "mu": None,
             "quota_tilde": None},
    "grid": {"mu_start": 0.0, "mu_stop": 1.0, "mu_step": 0.01, "values": None, "workers": None},
    "output": {"dir": ".", "name": None, "format": "json"},
    "tolerances": {"solver": 1e-9, "max_periods": 200, "seed": 0},
}

TASK_KINDS = ("benchmark", "screening", "pooling", "analysis", "simulate", "verify")


def fmt(x: float) -> str:
    """Floats for CSV cells: 12 significant digits."""
    return f"{x:.12g}"


def load_config(path: Optional[str]) -> Dict[str, Any]:
    """Read and resolve a config; defaults fill the gaps, unknown keys fail."""
    raw: Dict[str, Any] = {}
    if path:
        try:
            text = Path(path).read_text(encoding="utf-8")
            raw = yaml.safe_load(text) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse config: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    resolved = copy.deepcopy(SCHEMA)
    resolved["model"] = canonical_params().to_dict()
    for section, body in raw.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section '{section}'")
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(f"section '{section}' must be a mapping")
        for key, val in body.items():
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key '{section}.{key}'")
            resolved[section][key] = val
    if resolved["task"]["kind"] not in TASK_KINDS:
        raise ConfigError(f"task.kind must be one of {TASK_KINDS}")
    return resolved


def params_from(cfg: Dict[str, Any]) -> ModelParams:
    m = cfg["model"]
    try:
        p = ModelParams(
            n_voters=int(m["n_voters"]), quota=int(m["quota"]), policy_cap=float(m["policy_cap"]),
            discount=float(m["discount"]), precisions=m["precisions"],
            reservation_low=m["reservation_low"], reservation_high=m["reservation_high"],
            prior_high=float(m["prior_high"]),
        )
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad model section: {exc}") from exc
    return validate_params(p)


def mu_grid(cfg: Dict[str, Any]) -> List[float]:
    g = cfg["grid"]
    if g["values"] is not None:
        return [float(v) for v in g["values"]]
    start, stop, step = float(g["mu_start"]), float(g["mu_stop"]), float(g["mu_step"])
    if step <= 0:
        raise ConfigError("grid.mu_step must be positive")
    n = int(round((stop - start) / step))
    return [round(start + k * step, 12) for k in range(n + 1)]


# ---- task bodies -------------------------------------------------------------

def task_benchmark(params: ModelParams, cfg) -> Dict[str, Any]:
    mu = params.prior_high
    p, v = benchmarks.tioli_value(params, mu)
    return {"complete_info_value": benchmarks.complete_info_value(params, mu),
            "tioli_policy": p, "tioli_value": v,
            "tioli_limit_value": benchmarks.tioli_limit_value(params, mu)}


def task_screening(params: ModelParams, cfg) -> Dict[str, Any]:
    i = int(cfg["task"]["informed_voter"])
    path = screening.screening_sequence(params, i)
    prof = screening.build_screening_profile(params, path)
    pay = solve_profile(params, prof, horizon=int(cfg["tolerances"]["max_periods"]))
    return {"informed_voter": i, "cutoffs": path.cutoffs, "policies": path.policies,
            "phis": path.phis, "beliefs": path.beliefs, "exact_value": pay.proposer,
            "theorem_value": screening.theorem2_value(params, i, params.prior_high)}


def task_pooling(params: ModelParams, cfg) -> Dict[str, Any]:
    sol = pooling.solve_tilde_p(params)
    prof = pooling.build_pooling_profile(params, sol)
    pay = solve_profile(params, prof, horizon=int(cfg["tolerances"]["max_periods"]))
    gains = pooling.all_deviation_gains(params, prof, pooling.on_path_nodes(params, sol))
    return {"tilde_p": sol.tilde_p, "fallback_p": sol.fallback_p,
            "binding_constraint": sol.binding_constraint, "exact_value": pay.proposer,
            "complete_info_value": benchmarks.complete_info_value(params, params.prior_high),
            "max_deviation_gain": max(gains.values())}


def task_analysis(params: ModelParams, cfg) -> Dict[str, Any]:
    i = cfg["task"]["informed_voter"]
    i = None if i is None else int(i)
    mu = params.prior_high if cfg["task"]["mu"] is None else float(cfg["task"]["mu"])
    reg = analysis.classify_regime(params, i)
    rev = analysis.revision_value(params, i, mu)
    out = {"regime": reg.kind.value, "p_star": reg.state_h_limit_policy,
           "on_boundary": reg.on_boundary,
           "V_A_limit": analysis.setter_limit_value(params, reg, mu),
           "V_T_limit": rev.without_revisions, "revision_verdict": rev.verdict.value,
           "revision_threshold": rev.threshold}
    qt = cfg["task"]["quota_tilde"]
    if qt is not None and i is not None:
        cmp_ = analysis.quota_comparison(params, params.quota, int(qt), i, mu)
        out["quota"] = {"value_q": cmp_.value_q, "value_q_tilde": cmp_.value_q_tilde,
                        "better_quota": cmp_.better_quota, "threshold": cmp_.threshold}
    return out


def task_simulate(params: ModelParams, cfg, seed: int, episodes: int, which: str) -> Dict[str, Any]:
    max_periods = int(cfg["tolerances"]["max_periods"])
    if which == "screening":
        i = int(cfg["task"]["informed_voter"])
        prof = screening.build_screening_profile(params, screening.screening_sequence(params, i))
    elif which == "pooling":
        prof = pooling.build_pooling_profile(params, pooling.solve_tilde_p(params))
    else:
        raise ConfigError(f"unknown profile '{which}'")
    exact = solve_profile(params, prof, horizon=max_periods)
    sim = simulate(params, prof, seed=seed, episodes=episodes, max_periods=max_periods)
    voters = {}
    for i in params.voters:
        ex = exact.ex_ante(i)
        voters[str(i)] = {"empirical": sim.voter_mean[i], "se": sim.voter_se[i], "exact": ex,
                          "z": sim.z_score(ex, voter=i)}
    return {"profile": which, "seed": seed, "episodes": episodes,
            "proposer": {"empirical": sim.proposer_mean, "se": sim.proposer_se,
                         "exact": exact.proposer, "z": sim.z_score(exact.proposer)},
            "voters": voters,
            "acceptance_by_period": {str(k): v for k, v in sorted(sim.acceptance_by_period.items())},
            "acceptance_by_state": sim.acceptance_by_state, "never_frac": sim.never_frac}


def task_verify(suite: str, seed: int) -> Dict[str, Any]:
    runs = {"poisson": poisson_suite, "ranking": ranking_suite}
    names = list(runs) if suite == "all" else [suite]
    reports = []
    for name in names:
        if name not in runs:
            raise ConfigError(f"unknown verify suite '{name}'")
        reports.append(runs[name](seed=seed).to_dict())
    return {"suites": reports, "failed": sum(r["failed"] for r in reports)}


# ---- sweeps ------------------------------------------------------------------

def _coase_row(args):
    params, i, mu = args
    reg = analysis.classify_regime(params, i)
    return [fmt(mu), reg.kind.value, fmt(analysis.setter_limit_value(params, reg, mu)),
            fmt(analysis.no_revision_value(params, mu))]


def sweep_coase_figure(params: ModelParams, cfg) -> List[List[str]]:
    i = cfg["task"]["informed_voter"]
    i = None if i is None else int(i)
    jobs = [(params, i, mu) for mu in mu_grid(cfg)]
    workers = cfg["grid"]["workers"] or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=int(workers)) as pool:
        rows = list(pool.map(_coase_row, jobs))
    return [["mu0", "regime", "V_A_limit", "V_T_limit"], *rows]


def _tioli_row(args):
    params, tau = args
    p = params.replace(precisions=(tau,) * params.n_voters)
    pol, val = benchmarks.tioli_value(p, p.prior_high)
    lim = benchmarks.tioli_limit_value(p, p.prior_high)
    return [fmt(tau), fmt(pol), fmt(val), fmt(lim)]


def sweep_tioli(params: ModelParams, cfg) -> List[List[str]]:
    taus = cfg["grid"]["values"] or [0.9, 0.99, 0.999, 0.9999]
    workers = cfg["grid"]["workers"] or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=int(workers)) as pool:
        rows = list(pool.map(_tioli_row, [(params, float(t)) for t in taus]))
    return [["tau", "policy", "value", "limit_value"], *rows]


def _screening_row(args):
    params, i, x = args
    p = params.replace(discount=x, precisions=(x,) * params.n_voters)
    path = screening.screening_sequence(p, i)
    val = solve_profile(p, screening.build_screening_profile(p, path)).proposer
    lim = screening.theorem2_value(p, i, p.prior_high)
    return [fmt(x), str(path.steps), fmt(val), fmt(lim)]


def sweep_screening(params: ModelParams, cfg) -> List[List[str]]:
    xs = cfg["grid"]["values"] or [0.9, 0.99, 0.999]
    i = int(cfg["task"]["informed_voter"])
    workers = cfg["grid"]["workers"] or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=int(workers)) as pool:
        rows = list(pool.map(_screening_row, [(params, i, float(x)) for x in xs]))
    return [["delta_tau", "steps", "exact_value", "limit_value"], *rows]


SWEEPS = {"coase-figure": sweep_coase_figure, "tioli": sweep_tioli, "screening": sweep_screening}


# ---- output ------------------------------------------------------------------

def _out_path(out_dir: Path, cfg, stem: str, ext: str) -> Path:
    name = cfg["output"]["name"]
    if not name:
        name = f"{stem}-{_dt.datetime.now().strftime('%Y%m%dT%H%M%S')}"
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / f"{name}.{ext}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def write_json(path: Path, payload: Dict[str, Any]) -> None:
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")


def write_csv(path: Path, rows: List[List[str]]) -> None:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    path.write_text(buf.getvalue(), encoding="utf-8", newline="\n")


# ---- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file")
    common.add_argument("--out", help="output directory (overrides output.dir)")
    common.add_argument("--seed", type=int, help="random seed (overrides tolerances.seed)")
    common.add_argument("--tol", type=float, help="solver tolerance (overrides tolerances.solver)")
    common.add_argument("--max-periods", type=int, help="horizon for exact and simulated play")

    parser = argparse.ArgumentParser(prog="agenda-game", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run the task named in the config")
    sw = sub.add_parser("sweep", parents=[common], help="grid sweep written as CSV")
    sw.add_argument("name", choices=sorted(SWEEPS))
    ve = sub.add_parser("verify", parents=[common], help="randomized self-checks")
    ve.add_argument("suite", nargs="?", default=None, choices=["poisson", "ranking", "all"])
    si = sub.add_parser("simulate", parents=[common], help="Monte Carlo against exact payoffs")
    si.add_argument("profile", choices=["screening", "pooling"])
    si.add_argument("--episodes", type=int)
    return parser


def _apply_flags(cfg, args) -> None:
    if args.out:
        cfg["output"]["dir"] = args.out
    if args.seed is not None:
        cfg["tolerances"]["seed"] = args.seed
    if args.tol is not None:
        cfg["tolerances"]["solver"] = args.tol
    if args.max_periods is not None:
        cfg["tolerances"]["max_periods"] = args.max_periods


def run_scenario(cfg: Dict[str, Any], command: str = "run", target: Optional[str] = None,
                 episodes: Optional[int] = None) -> List[Path]:
    """Execute one command against a resolved config and write its reports."""
    out_dir = Path(cfg["output"]["dir"])
    seed = int(cfg["tolerances"]["seed"])
    if command == "verify":
        suite = target or cfg["task"]["suite"]
        result = task_verify(suite, seed)
        path = _out_path(out_dir, cfg, f"verify-{suite}", "json")
        write_json(path, {"command": "verify", "config": cfg, "results": result})
        if result["failed"]:
            raise AssertionError(f"{result['failed']} verification checks failed; see {path}")
        return [path]
    params = params_from(cfg)
    if command == "sweep":
        name = target or cfg["task"]["sweep"]
        if name not in SWEEPS:
            raise ConfigError(f"unknown sweep '{name}'")
        rows = SWEEPS[name](params, cfg)
        csv_path = _out_path(out_dir, cfg, f"sweep-{name}", "csv")
        write_csv(csv_path, rows)
        json_path = csv_path.with_suffix(".json")
        write_json(json_path, {"command": "sweep", "sweep": name, "config": cfg, "csv": csv_path.name})
        return [csv_path, json_path]
    kind = "simulate" if command == "simulate" else cfg["task"]["kind"]
    if kind == "simulate":
        which = target or cfg["task"]["profile"]
        n = int(episodes or cfg["task"]["episodes"])
        result = task_simulate(params, cfg, seed, n, which)
    elif kind == "verify":
        return run_scenario(cfg, "verify")
    else:
        result = {"benchmark": task_benchmark, "screening": task_screening,
                  "pooling": task_pooling, "analysis": task_analysis}[kind](params, cfg)
    path = _out_path(out_dir, cfg, kind, "json")
    write_json(path, {"command": command, "task": kind, "config": cfg, "results": result})
    return [path]


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        _apply_flags(cfg, args)
        target = getattr(args, "name", None) or getattr(args, "suite", None) or getattr(args, "profile", None)
        paths = run_scenario(cfg, args.command, target, getattr(args, "episodes", None))
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc.code, str(exc))
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, exc.code, str(exc))
    except (ConvergenceError, RegimeError) as exc:
        return _fail(EXIT_SOLVER, exc.code, str(exc))
    except AssertionError as exc:
        return _fail(EXIT_INTERNAL, "assertion", str(exc))
    except AgendaGameError as exc:
        return _fail(EXIT_INTERNAL, exc.code, str(exc))
    except Exception as exc:  # noqa: BLE001 - surfaced as a machine-readable error
        return _fail(EXIT_INTERNAL, "internal", f"{type(exc).__name__}: {exc}")
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

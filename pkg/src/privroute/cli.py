"""Command-line entry point: config parsing, orchestration, persistence.

Subcommands: ``generate`` (write one ground-truth graph), ``simulate``
(full bias experiment), ``bounds`` (bound curves over a beta grid for one
node pair), ``sweep`` (Cartesian expansion of simulate runs). Runs are
configured by a JSON file plus flag overrides; flags win. All seeds are
explicit -- there are no wall-clock defaults. Exit codes: 0 success,
2 validation error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import io
import itertools
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Any, Sequence

from .analytics import BoundReport, bound_report
from .experiment import (
    BUCKET_BOUNDS_PCT,
    ExperimentResult,
    PairSampling,
    run_experiment,
    trend_report,
)
from .generators import GraphSpec, build_graph
from .graph import EnumerationLimits, enumerate_paths, format_float, write_graph
from .release import PrivacyParams

RECORD_HEADER = (
    "trial,source,target,category,true_weight,realized_weight,bias,rel_bias,"
    "rel_bias_defined"
)
AGGREGATE_HEADER = "category,bucket_lo_pct,bucket_hi_pct,probability,pair_trial_count"
PAIR_MEANS_HEADER = "source,target,category,true_weight,mean_rel_bias,rel_bias_defined"
BOUNDS_HEADER = "beta,sum_bound,coarse_bound,exact,corollary_bound,sigma,ensemble_size,s_max"

SWEEPABLE_KEYS = ("noise_pct", "sigma", "n", "r", "gamma", "sparsity", "trials")


class ConfigError(ValueError):
    """Bad or missing configuration; maps to exit code 2."""


class RunError(RuntimeError):
    """Failure while executing a valid configuration; maps to exit code 3."""


# ----------------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    graph: GraphSpec
    privacy: dict[str, float]
    trials: int
    master_seed: int
    sampling: PairSampling
    output_dir: FilePath
    source: int | None = None
    target: int | None = None
    betas: tuple[float, ...] = ()
    gamma_confidence: float = 0.05
    max_paths: int = 10_000
    sweep: dict[str, list[Any]] | None = None


def _require(cfg: dict[str, Any], key: str) -> Any:
    if key not in cfg or cfg[key] is None:
        raise ConfigError(f"missing required config field {key!r}")
    return cfg[key]


def _graph_spec_from(cfg: dict[str, Any]) -> GraphSpec:
    gcfg = _require(cfg, "graph")
    try:
        return GraphSpec(
            family=_require(gcfg, "class"),
            n=int(_require(gcfg, "n")),
            weight_seed=int(_require(gcfg, "weight_seed")),
            topology_seed=(
                int(gcfg["topology_seed"]) if gcfg.get("topology_seed") is not None else None
            ),
            r=float(gcfg["r"]) if gcfg.get("r") is not None else None,
            gamma=float(gcfg["gamma"]) if gcfg.get("gamma") is not None else None,
            sparsity=float(gcfg.get("sparsity", 0.0)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _privacy_from(cfg: dict[str, Any]) -> dict[str, float]:
    pcfg = _require(cfg, "privacy")
    have_sigma = pcfg.get("sigma") is not None
    have_pct = pcfg.get("noise_pct") is not None
    eps_fields = [pcfg.get("epsilon"), pcfg.get("delta"), pcfg.get("delta_f")]
    have_eps = any(v is not None for v in eps_fields)
    chosen = sum([have_sigma, have_pct, have_eps])
    if chosen != 1:
        raise ConfigError(
            "privacy must use exactly one of: sigma | noise_pct | "
            "(epsilon, delta, delta_f)"
        )
    if have_eps and not all(v is not None for v in eps_fields):
        raise ConfigError("epsilon, delta, delta_f must all be given together")
    return {k: float(v) for k, v in pcfg.items() if v is not None}


def resolve_privacy(privacy: dict[str, float], g) -> PrivacyParams:
    if "sigma" in privacy:
        return PrivacyParams.from_sigma(privacy["sigma"])
    if "noise_pct" in privacy:
        return PrivacyParams.from_noise_pct(privacy["noise_pct"], g)
    return PrivacyParams.from_epsilon_delta(
        privacy["epsilon"], privacy["delta"], privacy["delta_f"]
    )


def _sampling_from(cfg: dict[str, Any]) -> PairSampling:
    scfg = cfg.get("pair_sampling") or {"mode": "all"}
    try:
        return PairSampling(
            mode=scfg.get("mode", "all"),
            k=int(scfg["k"]) if scfg.get("k") is not None else None,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _betas_from(cfg: dict[str, Any]) -> tuple[float, ...]:
    bcfg = cfg.get("bounds") or {}
    if bcfg.get("values") is not None:
        betas = tuple(float(b) for b in bcfg["values"])
    elif bcfg.get("betas") is not None:
        grid = bcfg["betas"]
        start, stop = float(_require(grid, "start")), float(_require(grid, "stop"))
        count = int(_require(grid, "count"))
        if count < 1:
            raise ConfigError("beta grid count must be >= 1")
        if count == 1:
            betas = (start,)
        else:
            step = (stop - start) / (count - 1)
            betas = tuple(start + i * step for i in range(count))
    else:
        betas = ()
    if any(b <= 0 for b in betas):
        raise ConfigError("beta values must be > 0")
    return betas


def load_config(path: str | None, overrides: argparse.Namespace) -> RunConfig:
    """Read the JSON config (if any) and apply flag overrides; flags win."""
    cfg: dict[str, Any] = {}
    if path is not None:
        try:
            with open(path) as fh:
                cfg = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
    _apply_overrides(cfg, overrides)
    spec = _graph_spec_from(cfg)
    command = getattr(overrides, "command", None)
    privacy = _privacy_from(cfg) if command != "generate" else {}
    if "output_dir" not in cfg:
        raise ConfigError("missing required config field 'output_dir'")
    bounds_cfg = cfg.get("bounds") or {}
    needs_seed = command in ("simulate", "sweep")
    master_seed = cfg.get("master_seed")
    if master_seed is None:
        if needs_seed:
            raise ConfigError("missing required config field 'master_seed'")
        master_seed = 0
    return RunConfig(
        graph=spec,
        privacy=privacy,
        trials=int(cfg.get("trials", 100)),
        master_seed=int(master_seed),
        sampling=_sampling_from(cfg),
        output_dir=FilePath(cfg["output_dir"]),
        source=int(bounds_cfg["source"]) if bounds_cfg.get("source") is not None else None,
        target=int(bounds_cfg["target"]) if bounds_cfg.get("target") is not None else None,
        betas=_betas_from(cfg),
        gamma_confidence=float(bounds_cfg.get("gamma", 0.05)),
        max_paths=int(bounds_cfg.get("max_paths", 10_000)),
        sweep=cfg.get("sweep"),
    )


def _apply_overrides(cfg: dict[str, Any], args: argparse.Namespace) -> None:
    graph_keys = {
        "graph_class": "class",
        "n": "n",
        "r": "r",
        "gamma": "gamma",
        "sparsity": "sparsity",
        "weight_seed": "weight_seed",
        "topology_seed": "topology_seed",
    }
    gcfg = cfg.setdefault("graph", {})
    for attr, key in graph_keys.items():
        val = getattr(args, attr, None)
        if val is not None:
            gcfg[key] = val
    privacy_flags = {
        k: getattr(args, k, None)
        for k in ("sigma", "noise_pct", "epsilon", "delta", "delta_f")
    }
    if any(v is not None for v in privacy_flags.values()):
        cfg["privacy"] = {k: v for k, v in privacy_flags.items() if v is not None}
    for attr, key in (
        ("trials", "trials"),
        ("seed", "master_seed"),
        ("output_dir", "output_dir"),
    ):
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = val
    if getattr(args, "pairs", None) is not None:
        mode = args.pairs
        scfg: dict[str, Any] = {"mode": "sample" if mode.startswith("sample") else mode}
        if mode.startswith("sample"):
            if ":" not in mode:
                raise ConfigError("sampled pairs need a count: --pairs sample:<k>")
            scfg["k"] = int(mode.split(":", 1)[1])
        cfg["pair_sampling"] = scfg
    bounds_keys = ("source", "target", "gamma_confidence", "max_paths")
    if any(getattr(args, k, None) is not None for k in bounds_keys) or any(
        getattr(args, k, None) is not None
        for k in ("beta_start", "beta_stop", "beta_count")
    ):
        bcfg = cfg.setdefault("bounds", {})
        for k in ("source", "target", "max_paths"):
            if getattr(args, k, None) is not None:
                bcfg[k] = getattr(args, k)
        if getattr(args, "gamma_confidence", None) is not None:
            bcfg["gamma"] = args.gamma_confidence
        if getattr(args, "beta_start", None) is not None:
            bcfg["betas"] = {
                "start": args.beta_start,
                "stop": args.beta_stop,
                "count": args.beta_count,
            }


# ----------------------------------------------------------------------------
# persistence
# ----------------------------------------------------------------------------


def atomic_write_text(path: FilePath, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta_json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _config_payload(cfg: RunConfig, privacy: PrivacyParams) -> dict[str, Any]:
    return {
        "graph": {
            "class": cfg.graph.family,
            "n": cfg.graph.n,
            "weight_seed": cfg.graph.weight_seed,
            "topology_seed": cfg.graph.topology_seed,
            "r": cfg.graph.r,
            "gamma": cfg.graph.gamma,
            "sparsity": cfg.graph.sparsity,
        },
        "privacy": {
            "sigma": privacy.sigma,
            "epsilon": privacy.epsilon,
            "delta": privacy.delta,
            "delta_f": privacy.delta_f,
            "noise_pct": privacy.noise_pct,
        },
        "trials": cfg.trials,
        "master_seed": cfg.master_seed,
        "pair_sampling": {"mode": cfg.sampling.mode, "k": cfg.sampling.k},
    }


def records_csv(result: ExperimentResult) -> str:
    lines = [RECORD_HEADER]
    cats = result.categories
    for r in result.records:
        rel = format_float(r.rel_bias) if r.rel_bias_defined else ""
        lines.append(
            f"{r.trial},{r.source},{r.target},{cats[(r.source, r.target)]},"
            f"{format_float(r.true_weight)},{format_float(r.realized_weight)},"
            f"{format_float(r.bias)},{rel},{1 if r.rel_bias_defined else 0}"
        )
    return "\n".join(lines) + "\n"


def aggregate_csv(result: ExperimentResult) -> str:
    lines = [AGGREGATE_HEADER]
    table = result.table
    for cat in (1, 2, 3, 4):
        for b, (lo, hi) in enumerate(BUCKET_BOUNDS_PCT):
            hi_txt = format_float(hi) if hi is not None else ""
            lines.append(
                f"{cat},{format_float(lo)},{hi_txt},"
                f"{format_float(table.probability(cat, b))},"
                f"{table.bucket_counts[cat - 1][b]}"
            )
    return "\n".join(lines) + "\n"


def pair_means_csv(result: ExperimentResult) -> str:
    lines = [PAIR_MEANS_HEADER]
    true_w = {
        (r.source, r.target): r.true_weight
        for r in result.records
        if r.trial == result.records[0].trial
    }
    for pair in result.pairs:
        mean = result.table.pair_mean_rel_bias.get(pair)
        defined = mean is not None
        lines.append(
            f"{pair[0]},{pair[1]},{result.categories[pair]},"
            f"{format_float(true_w[pair])},"
            f"{format_float(mean) if defined else ''},{1 if defined else 0}"
        )
    return "\n".join(lines) + "\n"


def bounds_csv(reports: Sequence[BoundReport]) -> str:
    lines = [BOUNDS_HEADER]
    for rep in reports:
        exact = format_float(rep.exact) if rep.exact is not None else ""
        lines.append(
            f"{format_float(rep.beta)},{format_float(rep.sum_bound)},"
            f"{format_float(rep.coarse_bound)},{exact},"
            f"{format_float(rep.corollary_bound)},{format_float(rep.sigma)},"
            f"{rep.ensemble_size},{rep.s_max}"
        )
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def cmd_generate(cfg: RunConfig) -> None:
    g = build_graph(cfg.graph)
    out = cfg.output_dir
    comments = [
        f"family={cfg.graph.family} n={cfg.graph.n} sparsity={cfg.graph.sparsity}",
        f"weight_seed={cfg.graph.weight_seed} topology_seed={cfg.graph.topology_seed}",
    ]
    buf = io.StringIO()
    write_graph(g, buf, comments=comments)
    atomic_write_text(out / "graph.txt", buf.getvalue())
    meta = {
        "command": "generate",
        "graph": _config_payload(cfg, PrivacyParams.from_sigma(0.0))["graph"],
        "node_count": g.node_count,
        "edge_count": g.edge_count,
    }
    atomic_write_text(out / "graph_meta.json", _meta_json(meta))


def cmd_simulate(cfg: RunConfig, subdir: FilePath | None = None) -> ExperimentResult:
    g = build_graph(cfg.graph)
    privacy = resolve_privacy(cfg.privacy, g)
    result = run_experiment(
        cfg.graph, privacy, cfg.trials, cfg.master_seed, cfg.sampling
    )
    out = subdir if subdir is not None else cfg.output_dir
    atomic_write_text(out / "records.csv", records_csv(result))
    atomic_write_text(out / "aggregate.csv", aggregate_csv(result))
    atomic_write_text(out / "pair_means.csv", pair_means_csv(result))
    atomic_write_text(out / "trends.txt", trend_report(result.table).format())
    meta = _config_payload(cfg, privacy)
    meta["command"] = "simulate"
    meta["undefined_rel_bias_per_category"] = list(result.table.undefined_counts)
    meta["pair_counts_per_category"] = list(result.table.pair_counts)
    atomic_write_text(out / "run_meta.json", _meta_json(meta))
    return result


def cmd_bounds(cfg: RunConfig) -> list[BoundReport]:
    if cfg.source is None or cfg.target is None:
        raise ConfigError("bounds needs source and target nodes")
    if not cfg.betas:
        raise ConfigError("bounds needs a beta grid (bounds.betas or bounds.values)")
    g = build_graph(cfg.graph)
    privacy = resolve_privacy(cfg.privacy, g)
    if privacy.sigma <= 0:
        raise ConfigError("bounds needs sigma > 0")
    ensemble = enumerate_paths(
        g, cfg.source, cfg.target, EnumerationLimits(max_paths=cfg.max_paths)
    )
    if ensemble.truncated:
        raise RunError(
            f"path enumeration for pair ({cfg.source},{cfg.target}) was truncated "
            f"at max_paths={cfg.max_paths}; bounds need the complete ensemble"
        )
    reports = [
        bound_report(g, ensemble, beta, privacy.sigma, cfg.gamma_confidence)
        for beta in cfg.betas
    ]
    out = cfg.output_dir
    atomic_write_text(out / "bounds.csv", bounds_csv(reports))
    meta = _config_payload(cfg, privacy)
    meta["command"] = "bounds"
    meta["source"] = cfg.source
    meta["target"] = cfg.target
    meta["gamma_confidence"] = cfg.gamma_confidence
    meta["ensemble_size"] = len(ensemble.paths)
    atomic_write_text(out / "run_meta.json", _meta_json(meta))
    return reports


def cmd_sweep(cfg: RunConfig) -> None:
    if not cfg.sweep:
        raise ConfigError("sweep needs a 'sweep' table of lists in the config")
    for key, values in cfg.sweep.items():
        if key not in SWEEPABLE_KEYS:
            raise ConfigError(
                f"cannot sweep over {key!r}; allowed: {', '.join(SWEEPABLE_KEYS)}"
            )
        if not isinstance(values, list) or not values:
            raise ConfigError(f"sweep.{key} must be a non-empty list")
    keys = sorted(cfg.sweep)
    combos = list(itertools.product(*(cfg.sweep[k] for k in keys)))
    for combo in combos:
        sub = dict(zip(keys, combo))
        label = "__".join(f"{k}={v}" for k, v in sub.items())
        graph_kwargs = {
            "family": cfg.graph.family,
            "n": sub.get("n", cfg.graph.n),
            "weight_seed": cfg.graph.weight_seed,
            "topology_seed": cfg.graph.topology_seed,
            "r": sub.get("r", cfg.graph.r),
            "gamma": sub.get("gamma", cfg.graph.gamma),
            "sparsity": sub.get("sparsity", cfg.graph.sparsity),
        }
        privacy = dict(cfg.privacy)
        if "noise_pct" in sub:
            privacy = {"noise_pct": float(sub["noise_pct"])}
        if "sigma" in sub:
            privacy = {"sigma": float(sub["sigma"])}
        try:
            sub_cfg = RunConfig(
                graph=GraphSpec(**graph_kwargs),
                privacy=privacy,
                trials=int(sub.get("trials", cfg.trials)),
                master_seed=cfg.master_seed,
                sampling=cfg.sampling,
                output_dir=cfg.output_dir,
            )
        except ValueError as exc:
            raise ConfigError(f"sweep combination {label}: {exc}") from None
        cmd_simulate(sub_cfg, subdir=cfg.output_dir / label)
    meta = {
        "command": "sweep",
        "keys": keys,
        "runs": ["__".join(f"{k}={v}" for k, v in zip(keys, c)) for c in combos],
    }
    atomic_write_text(cfg.output_dir / "sweep_meta.json", _meta_json(meta))


# ----------------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="privroute",
        description="Private graph-weight release and shortest-path bias harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--output-dir", dest="output_dir")
        p.add_argument("--graph-class", dest="graph_class", choices=["grid", "wheel", "scale_free"])
        p.add_argument("--n", type=int)
        p.add_argument("--r", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--sparsity", type=float)
        p.add_argument("--weight-seed", dest="weight_seed", type=int)
        p.add_argument("--topology-seed", dest="topology_seed", type=int)
        p.add_argument("--sigma", type=float)
        p.add_argument("--noise-pct", dest="noise_pct", type=float)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--delta-f", dest="delta_f", type=float)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int, help="master seed for releases and sampling")
        p.add_argument("--pairs", help="'all' or 'sample:<k per category>'")

    for name in ("generate", "simulate", "sweep"):
        add_common(sub.add_parser(name))
    bounds = sub.add_parser("bounds")
    add_common(bounds)
    bounds.add_argument("--source", type=int)
    bounds.add_argument("--target", type=int)
    bounds.add_argument("--beta-start", dest="beta_start", type=float)
    bounds.add_argument("--beta-stop", dest="beta_stop", type=float)
    bounds.add_argument("--beta-count", dest="beta_count", type=int)
    bounds.add_argument("--gamma-confidence", dest="gamma_confidence", type=float)
    bounds.add_argument("--max-paths", dest="max_paths", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        if args.command == "generate":
            cmd_generate(cfg)
        elif args.command == "simulate":
            cmd_simulate(cfg)
        elif args.command == "bounds":
            cmd_bounds(cfg)
        elif args.command == "sweep":
            cmd_sweep(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

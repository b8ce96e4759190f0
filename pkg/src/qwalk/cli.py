"""Command-line entry point exposing every workflow in the package.

Subcommands: graph, dtqw, ctqw, decohere, search, robust, interp.  Each
reads options from the command line, an optional JSON config file, and
built-in defaults, in that order of precedence.  Randomized commands
honor --seed, falling back to the QWALK_SEED environment variable.
Results land in a CSV time series and a JSON report where that makes
sense; reruns with the same inputs produce byte-identical files.

Exit codes: 0 on success, 1 for configuration problems, 2 when a
numerical tolerance is breached during the run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import numpy as np

from qwalk.arcs import ArcSpace
from qwalk.coins import parse_policy
from qwalk.ctqw import Spectrum, detect_transfer_ct, evolve_ct_many
from qwalk.decoherence import (
    NoiseModel,
    decohere_ct,
    density_from_state,
    evolve_density,
    target_probability_vs_rate,
    vertex_marginal,
)
from qwalk.dtqw import (
    build_step_operator,
    detect_transfer,
    equal_superposition,
    haar_states,
    max_transfer_scan,
    state_at_vertex,
    vertex_probability,
)
from qwalk.errors import ConfigError, ToleranceError
from qwalk.explorer import interpolation_sweep, pst_search, robustness_sweep
from qwalk.graphs import (
    Complete,
    Cycle,
    DiamondChain,
    Edgeless,
    Graph,
    Join,
    Path,
    build,
    graph_from_json,
    graph_to_json,
)

DEFAULTS = {
    "steps": 100,
    "samples": 1500,
    "lam": 0.9,
    "tmax": 100.0,
    "dt": 0.01,
}


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports problems through ConfigError.

    Keeps exit code 1 for every configuration failure, including
    unknown flags, instead of argparse's default exit code 2.
    """

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(f"{self.prog}: {message}")


# ===== Spec-string parsing =====


def parse_graph_spec(text: str) -> Graph:
    """Build a graph from a family string or a JSON file path.

    Family strings look like "cycle n=6", "join k2c n=5", or
    "diamond n=3 loops=ends".  Anything else is treated as a path to a
    graph JSON file.
    """
    text = text.strip()
    tokens = text.split()
    if not tokens:
        raise ConfigError("empty graph spec")
    head = tokens[0].lower()
    kv = {}
    extras = []
    for tok in tokens[1:]:
        if "=" in tok:
            k, v = tok.split("=", 1)
            kv[k.lower()] = v
        else:
            extras.append(tok.lower())

    def need_n() -> int:
        if "n" not in kv:
            raise ConfigError(f"graph spec {text!r} needs n=<int>")
        try:
            return int(kv["n"])
        except ValueError as exc:
            raise ConfigError(f"graph spec n must be an integer, got {kv['n']!r}") from exc

    plain = {"cycle": Cycle, "complete": Complete, "path": Path, "edgeless": Edgeless}
    if head in plain or head == "diamond":
        if extras:
            raise ConfigError(f"unexpected token {extras[0]!r} in graph spec {text!r}")
    if head in plain:
        return build(plain[head](need_n()))
    if head == "join":
        kind = extras[0] if extras else None
        if kind not in ("k2c", "k2k", "k2p"):
            raise ConfigError(
                f"join spec {text!r} must name k2c, k2k, or k2p before n=<int>"
            )
        n = need_n()
        other = {"k2c": Cycle, "k2k": Edgeless, "k2p": Path}[kind]
        return build(Join(Edgeless(2), other(n)))
    if head == "diamond":
        loops = kv.get("loops", "none")
        if loops not in ("none", "ends"):
            raise ConfigError(f"diamond loops must be 'none' or 'ends', got {loops!r}")
        return build(DiamondChain(need_n(), loop_ends=loops == "ends"))
    if os.path.exists(text):
        with open(text) as fh:
            return graph_from_json(fh.read())
    raise ConfigError(f"unknown graph spec {text!r} (not a family string or file)")


def _parse_complex(token: str) -> complex:
    try:
        return complex(token.strip().replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"bad amplitude {token!r}") from exc


def parse_init_spec(text: str, space: ArcSpace, source: int, seed: int) -> np.ndarray:
    """Initial arc states from a spec string.

    "equal" spreads the walker over the source ports, "haar:<count>" or
    "haar:<count>:<seed>" draws Haar-random source coin states, and a
    comma-separated amplitude list (normalized here) places explicit
    port amplitudes at the source.  Returns an array of shape
    (count, n_arcs); count is 1 except for haar specs.
    """
    text = text.strip()
    if text == "equal":
        return equal_superposition(space, source)[None, :]
    if text.startswith("haar:"):
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ConfigError(f"haar spec {text!r} must be haar:<count>[:<seed>]")
        try:
            count = int(parts[1])
            use_seed = int(parts[2]) if len(parts) == 3 else seed
        except ValueError as exc:
            raise ConfigError(f"haar spec {text!r} has non-integer fields") from exc
        coins = haar_states(space.degree(source), count, use_seed)
        return np.stack([state_at_vertex(space, source, c) for c in coins])
    amps = np.array([_parse_complex(tok) for tok in text.split(",")], dtype=complex)
    d = space.degree(source)
    if amps.shape != (d,):
        raise ConfigError(
            f"source vertex {source} has {d} ports but {amps.size} amplitudes given"
        )
    norm = np.linalg.norm(amps)
    if norm < 1e-12:
        raise ConfigError("explicit amplitudes cannot all be zero")
    return state_at_vertex(space, source, amps / norm)[None, :]


def _parse_pair(text: str, n: int, issues: list[str]) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        issues.append(f"pair must be two comma-separated integers, got {text!r}")
        return (0, 0)
    for v in (a, b):
        if not 0 <= v < n:
            issues.append(f"pair vertex {v} outside 0..{n - 1}")
    if a == b:
        issues.append("pair vertices must differ")
    return (a, b)


def _parse_int_list(text: str, label: str, issues: list[str]) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        issues.append(f"{label} must be comma-separated integers, got {text!r}")
        return []


def _parse_float_list(text: str, label: str, issues: list[str]) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        issues.append(f"{label} must be comma-separated numbers, got {text!r}")
        return []


# ===== Config merging and output helpers =====


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def _merged(args: argparse.Namespace, keys: Sequence[str]) -> dict:
    """Resolve option values: command line, then config file, then defaults."""
    file_cfg = _load_config_file(getattr(args, "config", None))
    out = {}
    for key in keys:
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            out[key] = cli_val
        elif key in file_cfg:
            out[key] = file_cfg[key]
        else:
            out[key] = DEFAULTS.get(key)
    return out


def _resolve_seed(args: argparse.Namespace) -> int:
    cfg = _load_config_file(getattr(args, "config", None))
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    if "seed" in cfg:
        try:
            return int(cfg["seed"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config seed must be an integer, got {cfg['seed']!r}") from exc
    env = os.environ.get("QWALK_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"QWALK_SEED must be an integer, got {env!r}") from exc
    return 0


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
            fh.write("\n")


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _raise_issues(issues: list[str]) -> None:
    if issues:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(issues))


# ===== Subcommand implementations =====


def cmd_graph(args: argparse.Namespace) -> int:
    g = parse_graph_spec(args.spec)
    text = graph_to_json(g) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_dtqw(args: argparse.Namespace) -> int:
    cfg = _merged(args, ["steps", "lam"])
    seed = _resolve_seed(args)
    issues: list[str] = []
    g = parse_graph_spec(args.graph)
    pair = _parse_pair(args.pair, g.n, issues)
    steps = int(cfg["steps"])
    if steps < 1:
        issues.append(f"steps must be positive, got {steps}")
    lam = float(cfg["lam"])
    if not 0.0 < lam <= 1.0:
        issues.append(f"lam must lie in (0, 1], got {lam}")
    track = (
        _parse_int_list(args.track, "track", issues) if args.track else list(pair)
    )
    for v in track:
        if not 0 <= v < g.n:
            issues.append(f"tracked vertex {v} outside 0..{g.n - 1}")
    _raise_issues(issues)

    policy = parse_policy(args.policy)
    space = ArcSpace.from_graph(g)
    inits = parse_init_spec(args.init, space, pair[0], seed)

    if inits.shape[0] > 1:
        parts = args.init.split(":")
        scan_seed = int(parts[2]) if len(parts) == 3 else seed
        scan = max_transfer_scan(
            g, policy, pair, samples=inits.shape[0], t_max=steps, seed=scan_seed, lam=lam
        )
        payload = {
            "command": "dtqw-scan",
            "graph": args.graph,
            "policy": args.policy,
            "pair": list(pair),
            "seed": seed,
            "max_probability": scan.max_probability,
            "best_step": scan.best_step,
            "fraction_over_lam": scan.fraction_over_lam,
            "lam": scan.lam,
            "samples": scan.samples,
            "t_max": scan.t_max,
        }
        _write_json(args.out + ".json" if args.out else None, payload)
        return 0

    psi0 = inits[0]
    report = detect_transfer(g, policy, psi0, pair, t_max=steps, lam=lam)
    op = build_step_operator(g, policy)
    series = np.empty((steps + 1, len(track)))
    psi = psi0
    for t in range(steps + 1):
        for j, v in enumerate(track):
            series[t, j] = vertex_probability(space, psi, v)
        if t < steps:
            psi = op.matrix @ psi
    payload = {
        "command": "dtqw",
        "graph": args.graph,
        "policy": args.policy,
        "init": args.init,
        "pair": list(pair),
        "seed": seed,
        "report": report.to_json_dict(),
    }
    if args.out:
        _write_csv(
            args.out + ".csv",
            ["step"] + [f"v{v}" for v in track],
            ([t] + [float(series[t, j]) for j in range(len(track))] for t in range(steps + 1)),
        )
        _write_json(args.out + ".json", payload)
    else:
        _write_json(None, payload)
    return 0


def cmd_ctqw(args: argparse.Namespace) -> int:
    cfg = _merged(args, ["tmax", "dt", "lam"])
    issues: list[str] = []
    g = parse_graph_spec(args.graph)
    pair = _parse_pair(args.pair, g.n, issues)
    tmax = float(cfg["tmax"])
    dt = float(cfg["dt"])
    if tmax <= 0:
        issues.append(f"tmax must be positive, got {tmax}")
    if dt <= 0 or dt > tmax:
        issues.append(f"dt must lie in (0, tmax], got {dt}")
    lam = float(cfg["lam"])
    track = (
        _parse_int_list(args.track, "track", issues) if args.track else list(pair)
    )
    for v in track:
        if not 0 <= v < g.n:
            issues.append(f"tracked vertex {v} outside 0..{g.n - 1}")
    _raise_issues(issues)

    report = detect_transfer_ct(g, pair, t_max=tmax, dt=dt, lam=lam)
    payload = {
        "command": "ctqw",
        "graph": args.graph,
        "pair": list(pair),
        "tmax": tmax,
        "dt": dt,
        "report": report.to_json_dict(),
    }
    if args.out:
        spec = Spectrum.from_graph(g)
        psi0 = np.zeros(g.n, dtype=complex)
        psi0[pair[0]] = 1.0
        states = evolve_ct_many(spec, psi0, report.times)
        probs = np.abs(states[:, track]) ** 2
        _write_csv(
            args.out + ".csv",
            ["t"] + [f"v{v}" for v in track],
            (
                [float(report.times[i])] + [float(p) for p in probs[i]]
                for i in range(len(report.times))
            ),
        )
        _write_json(args.out + ".json", payload)
    else:
        _write_json(None, payload)
    return 0


def cmd_decohere(args: argparse.Namespace) -> int:
    cfg = _merged(args, ["steps", "dt"])
    seed = _resolve_seed(args)
    issues: list[str] = []
    g = parse_graph_spec(args.graph)
    pair = _parse_pair(args.pair, g.n, issues)
    model = args.model
    basis = args.basis
    if basis not in ("coin", "position", "both"):
        issues.append(f"basis must be coin, position, or both, got {basis!r}")
    rates = None
    if args.rates is not None:
        rates = _parse_float_list(args.rates, "rates", issues)
        if args.rate is not None:
            issues.append("give either --rate or --rates, not both")
    rate = float(args.rate) if args.rate is not None else 0.0
    for r in [rate] if rates is None else rates:
        if not 0.0 <= r <= 1.0:
            issues.append(f"noise rate must lie in [0, 1], got {r}")
    steps = int(cfg["steps"])
    if steps < 1:
        issues.append(f"steps must be positive, got {steps}")
    if model == "ct" and args.time is None:
        issues.append("continuous model needs --time")
    _raise_issues(issues)

    if model == "ct":
        rho0 = np.zeros((g.n, g.n), dtype=complex)
        rho0[pair[0], pair[0]] = 1.0
        rho = decohere_ct(g, rho0, rate, float(args.time), dt=float(cfg["dt"]))
        payload = {
            "command": "decohere-ct",
            "graph": args.graph,
            "rate": rate,
            "time": float(args.time),
            "vertex_probabilities": [float(x) for x in np.real(np.diag(rho))],
            "target_probability": float(np.real(rho[pair[1], pair[1]])),
        }
        _write_json(args.out + ".json" if args.out else None, payload)
        return 0

    policy = parse_policy(args.policy)
    space = ArcSpace.from_graph(g)
    psi0 = parse_init_spec(args.init, space, pair[0], seed)[0]

    if rates is not None:
        sweep = target_probability_vs_rate(
            g, policy, psi0, pair, np.asarray(rates), step=steps, basis=basis
        )
        payload = {
            "command": "decohere-rates",
            "graph": args.graph,
            "policy": args.policy,
            "basis": basis,
            "step": steps,
            "rates": [float(r) for r in sweep.rates],
            "target_probabilities": [float(p) for p in sweep.probabilities],
        }
        if args.out:
            _write_csv(
                args.out + ".csv",
                ["rate", "p_target"],
                (
                    [float(r), float(p)]
                    for r, p in zip(sweep.rates, sweep.probabilities)
                ),
            )
            _write_json(args.out + ".json", payload)
        else:
            _write_json(None, payload)
        return 0

    op = build_step_operator(g, policy)
    noise = NoiseModel(basis=basis, rate=rate)
    rhos = evolve_density(density_from_state(psi0), op, noise, steps)
    marginals = np.stack([vertex_marginal(space, r) for r in rhos])
    payload = {
        "command": "decohere",
        "graph": args.graph,
        "policy": args.policy,
        "basis": basis,
        "rate": rate,
        "steps": steps,
        "final_distribution": [float(x) for x in marginals[-1]],
        "target_probability": float(marginals[-1][pair[1]]),
    }
    if args.out:
        _write_csv(
            args.out + ".csv",
            ["step"] + [f"v{v}" for v in range(g.n)],
            ([t] + [float(x) for x in marginals[t]] for t in range(steps + 1)),
        )
        _write_json(args.out + ".json", payload)
    else:
        _write_json(None, payload)
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    cfg = _merged(args, ["samples", "steps", "lam"])
    seed = _resolve_seed(args)
    issues: list[str] = []
    base = int(args.base)
    max_new = int(args.max_new)
    samples = int(cfg["samples"])
    t_max = int(cfg["steps"])
    lam = float(cfg["lam"])
    if samples < 1:
        issues.append(f"samples must be positive, got {samples}")
    if t_max < 1:
        issues.append(f"steps must be positive, got {t_max}")
    policies = [p.strip() for p in args.policies.split(",") if p.strip()]
    if not policies:
        issues.append("policies list is empty")
    workers = int(args.workers) if args.workers is not None else (os.cpu_count() or 1)
    if workers < 1:
        issues.append(f"workers must be positive, got {workers}")
    min_p = float(args.min_p) if args.min_p is not None else 0.0
    _raise_issues(issues)

    records = pst_search(
        base,
        max_new,
        policies=policies,
        samples=samples,
        t_max=t_max,
        lam=lam,
        seed=seed,
        sink_path=args.out,
        workers=workers,
    )
    shown = 0
    for rec in records:
        if args.pst_only and not rec.pst:
            continue
        if rec.best_p < min_p:
            continue
        sys.stdout.write(rec.to_json() + "\n")
        shown += 1
    sys.stderr.write(
        f"search: {len(records)} records ({shown} shown)"
        + (f", sink {args.out}" if args.out else "")
        + "\n"
    )
    return 0


def cmd_robust(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    issues: list[str] = []
    kind = args.kind
    n_values = _parse_int_list(args.n, "n", issues)
    if not n_values:
        issues.append("need at least one cycle size in --n")
    mags = None
    if args.magnitudes is not None:
        mags = _parse_float_list(args.magnitudes, "magnitudes", issues)
    if kind in ("defect", "phase") and not mags:
        issues.append(f"kind {kind!r} needs --magnitudes")
    runs = int(args.runs)
    if runs < 1:
        issues.append(f"runs must be positive, got {runs}")
    step = int(args.step)
    if step < 1:
        issues.append(f"step must be positive, got {step}")
    _raise_issues(issues)

    res = robustness_sweep(kind, n_values, mags, runs=runs, seed=seed, step=step)
    payload = {
        "command": "robust",
        "kind": kind,
        "n_values": list(res.n_values),
        "step": res.step,
        "seed": seed,
    }
    if kind == "random":
        payload["runs"] = runs
        payload["mean_probabilities"] = [float(p) for p in res.probabilities]
        rows = (
            [int(n), float(p)] for n, p in zip(res.n_values, res.probabilities)
        )
        header = ["n", "mean_p"]
    else:
        payload["magnitudes"] = [float(m) for m in res.magnitudes]
        payload["probabilities"] = {
            f"n{n}": [float(p) for p in res.probabilities[i]]
            for i, n in enumerate(res.n_values)
        }
        header = ["magnitude"] + [f"p_n{n}" for n in res.n_values]
        rows = (
            [float(m)] + [float(res.probabilities[i, j]) for i in range(len(res.n_values))]
            for j, m in enumerate(res.magnitudes)
        )
    if args.out:
        _write_csv(args.out + ".csv", header, rows)
        _write_json(args.out + ".json", payload)
    else:
        _write_json(None, payload)
    return 0


def cmd_interp(args: argparse.Namespace) -> int:
    issues: list[str] = []
    n_values = _parse_int_list(args.n, "n", issues)
    if not n_values:
        issues.append("need at least one size in --n")
    if args.c_grid is not None:
        c_grid = _parse_float_list(args.c_grid, "c-grid", issues)
    else:
        points = int(args.c_points)
        if points < 2:
            issues.append(f"c-points must be at least 2, got {points}")
            points = 2
        c_grid = list(np.linspace(0.0, 1.0, points))
    for c in c_grid:
        if not 0.0 <= c <= 1.0:
            issues.append(f"coupling c must lie in [0, 1], got {c}")
    step = int(args.step)
    if step < 1:
        issues.append(f"step must be positive, got {step}")
    _raise_issues(issues)

    res = interpolation_sweep(args.chain, n_values, c_grid, step=step)
    payload = {
        "command": "interp",
        "chain": res.chain,
        "n_values": list(res.n_values),
        "step": res.step,
        "c_grid": [float(c) for c in res.c_grid],
        "probabilities": {
            f"n{n}": [float(p) for p in res.probabilities[i]]
            for i, n in enumerate(res.n_values)
        },
    }
    if args.out:
        _write_csv(
            args.out + ".csv",
            ["c"] + [f"p_n{n}" for n in res.n_values],
            (
                [float(c)] + [float(res.probabilities[i, j]) for i in range(len(res.n_values))]
                for j, c in enumerate(res.c_grid)
            ),
        )
        _write_json(args.out + ".json", payload)
    else:
        _write_json(None, payload)
    return 0


# ===== Parser wiring =====


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--seed", type=int, help="master seed (falls back to QWALK_SEED)")
    p.add_argument("--out", help="output path stem; writes <out>.csv and <out>.json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwalk", description=__doc__, allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="build a graph and print its JSON form")
    p.add_argument("spec", help='family string like "cycle n=6" or a JSON file path')
    p.add_argument("--out", help="write the JSON here instead of stdout")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("dtqw", help="run a coined walk and report transfer")
    p.add_argument("--graph", required=True, help="graph spec string or file")
    p.add_argument("--policy", default="O2", help="O1, O2, O3, table1:<row>, or JSON map")
    p.add_argument("--init", default="equal", help='"equal", "haar:<count>[:<seed>]", or amplitudes')
    p.add_argument("--pair", default="0,1", help="source,target vertices")
    p.add_argument("--steps", type=int, help="number of steps (default 100)")
    p.add_argument("--lam", type=float, help="high-amplitude threshold (default 0.9)")
    p.add_argument("--track", help="comma list of vertices for the CSV columns")
    _add_common(p)
    p.set_defaults(func=cmd_dtqw)

    p = sub.add_parser("ctqw", help="run a continuous walk and report transfer")
    p.add_argument("--graph", required=True)
    p.add_argument("--pair", default="0,1")
    p.add_argument("--tmax", type=float, help="scan horizon (default 100)")
    p.add_argument("--dt", type=float, help="scan grid spacing (default 0.01)")
    p.add_argument("--lam", type=float)
    p.add_argument("--track", help="comma list of vertices for the CSV columns")
    _add_common(p)
    p.set_defaults(func=cmd_ctqw)

    p = sub.add_parser("decohere", help="evolve a dephasing walk")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", choices=("dt", "ct"), default="dt")
    p.add_argument("--policy", default="O2")
    p.add_argument("--init", default="equal")
    p.add_argument("--pair", default="0,1")
    p.add_argument("--basis", default="coin", help="coin, position, or both")
    p.add_argument("--rate", type=float, help="dephasing rate in [0, 1]")
    p.add_argument("--rates", help="comma list of rates for a fixed-step sweep")
    p.add_argument("--steps", type=int, help="steps (dt model) or sweep step (default 100)")
    p.add_argument("--time", type=float, help="evolution time for the ct model")
    p.add_argument("--dt", type=float, help="integrator step for the ct model")
    _add_common(p)
    p.set_defaults(func=cmd_decohere)

    p = sub.add_parser("search", help="enumerate cycle variants and survey transfer")
    p.add_argument("--base", type=int, default=4, help="even base cycle size")
    p.add_argument("--max-new", type=int, default=2, dest="max_new")
    p.add_argument("--policies", default="O1,O2,O3")
    p.add_argument("--samples", type=int, help="Haar samples per cell (default 1500)")
    p.add_argument("--steps", type=int, help="steps per cell (default 100)")
    p.add_argument("--lam", type=float)
    p.add_argument("--workers", type=int, help="parallel cells (default: all cores)")
    p.add_argument("--pst-only", action="store_true", help="print only exact-transfer records")
    p.add_argument("--min-p", type=float, help="print only records at or above this probability")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="JSON-lines sink; existing records are not recomputed")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("robust", help="perturbed-start transfer sweeps on hub cycles")
    p.add_argument("--kind", required=True, choices=("defect", "phase", "random"))
    p.add_argument("--n", required=True, help="comma list of cycle sizes")
    p.add_argument("--magnitudes", help="comma list of delta or theta values")
    p.add_argument("--runs", type=int, default=1000, help="samples for kind=random")
    p.add_argument("--step", type=int, default=6, help="readout step")
    _add_common(p)
    p.set_defaults(func=cmd_robust)

    p = sub.add_parser("interp", help="transfer vs coupling along a graph chain")
    p.add_argument("--chain", default="k2kn-k2cn",
                   choices=("k2kn-k2cn", "k2kn-k2pn", "k2pn-k2cn"))
    p.add_argument("--n", required=True, help="comma list of sizes")
    p.add_argument("--c-grid", dest="c_grid", help="explicit comma list of couplings")
    p.add_argument("--c-points", dest="c_points", type=int, default=11,
                   help="uniform grid size on [0, 1] when --c-grid is absent")
    p.add_argument("--step", type=int, default=6, help="readout step")
    _add_common(p)
    p.set_defaults(func=cmd_interp)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 1
    except ToleranceError as exc:
        sys.stderr.write(f"tolerance breach: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

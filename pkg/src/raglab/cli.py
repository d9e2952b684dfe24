"""Command-line front end.

Every subcommand reads its parameters from flags, optionally merged over a JSON
config (``--config``; flags win).  Outputs are deterministic given the config:
CSV follows RFC 4180, JSON is written with sorted keys, and wall time is only
printed to stderr when ``--timing`` is given.

Exit codes: 0 success, 2 config error, 3 selftest failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction

import jsonschema
import numpy as np

from . import __version__, bounds, connections as cx, fourier, graphs, stats, wishart
from .group import GroupSpec
from .rng import default_workers, stream

SCHEMA_VERSION = 1
COMMANDS = ("fourier", "bounds", "detect", "cayley", "wishart", "esym")

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": list(COMMANDS)},
        "connection": {"type": "string"},
        "null": {"type": "string"},
        "group": {"type": "string"},
        "mode": {"enum": ["anteu", "postu"]},
        "n": {"type": "integer", "minimum": 1},
        "d": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 0},
        "p": {"type": "number", "minimum": 0, "maximum": 1},
        "t_max": {"type": "integer", "minimum": 1},
        "d_max": {"type": "integer", "minimum": 2},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "stat": {"enum": ["tau3", "tau4", "neighborhood", "walsh"]},
        "walsh_h": {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                               "minItems": 2, "maxItems": 2}},
        "d_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2},
        "n_grid": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "out": {"type": "string"},
        "csv_out": {"type": "string"},
        "moments": {"type": "boolean"},
    },
    "required": ["schema_version", "command"],
    "additionalProperties": False,
}


class ConfigError(ValueError):
    pass


# -- connection spec strings ------------------------------------------------------------

def parse_connection(spec: str, d: int, seed: int = 0) -> cx.Connection:
    """``maj``, ``hnmaj``, ``twist``, ``const:P``, ``threshold:P``, ``double-threshold:P``,
    ``parity-blend:K``, ``truncated:M:P``, ``interval:S``, ``interval-sym:S``, ``anteu:P``."""
    name, *args = spec.split(":")
    try:
        if name == "maj":
            return cx.make_majority(d)
        if name == "hnmaj":
            return cx.make_hnmaj(d)
        if name == "twist":
            if d % 2:
                raise ConfigError("twist needs even d")
            a = cx.make_majority(d // 2)
            return cx.make_repulsion_attraction(a, a)
        if name == "const":
            return cx.make_constant(d, Fraction(args[0]))
        if name == "threshold":
            return cx.make_hard_threshold(d, Fraction(args[0]))
        if name == "double-threshold":
            return cx.make_double_threshold(d, Fraction(args[0]))
        if name == "parity-blend":
            return cx.make_parity_blend(d, Fraction(args[0]))
        if name == "truncated":
            return cx.make_truncated_connection(d, int(args[0]), Fraction(args[1]))
        if name == "interval":
            return cx.make_interval_union(d, cx.interval_set_I(d, int(args[0])), "interval")
        if name == "interval-sym":
            return cx.make_interval_union(d, cx.interval_set_I_sym(d, int(args[0])), "interval-sym")
        if name == "anteu":
            return cx.sample_random_indicator(GroupSpec.hypercube(d), float(args[0]), stream(seed, 99))
    except (IndexError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"bad connection spec {spec!r}: {e}") from e
    raise ConfigError(f"unknown connection {spec!r}")


def parse_group(spec: str) -> GroupSpec:
    """``hypercube:D`` or ``cyclic:M1,M2,...``."""
    try:
        kind, arg = spec.split(":")
        if kind == "hypercube":
            return GroupSpec.hypercube(int(arg))
        if kind == "cyclic":
            return GroupSpec.cyclic(*[int(m) for m in arg.split(",")])
    except ValueError as e:
        raise ConfigError(f"bad group spec {spec!r}: {e}") from e
    raise ConfigError(f"unknown group {spec!r}")


# -- output helpers ---------------------------------------------------------------------

def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(cfg: dict, results) -> dict:
    return {"config": cfg, "results": results, "code_version": __version__}


# -- subcommands ------------------------------------------------------------------------

def cmd_fourier(cfg, workers=1):
    conn = parse_connection(cfg["connection"], cfg["d"], cfg["seed"])
    lv = conn.fourier_levels()
    text = dumps_csv(["level", "coeff", "weight", "B"], fourier.levels_rows(lv))
    if cfg.get("moments"):
        g = fourier.gamma_profile(lv) if lv.coeffs is not None else \
            fourier.gamma_profile(fourier.levels_from_table(conn.table()))
        text += dumps_csv(["t", "moment"], fourier.moment_rows(g, cfg["t_max"]))
    _emit(text, cfg.get("out"))


def gamma_for(conn):
    """Levels and a gamma profile: exact for symmetric or enumerable connections,
    otherwise the dominating symmetrised profile."""
    lv = conn.fourier_levels()
    if lv.coeffs is not None:
        return lv, fourier.gamma_profile(lv)
    if conn.d <= fourier.EXHAUSTIVE_MAX_D:
        return lv, fourier.gamma_profile(fourier.levels_from_table(conn.table()))
    return lv, bounds.symmetrized_profile(lv)


def cmd_bounds(cfg, workers=1):
    if cfg.get("d_grid"):
        rows = []
        for d in cfg["d_grid"]:
            conn = parse_connection(cfg["connection"], d, cfg["seed"])
            lv, g = gamma_for(conn)
            for n in cfg.get("n_grid") or [cfg["n"]]:
                kl = bounds.kl_bound_exact(g, n)
                flags = []
                try:
                    mt = bounds.main_thm_terms(lv, n, cfg["m"])
                    bracket, dterm = mt.bracket, mt.D
                    if d <= n:
                        flags.append("d<=n")
                except ValueError:
                    bracket, dterm = math.nan, math.nan
                    flags.append("m>=d/2")
                rows.append((d, n, cfg["connection"], kl.total, kl.tv_bound, bracket, dterm, ";".join(flags)))
        _emit(dumps_csv(["d", "n", "connection", "total_kl", "tv_bound", "bracket", "D_term", "flags"], rows),
              cfg.get("out"))
        return
    conn = parse_connection(cfg["connection"], cfg["d"], cfg["seed"])
    lv, g = gamma_for(conn)
    kl = bounds.kl_bound_exact(g, cfg["n"])
    res = {"kl": vars(kl), "entropy": vars(bounds.entropy_threshold(cfg["n"], float(conn.mean_p)))
           if 0 < float(conn.mean_p) < 1 else None}
    try:
        res["main_theorem"] = vars(bounds.main_thm_terms(lv, cfg["n"], cfg["m"]))
    except ValueError as e:
        res["main_theorem"] = {"error": str(e)}
    _emit(dumps_json(_report(cfg, res)), cfg.get("out"))


def _null_model(cfg, n, p):
    null = cfg.get("null") or "er"
    if null == "er":
        return graphs.ERModel(n, float(p))
    return graphs.RAGModel(n, parse_connection(null, cfg["d"], cfg["seed"]))


def cmd_detect(cfg, workers=1):
    conn = parse_connection(cfg["connection"], cfg["d"], cfg["seed"])
    n = cfg["n"]
    model = graphs.RAGModel(n, conn)
    null = _null_model(cfg, n, conn.mean_p)
    stat = stats.Statistic(cfg["stat"], tuple(tuple(e) for e in cfg.get("walsh_h") or ()))
    rep = stats.detection_experiment(model, null, stat, cfg["trials"], cfg["seed"],
                                     workers=workers)
    if cfg.get("csv_out"):
        _emit(dumps_csv(["trial", "model", "statistic", "value"], rep.csv_rows()), cfg["csv_out"])
    res = rep.to_json()
    res["connection_mean"] = float(conn.mean_p)
    _emit(dumps_json(_report(cfg, res)), cfg.get("out"))


def cmd_cayley(cfg, workers=1):
    spec = parse_group(cfg.get("group") or f"hypercube:{cfg['d']}")
    n, trials, seed = cfg["n"], cfg["trials"], cfg["seed"]
    if cfg.get("mode", "anteu") == "anteu":
        ind = cx.sample_random_indicator(spec, cfg["p"], stream(seed, 0))
    else:
        ind = cx.sample_postu_indicator(spec, cfg["k"], stream(seed, 0))
    res = {"order": spec.order, "indicator_size": ind.size, "mean_p": float(ind.mean_p)}
    if spec.kind == "hypercube" and spec.d <= fourier.EXHAUSTIVE_MAX_D:
        lv = fourier.levels_from_table(ind.table())
        mx = float(np.max(np.abs(lv.spectrum[1:])))
        res["max_nonconstant_coeff"] = mx
        res["regularity_bound"] = 2 * math.sqrt(spec.d) * 2 ** (-spec.d / 2)
    found, disagree = 0, 0
    for t in range(trials):
        g_rag = graphs.sample_rag(n, ind, stream(seed, 1, t))
        found += stats.neighborhood_identical_scan(g_rag)[0]
        if spec.order >= n:
            g_cay = graphs.sample_cayley_induced(n, spec, ind, stream(seed, 1, t))
            disagree += g_cay != g_rag
    res["neighborhood_found_rate"] = found / trials
    res["rag_vs_cayley_disagreement"] = disagree / trials if spec.order >= n else None
    _emit(dumps_json(_report(cfg, res)), cfg.get("out"))


def cmd_wishart(cfg, workers=1):
    rep = wishart.wishart_transition_experiment(cfg["n"], cfg["d_grid"], cfg["trials"], cfg["seed"],
                                                workers=workers)
    _emit(dumps_json(_report(cfg, rep.to_json())), cfg.get("out"))


def cmd_esym(cfg, workers=1):
    rows = []
    for d in range(2, cfg["d_max"] + 1):
        for s in range(1, d):
            for t in range(2, cfg["t_max"] + 1):
                ex = fourier.elem_sym_log_moment(d, s, t)
                b = fourier.elem_sym_bounds(d, s, t)
                rows.append((d, s, t, ex, b.log_upper_hc,
                             "" if b.log_upper_mid is None else b.log_upper_mid, b.log_lower))
    _emit(dumps_csv(["d", "s", "t", "log_exact", "log_upper_hc", "log_upper_mid", "log_lower"], rows),
          cfg.get("out"))


HANDLERS = {"fourier": cmd_fourier, "bounds": cmd_bounds, "detect": cmd_detect,
            "cayley": cmd_cayley, "wishart": cmd_wishart, "esym": cmd_esym}

DEFAULTS = {
    "fourier": {"connection": "maj", "d": 15, "t_max": 8, "seed": 0},
    "bounds": {"connection": "maj", "d": 64, "n": 8, "m": 2, "seed": 0},
    "detect": {"connection": "parity-blend:0.5", "d": 10, "n": 64, "stat": "tau3", "trials": 200, "seed": 0},
    "cayley": {"d": 12, "mode": "anteu", "p": 0.5, "k": 16, "n": 64, "trials": 100, "seed": 0},
    "wishart": {"n": 16, "d_grid": [64, 128, 256, 512], "trials": 2000, "seed": 0},
    "esym": {"d_max": 16, "t_max": 8},
}


# -- argument parsing -------------------------------------------------------------------

def _int_list(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x]


def _edge_list(s: str) -> list[list[int]]:
    return [[int(a) for a in e.split("-")] for e in s.split(",") if e]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="raglab", description="Random algebraic graph experiments")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config; flags override its fields")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int, help="worker processes (default RAGLAB_THREADS or cores)")
        p.add_argument("--selftest", action="store_true", help="run oracle checks and exit")
        p.add_argument("--timing", action="store_true", help="print wall time to stderr")

    p = sub.add_parser("fourier", help="levels, weights and gamma moments")
    common(p)
    p.add_argument("--connection")
    p.add_argument("--d", type=int)
    p.add_argument("--t-max", dest="t_max", type=int)
    p.add_argument("--moments", action="store_true", default=None)

    p = sub.add_parser("bounds", help="KL expansion, main-theorem terms, grid scans")
    common(p)
    p.add_argument("--connection")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d-grid", dest="d_grid", type=_int_list)
    p.add_argument("--n-grid", dest="n_grid", type=_int_list)

    p = sub.add_parser("detect", help="two-sample power of a test statistic")
    common(p)
    p.add_argument("--connection")
    p.add_argument("--null", help="'er' (default) or a connection spec")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--stat", choices=["tau3", "tau4", "neighborhood", "walsh"])
    p.add_argument("--walsh-h", dest="walsh_h", type=_edge_list, help="edges as i-j,k-l,...")
    p.add_argument("--trials", type=int)
    p.add_argument("--csv-out", dest="csv_out")

    p = sub.add_parser("cayley", help="random generator sets and induced Cayley subgraphs")
    common(p)
    p.add_argument("--group", help="hypercube:D or cyclic:M1,M2")
    p.add_argument("--d", type=int)
    p.add_argument("--mode", choices=["anteu", "postu"])
    p.add_argument("--p", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)

    p = sub.add_parser("wishart", help="difference-of-Wishart 4-cycle transition")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--d-grid", dest="d_grid", type=_int_list)
    p.add_argument("--trials", type=int)

    p = sub.add_parser("esym", help="elementary symmetric moment bound scan")
    common(p)
    p.add_argument("--d-max", dest="d_max", type=int)
    p.add_argument("--t-max", dest="t_max", type=int)

    p = sub.add_parser("run", help="run a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true")
    return ap


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path!r}: {e}") from e
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigError(f"config {path!r} violates schema: {e.message}") from e
    return cfg


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < flags into a validated config dict."""
    cfg: dict = {}
    if args.config:
        cfg = load_config(args.config)
    command = cfg.get("command") if args.command == "run" else args.command
    if args.command != "run" and cfg.get("command", command) != command:
        raise ConfigError(f"config is for {cfg['command']!r}, not {command!r}")
    merged = {"schema_version": SCHEMA_VERSION, "command": command, **DEFAULTS[command]}
    merged.update({k: v for k, v in cfg.items()})
    skip = {"config", "command", "selftest", "timing", "workers"}
    merged.update({k: v for k, v in vars(args).items() if k not in skip and v is not None})
    try:
        jsonschema.validate(merged, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigError(f"invalid parameters: {e.message}") from e
    return merged


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "selftest", False):
        from .selftest import run_selftest
        ok, lines = run_selftest(args.command)
        for line in lines:
            print(line)
        return 0 if ok else 3
    t0 = time.perf_counter()
    try:
        cfg = resolve(args)
        HANDLERS[cfg["command"]](cfg, args.workers or default_workers())
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"parameter error: {e}", file=sys.stderr)
        return 2
    if args.timing:
        print(f"wall time {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

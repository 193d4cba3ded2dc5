"""Command-line front door.

Subcommands::

    finsler tensors  --config cfg.json [--out r.jsonl] [--samples N]
                     [--seed S] [--backend jet|fd]
    finsler verify   --config cfg.json ...
    finsler classify --config cfg.json ...

The config is a JSON document::

    {
      "metric": {"catalog": "funk", "dimension": 3, "params": {}}
                -- or --
                {"dsl": "sqrt(norm2(y))", "dimension": 3,
                 "constants": {}, "name": "euclid"},
      "sampling": {"count": 20, "seed": 0, "radius": 0.4},
      "backend": "jet",
      "suites": ["bianchi", "theorem21"],   // verify only; "all" allowed
      "tolerances": {"default": 1e-6, "bianchi": 1e-6},
      "output": "report.jsonl"
    }

Reports are line-delimited JSON with sorted keys (byte-identical across
runs of the same config); the first line is a header echoing the
configuration.  Exit codes: 0 pass, 1 identity failure, 2 config/parse
error, 3 runtime domain error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .catalog import build_catalog_metric
from .dsl import metric_from_dsl
from .engine import ChartJets
from .errors import ConfigError, DslError, FinslerError, HomogeneityError
from .fdpipe import FDPipeline
from .sampling import SamplingSpec, sample_points
from .scalarclass import classify
from .suites import SUITES, UNIVERSAL_SUITES, orders_for, run_suites

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

DEFAULT_TOL = 1e-6


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed config {path}: {e}")
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be an object")
    return cfg


def _build_metric(cfg):
    spec = cfg.get("metric")
    if not isinstance(spec, dict):
        raise ConfigError("config needs a 'metric' object")
    has_catalog = "catalog" in spec
    has_dsl = "dsl" in spec
    if has_catalog == has_dsl:
        raise ConfigError(
            "metric must specify exactly one of 'catalog' or 'dsl'")
    n = spec.get("dimension", 3)
    if not isinstance(n, int) or n < 2:
        raise ConfigError(f"invalid dimension {n!r}")
    if has_catalog:
        params = spec.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("'params' must be an object")
        return build_catalog_metric(spec["catalog"], n, **params)
    return metric_from_dsl(
        spec["dsl"], n,
        name=spec.get("name", "dsl-metric"),
        constants=spec.get("constants", {}))


def _sampling(cfg, args):
    s = cfg.get("sampling", {})
    if not isinstance(s, dict):
        raise ConfigError("'sampling' must be an object")
    count = args.samples if args.samples is not None else s.get("count", 20)
    seed = args.seed if args.seed is not None else s.get("seed", 0)
    if not isinstance(count, int) or count < 1:
        raise ConfigError(f"sample count must be >= 1, got {count!r}")
    radius = s.get("radius")
    if radius is not None and not (isinstance(radius, (int, float))
                                   and radius > 0):
        raise ConfigError(f"invalid sampling radius {radius!r}")
    return SamplingSpec(count=count, seed=int(seed), radius=radius)


def _backend(cfg, args):
    b = args.backend if args.backend is not None else cfg.get("backend",
                                                              "jet")
    if b not in ("jet", "fd"):
        raise ConfigError(f"backend must be 'jet' or 'fd', got {b!r}")
    return b


def _tolerances(cfg):
    tols = cfg.get("tolerances", {})
    if not isinstance(tols, dict):
        raise ConfigError("'tolerances' must be an object")
    for key, val in tols.items():
        if not (isinstance(val, (int, float)) and val > 0):
            raise ConfigError(f"tolerance {key!r} must be positive")
    return tols


def _out_stream(cfg, args):
    path = args.out if args.out is not None else cfg.get("output")
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit(stream, obj):
    stream.write(json.dumps(obj, sort_keys=True) + "\n")


def _header(command, cfg, metric, spec, backend):
    return {
        "tool": "finsler",
        "version": __version__,
        "command": command,
        "metric": metric.name,
        "dimension": metric.n,
        "backend": backend,
        "seed": spec.seed,
        "samples": spec.count,
        "config": cfg,
    }


def _tolist(v):
    return v.tolist() if isinstance(v, np.ndarray) else v


# ---------------------------------------------------------------------------
# subcommands


def cmd_tensors(cfg, args):
    metric = _build_metric(cfg)
    spec = _sampling(cfg, args)
    backend = _backend(cfg, args)
    points = sample_points(metric, spec)
    stream, close = _out_stream(cfg, args)
    try:
        _emit(stream, _header("tensors", cfg, metric, spec, backend))
        for idx, p in enumerate(points):
            if backend == "jet":
                cj = ChartJets(metric, p, 2, 7)
                values = {
                    "L": cj.L.value(), "g": cj.g.value(), "G": cj.G.value(),
                    "N": cj.N.value(), "Gamma": cj.Gamma.value(),
                    "Rhat": cj.Rhat.value(), "H": cj.H.value(),
                    "k": cj.k.value(), "C": cj.C.value(),
                    "B": cj.B.value(), "A": cj.A.value(),
                }
            else:
                fd = FDPipeline(metric)
                values = dict(fd.tensors(p))
                values["C"] = fd.c_form(p)
            record = {"sample": idx, "x": p.x.tolist(), "y": p.y.tolist()}
            record.update({name: _tolist(v) for name, v in values.items()})
            _emit(stream, record)
    finally:
        if close:
            stream.close()
    return EXIT_PASS


def cmd_verify(cfg, args):
    metric = _build_metric(cfg)
    spec = _sampling(cfg, args)
    backend = _backend(cfg, args)
    if backend != "jet":
        raise ConfigError("verify requires the jet backend")
    names = cfg.get("suites", "all")
    if names == "all":
        names = sorted(SUITES)
    if not isinstance(names, list) or not names:
        raise ConfigError("'suites' must be 'all' or a nonempty list")
    for name in names:
        if name not in SUITES:
            raise ConfigError(
                f"unknown suite {name!r}; known: {sorted(SUITES)}")
    tols = _tolerances(cfg)
    default_tol = tols.get("default", DEFAULT_TOL)

    points = sample_points(metric, spec)
    records = run_suites(metric, points, names)

    stream, close = _out_stream(cfg, args)
    failed = False
    try:
        _emit(stream, _header("verify", cfg, metric, spec, "jet"))
        summary = {}
        for rec in records:
            tol = tols.get(rec["suite"], default_tol)
            ok = rec["residual"] < tol
            failed = failed or not ok
            out = dict(rec)
            out["tolerance"] = tol
            out["pass"] = ok
            _emit(stream, out)
            key = f"{rec['suite']}.{rec['identity']}"
            summary[key] = max(summary.get(key, 0.0), rec["residual"])
        _emit(stream, {"summary": "max_residual_per_identity",
                       "values": summary})
    finally:
        if close:
            stream.close()
    return EXIT_FAIL if failed else EXIT_PASS


def cmd_classify(cfg, args):
    metric = _build_metric(cfg)
    spec = _sampling(cfg, args)
    backend = _backend(cfg, args)
    report = classify(metric, spec, backend=backend)
    stream, close = _out_stream(cfg, args)
    try:
        _emit(stream, _header("classify", cfg, metric, spec, backend))
        _emit(stream, report.to_json_dict())
    finally:
        if close:
            stream.close()
    if report.verdict == "constant":
        line = (f"{metric.name}: constant "
                f"(k={report.k_mean:.4f}±{report.k_std:.4f})")
    elif report.verdict == "scalar":
        line = (f"{metric.name}: scalar "
                f"(k={report.k_mean:.4f} nonconstant)")
    else:
        line = f"{metric.name}: generic"
    print(line)
    return EXIT_PASS


# ---------------------------------------------------------------------------


def make_parser():
    parser = argparse.ArgumentParser(
        prog="finsler",
        description="Berwald-geometry tensor computation, identity "
                    "verification, and scalar-curvature classification.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("tensors", cmd_tensors), ("verify", cmd_verify),
                     ("classify", cmd_classify)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--backend", choices=("jet", "fd"), default=None)
        p.set_defaults(func=fn)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        return args.func(cfg, args)
    except (ConfigError, DslError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (HomogeneityError, FinslerError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

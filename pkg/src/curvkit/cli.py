"""Command line surface.

Subcommands: curvature, preprocess, simulate, sample, detect, eval,
pipeline. Every command is deterministic given its flags and seeds; exit
codes are 0 (ok), 2 (I/O or format error), 3 (precondition or degenerate
input). Errors print one JSON line on stderr.

A ``--config FILE`` of ``key=value`` lines may supply any long option
(keys use the option name without the leading dashes); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .curvature import CurvatureKind, curvature_all, write_curvature_csv
from .errors import FormatError, PreconditionError
from .graph import (
    Graph,
    Partition,
    connected_components,
    parse_community_file,
    parse_edge_list,
    parse_gml_subset,
    write_edge_list,
)
from .metrics import ami, ari, lpa_detect, overlapping_f1
from .preprocess import (
    PreprocessConfig,
    ThresholdMode,
    find_threshold,
    fit_gmm2,
    preprocess_lrc,
    prune_at,
)
from .sbm import (
    SbmSpec,
    default_grid,
    grid_from_lists,
    run_grid,
    sample_sbm,
    write_grid_csv,
)

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_PRECONDITION = 3


@dataclass(frozen=True)
class Opt:
    name: str
    type: Callable[[str], Any]
    default: Any = None
    required: bool = False
    help: str = ""


def _kind(s: str) -> CurvatureKind:
    return CurvatureKind.parse(s)


def _kind_list(s: str) -> list[CurvatureKind]:
    return [CurvatureKind.parse(t) for t in s.split(",") if t]


def _float_list(s: str) -> list[float]:
    return [float(t) for t in s.split(",") if t]


def _threshold(s: str) -> str | float:
    if s == "auto":
        return "auto"
    try:
        return float(s)
    except ValueError:
        raise FormatError(f"--threshold expects 'auto' or a number, got {s!r}") from None


_COMMON_INPUT = [
    Opt("input", str, required=True, help="input graph file"),
    Opt("format", str, "edgelist", help="input format: edgelist or gml"),
]

COMMANDS: dict[str, list[Opt]] = {
    "curvature": _COMMON_INPUT
    + [
        Opt("measure", _kind, CurvatureKind.LRC, help="lrc, frc, bfc or orc"),
        Opt("out", str, "-", help="output CSV path, '-' for stdout"),
        Opt("workers", int, 1, help="parallel workers"),
    ],
    "preprocess": _COMMON_INPUT
    + [
        Opt("out", str, required=True, help="pruned edge list path"),
        Opt("report", str, "-", help="JSON report path, '-' for stdout"),
        Opt("curvature-csv", str, "", help="also write the per-edge curvature CSV here"),
        Opt("threshold", _threshold, "auto", help="'auto' (mixture valley) or explicit cutoff"),
        Opt("curvature", _kind, CurvatureKind.LRC, help="curvature used for pruning"),
        Opt("workers", int, 1, help="parallel workers"),
        Opt("max-iter", int, 500, help="EM iteration cap"),
        Opt("tol", float, 1e-8, help="EM convergence tolerance"),
        Opt("variance-floor-scale", float, 1e-6, help="EM variance floor scale"),
    ],
    "simulate": [
        Opt("n", int, 100, help="nodes per replicate"),
        Opt("k", int, 2, help="communities"),
        Opt("replicates", int, required=True, help="replicates per grid cell"),
        Opt("curvatures", _kind_list, [k for k in CurvatureKind], help="comma list of kinds"),
        Opt("seed", int, required=True, help="base seed"),
        Opt("p1", _float_list, None, help="comma list of within probabilities"),
        Opt("p2", _float_list, None, help="comma list of across probabilities"),
        Opt("out", str, "-", help="output CSV path, '-' for stdout"),
        Opt("workers", int, 1, help="parallel workers"),
    ],
    "sample": [
        Opt("n", int, required=True, help="nodes"),
        Opt("k", int, required=True, help="communities"),
        Opt("p1", float, required=True, help="within-community probability"),
        Opt("p2", float, required=True, help="across-community probability"),
        Opt("seed", int, required=True, help="seed"),
        Opt("out", str, "-", help="edge list path, '-' for stdout"),
        Opt("labels", str, "", help="also write planted labels here"),
    ],
    "detect": _COMMON_INPUT
    + [
        Opt("algo", str, "lpa", help="lpa or components"),
        Opt("seed", int, None, help="seed (required for lpa)"),
        Opt("max-sweeps", int, 100, help="label propagation sweep cap"),
        Opt("out", str, "-", help="label file path, '-' for stdout"),
    ],
    "eval": [
        Opt("metric", str, required=True, help="ari, ami or f1"),
        Opt("truth", str, required=True, help="ground-truth label/community file"),
        Opt("pred", str, required=True, help="predicted label/community file"),
    ],
    "pipeline": _COMMON_INPUT
    + [
        Opt("truth", str, "", help="label file with ground truth (not needed for gml)"),
        Opt("algo", str, "lpa", help="lpa or components"),
        Opt("seeds", int, 50, help="number of detection seeds"),
        Opt("seed", int, required=True, help="base seed"),
        Opt("out", str, "-", help="JSON report path, '-' for stdout"),
        Opt("workers", int, 1, help="parallel workers"),
    ],
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvkit",
        description="Edge curvatures, curvature-guided pruning, SBM score grids.",
    )
    parser.add_argument("--version", action="version", version=f"curvkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, opts in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="key=value option file")
        for o in opts:
            p.add_argument(f"--{o.name}", dest=o.name, default=None, help=o.help)
    return parser


def _load_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"config line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        cfg[key.strip()] = value.strip()
    return cfg


def _resolve(ns: argparse.Namespace, opts: list[Opt]) -> dict[str, Any]:
    cfg = _load_config(ns.config) if ns.config else {}
    known = {o.name for o in opts}
    unknown = set(cfg) - known
    if unknown:
        raise FormatError(f"unknown config keys: {', '.join(sorted(unknown))}")
    values: dict[str, Any] = {}
    for o in opts:
        raw = getattr(ns, o.name)
        if raw is None and o.name in cfg:
            raw = cfg[o.name]
        if raw is None:
            if o.required:
                raise FormatError(f"missing required option --{o.name}")
            values[o.name.replace("-", "_")] = o.default
        else:
            try:
                values[o.name.replace("-", "_")] = o.type(raw) if isinstance(raw, str) else raw
            except (FormatError, PreconditionError):
                raise
            except (TypeError, ValueError) as exc:
                raise FormatError(f"bad value for --{o.name}: {raw!r}") from exc
    return values


def _read_graph(path: str, fmt: str) -> tuple[Graph, Partition | None]:
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot open {path}: {exc}") from exc
    with handle:
        if fmt == "edgelist":
            return parse_edge_list(handle), None
        if fmt == "gml":
            g, part = parse_gml_subset(handle)
            return g, part
    raise FormatError(f"unknown format {fmt!r} (expected edgelist or gml)")


class _OutStream:
    """Context manager writing to a file or stdout ('-')."""

    def __init__(self, path: str):
        self.path = path
        self._fh = None

    def __enter__(self):
        if self.path == "-":
            return sys.stdout
        self._fh = open(self.path, "w", encoding="utf-8")
        return self._fh

    def __exit__(self, *exc):
        if self._fh is not None:
            self._fh.close()
        return False


def _read_label_file(path: str) -> dict[int, int]:
    labels: dict[int, int] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot open {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise FormatError(f"{path}:{lineno}: expected 'node label'")
        try:
            labels[int(tokens[0])] = int(tokens[1])
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-integer token") from exc
    if not labels:
        raise PreconditionError(f"empty label file {path}")
    return labels


def _write_labels(stream, g: Graph, part: Partition) -> None:
    order = np.argsort(g.ext_ids, kind="stable")
    for i in order:
        stream.write(f"{int(g.ext_ids[i])}\t{int(part.labels[i])}\n")


def _aligned_partitions(da: dict[int, int], db: dict[int, int]) -> tuple[Partition, Partition]:
    if set(da) != set(db):
        raise PreconditionError("node-set mismatch")
    nodes = sorted(da)
    return (
        Partition(np.array([da[x] for x in nodes], dtype=np.int64)),
        Partition(np.array([db[x] for x in nodes], dtype=np.int64)),
    )


def cmd_curvature(v: dict[str, Any]) -> int:
    g, _ = _read_graph(v["input"], v["format"])
    curv = curvature_all(g, v["measure"], workers=v["workers"])
    with _OutStream(v["out"]) as out:
        write_curvature_csv(g, curv, out)
    return EXIT_OK


def cmd_preprocess(v: dict[str, Any]) -> int:
    g, _ = _read_graph(v["input"], v["format"])
    config = PreprocessConfig(
        max_iter=v["max_iter"], tol=v["tol"], variance_floor_scale=v["variance_floor_scale"]
    )
    if v["threshold"] == "auto":
        pruned, fit, thr, report = preprocess_lrc(
            g, config=config, kind=v["curvature"], workers=v["workers"]
        )
        payload = {
            "edges_before": report.edges_before,
            "edges_after": report.edges_after,
            "beta": thr.beta,
            "mu1": fit.mu1,
            "mu2": fit.mu2,
            "sigma1": fit.sigma1,
            "sigma2": fit.sigma2,
            "pi1": fit.pi1,
            "mode": thr.mode.value,
        }
        values = None
        if v["curvature_csv"]:
            values = curvature_all(g, v["curvature"], workers=v["workers"])
    else:
        values = curvature_all(g, v["curvature"], workers=v["workers"])
        pruned, report = prune_at(g, values.values, float(v["threshold"]))
        payload = {
            "edges_before": report.edges_before,
            "edges_after": report.edges_after,
            "beta": report.beta_used,
            "mu1": None,
            "mu2": None,
            "sigma1": None,
            "sigma2": None,
            "pi1": None,
            "mode": "manual",
        }
    with _OutStream(v["out"]) as out:
        write_edge_list(pruned, out)
    with _OutStream(v["report"]) as out:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    if v["curvature_csv"]:
        if values is None:
            values = curvature_all(g, v["curvature"], workers=v["workers"])
        with _OutStream(v["curvature_csv"]) as out:
            write_curvature_csv(g, values, out)
    return EXIT_OK


def cmd_simulate(v: dict[str, Any]) -> int:
    if (v["p1"] is None) != (v["p2"] is None):
        raise FormatError("provide both --p1 and --p2, or neither for the default grid")
    if v["p1"] is None:
        cells = default_grid()
    else:
        cells = grid_from_lists(v["p1"], v["p2"])
    records = run_grid(
        cells,
        n=v["n"],
        k=v["k"],
        replicates=v["replicates"],
        kinds=v["curvatures"],
        base_seed=v["seed"],
        workers=v["workers"],
    )
    with _OutStream(v["out"]) as out:
        write_grid_csv(records, out)
    return EXIT_OK


def cmd_sample(v: dict[str, Any]) -> int:
    spec = SbmSpec.from_probs(v["n"], v["k"], v["p1"], v["p2"], v["seed"])
    g, part = sample_sbm(spec)
    with _OutStream(v["out"]) as out:
        write_edge_list(g, out)
    if v["labels"]:
        with _OutStream(v["labels"]) as out:
            _write_labels(out, g, part)
    return EXIT_OK


def cmd_detect(v: dict[str, Any]) -> int:
    g, _ = _read_graph(v["input"], v["format"])
    if v["algo"] == "lpa":
        if v["seed"] is None:
            raise FormatError("--seed is required for lpa")
        part = lpa_detect(g, seed=v["seed"], max_sweeps=v["max_sweeps"]).partition
    elif v["algo"] == "components":
        part = connected_components(g)
    else:
        raise FormatError(f"unknown algorithm {v['algo']!r}")
    with _OutStream(v["out"]) as out:
        _write_labels(out, g, part)
    return EXIT_OK


def cmd_eval(v: dict[str, Any]) -> int:
    metric = v["metric"]
    if metric in ("ari", "ami"):
        pa, pb = _aligned_partitions(_read_label_file(v["truth"]), _read_label_file(v["pred"]))
        value = ari(pa, pb) if metric == "ari" else ami(pa, pb)
    elif metric == "f1":
        with open(v["truth"], "r", encoding="utf-8") as fh:
            truth = parse_community_file(fh)
        try:
            handle = open(v["pred"], "r", encoding="utf-8")
        except OSError as exc:
            raise FormatError(f"cannot open {v['pred']}: {exc}") from exc
        with handle:
            pred = parse_community_file(handle)
        value = overlapping_f1(truth, pred)
    else:
        raise FormatError(f"unknown metric {metric!r}")
    sys.stdout.write(f"{value:.6f}\n")
    return EXIT_OK


def cmd_pipeline(v: dict[str, Any]) -> int:
    g, truth = _read_graph(v["input"], v["format"])
    if truth is None:
        if not v["truth"]:
            raise FormatError("pipeline needs --truth labels for edge-list inputs")
        tmap = _read_label_file(v["truth"])
        try:
            labels = np.array([tmap[int(x)] for x in g.ext_ids], dtype=np.int64)
        except KeyError as exc:
            raise PreconditionError(f"truth labels missing node {exc}") from exc
        truth = Partition(labels=labels)
    pruned, fit, thr, report = preprocess_lrc(g, workers=v["workers"])

    def medians(graph: Graph) -> tuple[float, float]:
        aris, amis = [], []
        for s in range(v["seeds"]):
            if v["algo"] == "lpa":
                part = lpa_detect(graph, seed=v["seed"] + s).partition
            else:
                part = connected_components(graph)
            aris.append(ari(truth, part))
            amis.append(ami(truth, part))
        return float(np.median(aris)), float(np.median(amis))

    ari_before, ami_before = medians(g)
    ari_after, ami_after = medians(pruned)
    payload = {
        "ari_before": ari_before,
        "ari_after": ari_after,
        "ami_before": ami_before,
        "ami_after": ami_after,
        "edges_before": report.edges_before,
        "edges_after": report.edges_after,
        "beta": thr.beta,
        "mode": thr.mode.value,
        "algo": v["algo"],
        "seeds": v["seeds"],
        "base_seed": v["seed"],
    }
    with _OutStream(v["out"]) as out:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


_HANDLERS = {
    "curvature": cmd_curvature,
    "preprocess": cmd_preprocess,
    "simulate": cmd_simulate,
    "sample": cmd_sample,
    "detect": cmd_detect,
    "eval": cmd_eval,
    "pipeline": cmd_pipeline,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        values = _resolve(ns, COMMANDS[ns.command])
        return _HANDLERS[ns.command](values)
    except FormatError as exc:
        _emit_error(str(exc), EXIT_FORMAT)
        return EXIT_FORMAT
    except PreconditionError as exc:
        _emit_error(str(exc), EXIT_PRECONDITION)
        return EXIT_PRECONDITION
    except OSError as exc:
        _emit_error(str(exc), EXIT_FORMAT)
        return EXIT_FORMAT


def _emit_error(message: str, code: int) -> None:
    sys.stderr.write(json.dumps({"error": message, "code": code}) + "\n")


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Every subcommand accepts ``--config file.json`` whose keys are the
subcommand's option names (explicit flags win; unknown keys are an error).
A ``<output>.run.json`` file is written next to every output with the
resolved parameters and input hashes; passing it back via ``--config``
replays the run.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import traceback
from pathlib import Path

import numpy as np

from . import __version__
from .centrality import HOP, METRICS, betweenness, build_bcg
from .datasets import karate_club
from .descriptors import WksConfig, edge_embedding, load_embedding, save_embedding
from .evaluation import (
    ClusteringError,
    alignment_benchmark,
    cluster_purity,
    forecast_comparison,
    mirrored_karate_sweep,
    pca_project,
    structural_equivalence_accuracy,
)
from .graph import LabeledGraph, generate_barbell, generate_mirrored, laplacian_of, load_edge_list, write_edge_list
from .pipelines import METHODS, PipelineConfig, embed
from .spectral import SpectralError, eigh, q_beta, spectral_spread, spread_bounds, spread_point

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2


def _ints(text):
    """``"1-25"`` or ``"8,12,16"`` -> list of ints."""
    if isinstance(text, list):
        return [int(x) for x in text]
    out = []
    for part in str(text).split(","):
        if "-" in part.strip()[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _floats(text):
    if isinstance(text, list):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",")]


def _strs(text):
    if isinstance(text, list):
        return [str(x) for x in text]
    return [x for x in str(text).split(",") if x]


# option name -> (flags, default, kwargs) per subcommand
COMMON = {
    "output": (("-o", "--output"), None, {}),
    "seed": (("--seed",), 0, {"type": int}),
    "threads": (("--threads",), None, {"type": int}),
}
EMBED_OPTS = {
    "beta": (("--beta",), -1000.0, {"type": float}),
    "rho": (("--rho",), 1.0, {"type": float}),
    "r": (("-r",), None, {"type": int}),
    "t": (("-t",), 32, {"type": int}),
    "sigma_scale": (("--sigma-scale",), 7.0, {"type": float}),
    "metric": (("--metric",), HOP, {"choices": METRICS}),
}
COMMANDS = {
    "generate": {
        "kind": (("kind",), None, {"choices": ("barbell", "mirrored-karate", "mirrored")}),
        "input": (("-i", "--input"), None, {}),
        "m1": (("--m1",), 5, {"type": int}),
        "m2": (("--m2",), 10, {"type": int}),
        "mirror_edges": (("--mirror-edges",), 1, {"type": int}),
    },
    "bcg": {
        "input": (("-i", "--input"), None, {}),
        "metric": (("--metric",), HOP, {"choices": METRICS}),
        "ebc_table": (("--ebc-table",), None, {}),
    },
    "embed": {
        "method": (("method",), None, {"choices": METHODS}),
        "input": (("-i", "--input"), None, {}),
        **EMBED_OPTS,
        "edges": (("--edges",), False, {"action": "store_true"}),
        "symmetric_edges": (("--symmetric-edges",), False, {"action": "store_true"}),
    },
    "spreads": {
        "input": (("-i", "--input"), None, {}),
        "signals": (("--signals",), None, {}),
        "beta": (("--beta",), None, {"type": float}),
        "metric": (("--metric",), HOP, {"choices": METRICS}),
    },
    "eval-structural": {
        "input": (("-i", "--input"), None, {}),
        "correspondence": (("--correspondence",), None, {}),
        "methods": (("--methods",), "gse,gsse,baseline-wks", {}),
        "mirror_edges": (("--mirror-edges",), "1-25", {}),
        "seeds": (("--seeds",), 10, {"type": int}),
        "r_values": (("--r-values",), "8,12,16,20", {}),
        "t": (("-t",), 32, {"type": int}),
        "beta": (("--beta",), -1000.0, {"type": float}),
        "rho": (("--rho",), 1.0, {"type": float}),
        "tie_mode": (("--tie-mode",), "optimistic", {"choices": ("optimistic", "strict")}),
    },
    "eval-align": {
        "input": (("-i", "--input"), None, {}),
        "methods": (("--methods",), "gse,gsse,baseline-wks", {}),
        "noise": (("--noise",), "0.1,0.2", {}),
        "anchors": (("--anchors",), 0.5, {"type": float}),
        "seeds": (("--seeds",), 10, {"type": int}),
        "r": (("-r",), 20, {"type": int}),
        "t": (("-t",), 32, {"type": int}),
        "beta": (("--beta",), -1000.0, {"type": float}),
        "rho": (("--rho",), 1.0, {"type": float}),
    },
    "eval-forecast": {
        "input": (("-i", "--input"), None, {}),
        "r": (("-r",), 20, {"type": int}),
        "t": (("-t",), 32, {"type": int}),
        "beta": (("--beta",), -1000.0, {"type": float}),
        "rho": (("--rho",), 1.0, {"type": float}),
        "symmetric_edges": (("--symmetric-edges",), False, {"action": "store_true"}),
    },
    "cluster": {
        "input": (("-i", "--input"), None, {}),
        "labels": (("--labels",), None, {}),
        "clusters": (("--clusters",), None, {"type": int}),
        "k": (("-k",), 15, {"type": int}),
    },
    "project": {
        "input": (("-i", "--input"), None, {}),
        "dims": (("--dims",), 2, {"type": int}),
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-spread", description="Betweenness-centrality spectral graph embeddings.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, opts in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON parameter file (or a previous .run.json)")
        for key, (flags, _, kwargs) in {**opts, **COMMON}.items():
            if flags[0].startswith("-"):
                p.add_argument(*flags, dest=key, default=argparse.SUPPRESS, **kwargs)
            else:
                # positional: None marks "not given" (SUPPRESS trips the choices check)
                p.add_argument(key, nargs="?", default=None, **kwargs)
    return parser


def resolve_params(command: str, ns: argparse.Namespace) -> dict:
    """Defaults, then config file, then explicit flags."""
    opts = {**COMMANDS[command], **COMMON}
    params = {k: default for k, (_, default, _) in opts.items()}
    if ns.config:
        data = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        if "params" in data and "command" in data:
            data = data["params"]
        unknown = set(data) - set(opts)
        if unknown:
            raise ValueError(f"unknown config key(s) for {command}: {sorted(unknown)}")
        params.update(data)
    explicit = {k: v for k, v in vars(ns).items() if k not in ("command", "config") and v is not None}
    params.update(explicit)
    return params


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_run_meta(command, params, outputs):
    if not params.get("output"):
        return
    inputs = {}
    for key in ("input", "signals", "correspondence", "labels"):
        if params.get(key):
            inputs[key] = {"path": str(params[key]), "sha256": _sha256(params[key])}
    meta = {"command": command, "params": params, "inputs": inputs, "outputs": outputs, "version": __version__}
    Path(str(params["output"]) + ".run.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _require(params, *keys):
    missing = [k for k in keys if params.get(k) in (None, "")]
    if missing:
        raise ValueError(f"missing required option(s): {', '.join(missing)}")


def _load_graph(params) -> LabeledGraph:
    _require(params, "input")
    return load_edge_list(params["input"])


def _pipeline_config(params, method) -> PipelineConfig:
    r = params.get("r")
    wks = WksConfig(t=params["t"], r=r or 20, sigma_scale=params.get("sigma_scale", 7.0))
    return PipelineConfig(method=method, beta=params["beta"], rho=params["rho"], r=r, wks=wks, metric=params.get("metric", HOP))


def _emit(report, params):
    text = report.to_json(params.get("output"))
    if not params.get("output"):
        print(text)


# --- subcommands -------------------------------------------------------------


def cmd_generate(p):
    _require(p, "kind", "output")
    outputs = [p["output"]]
    if p["kind"] == "barbell":
        write_edge_list(p["output"], generate_barbell(p["m1"], p["m2"]))
    else:
        base = karate_club() if p["kind"] == "mirrored-karate" else _load_graph(p).graph
        g, corr = generate_mirrored(base, p["mirror_edges"], p["seed"])
        write_edge_list(p["output"], g)
        corr_path = str(p["output"]) + ".corr.json"
        Path(corr_path).write_text(json.dumps({"correspondence": corr.tolist()}) + "\n")
        outputs.append(corr_path)
    return outputs


def cmd_bcg(p):
    _require(p, "output")
    lg = _load_graph(p)
    g = lg.graph
    ebc, vbc = betweenness(g, p["metric"], p.get("threads"))
    write_edge_list(p["output"], g.with_weights(np.maximum(ebc.values, np.finfo(float).tiny)), lg.edge_labels)
    outputs = [p["output"]]
    if p.get("ebc_table"):
        with open(p["ebc_table"], "w", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["u", "v", "ebc"])
            for (u, v), x in zip(g.edges, ebc.values):
                w.writerow([u, v, f"{x:.17g}"])
        outputs.append(p["ebc_table"])
    return outputs


def cmd_embed(p):
    _require(p, "method", "output")
    lg = _load_graph(p)
    g = lg.graph
    cfg = _pipeline_config(p, p["method"])
    emb = embed(g, cfg)
    ids = lg.node_names
    if p["edges"]:
        emb = edge_embedding(emb, g, symmetric=p["symmetric_edges"])
        ids = [f"{u}-{v}" for u, v in g.edges]
    emb.meta["config"] = cfg.to_dict()
    save_embedding(p["output"], emb, ids)
    return [p["output"], p["output"] + ".meta.json"]


def cmd_spreads(p):
    _require(p, "signals", "output")
    g = _load_graph(p).graph
    w_be = build_bcg(g, p["metric"])
    l_be = laplacian_of(w_be)
    eig_l, eig_w = eigh(l_be), eigh(w_be)
    signals = np.atleast_2d(np.loadtxt(p["signals"], delimiter=",", ndmin=2))
    if signals.shape[1] != g.n_nodes:
        raise ValueError(f"signals have {signals.shape[1]} columns, graph has {g.n_nodes} nodes")
    q = q_beta(w_be, l_be, p["beta"]) if p["beta"] is not None else None
    with open(p["output"], "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["signal", "s_L", "s_W", "in_bounds"]
        if q is not None:
            header += ["trade_off", "q_beta"]
        w.writerow(header)
        for k, x in enumerate(signals):
            pt = spread_point(l_be, w_be, x)
            row = [k, f"{pt.s_L:.17g}", f"{pt.s_W:.17g}", int(spread_bounds(pt, eig_l, eig_w))]
            if q is not None:
                row += [f"{pt.s_W - p['beta'] * spectral_spread(l_be, x):.17g}", f"{q:.17g}"]
            w.writerow(row)
    return [p["output"]]


def cmd_eval_structural(p):
    if p.get("input"):
        _require(p, "correspondence")
        emb, _ = load_embedding(p["input"])
        corr = json.loads(Path(p["correspondence"]).read_text())["correspondence"]
        report = structural_equivalence_accuracy(emb, corr, p["tie_mode"])
    else:
        report = mirrored_karate_sweep(
            methods=_strs(p["methods"]), mirror_edges=_ints(p["mirror_edges"]), seeds=range(p["seed"], p["seed"] + p["seeds"]),
            r_values=_ints(p["r_values"]), t=p["t"], beta=p["beta"], rho=p["rho"], tie_mode=p["tie_mode"],
        )
    _emit(report, p)
    return [p.get("output")]


def cmd_eval_align(p):
    g = _load_graph(p).graph if p.get("input") else None
    report = alignment_benchmark(
        g, methods=_strs(p["methods"]), noise_levels=_floats(p["noise"]), anchor_fraction=p["anchors"],
        seeds=range(p["seed"], p["seed"] + p["seeds"]), r=p["r"], t=p["t"], beta=p["beta"], rho=p["rho"],
    )
    _emit(report, p)
    return [p.get("output")]


def cmd_eval_forecast(p):
    lg = _load_graph(p)
    report = forecast_comparison(lg, r=p["r"], t=p["t"], beta=p["beta"], rho=p["rho"], seed=p["seed"], symmetric_edges=p["symmetric_edges"])
    _emit(report, p)
    return [p.get("output")]


def _read_labels(path, n):
    labels = [None] * n
    rows = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    if all(len(r) == 1 for r in rows):
        if len(rows) != n:
            raise ValueError(f"{path}: {len(rows)} labels for {n} entities")
        return [r[0] for r in rows]
    for r in rows:
        labels[int(r[0])] = r[1]
    if any(x is None for x in labels):
        raise ValueError(f"{path}: some entities have no label")
    return labels


def cmd_cluster(p):
    _require(p, "input", "labels")
    emb, _ = load_embedding(p["input"])
    labels = _read_labels(p["labels"], emb.rows.shape[0])
    report = cluster_purity(emb, labels, p["clusters"], p["k"], p["seed"])
    _emit(report, p)
    return [p.get("output")]


def cmd_project(p):
    _require(p, "input", "output")
    emb, ids = load_embedding(p["input"])
    proj = pca_project(emb, p["dims"])
    save_embedding(p["output"], proj, ids)
    return [p["output"]]


HANDLERS = {
    "generate": cmd_generate,
    "bcg": cmd_bcg,
    "embed": cmd_embed,
    "spreads": cmd_spreads,
    "eval-structural": cmd_eval_structural,
    "eval-align": cmd_eval_align,
    "eval-forecast": cmd_eval_forecast,
    "cluster": cmd_cluster,
    "project": cmd_project,
}


def _origin(exc) -> str:
    tb = exc.__traceback__
    name = "spectral_spread"
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("spectral_spread"):
            name = mod
        tb = tb.tb_next
    return name


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 is reserved for numerical failures
        return EXIT_OK if exc.code in (0, None) else EXIT_VALIDATION
    try:
        params = resolve_params(ns.command, ns)
        if params.get("threads"):
            os.environ["SPECTRAL_SPREAD_THREADS"] = str(params["threads"])
        outputs = HANDLERS[ns.command](params)
        _write_run_meta(ns.command, params, [o for o in outputs if o])
    except (SpectralError, np.linalg.LinAlgError, ClusteringError, ArithmeticError) as exc:
        print(f"{_origin(exc)}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"{_origin(exc)}: {exc}", file=sys.stderr)
        if os.environ.get("SPECTRAL_SPREAD_DEBUG"):
            traceback.print_exc()
        return EXIT_VALIDATION
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

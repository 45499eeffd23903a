"""Command-line entry point: ``rmlm {detect,oracle,reduce,bench,rerun}``.

Every command writes its outputs plus ``manifest.json`` into ``--out``.
``rmlm rerun manifest.json --out DIR`` repeats the run and compares hashes.
"""
from __future__ import annotations

import argparse
from datetime import datetime, timezone
import json
import os
from pathlib import Path
import sys
import traceback

import numpy as np

from . import __version__
from .detection import EpsilonConfig, algorithm_mwp_indist, build_detection_matrices, edge_list
from .estimation import PRESETS, ThresholdPlan, frechet2_transform
from .hidden import check_observable, reduced_matrix
from .io import (
    InputFormatError, NonNumericError, read_dag_csv, read_data_csv, sha256,
    write_json, write_matrix_csv, write_rows_csv,
)
from .oracle import pair_record, sigma_matrix
from .simulation import METRICS, SimConfig, run_experiment, summarize
from .tropical import REL_TOL, ml_matrix, mwp_ground_truth, standardize

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_NON_NUMERIC = 3
EXIT_PARAMETER = 4
EXIT_REFUSED = 5


class ParameterError(ValueError):
    pass


class Refused(Exception):
    pass


def _eps(params) -> EpsilonConfig:
    return EpsilonConfig(*(params[f"eps{j}"] for j in range(1, 7)), a=params["a"])


def cmd_detect(params: dict, out: Path) -> list[str]:
    labels, raw = read_data_csv(params["input"])
    n, d = raw.shape
    if d < 2:
        raise ParameterError("need at least two columns")
    if params["k1"] >= n:
        raise ParameterError(f"k1={params['k1']} must be smaller than n={n}")
    plan = ThresholdPlan(params["k1"], params["k2"])
    eps = _eps(params)
    M = build_detection_matrices(frechet2_transform(raw), plan, eps.a, params["threads"])
    P, Pstar = algorithm_mwp_indist(M, eps)
    files = []
    for name, mat in M.as_dict().items():
        write_matrix_csv(mat, labels, out / f"{name}.csv")
        files.append(f"{name}.csv")
    write_matrix_csv(P, labels, out / "P.csv")
    write_matrix_csv(Pstar, labels, out / "Pstar.csv")
    # D2 with detected pairs masked out, ready for a heatmap
    write_matrix_csv(np.where(P, np.nan, M.D2), labels, out / "D2_heatmap.csv")
    write_rows_csv(["source", "target", "kind"], edge_list(P, Pstar, labels), out / "edges.csv")
    (out / "diagnostics.txt").write_text("".join(f"{x}\n" for x in M.diagnostics), encoding="utf-8")
    return files + ["P.csv", "Pstar.csv", "D2_heatmap.csv", "edges.csv", "diagnostics.txt"]


def cmd_oracle(params: dict, out: Path) -> list[str]:
    dag = read_dag_csv(params["input"])
    tol = params["tol"]
    A = ml_matrix(dag)
    Abar = standardize(A)
    truth = mwp_ground_truth(Abar, tol)
    labels = [int(x) for x in dag.labels]
    d = dag.node_count
    pairs = []
    for i in range(d):
        for m in range(d):
            if i != m:
                rec = pair_record(Abar, i, m, params["a"], truth)
                pairs.append({"i": labels[i], "m": labels[m], **rec})
    doc = {
        "labels": labels,
        "ml_matrix": A.tolist(),
        "standardized": Abar.tolist(),
        "sigma": sigma_matrix(Abar).tolist(),
        "mwp": [[labels[i], labels[m]] for i, m in zip(*np.nonzero(truth))],
        "pairs": pairs,
    }
    write_json(doc, out / "oracle.json")
    return ["oracle.json"]


def _parse_observed(text: str, d: int) -> list[int]:
    try:
        obs = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError as exc:
        raise ParameterError(f"bad observed set {text!r}") from exc
    if not obs or obs[0] < 1 or obs[-1] > d:
        raise ParameterError(f"observed labels must lie in 1..{d}")
    return [o - 1 for o in obs]


def cmd_reduce(params: dict, out: Path) -> list[str]:
    dag = read_dag_csv(params["input"])
    A = ml_matrix(dag)
    obs = _parse_observed(params["observed"], dag.node_count)
    report = check_observable(A, obs, params["tol"])
    write_json(report.to_json(dag.labels), out / "report.json")
    if not report.representable:
        raise Refused("observed set is not representable; see report.json")
    model = reduced_matrix(A, obs, params["tol"])
    labels = [dag.labels[o] for o in model.observed]
    write_matrix_csv(model.reduced, labels, out / "reduced.csv")
    return ["report.json", "reduced.csv"]


def cmd_bench(params: dict, out: Path) -> list[str]:
    try:
        cfg_doc = json.loads(Path(params["input"]).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read config: {exc}") from exc
    cfg_doc.update({k: v for k, v in params["overrides"].items() if v is not None})
    try:
        cfg = SimConfig.from_json(cfg_doc)
    except (TypeError, ValueError) as exc:
        raise ParameterError(str(exc)) from exc
    results = run_experiment(cfg, params["threads"])
    rows, errors = [], []
    for rep, (rec, err) in enumerate(results):
        if rec is None:
            errors.append([rep, err.strip().splitlines()[-1]])
            continue
        row = [rep]
        for name in METRICS:
            num, den = rec.counts[name]
            val = getattr(rec, name)
            row += [num, den, None if val is None else repr(float(val))]
        rows.append(row)
    header = ["rep"] + [f"{m}{s}" for m in METRICS for s in ("_num", "_den", "")]
    write_rows_csv(header, rows, out / "metrics.csv")
    summ = summarize([r for r, _ in results])
    stats = ["defined", "min", "q1", "median", "q3", "max"]
    write_rows_csv(["metric"] + stats,
                   [[m] + [summ[m][s] if s == "defined" or summ[m][s] is None else repr(float(summ[m][s]))
                           for s in stats] for m in METRICS],
                   out / "summary.csv")
    write_rows_csv(["rep", "error"], errors, out / "errors.csv")
    write_json(cfg.to_json(), out / "config.resolved.json")
    return ["metrics.csv", "summary.csv", "errors.csv", "config.resolved.json"]


COMMANDS = {"detect": cmd_detect, "oracle": cmd_oracle, "reduce": cmd_reduce, "bench": cmd_bench}


def _add_eps(p):
    defaults = EpsilonConfig()
    for j in range(1, 7):
        p.add_argument(f"--eps{j}", type=float, default=getattr(defaults, f"eps{j}"))
    p.add_argument("--a", type=float, default=defaults.a, help="scaling constant > 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARAMETER)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rmlm", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("detect", help="run the pairwise detection algorithm on a data CSV")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_eps(p)

    p = sub.add_parser("oracle", help="population quantities of a weighted DAG")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--a", type=float, default=1.0001)
    p.add_argument("--tol", type=float, default=REL_TOL)

    p = sub.add_parser("reduce", help="check an observed set and build its reduced matrix")
    p.add_argument("input")
    p.add_argument("--observed", required=True, help="comma-separated node labels")
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=REL_TOL)

    p = sub.add_parser("bench", help="simulation benchmark from a JSON config")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--abs-noise", action="store_true", default=None)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p = sub.add_parser("rerun", help="repeat a run from its manifest and compare outputs")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    return ap


def _resolve(ns) -> dict:
    """Turn parsed flags into the parameter dict stored in the manifest."""
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "out")}
    if "input" in params:
        params["input"] = str(Path(params["input"]).resolve())
    if ns.command in ("detect", "bench"):
        preset = params.pop("preset")
        k1, k2 = params.pop("k1"), params.pop("k2")
        if preset:
            k1 = PRESETS[preset].k1 if k1 is None else k1
            k2 = PRESETS[preset].k2 if k2 is None else k2
        if ns.command == "detect":
            params["k1"] = 500 if k1 is None else k1
            params["k2"] = 200 if k2 is None else k2
        else:
            params["overrides"] = {"k1": k1, "k2": k2, "seed": params.pop("seed"),
                                   "abs_noise": params.pop("abs_noise")}
    return params


def execute(command: str, params: dict, out: Path) -> list[str]:
    out.mkdir(parents=True, exist_ok=True)
    refusal = None
    try:
        files = COMMANDS[command](params, out)
    except Refused as exc:
        refusal, files = exc, ["report.json"]
    manifest = {
        "command": command,
        "params": params,
        "outputs": {f: sha256(out / f) for f in files},
        "inputs": {params["input"]: sha256(params["input"])},
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    write_json(manifest, out / "manifest.json")
    if refusal is not None:
        raise refusal
    return files


def _rerun(manifest_path: str, out: Path) -> int:
    try:
        manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
        command, params = manifest["command"], manifest["params"]
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"bad manifest: {exc}") from exc
    try:
        execute(command, params, out)
    except Refused:
        pass
    fresh = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    diff = sorted(f for f, h in manifest["outputs"].items() if fresh["outputs"].get(f) != h)
    if diff:
        print(f"outputs differ from manifest: {', '.join(diff)}", file=sys.stderr)
        return EXIT_INTERNAL
    print(f"all {len(manifest['outputs'])} outputs identical")
    return EXIT_OK


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    out = Path(ns.out)
    try:
        if ns.command == "rerun":
            return _rerun(ns.manifest, out)
        params = _resolve(ns)
        if ns.command == "detect":
            try:
                ThresholdPlan(params["k1"], params["k2"])
                _eps(params)
            except ValueError as exc:
                raise ParameterError(str(exc)) from exc
        files = execute(ns.command, params, out)
        print("wrote " + ", ".join(files) + ", manifest.json to " + str(out))
        return EXIT_OK
    except NonNumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_NUMERIC
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except Refused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

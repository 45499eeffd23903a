"""CSV readers and writers, plus run manifests."""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .graph import EdgeWeightDag


class InputFormatError(ValueError):
    """File is unreadable or structurally malformed."""


class NonNumericError(ValueError):
    """A data column holds values that are not numbers."""


def read_dag_csv(path) -> EdgeWeightDag:
    """Read ``from,to,weight`` rows, optionally followed by ``node,c_ii`` rows.

    Nodes are positive integers; missing diagonal entries default to 1.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except (OSError, UnicodeDecodeError) as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    section = None
    edges, diag = {}, {}
    for lineno, row in enumerate(rows, 1):
        cells = [c.strip() for c in row]
        head = [c.lower() for c in cells]
        if head == ["from", "to", "weight"]:
            section = "edges"
            continue
        if head == ["node", "c_ii"]:
            section = "diag"
            continue
        if section is None:
            raise InputFormatError(f"{path}:{lineno}: expected a 'from,to,weight' header")
        try:
            if section == "edges":
                k, i, w = int(cells[0]), int(cells[1]), float(cells[2])
                if len(cells) != 3:
                    raise ValueError
                edges[(k, i)] = w
            else:
                if len(cells) != 2:
                    raise ValueError
                diag[int(cells[0])] = float(cells[1])
        except (ValueError, IndexError) as exc:
            raise InputFormatError(f"{path}:{lineno}: malformed row {row}") from exc
    nodes = set(diag) | {k for e in edges for k in e}
    if not nodes:
        raise InputFormatError(f"{path}: no nodes")
    if min(nodes) < 1:
        raise InputFormatError(f"{path}: node labels must be positive integers")
    D = max(nodes)
    diagonal = np.ones(D)
    for k, c in diag.items():
        diagonal[k - 1] = c
    try:
        return EdgeWeightDag.from_edges(D, {(k - 1, i - 1): w for (k, i), w in edges.items()}, diagonal)
    except ValueError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


def write_dag_csv(dag: EdgeWeightDag, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["from", "to", "weight"])
        for k, i in dag.edges:
            w.writerow([k + 1, i + 1, repr(float(dag.weights[i, k]))])
        w.writerow(["node", "c_ii"])
        for i in range(dag.node_count):
            w.writerow([i + 1, repr(float(dag.weights[i, i]))])


def read_data_csv(path) -> tuple[list[str], np.ndarray]:
    """Header row of labels, then one numeric row per observation."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except (OSError, UnicodeDecodeError) as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    if len(rows) < 2:
        raise InputFormatError(f"{path}: need a header and at least one data row")
    header = [c.strip() for c in rows[0]]
    if len(set(header)) != len(header) or any(not h for h in header):
        raise InputFormatError(f"{path}: header labels must be unique and nonempty")
    data = np.empty((len(rows) - 1, len(header)))
    for r, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise InputFormatError(f"{path}:{r + 2}: expected {len(header)} fields, got {len(row)}")
        for c, cell in enumerate(row):
            try:
                data[r, c] = float(cell)
            except ValueError as exc:
                raise NonNumericError(f"{path}:{r + 2}: column '{header[c]}' value {cell!r}") from exc
    if not np.all(np.isfinite(data)):
        raise NonNumericError(f"{path}: non-finite values")
    return header, data


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    return repr(float(x))


def write_matrix_csv(M, labels, path) -> None:
    """Dense matrix with a header row and a leading label column."""
    M = np.asarray(M)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([""] + list(labels))
        for lab, row in zip(labels, M):
            w.writerow([lab] + [_fmt(x) for x in row])


def read_matrix_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    labels = rows[0][1:]
    return labels, np.array([[float(x) for x in r[1:]] for r in rows[1:]])


def write_rows_csv(header, rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if x is None else x for x in row])


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()

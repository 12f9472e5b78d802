"""Edge lists, pair files and output writers."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import ParseError
from .graph import Graph, graph_from_edge_list


def _data_lines(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError("file not found", path) from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8 ({exc.reason})", path) from None
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), path) from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("#"):
            yield lineno, s.split()


def read_edge_list(path) -> Graph:
    """Parse ``u v [w]`` lines; ``#`` starts a comment line."""
    rows = []
    seen: dict[tuple[str, str], int] = {}
    for lineno, fields in _data_lines(path):
        if len(fields) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {len(fields)} fields", path, lineno)
        u, v = fields[0], fields[1]
        w = 1.0
        if len(fields) == 3:
            try:
                w = float(fields[2])
            except ValueError:
                raise ParseError(f"weight {fields[2]!r} is not a number", path, lineno) from None
            if not (math.isfinite(w) and w > 0):
                raise ParseError(f"weight {fields[2]!r} must be positive and finite", path, lineno)
        if u == v:
            raise ParseError(f"self-loop on {u!r}", path, lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {u} {v} (first seen on line {seen[key]})", path, lineno)
        seen[key] = lineno
        rows.append((u, v, w))
    if not rows:
        raise ParseError("no edges", path)
    return graph_from_edge_list(rows)


def read_pairs(path) -> list[tuple[str, str]]:
    """Two-column whitespace-separated label pairs."""
    pairs = []
    for lineno, fields in _data_lines(path):
        if len(fields) != 2:
            raise ParseError(f"expected two labels, got {len(fields)} fields", path, lineno)
        pairs.append((fields[0], fields[1]))
    return pairs


def write_edge_list(g: Graph, out: TextIO, weights: bool = True):
    for u, v, w in g.edges:
        a, b = g.node_labels[u], g.node_labels[v]
        out.write(f"{a}\t{b}\t{w!r}\n" if weights else f"{a}\t{b}\n")


def fmt(x: float) -> str:
    return f"{x:.17g}"


def write_ebc_tsv(g: Graph, ebc: np.ndarray, out: TextIO):
    """``u v ebc`` rows sorted by node index pair."""
    for (u, v, _), x in sorted(zip(g.edges, ebc), key=lambda r: (r[0][0], r[0][1])):
        out.write(f"{g.node_labels[u]}\t{g.node_labels[v]}\t{fmt(x)}\n")


def write_embedding_csv(labels: Iterable[str], values: np.ndarray, out: TextIO, prefix: str = "s"):
    values = np.asarray(values)
    out.write(",".join(["node"] + [f"{prefix}{i + 1}" for i in range(values.shape[1])]) + "\n")
    for label, row in zip(labels, values):
        out.write(",".join([label] + [fmt(x) for x in row]) + "\n")


def read_embedding_csv(path) -> tuple[list[str], np.ndarray]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    labels, rows = [], []
    for line in lines[1:]:
        parts = line.split(",")
        labels.append(parts[0])
        rows.append([float(x) for x in parts[1:]])
    return labels, np.array(rows)


def write_json(obj, out: TextIO):
    json.dump(obj, out, indent=2, sort_keys=True)
    out.write("\n")

"""Plain-text file formats (graphs, metrics, vertex maps), CSV emission, and
experiment manifests.  Every writer round-trips bit-exactly: graphs store
sorted edge lists, metrics full matrix rows with shortest round-trip
decimals, maps one vertex-point pair per line."""
from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphs import Graph, graph_from_edges
from .metrics import FiniteMetric, validate
from .poincare import GammaReport, VertexMap


def fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain repr for ints."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


# ---------------------------------------------------------------- graphs

def graph_to_text(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    rows = [r for r in text.splitlines() if r.strip()]
    n, m = map(int, rows[0].split())
    edges = [tuple(map(int, r.split())) for r in rows[1:m + 1]]
    if len(edges) != m:
        raise ValueError(f"expected {m} edges, found {len(edges)}")
    return graph_from_edges(n, edges)


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(graph_to_text(g))


def read_graph(path) -> Graph:
    return graph_from_text(Path(path).read_text())


# ---------------------------------------------------------------- metrics

def metric_to_text(metric: FiniteMetric) -> str:
    lines = [str(metric.size)]
    for row in metric.dist:
        lines.append(" ".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def metric_from_text(text: str) -> FiniteMetric:
    rows = [r for r in text.splitlines() if r.strip()]
    n = int(rows[0])
    mat = [[float(x) for x in rows[1 + i].split()] for i in range(n)]
    return validate(mat)


def write_metric(metric: FiniteMetric, path) -> None:
    Path(path).write_text(metric_to_text(metric))


def read_metric(path) -> FiniteMetric:
    return metric_from_text(Path(path).read_text())


# ---------------------------------------------------------------- maps

def map_to_text(f: VertexMap) -> str:
    lines = [str(f.n)]
    lines.extend(f"{v} {p}" for v, p in enumerate(f.assignment))
    return "\n".join(lines) + "\n"


def map_assignment_from_text(text: str) -> tuple[int, ...]:
    rows = [r for r in text.splitlines() if r.strip()]
    n = int(rows[0])
    out = [0] * n
    for r in rows[1:n + 1]:
        v, p = map(int, r.split())
        out[v] = p
    return tuple(out)


def write_map(f: VertexMap, path) -> None:
    Path(path).write_text(map_to_text(f))


def read_map(path, metric: FiniteMetric) -> VertexMap:
    return VertexMap(metric, map_assignment_from_text(Path(path).read_text()))


# ---------------------------------------------------------------- reports

GAMMA_CSV_HEADER = "n,d,N,q,ave,dirichlet,ratio,Qtau,concentrated"


def gamma_report_csv_row(g: Graph, report: GammaReport, n_points: int) -> str:
    d = g.regular_degree()
    return ",".join([
        str(g.n), str(d) if d is not None else "", str(n_points), fmt(report.q),
        fmt(report.ave), fmt(report.dirichlet), fmt(report.ratio),
        fmt(report.quantile_tau), "1" if report.concentrated else "0",
    ])


@dataclass
class CsvDocument:
    """Header comments (config echo, version, wall time) plus a deterministic
    body; the determinism contract covers the body only."""

    config_echo: str
    version: str
    header: str
    rows: list[str]

    def render(self, walltime: float | None = None) -> str:
        if walltime is None:
            walltime = time.time()
        out = [f"# config: {self.config_echo}",
               f"# version: {self.version}",
               f"# walltime: {walltime:.3f}",
               self.header]
        out.extend(self.rows)
        return "\n".join(out) + "\n"

    def body(self) -> str:
        return "\n".join([self.header] + self.rows) + "\n"


def write_manifest(path, **kv) -> None:
    lines = [f"{k}={kv[k]}" for k in sorted(kv)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_manifest(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and "=" in line:
            k, v = line.split("=", 1)
            out[k] = v
    return out

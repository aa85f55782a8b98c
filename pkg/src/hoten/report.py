"""Plot-ready CSV output and metric comparison.

Every file has a header row and a fixed column order; floats carry 9
significant digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError
from .hotspots import GridSpec, HurstFit

METRIC_COLUMNS = ("protocol", "ttl", "cpdr", "mdd", "infected_ratio", "avg_hops")
CRITERIA = ("cpdr", "mdd", "infected_ratio", "avg_hops")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.9g}"
    return str(value)


def render(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(header, rows), encoding="utf-8")
    return path


def grid_rows(grid: GridSpec):
    return [(grid.origin_x, grid.origin_y, grid.cell_size, grid.cols, grid.rows, grid.K)]


GRID_COLUMNS = ("origin_x", "origin_y", "cell_size", "cols", "rows", "K")


def weight_rows(weights) -> list[tuple[int, float]]:
    """Sparse ``(cell_index, weight)`` rows; omitted cells have weight 0."""
    w = getattr(weights, "weights", weights)
    return [(int(i), float(w[i])) for i in np.flatnonzero(np.asarray(w))]


def hurst_rows(fit: HurstFit | None):
    if fit is None:
        return []
    return list(zip(fit.d_candidates, fit.h_values))


def metrics_rows(results) -> list[tuple]:
    rows = []
    for sim in results:
        for ttl in sorted(sim.per_ttl):
            m = sim.per_ttl[ttl]
            rows.append((sim.protocol, ttl, m.cpdr, m.mean_delivery_delay,
                         m.infected_ratio, m.avg_hops))
    return rows


# -- comparison ------------------------------------------------------------

@dataclass(frozen=True)
class MetricRow:
    protocol: str
    ttl: float
    cpdr: float
    mdd: float | None
    infected_ratio: float
    avg_hops: float | None


def _num(text: str, path, line: int) -> float | None:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise DataError(f"{path}:{line}: not a number: {text!r}") from None


def read_metrics(path) -> list[MetricRow]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != METRIC_COLUMNS:
            raise DataError(f"{path}: expected header {','.join(METRIC_COLUMNS)}")
        out = []
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(METRIC_COLUMNS):
                raise DataError(f"{path}:{line}: expected {len(METRIC_COLUMNS)} fields")
            vals = [_num(v, path, line) for v in row[1:]]
            if vals[0] is None or vals[1] is None or vals[3] is None:
                raise DataError(f"{path}:{line}: ttl, cpdr and infected_ratio are required")
            out.append(MetricRow(row[0], *vals))
    return out


def load_metric_tables(paths: Sequence) -> dict[str, dict[float, MetricRow]]:
    """protocol -> ttl -> row, merged over files.

    A protocol name that reappears in a later file is prefixed with that
    file's stem so both series stay comparable.
    """
    table: dict[str, dict[float, MetricRow]] = {}
    for path in paths:
        for row in read_metrics(path):
            name = row.protocol
            if name in table and row.ttl in table[name]:
                name = f"{Path(path).stem}:{row.protocol}"
            table.setdefault(name, {})[row.ttl] = row
    return table


def comparison_rows(table: Mapping[str, Mapping[float, MetricRow]]) -> list[tuple]:
    rows = []
    ttls = sorted(set().union(*(t.keys() for t in table.values()))) if table else []
    for ttl in ttls:
        for a, b in itertools.combinations(table, 2):
            ra, rb = table[a].get(ttl), table[b].get(ttl)
            if ra is None or rb is None:
                continue
            for crit in CRITERIA:
                va, vb = getattr(ra, crit), getattr(rb, crit)
                delta = None if va is None or vb is None else va - vb
                rows.append((ttl, crit, a, b, va, vb, delta))
    return rows


COMPARISON_COLUMNS = ("ttl", "criterion", "protocol_a", "protocol_b", "value_a", "value_b", "delta")
CHECK_COLUMNS = ("check", "status", "detail")


def _cmp(op: str, x, y) -> bool | None:
    if x is None or y is None:
        return None
    return {">=": x >= y, "<=": x <= y, ">": x > y, "<": x < y}[op]


# (name, criterion, left, op, right): the expected direction at the largest TTL
DIRECTIONAL_CHECKS = (
    ("cpdr epidemic >= hoten", "cpdr", "epidemic", ">=", "hoten"),
    ("cpdr hoten >= simbet", "cpdr", "hoten", ">=", "simbet"),
    ("mdd epidemic <= hoten", "mdd", "epidemic", "<=", "hoten"),
    ("mdd epidemic <= simbet", "mdd", "epidemic", "<=", "simbet"),
    ("infected epidemic > hoten", "infected_ratio", "epidemic", ">", "hoten"),
    ("infected epidemic > simbet", "infected_ratio", "epidemic", ">", "simbet"),
    ("hops hoten < epidemic", "avg_hops", "hoten", "<", "epidemic"),
    ("hops hoten < simbet", "avg_hops", "hoten", "<", "simbet"),
)


def directional_checks(table: Mapping[str, Mapping[float, MetricRow]]) -> list[tuple[str, str, str]]:
    out = []
    for name, crit, left, op, right in DIRECTIONAL_CHECKS:
        if left not in table or right not in table:
            out.append((name, "SKIP", "protocol missing"))
            continue
        common = set(table[left]) & set(table[right])
        if not common:
            out.append((name, "SKIP", "no common ttl"))
            continue
        ttl = max(common)
        x = getattr(table[left][ttl], crit)
        y = getattr(table[right][ttl], crit)
        ok = _cmp(op, x, y)
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        out.append((name, status, f"ttl={fmt(ttl)} {left}={fmt(x)} {right}={fmt(y)}"))
    return out


def format_table(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    cells = [list(header)] + [[fmt(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines)

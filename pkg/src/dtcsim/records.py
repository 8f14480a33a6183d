"""On-disk record formats shared by the CLI and downstream plotting.

CSV sweep schema: one axis column per swept parameter (named after the
parameter), then ``observable,mean,stderr,n_realizations,seed``.  Floats
are printed with 17 significant digits so emitted files are byte-stable and
re-read values are bit-exact.  JSON mirrors the CSV rows and adds a
metadata object (resolved config and code version; nothing time- or
host-dependent, so identical runs give identical bytes).
"""

from __future__ import annotations

import csv
import io
import json
import numbers
import os
from typing import Optional, Sequence

from .errors import ConfigError
from .sweep import SweepRecord

FIXED_COLUMNS = ("observable", "mean", "stderr", "n_realizations", "seed")

TRACE_COLUMNS = ("time", "qubit", "expectation", "running_min_Z")


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return format(float(value), ".17g")
    return str(value)


def parse_value(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def records_to_rows(axis_names: Sequence[str], records: Sequence[SweepRecord]):
    for rec in records:
        if len(rec.coords) != len(axis_names):
            raise ValueError(
                f"record has {len(rec.coords)} coordinates for "
                f"{len(axis_names)} axes"
            )
        yield (
            [format_value(v) for v in rec.coords]
            + [
                rec.observable,
                format_value(float(rec.mean)),
                format_value(float(rec.stderr)),
                str(rec.n_realizations),
                str(rec.seed),
            ]
        )


def write_records_csv(path: str, axis_names: Sequence[str], records: Sequence[SweepRecord]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(axis_names) + list(FIXED_COLUMNS))
    for row in records_to_rows(axis_names, records):
        writer.writerow(row)
    _atomic_write(path, buf.getvalue())


def write_records_json(
    path: str,
    axis_names: Sequence[str],
    records: Sequence[SweepRecord],
    metadata: Optional[dict] = None,
) -> None:
    payload = {
        "metadata": metadata or {},
        "axes": list(axis_names),
        "records": [
            {
                "coords": {a: _plain(v) for a, v in zip(axis_names, rec.coords)},
                "observable": rec.observable,
                "mean": float(rec.mean),
                "stderr": float(rec.stderr),
                "n_realizations": int(rec.n_realizations),
                "seed": int(rec.seed),
            }
            for rec in records
        ],
    }
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_records(
    path: str,
    axis_names: Sequence[str],
    records: Sequence[SweepRecord],
    fmt: str = "csv",
    metadata: Optional[dict] = None,
) -> None:
    if fmt == "csv":
        write_records_csv(path, axis_names, records)
    elif fmt == "json":
        write_records_json(path, axis_names, records, metadata)
    else:
        raise ConfigError(f"unknown output format {fmt!r}; use csv or json")


def read_records(path: str) -> tuple[list[str], list[SweepRecord]]:
    """Read a records file (CSV or JSON, sniffed) back into memory."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        axes = list(payload["axes"])
        records = [
            SweepRecord(
                coords=tuple(entry["coords"][a] for a in axes),
                observable=entry["observable"],
                mean=entry["mean"],
                stderr=entry["stderr"],
                n_realizations=entry["n_realizations"],
                seed=entry["seed"],
            )
            for entry in payload["records"]
        ]
        return axes, records
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ConfigError(f"{path}: empty records file")
    header = rows[0]
    if header[-len(FIXED_COLUMNS):] != list(FIXED_COLUMNS):
        raise ConfigError(
            f"{path}: header must end with {','.join(FIXED_COLUMNS)}"
        )
    axes = header[: -len(FIXED_COLUMNS)]
    records = []
    for row in rows[1:]:
        if len(row) != len(header):
            raise ConfigError(f"{path}: row width {len(row)} != header width")
        coords = tuple(parse_value(v) for v in row[: len(axes)])
        obs, mean, stderr, n, seed = row[len(axes):]
        records.append(
            SweepRecord(
                coords=coords,
                observable=obs,
                mean=float(mean),
                stderr=float(stderr),
                n_realizations=int(n),
                seed=int(seed),
            )
        )
    return axes, records


def write_trace_csv(path: str, rows: Sequence[tuple]) -> None:
    """Trace rows: (time, qubit, expectation, running_min_Z)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for time, qubit, expectation, running in rows:
        writer.writerow(
            [
                format_value(time),
                str(qubit),
                format_value(float(expectation)),
                format_value(float(running)),
            ]
        )
    _atomic_write(path, buf.getvalue())


def write_trace_json(path: str, rows: Sequence[tuple], metadata: Optional[dict] = None) -> None:
    payload = {
        "metadata": metadata or {},
        "columns": list(TRACE_COLUMNS),
        "rows": [
            [_plain(t), int(q), float(e), float(r)] for t, q, e, r in rows
        ],
    }
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_fit_json(path: str, fit, metadata: Optional[dict] = None) -> None:
    payload = {
        "metadata": metadata or {},
        "prefactor": float(fit.prefactor),
        "rate": float(fit.rate),
        "r_squared": float(fit.r_squared),
        "mean_lifetimes": {str(k): float(v) for k, v in fit.mean_lifetimes.items()},
        "censored": [int(v) for v in fit.censored],
        "capped_fraction": {str(k): float(v) for k, v in fit.capped_fraction.items()},
    }
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _plain(value):
    if isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    return value


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)

"""Reader for the simulation CLI's record files.

The CSV contract: one column per swept axis (named after the parameter),
then exactly ``observable,mean,stderr,n_realizations,seed``.  The JSON
contract mirrors the rows plus a metadata object.  Any deviation raises
``SchemaError`` naming the offending column.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

FIXED_COLUMNS = ("observable", "mean", "stderr", "n_realizations", "seed")


class SchemaError(ValueError):
    """A records file does not match the CLI's schema."""


@dataclass(frozen=True)
class Record:
    coords: tuple
    observable: str
    mean: float
    stderr: float
    n_realizations: int
    seed: int


def _parse_coord(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_records(path: str) -> tuple[list[str], list[Record]]:
    """Load a records file (CSV or JSON, sniffed from content)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return _read_json(path, text)
    return _read_csv(path, text)


def _read_json(path: str, text: str) -> tuple[list[str], list[Record]]:
    payload = json.loads(text)
    for key in ("axes", "records"):
        if key not in payload:
            raise SchemaError(f"{path}: missing top-level key {key!r}")
    axes = list(payload["axes"])
    records = []
    for i, entry in enumerate(payload["records"]):
        for key in ("coords",) + FIXED_COLUMNS:
            if key not in entry:
                raise SchemaError(f"{path}: record {i} is missing {key!r}")
        missing = [a for a in axes if a not in entry["coords"]]
        if missing:
            raise SchemaError(f"{path}: record {i} lacks coordinate {missing[0]!r}")
        records.append(
            Record(
                coords=tuple(entry["coords"][a] for a in axes),
                observable=str(entry["observable"]),
                mean=float(entry["mean"]),
                stderr=float(entry["stderr"]),
                n_realizations=int(entry["n_realizations"]),
                seed=int(entry["seed"]),
            )
        )
    return axes, records


def _read_csv(path: str, text: str) -> tuple[list[str], list[Record]]:
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise SchemaError(f"{path}: empty records file")
    header = rows[0]
    if len(header) < len(FIXED_COLUMNS):
        raise SchemaError(f"{path}: header too short: {header}")
    tail = header[-len(FIXED_COLUMNS):]
    for want, got in zip(FIXED_COLUMNS, tail):
        if want != got:
            raise SchemaError(
                f"{path}: expected column {want!r} in the fixed tail, found {got!r}"
            )
    axes = header[: -len(FIXED_COLUMNS)]
    records = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaError(
                f"{path}: line {i} has {len(row)} fields, header has {len(header)}"
            )
        fixed = row[len(axes):]
        try:
            records.append(
                Record(
                    coords=tuple(_parse_coord(v) for v in row[: len(axes)]),
                    observable=fixed[0],
                    mean=float(fixed[1]),
                    stderr=float(fixed[2]),
                    n_realizations=int(fixed[3]),
                    seed=int(fixed[4]),
                )
            )
        except ValueError as exc:
            raise SchemaError(f"{path}: line {i}: {exc}") from exc
    return axes, records


def read_fit(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    for key in ("prefactor", "rate", "mean_lifetimes"):
        if key not in payload:
            raise SchemaError(f"{path}: fit file is missing {key!r}")
    return payload

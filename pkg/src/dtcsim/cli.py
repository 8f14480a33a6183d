"""Config-driven command line.

Subcommands::

    dtcsim evolve  --config cfg.yaml   per-period trace of one cell
    dtcsim sweep   --config cfg.yaml   ensemble records over a grid
    dtcsim scaling --config cfg.yaml   lifetime-vs-L records plus fit file
    dtcsim h2i     --config cfg.yaml   pulse-count study (with Ising reference)

Common flags: ``--workers N``, ``--output PATH``, ``--format csv|json``,
``--resume``.  Output is byte-identical for any worker count; interrupted
sweeps append completed cells to ``<output>.partial.jsonl`` and ``--resume``
picks them up.  Exit codes: 0 success, 2 config error, 3 capacity/budget
error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Optional

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .errors import CapacityError, ConfigError
from .evolution import apply_period, compile_step
from .model import realization_rng, sample_realization
from .observables import bulk_qubit, scaling_qubit
from .records import (
    write_fit_json,
    write_records,
    write_trace_csv,
    write_trace_json,
)
from .state import basis_state, qubit_z_signs
from .sweep import (
    SweepAxis,
    SweepRecord,
    check_budget,
    lifetime_scaling_campaign,
    run_campaign,
    _parse_observable,
    _resolve_initial_states,
)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load(args)
        if args.command == "evolve":
            cmd_evolve(config)
        elif args.command == "sweep":
            cmd_sweep(config, resume=args.resume)
        elif args.command == "scaling":
            cmd_scaling(config, resume=args.resume)
        elif args.command == "h2i":
            cmd_h2i(config, resume=args.resume)
        else:  # pragma: no cover - argparse enforces the choices
            parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtcsim",
        description="Floquet spin-chain simulator and disorder-ensemble harness",
    )
    parser.add_argument("--version", action="version", version=f"dtcsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("evolve", "write the per-period trace of a single cell"),
        ("sweep", "run an ensemble campaign over the configured grid"),
        ("scaling", "run the lifetime-vs-length campaign and fit"),
        ("h2i", "sweep Heisenberg-to-Ising pulse counts against the Ising reference"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="YAML run configuration")
        p.add_argument("--workers", type=int, default=None, help="worker processes")
        p.add_argument("--output", default=None, help="output records path")
        p.add_argument(
            "--format", default=None, choices=("csv", "json"), help="output format"
        )
        p.add_argument(
            "--resume",
            action="store_true",
            help="reuse completed cells from <output>.partial.jsonl",
        )
    return parser


def _load(args) -> RunConfig:
    config = load_config(args.config)
    overrides = {}
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("workers must be >= 1")
        overrides["workers"] = args.workers
    if args.output is not None:
        overrides["output"] = args.output
    if args.format is not None:
        overrides["format"] = args.format
    return dataclasses.replace(config, **overrides) if overrides else config


def _output_path(config: RunConfig, default_stem: str) -> str:
    return config.output or f"{default_stem}.{config.format}"


def _metadata(config: RunConfig, subcommand: str) -> dict:
    return {
        "config": config.resolved(),
        "subcommand": subcommand,
        "version": __version__,
    }


def _observable_qubits(config: RunConfig) -> list[int]:
    qubits: set[int] = set()
    for obs in config.observable:
        kind, k = _parse_observable(obs, config.L)
        if kind == "z":
            qubits.add(k)
        elif kind in ("lifetime", "capped"):
            qubits.add(scaling_qubit(config.L))
        else:
            qubits.update((1, bulk_qubit(config.L)))
    return sorted(qubits)


def cmd_evolve(config: RunConfig) -> str:
    """Per-period ensemble trace of one cell: mean expectation and mean
    running-minimum autocorrelator for each observed qubit."""
    if config.axes:
        raise ConfigError("evolve runs a single cell; remove the axes section")
    check_budget(1, config.realizations, config.horizon, config.work_budget)
    spec = config.drive_spec()
    qubits = _observable_qubits(config)
    sign_rows = np.stack([qubit_z_signs(config.L, k) for k in qubits])
    n_times = config.horizon + 1

    expect_sum = np.zeros((len(qubits), n_times))
    running_sum = np.zeros((len(qubits), n_times))
    weight = 0
    for r in range(config.realizations):
        rng = realization_rng(config.seed, 0, r)
        realization = sample_realization(
            spec.distribution, spec.L, rng, mode=config.disorder_sampling
        )
        plan = compile_step(spec, realization)
        for bits in _resolve_initial_states(config.initial_state, spec.L, rng):
            state = basis_state(bits)
            probs = state.amplitudes.real**2 + state.amplitudes.imag**2
            z = sign_rows @ probs
            z0 = z.copy()
            running = np.abs(z0 * z)
            expect_sum[:, 0] += z
            running_sum[:, 0] += running
            for t in range(1, n_times):
                apply_period(state, plan)
                probs = state.amplitudes.real**2 + state.amplitudes.imag**2
                z = sign_rows @ probs
                if t % 2 == 0:
                    running = np.minimum(running, np.abs(z0 * z))
                expect_sum[:, t] += z
                running_sum[:, t] += running
            weight += 1

    rows = []
    for t in range(n_times):
        for i, k in enumerate(qubits):
            rows.append(
                (t, k, expect_sum[i, t] / weight, running_sum[i, t] / weight)
            )
    path = _output_path(config, "evolve_trace")
    if config.format == "csv":
        write_trace_csv(path, rows)
    else:
        write_trace_json(path, rows, metadata=_metadata(config, "evolve"))
    print(f"evolve: wrote {len(rows)} rows to {path}")
    return path


class _Journal:
    """Append-only log of finished cells so interrupted campaigns resume."""

    def __init__(self, path: str, resume: bool):
        self.path = path
        self.completed: dict = {}
        if resume and os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    entry = json.loads(line)
                    key = (entry.get("variant", 0), entry["cell_index"])
                    self.completed[key] = [
                        SweepRecord(
                            coords=tuple(rec["coords"]),
                            observable=rec["observable"],
                            mean=rec["mean"],
                            stderr=rec["stderr"],
                            n_realizations=rec["n_realizations"],
                            seed=rec["seed"],
                        )
                        for rec in entry["records"]
                    ]
        elif not resume and os.path.exists(path):
            os.remove(path)

    def completed_for(self, variant: int = 0) -> dict[int, list[SweepRecord]]:
        return {
            cell: recs
            for (var, cell), recs in self.completed.items()
            if var == variant
        }

    def writer(self, variant: int = 0):
        def on_cell_done(cell_index: int, records: list[SweepRecord]) -> None:
            entry = {
                "variant": variant,
                "cell_index": cell_index,
                "records": [
                    {
                        "coords": list(rec.coords),
                        "observable": rec.observable,
                        "mean": float(rec.mean),
                        "stderr": float(rec.stderr),
                        "n_realizations": int(rec.n_realizations),
                        "seed": int(rec.seed),
                    }
                    for rec in records
                ],
            }
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")

        return on_cell_done

    def discard(self) -> None:
        if os.path.exists(self.path):
            os.remove(self.path)


def cmd_sweep(config: RunConfig, resume: bool = False) -> str:
    axes = config.sweep_axes()
    path = _output_path(config, "sweep_records")
    journal = _Journal(path + ".partial.jsonl", resume)
    records = run_campaign(
        axes,
        config.drive_spec(),
        config.observable,
        config.horizon,
        config.realizations,
        config.seed,
        initial_state=config.initial_state,
        threshold=config.threshold,
        workers=config.workers,
        work_budget=config.work_budget,
        sampling_mode=config.disorder_sampling,
        completed=journal.completed_for(),
        on_cell_done=journal.writer(),
    )
    axis_names = [a.name for a in axes]
    write_records(path, axis_names, records, config.format, _metadata(config, "sweep"))
    journal.discard()
    print(f"sweep: wrote {len(records)} records to {path}")
    return path


def cmd_scaling(config: RunConfig, resume: bool = False) -> str:
    path = _output_path(config, "scaling_records")
    journal = _Journal(path + ".partial.jsonl", resume)
    fit, records = lifetime_scaling_campaign(
        config.lengths,
        config.drive_spec(),
        config.realizations,
        config.seed,
        horizon_cap=config.horizon_cap,
        initial_state=config.initial_state,
        threshold=config.threshold,
        workers=config.workers,
        work_budget=config.work_budget,
        sampling_mode=config.disorder_sampling,
        completed=journal.completed_for(),
        on_cell_done=journal.writer(),
    )
    write_records(path, ["L"], records, config.format, _metadata(config, "scaling"))
    fit_path = os.path.splitext(path)[0] + ".fit.json"
    write_fit_json(fit_path, fit, metadata=_metadata(config, "scaling"))
    journal.discard()
    print(
        f"scaling: wrote {len(records)} records to {path}; "
        f"fit {fit.prefactor:.4g} * exp({fit.rate:.4g} L), R^2 = {fit.r_squared:.4f}"
        + (f", censored L = {list(fit.censored)}" if fit.censored else "")
    )
    return path


ISING_REFERENCE = -1  # h2i_pulses coordinate marking the Ising reference rows


def cmd_h2i(config: RunConfig, resume: bool = False) -> str:
    """Records over (h2i_pulses, grid): the configured pulse counts on the
    Heisenberg model, plus (by default) Ising reference rows at the
    coordinate h2i_pulses = -1, all on identical disorder draws."""
    if config.model != "heisenberg":
        raise ConfigError('the h2i subcommand needs "model: heisenberg"')
    axes = config.sweep_axes()
    if any(a.name == "h2i_pulses" for a in axes):
        raise ConfigError("h2i sweeps pulse counts via h2i_counts, not an axis")
    for n in config.h2i_counts:
        if n < 2 or n % 2:
            raise ConfigError(f"h2i_counts entries must be even and >= 2, got {n}")

    variants: list[tuple[int, RunConfig]] = []
    if config.include_ising_reference:
        variants.append((ISING_REFERENCE, dataclasses.replace(config, model="ising", h2i_pulses=0)))
    for n in config.h2i_counts:
        variants.append((n, dataclasses.replace(config, h2i_pulses=int(n))))

    path = _output_path(config, "h2i_records")
    journal = _Journal(path + ".partial.jsonl", resume)
    merged: list[SweepRecord] = []
    for index, (value, variant) in enumerate(variants):
        records = run_campaign(
            axes,
            variant.drive_spec(),
            variant.observable,
            variant.horizon,
            variant.realizations,
            variant.seed,
            initial_state=variant.initial_state,
            threshold=variant.threshold,
            workers=variant.workers,
            work_budget=variant.work_budget,
            sampling_mode=variant.disorder_sampling,
            completed=journal.completed_for(index),
            on_cell_done=journal.writer(index),
        )
        merged.extend(
            dataclasses.replace(rec, coords=(value,) + rec.coords) for rec in records
        )
    axis_names = ["h2i_pulses"] + [a.name for a in axes]
    write_records(path, axis_names, merged, config.format, _metadata(config, "h2i"))
    journal.discard()
    print(f"h2i: wrote {len(merged)} records to {path}")
    return path


if __name__ == "__main__":
    sys.exit(main())

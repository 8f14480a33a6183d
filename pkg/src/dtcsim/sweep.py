"""Disorder-ensemble campaigns over parameter grids.

Every grid cell draws its own quenched realizations through the seed
schedule (campaign seed, flat cell index, realization index), so results
are reproducible and independent of worker count or completion order, and
editing one cell's coordinates never disturbs another cell's draws.

Observable ids: ``z<k>`` is the running-minimum autocorrelator of qubit k
at the horizon; ``lifetime`` is the first even period where the mid-chain
(ceil(L/2)) autocorrelator sinks below the threshold, capped at the
horizon; ``capped`` is 1.0 when that crossing never happened (reported so
censored ensembles are visible); ``fspt`` is z1 minus the bulk (L//2 + 1)
autocorrelator at the horizon.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import multiprocessing
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import CapacityError, ConfigError
from .evolution import SPECTRAL_CAP, PeriodPropagator, compile_step
from .model import (
    FloquetDriveSpec,
    realization_rng,
    sample_realization,
)
from .observables import (
    bulk_qubit,
    even_expectation_blocks,
    scaling_qubit,
)
from .state import StateVector, basis_state, sigma_z_expectation

AXIS_NAMES = (
    "epsilon",
    "J0",
    "h0",
    "sigma_J",
    "sigma_h",
    "t2",
    "h2i_pulses",
    "L",
    "initial_state",
)

DEFAULT_WORK_BUDGET = 1e10

_Z_ID = re.compile(r"^z(\d+)$")


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: a name from AXIS_NAMES and its value list."""

    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(
                f"unknown sweep axis {self.name!r}; expected one of {AXIS_NAMES}"
            )
        if not self.values:
            raise ConfigError(f"axis {self.name!r} has no values")
        object.__setattr__(self, "values", tuple(self.values))
        if self.name != "initial_state":
            vals = np.asarray(self.values, dtype=float)
            if not np.all(np.isfinite(vals)):
                raise ConfigError(f"axis {self.name!r} has non-finite values")

    @classmethod
    def linear(cls, name: str, lo: float, hi: float, count: int) -> "SweepAxis":
        if count < 1:
            raise ConfigError(f"axis {name!r} needs at least one grid point")
        return cls(name, tuple(np.linspace(lo, hi, count)))


@dataclass(frozen=True)
class SweepRecord:
    """Ensemble statistics of one observable in one grid cell."""

    coords: tuple
    observable: str
    mean: float
    stderr: float
    n_realizations: int
    seed: int

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("a record needs at least one realization")
        if self.stderr < 0:
            raise ValueError("standard error cannot be negative")


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of log(lifetime) against chain length:
    lifetime ~ prefactor * exp(rate * L)."""

    prefactor: float
    rate: float
    r_squared: float
    mean_lifetimes: dict[int, float]
    censored: tuple[int, ...] = ()
    capped_fraction: dict[int, float] = dataclasses.field(default_factory=dict)


def combine_moments(
    a: tuple[int, float, float], b: tuple[int, float, float]
) -> tuple[int, float, float]:
    """Merge two (count, mean, sum-of-squared-deviations) accumulators.

    Associative up to roundoff, so partial ensembles can be combined in any
    grouping.
    """
    na, ma, sa = a
    nb, mb, sb = b
    if na == 0:
        return b
    if nb == 0:
        return a
    n = na + nb
    delta = mb - ma
    mean = ma + delta * nb / n
    m2 = sa + sb + delta * delta * na * nb / n
    return n, mean, m2


def moments_to_stats(n: int, mean: float, m2: float) -> tuple[float, float]:
    """(mean, standard error of the mean); stderr is 0 for n = 1."""
    if n < 2:
        return mean, 0.0
    return mean, math.sqrt(m2 / (n - 1) / n)


def _parse_observable(obs: str, L: int) -> tuple[str, Optional[int]]:
    m = _Z_ID.match(obs)
    if m:
        k = int(m.group(1))
        if not 1 <= k <= L:
            raise ConfigError(f"observable {obs!r} is out of range for L={L}")
        return "z", k
    if obs == "lifetime":
        return "lifetime", None
    if obs == "capped":
        return "capped", None
    if obs == "fspt":
        return "fspt", None
    raise ConfigError(
        f"unknown observable {obs!r}; expected z<k>, lifetime, capped, or fspt"
    )


def _resolve_initial_states(
    initial: str, L: int, rng: np.random.Generator
) -> list[str]:
    """Expand an initial-state spec into bitstrings for one realization.

    "all" enumerates every basis string; "random:N" draws N uniform basis
    strings from the realization's own stream (after the disorder draws);
    anything else must be a single 0/1 string of length L.
    """
    if initial == "all":
        return [format(s, f"0{L}b") for s in range(1 << L)]
    if initial.startswith("random:"):
        count = int(initial.split(":", 1)[1])
        if count < 1:
            raise ConfigError(f"need at least one random initial state: {initial!r}")
        return [
            "".join("01"[b] for b in rng.integers(0, 2, size=L))
            for _ in range(count)
        ]
    if len(initial) != L or any(c not in "01" for c in initial):
        raise ConfigError(
            f"initial state {initial!r} is not a length-{L} bitstring, "
            f'"all", or "random:N"'
        )
    return [initial]


def _apply_axis_value(
    spec: FloquetDriveSpec, name: str, value
) -> tuple[FloquetDriveSpec, Optional[str]]:
    """Returns the updated spec and, for initial_state axes, the new state."""
    if name == "initial_state":
        return spec, str(value)
    if name in ("J0", "h0", "sigma_J", "sigma_h"):
        dist = dataclasses.replace(spec.distribution, **{name: float(value)})
        return dataclasses.replace(spec, distribution=dist), None
    if name == "epsilon":
        return dataclasses.replace(spec, epsilon=float(value)), None
    if name == "t2":
        return dataclasses.replace(spec, t2=float(value)), None
    if name == "h2i_pulses":
        return dataclasses.replace(spec, h2i_pulses=int(value)), None
    if name == "L":
        return dataclasses.replace(spec, L=int(value)), None
    raise ConfigError(f"unknown sweep axis {name!r}")


@dataclass(frozen=True)
class _CellTask:
    cell_index: int
    coords: tuple
    base: FloquetDriveSpec
    observables: tuple[str, ...]
    horizon: int
    n_realizations: int
    seed: int
    initial_state: str
    threshold: float
    sampling_mode: str


def _min_z_and_crossing(
    state: StateVector,
    plan,
    qubits: Sequence[int],
    horizon: int,
    threshold: float,
    want_crossing_of: Optional[int],
    propagator: Optional[PeriodPropagator],
) -> tuple[np.ndarray, Optional[float]]:
    """One pass over even periods: final running minima for every qubit and
    (optionally) the first crossing of one of them."""
    qubits = list(qubits)
    z0 = np.array([sigma_z_expectation(state, k) for k in qubits])
    mins = np.full(len(qubits), np.inf)
    crossing = None
    cross_row = qubits.index(want_crossing_of) if want_crossing_of else None
    for periods, expect in even_expectation_blocks(
        state, plan, qubits, horizon, engine="auto", propagator=propagator
    ):
        vals = np.abs(z0[:, None] * expect)
        mins = np.minimum(mins, vals.min(axis=1))
        if cross_row is not None and crossing is None:
            hits = np.nonzero(vals[cross_row] < threshold)[0]
            if hits.size:
                crossing = float(periods[hits[0]])
    return mins, crossing


def evaluate_cell(task: _CellTask) -> list[tuple[str, int, float, float]]:
    """Ensemble statistics for one grid cell.

    Returns one (observable, n, mean, m2) tuple per observable, reduced in
    realization order so results do not depend on scheduling.
    """
    spec = task.base
    initial = task.initial_state
    for name, value in task.coords:
        spec, new_initial = _apply_axis_value(spec, name, value)
        if new_initial is not None:
            initial = new_initial
    parsed = [_parse_observable(o, spec.L) for o in task.observables]

    qubits: set[int] = set()
    want_lifetime = False
    for kind, k in parsed:
        if kind == "z":
            qubits.add(k)
        elif kind in ("lifetime", "capped"):
            qubits.add(scaling_qubit(spec.L))
            want_lifetime = True
        elif kind == "fspt":
            qubits.update((1, bulk_qubit(spec.L)))
    qubit_list = sorted(qubits)
    row = {k: i for i, k in enumerate(qubit_list)}
    cross_qubit = scaling_qubit(spec.L) if want_lifetime else None

    moments = {obs: (0, 0.0, 0.0) for obs in task.observables}
    for r in range(task.n_realizations):
        rng = realization_rng(task.seed, task.cell_index, r)
        realization = sample_realization(
            spec.distribution, spec.L, rng, mode=task.sampling_mode
        )
        states = _resolve_initial_states(initial, spec.L, rng)
        plan = compile_step(spec, realization)
        propagator = (
            PeriodPropagator(plan) if spec.L <= SPECTRAL_CAP else None
        )
        sums = dict.fromkeys(task.observables, 0.0)
        for bits in states:
            mins, crossing = _min_z_and_crossing(
                basis_state(bits),
                plan,
                qubit_list,
                task.horizon,
                task.threshold,
                cross_qubit,
                propagator,
            )
            for obs, (kind, k) in zip(task.observables, parsed):
                if kind == "z":
                    sums[obs] += mins[row[k]]
                elif kind == "lifetime":
                    sums[obs] += task.horizon if crossing is None else crossing
                elif kind == "capped":
                    sums[obs] += 1.0 if crossing is None else 0.0
                else:  # fspt
                    sums[obs] += mins[row[1]] - mins[row[bulk_qubit(spec.L)]]
        for obs in task.observables:
            moments[obs] = combine_moments(
                moments[obs], (1, sums[obs] / len(states), 0.0)
            )
    return [(obs,) + moments[obs] for obs in task.observables]


def _cell_records(task: _CellTask) -> tuple[int, list[SweepRecord]]:
    stats = evaluate_cell(task)
    records = []
    for obs, n, mean, m2 in stats:
        mu, se = moments_to_stats(n, mean, m2)
        records.append(
            SweepRecord(
                coords=tuple(v for _, v in task.coords),
                observable=obs,
                mean=mu,
                stderr=se,
                n_realizations=n,
                seed=task.seed,
            )
        )
    return task.cell_index, records


def check_budget(n_cells: int, n_realizations: int, horizon: int, budget: float) -> None:
    work = float(n_cells) * float(n_realizations) * float(horizon)
    if work > budget:
        raise CapacityError(
            f"campaign work {n_cells} cells x {n_realizations} realizations "
            f"x {horizon} periods = {work:.3g} exceeds the budget {budget:.3g}"
        )


def run_campaign(
    axes: Sequence[SweepAxis],
    base: FloquetDriveSpec,
    observables: Sequence[str] | str,
    horizon: int,
    n_realizations: int,
    seed: int,
    *,
    initial_state: str = "1000",
    threshold: float = 0.1,
    workers: int = 1,
    work_budget: float = DEFAULT_WORK_BUDGET,
    sampling_mode: str = "support",
    completed: Optional[dict[int, list[SweepRecord]]] = None,
    on_cell_done: Optional[Callable[[int, list[SweepRecord]], None]] = None,
) -> list[SweepRecord]:
    """Run every grid cell and return records in deterministic cell order.

    ``completed`` maps cell indices to already-known records (resume);
    ``on_cell_done`` fires as each remaining cell finishes, in completion
    order.
    """
    if isinstance(observables, str):
        observables = [observables]
    if not observables:
        raise ConfigError("campaign needs at least one observable")
    if n_realizations < 1:
        raise ConfigError("campaign needs at least one realization")
    if horizon < 2 or horizon % 2:
        raise ConfigError(f"horizon must be an even period count >= 2, got {horizon}")

    axis_names = [a.name for a in axes]
    if len(set(axis_names)) != len(axis_names):
        raise ConfigError(f"duplicate sweep axes in {axis_names}")
    cells = list(itertools.product(*[a.values for a in axes])) if axes else [()]
    check_budget(len(cells), n_realizations, horizon, work_budget)

    completed = completed or {}
    tasks = []
    for cell_index, values in enumerate(cells):
        if cell_index in completed:
            continue
        coords = tuple(zip(axis_names, values))
        tasks.append(
            _CellTask(
                cell_index=cell_index,
                coords=coords,
                base=base,
                observables=tuple(observables),
                horizon=horizon,
                n_realizations=n_realizations,
                seed=seed,
                initial_state=initial_state,
                threshold=threshold,
                sampling_mode=sampling_mode,
            )
        )

    results: dict[int, list[SweepRecord]] = dict(completed)
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            for cell_index, records in pool.imap_unordered(_cell_records, tasks):
                results[cell_index] = records
                if on_cell_done:
                    on_cell_done(cell_index, records)
    else:
        for task in tasks:
            cell_index, records = _cell_records(task)
            results[cell_index] = records
            if on_cell_done:
                on_cell_done(cell_index, records)

    return [rec for i in sorted(results) for rec in results[i]]


def fit_log_least_squares(pairs: Iterable[tuple[float, float]]) -> ScalingFit:
    """Ordinary least squares on (L, log lifetime)."""
    pairs = list(pairs)
    lengths = np.array([p[0] for p in pairs], dtype=float)
    lifetimes = np.array([p[1] for p in pairs], dtype=float)
    if np.unique(lengths).size < 2:
        raise ValueError("fit needs at least two distinct chain lengths")
    if np.any(~np.isfinite(lifetimes)) or np.any(lifetimes <= 0):
        raise ValueError("fit needs finite positive lifetimes")
    logs = np.log(lifetimes)
    rate, intercept = np.polyfit(lengths, logs, 1)
    residuals = logs - (intercept + rate * lengths)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 and ss_res < 1e-24 else 1.0 - ss_res / ss_tot
    return ScalingFit(
        prefactor=float(np.exp(intercept)),
        rate=float(rate),
        r_squared=float(r_squared),
        mean_lifetimes={int(l): float(t) for l, t in zip(lengths, lifetimes)},
    )


def lifetime_scaling_campaign(
    lengths: Sequence[int],
    base: FloquetDriveSpec,
    n_realizations: int,
    seed: int,
    *,
    horizon_cap: int = 10**7,
    initial_state: str = "random:1",
    threshold: float = 0.1,
    workers: int = 1,
    work_budget: float = DEFAULT_WORK_BUDGET,
    sampling_mode: str = "support",
    completed: Optional[dict[int, list[SweepRecord]]] = None,
    on_cell_done: Optional[Callable[[int, list[SweepRecord]], None]] = None,
) -> tuple[ScalingFit, list[SweepRecord]]:
    """Mean mid-chain lifetime per chain length plus the exponential fit.

    Lifetimes that never cross the threshold are scored at the horizon cap;
    a length whose ensemble is fully capped is flagged censored and left
    out of the fit (its records are still returned).
    """
    records = run_campaign(
        [SweepAxis("L", tuple(int(l) for l in lengths))],
        base,
        ["lifetime", "capped"],
        horizon_cap,
        n_realizations,
        seed,
        initial_state=initial_state,
        threshold=threshold,
        workers=workers,
        work_budget=work_budget,
        sampling_mode=sampling_mode,
        completed=completed,
        on_cell_done=on_cell_done,
    )
    means = {int(r.coords[0]): r.mean for r in records if r.observable == "lifetime"}
    capped = {int(r.coords[0]): r.mean for r in records if r.observable == "capped"}
    usable = [(L, means[L]) for L in sorted(means) if capped[L] < 1.0]
    censored = tuple(L for L in sorted(means) if capped[L] >= 1.0)
    if len({L for L, _ in usable}) < 2:
        raise CapacityError(
            f"scaling fit needs two uncensored lengths; censored: {censored}"
        )
    fit = fit_log_least_squares(usable)
    return (
        dataclasses.replace(
            fit,
            mean_lifetimes={L: means[L] for L in sorted(means)},
            censored=censored,
            capped_fraction={L: capped[L] for L in sorted(capped)},
        ),
        records,
    )

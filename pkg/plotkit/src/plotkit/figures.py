"""Figure construction from record files.

Figure kinds:

- ``heatmap``: the last two axes span (y, x); any leading axes and multiple
  observables become facet columns/rows.
- ``state_panel``: like heatmap but the leading ``initial_state`` axis is
  laid out as a near-square grid of panels.
- ``fspt_map``: heatmap of the edge-minus-bulk observable.
- ``scaling_plot``: semilog mean lifetime vs chain length with the fitted
  exponential overlaid as a dashed line.

Autocorrelator color maps share the fixed [0, 1] scale so panels stay
visually comparable.  Rendering is deterministic: identical inputs give
identical image bytes.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import yaml

from .records import Record, SchemaError, read_fit, read_records

KINDS = ("heatmap", "state_panel", "fspt_map", "scaling_plot")

PNG_METADATA = {"Software": "plotkit"}


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    records: str
    fit: Optional[str] = None
    observable: Optional[str] = None
    title: Optional[str] = None
    color_label: Optional[str] = None
    vmin: float = 0.0
    vmax: float = 1.0
    cmap: str = "viridis"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected {KINDS}")


def load_figure_spec(path: str) -> FigureSpec:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: figure spec must be a mapping")
    known = {
        "kind", "records", "fit", "observable", "title", "color_label",
        "vmin", "vmax", "cmap",
    }
    unknown = set(data) - known
    if unknown:
        raise SchemaError(f"{path}: unknown figure spec keys: {sorted(unknown)}")
    if "kind" not in data or "records" not in data:
        raise SchemaError(f"{path}: figure spec needs 'kind' and 'records'")
    base = os.path.dirname(os.path.abspath(path))
    data["records"] = os.path.join(base, data["records"])
    if data.get("fit"):
        data["fit"] = os.path.join(base, data["fit"])
    return FigureSpec(**data)


def axis_values(records: list[Record], axis_index: int) -> list:
    seen = []
    for rec in records:
        value = rec.coords[axis_index]
        if value not in seen:
            seen.append(value)
    return seen


def check_complete(axes: list[str], records: list[Record]) -> list[tuple]:
    """Missing (coords..., observable) combinations, empty when complete."""
    observables = sorted({r.observable for r in records})
    grids = [axis_values(records, i) for i in range(len(axes))]
    have = {(r.coords, r.observable) for r in records}
    missing = []
    for combo in itertools.product(*grids) if grids else [()]:
        for obs in observables:
            if (tuple(combo), obs) not in have:
                missing.append(tuple(combo) + (obs,))
    return missing


def render(spec: FigureSpec, out_path: str, allow_partial: bool = False) -> plt.Figure:
    """Render the figure described by ``spec`` and write it to ``out_path``."""
    axes, records = read_records(spec.records)
    if spec.observable is not None:
        records = [r for r in records if r.observable == spec.observable]
        if not records:
            raise SchemaError(
                f"{spec.records}: no records for observable {spec.observable!r}"
            )
    if not records:
        raise SchemaError(f"{spec.records}: no records to plot")
    missing = check_complete(axes, records)
    if missing and not allow_partial:
        shown = ", ".join(map(str, missing[:5]))
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        raise SchemaError(
            f"{spec.records}: incomplete grid, missing cells: {shown}{more}; "
            f"re-run the campaign or pass --allow-partial"
        )

    if spec.kind == "scaling_plot":
        fig = _render_scaling(spec, axes, records)
    else:
        fig = _render_panels(spec, axes, records)
    directory = os.path.dirname(os.path.abspath(out_path))
    os.makedirs(directory, exist_ok=True)
    fig.savefig(out_path, dpi=150, metadata=PNG_METADATA)
    return fig


def _cell_matrix(records, y_values, x_values, fixed):
    grid = np.full((len(y_values), len(x_values)), np.nan)
    index = {(r.coords, r.observable): r.mean for r in records}
    for i, y in enumerate(y_values):
        for j, x in enumerate(x_values):
            key = (fixed[0] + (y, x), fixed[1])
            if key in index:
                grid[i, j] = index[key]
    return grid


def _render_panels(spec: FigureSpec, axes: list[str], records: list[Record]) -> plt.Figure:
    if len(axes) < 2:
        raise SchemaError(
            f"{spec.kind} needs at least two axes, records have {axes or 'none'}"
        )
    y_axis, x_axis = axes[-2], axes[-1]
    y_values = axis_values(records, len(axes) - 2)
    x_values = axis_values(records, len(axes) - 1)
    observables = sorted({r.observable for r in records})
    lead_grids = [axis_values(records, i) for i in range(len(axes) - 2)]
    lead_combos = list(itertools.product(*lead_grids)) if lead_grids else [()]

    if spec.kind == "state_panel":
        panels = [(combo, obs) for combo in lead_combos for obs in observables]
        n_cols = math.ceil(math.sqrt(len(panels)))
        n_rows = math.ceil(len(panels) / n_cols)
    else:
        panels = [(combo, obs) for obs in observables for combo in lead_combos]
        n_rows, n_cols = len(observables), len(lead_combos)

    fig, axs = plt.subplots(
        n_rows,
        n_cols,
        figsize=(3.6 * n_cols + 1.2, 3.0 * n_rows),
        squeeze=False,
        layout="constrained",
    )
    numeric_x = all(isinstance(v, (int, float)) for v in x_values)
    numeric_y = all(isinstance(v, (int, float)) for v in y_values)
    last_image = None
    for slot, ax in enumerate(axs.flat):
        if slot >= len(panels):
            ax.set_axis_off()
            continue
        combo, obs = panels[slot]
        grid = _cell_matrix(records, y_values, x_values, (combo, obs))
        extent = None
        if numeric_x and numeric_y and len(x_values) > 1 and len(y_values) > 1:
            extent = [min(x_values), max(x_values), min(y_values), max(y_values)]
        last_image = ax.imshow(
            grid,
            origin="lower",
            aspect="auto",
            cmap=spec.cmap,
            vmin=spec.vmin,
            vmax=spec.vmax,
            extent=extent,
            interpolation="nearest",
        )
        if extent is None:
            ax.set_xticks(range(len(x_values)))
            ax.set_xticklabels([str(v) for v in x_values], rotation=90, fontsize=7)
            ax.set_yticks(range(len(y_values)))
            ax.set_yticklabels([str(v) for v in y_values], fontsize=7)
        ax.set_xlabel(x_axis)
        ax.set_ylabel(y_axis)
        parts = [f"{axes[i]}={combo[i]}" for i in range(len(combo))]
        parts.append(obs)
        ax.set_title(", ".join(parts), fontsize=9)
    colorbar = fig.colorbar(last_image, ax=axs, shrink=0.85)
    colorbar.set_label(spec.color_label or "autocorrelator")
    if spec.title:
        fig.suptitle(spec.title)
    return fig


def _render_scaling(spec: FigureSpec, axes: list[str], records: list[Record]) -> plt.Figure:
    if spec.fit is None:
        raise SchemaError("scaling_plot needs a 'fit' entry in the figure spec")
    if axes != ["L"]:
        raise SchemaError(f"scaling_plot expects a single 'L' axis, got {axes}")
    fit = read_fit(spec.fit)
    lifetimes = [r for r in records if r.observable == "lifetime"]
    if not lifetimes:
        raise SchemaError(f"{spec.records}: no lifetime records")
    lengths = np.array([r.coords[0] for r in lifetimes], dtype=float)
    means = np.array([r.mean for r in lifetimes])
    errors = np.array([r.stderr for r in lifetimes])

    fig, ax = plt.subplots(figsize=(5.0, 3.8), layout="constrained")
    ax.errorbar(
        lengths, means, yerr=errors, fmt="o", capsize=3, label="mean lifetime"
    )
    smooth = np.linspace(lengths.min(), lengths.max(), 200)
    ax.semilogy(
        smooth,
        fit["prefactor"] * np.exp(fit["rate"] * smooth),
        "r--",
        label=f"{fit['prefactor']:.2g} exp({fit['rate']:.2g} L)",
    )
    censored = set(fit.get("censored", []))
    if censored:
        flagged = [i for i, L in enumerate(lengths) if int(L) in censored]
        ax.plot(lengths[flagged], means[flagged], "kx", markersize=10, label="censored")
    ax.set_xlabel("chain length L")
    ax.set_ylabel("lifetime (periods)")
    ax.set_yscale("log")
    ax.legend()
    if spec.title:
        ax.set_title(spec.title)
    return fig

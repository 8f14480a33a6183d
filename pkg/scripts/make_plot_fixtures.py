#!/usr/bin/env python3
"""Generate scaled-down record fixtures for every experiment preset.

The full presets in experiments/ are expensive (thousands of realizations);
the committed fixtures under plotkit/fixtures/ rerun each preset with a
coarser grid and a small ensemble so the rendering package can be tested
offline.  Figure specs for each fixture are written alongside the records.
"""

import argparse
import dataclasses
import os
import sys

import yaml

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

from dtcsim.cli import cmd_evolve, cmd_h2i, cmd_scaling, cmd_sweep  # noqa: E402
from dtcsim.config import load_config  # noqa: E402
from dtcsim.sweep import SweepAxis  # noqa: E402

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.normpath(os.path.join(HERE, os.pardir))
FIXTURES = os.path.join(ROOT, "plotkit", "fixtures")

SUBCOMMANDS = {"fig8": cmd_scaling, "fig10": cmd_h2i}

FIGURE_KINDS = {
    "fig1": "heatmap",
    "fig2": "heatmap",
    "fig3": "state_panel",
    "fig4": "state_panel",
    "fig5": "heatmap",
    "fig6": "heatmap",
    "fig7": "fspt_map",
    "fig8": "scaling_plot",
    "fig9": "heatmap",
    "fig10": "heatmap",
    "fig11": "heatmap",
}

TITLES = {
    "fig1": "edge vs bulk autocorrelator, no charge noise",
    "fig2": "edge vs bulk autocorrelator, with charge noise",
    "fig3": "bulk autocorrelator per initial state, no charge noise",
    "fig4": "bulk autocorrelator per initial state, with charge noise",
    "fig5": "DTC diagram over (epsilon, sigma_J)",
    "fig6": "DTC diagram over (epsilon, sigma_h)",
    "fig7": "edge minus bulk autocorrelator",
    "fig8": "lifetime scaling with fitted exponential",
    "fig9": "three-qubit DTC diagram",
    "fig10": "Heisenberg-to-Ising pulse study",
    "fig11": "pulse-duration study",
}


def coarsen_axis(axis: SweepAxis, max_points: int) -> SweepAxis:
    if axis.name == "initial_state" or len(axis.values) <= max_points:
        return axis
    values = axis.values
    step = max(1, (len(values) - 1) // (max_points - 1))
    picked = list(values[::step])
    if values[-1] not in picked:
        picked.append(values[-1])
    return SweepAxis(axis.name, tuple(picked[:max_points]))


def shrink(config, name, realizations, max_points):
    changes = {
        "realizations": min(config.realizations, realizations),
        "output": os.path.join(FIXTURES, f"{name}.csv"),
    }
    if config.axes is not None:
        changes["axes"] = tuple(coarsen_axis(a, max_points) for a in config.axes)
    if name == "fig8":
        changes["lengths"] = (3, 4, 5)
        changes["horizon_cap"] = 100_000
        changes["realizations"] = min(config.realizations, 2 * realizations)
    return dataclasses.replace(config, **changes)


def write_figure_spec(name: str) -> None:
    spec = {
        "kind": FIGURE_KINDS[name],
        "records": f"{name}.csv",
        "title": TITLES[name],
    }
    if name == "fig8":
        spec["fit"] = "fig8.fit.json"
    path = os.path.join(FIXTURES, f"{name}.spec.yaml")
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(spec, fh, sort_keys=True)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--realizations", type=int, default=8)
    parser.add_argument("--max-grid-points", type=int, default=5)
    parser.add_argument("--only", nargs="*", help="subset of preset names (fig1..fig11)")
    args = parser.parse_args()

    os.makedirs(FIXTURES, exist_ok=True)
    names = args.only or [f"fig{i}" for i in range(1, 12)]
    for name in names:
        preset = os.path.join(ROOT, "experiments", f"{name}.yaml")
        config = shrink(load_config(preset), name, args.realizations, args.max_grid_points)
        runner = SUBCOMMANDS.get(name, cmd_sweep)
        print(f"-- {name}: {runner.__name__}, {config.realizations} realizations")
        runner(config)
        write_figure_spec(name)
    print(f"fixtures written to {FIXTURES}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

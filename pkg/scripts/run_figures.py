#!/usr/bin/env python3
"""Run experiment presets at full budget and render the figures.

Each preset writes its records under runs/ and, when plotkit is installed,
an image next to it.  Expect the full set to take a few hours single-core;
pass --workers to spread cells over processes and --only to pick presets.
"""

import argparse
import os
import subprocess
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.normpath(os.path.join(HERE, os.pardir))

SUBCOMMANDS = {"fig8": "scaling", "fig10": "h2i"}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--only", nargs="*", help="subset of presets (fig1..fig11)")
    parser.add_argument("--resume", action="store_true")
    parser.add_argument("--no-render", action="store_true")
    args = parser.parse_args()

    names = args.only or [f"fig{i}" for i in range(1, 12)]
    for name in names:
        preset = os.path.join(ROOT, "experiments", f"{name}.yaml")
        command = [
            sys.executable,
            "-m",
            "dtcsim.cli",
            SUBCOMMANDS.get(name, "sweep"),
            "--config",
            preset,
            "--workers",
            str(args.workers),
        ]
        if args.resume:
            command.append("--resume")
        print("::", " ".join(command))
        result = subprocess.run(command, cwd=ROOT)
        if result.returncode != 0:
            return result.returncode
        if args.no_render:
            continue
        spec = os.path.join(ROOT, "plotkit", "fixtures", f"{name}.spec.yaml")
        records = os.path.join(ROOT, "runs", f"{name}.csv")
        if os.path.exists(spec):
            # reuse the fixture figure spec, pointed at the full records
            import yaml

            with open(spec) as fh:
                figure = yaml.safe_load(fh)
            figure["records"] = records
            if "fit" in figure:
                figure["fit"] = os.path.splitext(records)[0] + ".fit.json"
            tmp_spec = os.path.join(ROOT, "runs", f"{name}.spec.yaml")
            with open(tmp_spec, "w") as fh:
                yaml.safe_dump(figure, fh)
            render = [
                sys.executable,
                "-m",
                "plotkit.cli",
                "render",
                "--spec",
                tmp_spec,
                "--out",
                os.path.join(ROOT, "runs", f"{name}.png"),
            ]
            print("::", " ".join(render))
            result = subprocess.run(render, cwd=ROOT)
            if result.returncode != 0:
                return result.returncode
    return 0


if __name__ == "__main__":
    sys.exit(main())

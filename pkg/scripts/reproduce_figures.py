"""Run the three shipped configurations through the CLI into an output directory.

    python scripts/reproduce_figures.py [outdir]
"""
import os
import sys
from pathlib import Path

from aitlab.cli import main as cli

ROOT = Path(__file__).resolve().parent.parent
RUNS = (
    ("find-gap", "fig1", False),
    ("ait-scan", "fig1", True),
    ("entangle-scan", "fig2", True),
    ("temp-scan", "fig3", True),
)


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
    out.mkdir(parents=True, exist_ok=True)
    for cmd, name, writes in RUNS:
        argv = [cmd, str(ROOT / "configs" / f"{name}.toml"), "-q"]
        if writes:
            argv += ["--out", str(out / f"{name}.csv"), "--svg", str(out / f"{name}.svg")]
        print(f"== ait-lab {cmd} {name}")
        code = cli(argv)
        if code:
            sys.exit(code)
    print(f"outputs in {os.fspath(out)}")


if __name__ == "__main__":
    main()

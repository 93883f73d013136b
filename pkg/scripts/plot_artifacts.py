#!/usr/bin/env python
"""
Plot the CSV artifacts written by ``qdob bode``, ``qdob sweep`` and
``qdob simulate``. Needs the ``plot`` extra (matplotlib).

    python scripts/plot_artifacts.py out/sensitivity
"""

from pathlib import Path
from typing import Dict, List, Optional

import click
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

BODE_GROUPS = {
    "qfilter": ("q", "periodic_pass"),
    "sensitivity": ("s", "t"),
    "open_loop": ("open_loop",),
    "lowpass": ("phi", "b"),
}


def _read_csv(path: Path) -> Dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=float)
    return {name: np.atleast_1d(data[name]) for name in data.dtype.names}


def _bode_axes(title: str):
    fig, (mag, phase) = plt.subplots(2, 1, figsize=(9, 7), sharex=True)
    mag.set_title(title)
    mag.set_ylabel("Gain [dB]")
    phase.set_ylabel("Phase [deg]")
    phase.set_xlabel("Angular frequency [rad/s]")
    for ax in (mag, phase):
        ax.grid(True, which="both", alpha=0.3)
    return fig, mag, phase


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=200, bbox_inches="tight", facecolor="white")
    plt.close(fig)
    return path


def plot_bode_group(directory: Path, name: str, stems) -> Optional[Path]:
    present = [s for s in stems if (directory / f"{s}.csv").exists()]
    if not present:
        return None
    fig, mag, phase = _bode_axes(name.replace("_", " "))
    for stem in present:
        data = _read_csv(directory / f"{stem}.csv")
        mag.semilogx(data["omega"], data["mag_db"], label=stem)
        phase.semilogx(data["omega"], data["phase_deg"], label=stem)
    mag.legend()
    return _save(fig, directory / f"{name}.png")


def plot_stages(directory: Path) -> Optional[Path]:
    stages = sorted(directory.glob("phi_stage_*.csv"))
    if not stages:
        return None
    fig, ax = plt.subplots(figsize=(9, 5))
    for path in stages + [directory / "phi.csv"]:
        if path.exists():
            data = _read_csv(path)
            ax.semilogx(data["omega"], data["mag_db"], label=path.stem)
    ax.set_ylim(-120, 10)
    ax.set_xlabel("Angular frequency [rad/s]")
    ax.set_ylabel("Gain [dB]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return _save(fig, directory / "stages.png")


def plot_sweep(directory: Path) -> Optional[Path]:
    path = directory / "sweep.csv"
    if not path.exists():
        return None
    data = _read_csv(path)
    fig, ax = plt.subplots(figsize=(9, 5))
    ax.semilogx(data["omega"], data["analytic_db"], "k-", label="analytic")
    ax.semilogx(data["omega"], data["mag_db"], "o", markersize=3, label="measured")
    ax.set_xlabel("Angular frequency [rad/s]")
    ax.set_ylabel("Gain from v to y [dB]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return _save(fig, directory / "sweep.png")


def plot_trace(directory: Path) -> Optional[Path]:
    path = directory / "trace.csv"
    if not path.exists():
        return None
    data = _read_csv(path)
    fig, axes = plt.subplots(3, 1, figsize=(10, 8), sharex=True)
    axes[0].plot(data["t"], data["d"], label="d")
    axes[0].plot(data["t"], data["dhat"], label="dhat", alpha=0.8)
    axes[0].legend()
    axes[1].plot(data["t"], data["u"], label="u")
    axes[1].legend()
    axes[2].plot(data["t"], data["e"], label="e")
    axes[2].set_xlabel("Time [s]")
    axes[2].legend()
    for ax in axes:
        ax.grid(True, alpha=0.3)
    return _save(fig, directory / "trace.png")


@click.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
def main(directory: str):
    """Render PNG figures next to the CSVs in DIRECTORY."""
    root = Path(directory)
    written: List[Path] = []
    for name, stems in BODE_GROUPS.items():
        written.append(plot_bode_group(root, name, stems))
    written += [plot_stages(root), plot_sweep(root), plot_trace(root)]

    written = [p for p in written if p is not None]
    if not written:
        click.echo(f"⚠️  No known CSV artifacts in {root}")
        return
    for path in written:
        click.echo(f"🖼️  {path}")


if __name__ == "__main__":
    main()

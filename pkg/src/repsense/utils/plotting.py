"""Static SVG figures: energy overlays and confusion heatmaps."""

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from repsense.imu.io import FLOAT_FORMAT  # noqa: E402
from repsense.models import CHANNELS, CutSet, EnergySeries, ImuRecording  # noqa: E402

# Fixed SVG element ids and no timestamp, so equal inputs give equal bytes.
plt.rcParams["svg.hashsalt"] = "repsense"
SVG_METADATA = {"Date": None}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata=SVG_METADATA, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_energy(rec: ImuRecording, energy: EnergySeries, cuts: CutSet, path: str | Path) -> Path:
    """Black accelerometer traces, coloured cut lines and a dashed energy curve."""
    fig, ax = plt.subplots(figsize=(12, 4))
    for row in range(3):
        ax.plot(rec.t, rec.signal[row], color="black", linewidth=0.6)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("acceleration (m/s²)")

    energy_ax = ax.twinx()
    energy_ax.plot(rec.t, energy.values, color="tab:red", linestyle="--", linewidth=1.0)
    energy_ax.set_ylabel("energy")

    colors = plt.cm.tab10(np.arange(max(len(cuts.cuts), 1)) % 10)
    for cut, color in zip(cuts.cuts, colors):
        ax.axvline(rec.t[cut], color=color, linewidth=1.5)
    ax.set_title(f"{rec.recording_id}: {len(cuts.cuts)} cuts")
    fig.tight_layout()
    return _save(fig, path)


def write_energy_csv(rec: ImuRecording, energy: EnergySeries, cuts: CutSet, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(rec.signal.T, columns=list(CHANNELS))
    frame.insert(0, "t", rec.t)
    frame["energy"] = energy.values
    frame["cut"] = np.isin(np.arange(rec.n_samples), cuts.cuts).astype(int)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def plot_confusion(matrix: Sequence[Sequence[int]], labels: Sequence[str], path: str | Path) -> Path:
    counts = np.asarray(matrix)
    fig, ax = plt.subplots(figsize=(1.2 * len(labels) + 2, 1.2 * len(labels) + 1.5))
    image = ax.imshow(counts, cmap="Blues")
    fig.colorbar(image, ax=ax)
    ax.set_xticks(range(len(labels)), labels=labels)
    ax.set_yticks(range(len(labels)), labels=labels)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    threshold = counts.max() / 2 if counts.size else 0
    for i in range(counts.shape[0]):
        for j in range(counts.shape[1]):
            ax.text(
                j, i, str(counts[i, j]), ha="center", va="center",
                color="white" if counts[i, j] > threshold else "black",
            )
    fig.tight_layout()
    return _save(fig, path)

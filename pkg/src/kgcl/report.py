"""Change-set reports: a delimited table plus a rendered summary figure."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

from . import serialize
from .model import ChangeSet


def write_changeset_report(changeset: ChangeSet, out_dir: str | Path, basename: str = "changes") -> list[Path]:
    """Write ``<basename>.tsv`` and ``<basename>_by_type.png`` under ``out_dir``.

    The TSV is the tabular serialization of the change set; the figure is
    a bar chart of change counts per type. Returns the written paths.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tsv_path = out_dir / f"{basename}.tsv"
    tsv_path.write_bytes(serialize.to_tsv(changeset))

    png_path = out_dir / f"{basename}_by_type.png"
    _plot_counts(Counter(type(c).__name__ for c in changeset), png_path)
    return [tsv_path, png_path]


def _plot_counts(counts: Counter, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = sorted(counts)
    values = [counts[n] for n in names]
    fig, ax = plt.subplots(figsize=(8, max(2.0, 0.4 * len(names) + 1.2)))
    if names:
        ax.barh(names, values, color="#4878a8")
        ax.invert_yaxis()
        ax.set_xlabel("changes")
    else:
        ax.text(0.5, 0.5, "no changes", ha="center", va="center", transform=ax.transAxes)
        ax.set_axis_off()
    ax.set_title(f"Changes by type (n={sum(values)})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

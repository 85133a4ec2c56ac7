"""Matplotlib rendering of the report series, written next to the tables.

Figures are saved without mutable metadata so reruns stay byte-identical.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)


def _nan(value: float | None) -> float:
    return math.nan if value is None else value


def national_share_figure(papers_by_year: dict[int, int],
                          share_by_year: dict[int, float | None],
                          path: Path) -> None:
    years = sorted(papers_by_year)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(years, [papers_by_year[y] for y in years], color="#4878a8",
           label="programme papers")
    ax.set_xlabel("year")
    ax.set_ylabel("papers")
    twin = ax.twinx()
    twin.plot(years, [_nan(share_by_year.get(y)) for y in years], "o-",
              color="#b0413e", label="share of national output")
    twin.set_ylabel("share of national output (%)")
    twin.set_ylim(bottom=0)
    fig.legend(loc="upper left", bbox_to_anchor=(0.12, 0.95), frameon=False)
    fig.tight_layout()
    _save(fig, path)


def multiplicity_figure(shares_by_centre: dict[str, dict[str, float | None]],
                        path: Path) -> None:
    centres = sorted(shares_by_centre)
    bins = ("1", "2", "3+")
    colors = {"1": "#c7d6e5", "2": "#6996bd", "3+": "#2b5379"}
    fig, ax = plt.subplots(figsize=(7, 4))
    bottom = [0.0] * len(centres)
    for label in bins:
        values = [shares_by_centre[c][label] or 0.0 for c in centres]
        ax.bar(centres, values, bottom=bottom, color=colors[label],
               label=f"{label} group(s)")
        bottom = [b + v for b, v in zip(bottom, values)]
    ax.set_ylabel("share of papers (%)")
    ax.set_ylim(0, 100)
    ax.legend(frameon=False, ncol=3, loc="lower right")
    fig.tight_layout()
    _save(fig, path)


def signing_series_figure(by_year, path: Path) -> None:
    years = sorted(by_year)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(years, [_nan(by_year[y].signed_share) for y in years], "o-",
            color="#2b5379", label="all output")
    ax.plot(years, [_nan(by_year[y].signed_share_of_q1) for y in years], "s--",
            color="#b0413e", label="Q1 output")
    ax.plot(years, [_nan(by_year[y].signed_share_of_d1) for y in years], "^:",
            color="#7a7a7a", label="D1 output")
    ax.set_xlabel("year")
    ax.set_ylabel("share credited in address (%)")
    ax.set_ylim(0, 100)
    ax.legend(frameon=False)
    fig.tight_layout()
    _save(fig, path)


def q1_crosstab_figure(series_by_centre: dict, path: Path) -> None:
    centres = sorted(series_by_centre)
    labels = ("cross_category", "single_category", "multi_group", "single_group")
    colors = ("#2b5379", "#6996bd", "#b0413e", "#d9a447")
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for axis_index, period_name in enumerate(("first period", "last period")):
        ax = axes[axis_index]
        width = 0.2
        for offset, (label, color) in enumerate(zip(labels, colors)):
            xs = [i + (offset - 1.5) * width for i in range(len(centres))]
            ys = [_nan(series_by_centre[c][label][axis_index]) for c in centres]
            ax.bar(xs, ys, width=width, color=color, label=label)
        ax.set_xticks(range(len(centres)))
        ax.set_xticklabels(centres, rotation=45, ha="right")
        ax.set_title(period_name)
        ax.set_ylim(0, 100)
    axes[0].set_ylabel("Q1 share (%)")
    axes[1].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    _save(fig, path)

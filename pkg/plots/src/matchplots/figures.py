"""The six standard figures of the matching experiment suite.

F3/F4/F5 plot the welfare sweep (students' aggregate utility, colleges'
aggregate utility, social welfare against the preference-correlation level);
F6/F7 plot the strategic-student study (per-student utility and aggregate
utilities against the number of strategic students); F8 is a 2x3 grid of
per-rank utility panels, one per correlation level.  Every series carries
error bars from its CSV's standard-error columns.

Rendering is strictly read-only on the inputs and deterministic: rendering
the same CSV twice yields byte-identical SVG.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

matplotlib.rcParams["svg.hashsalt"] = "matchplots"

FIGURE_IDS = ("F3", "F4", "F5", "F6", "F7", "F8")

WELFARE_COLUMNS = ["beta", "mechanism", "mean_piS", "se_piS", "mean_piC", "se_piC", "mean_Pi", "se_Pi"]
STRATEGY_COLUMNS = ["k", "mean_u_strategic", "se", "mean_u_truthful", "se", "piS", "piC_submitted", "piC_true"]
PER_RANK_COLUMNS = ["beta", "rank", "mode", "mean_u", "se"]

PER_RANK_PANELS = 6


class SchemaError(ValueError):
    """The CSV header does not match the figure's expected columns."""


class NoDataError(ValueError):
    """The CSV has a header but no data rows."""


@dataclass(frozen=True)
class FigureSpec:
    figure: str            # F3..F8
    input_csv: str
    output_path: str       # .svg for vector output, .png for raster
    title: str | None = None

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise ValueError(f"unknown figure {self.figure!r}, expected one of {FIGURE_IDS}")


def _read_rows(path: str, expected: list[str]) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise NoDataError(f"{path}: no data (empty file)") from None
        if header != expected:
            missing = [c for c in expected if c not in header]
            detail = f"missing columns {missing}" if missing else "columns out of order"
            raise SchemaError(f"{path}: header {header} does not match {expected} ({detail})")
        rows = [row for row in reader if row]
    if not rows:
        raise NoDataError(f"{path}: no data rows")
    return rows


def _maybe_float(cell: str) -> float | None:
    return None if cell == "" else float(cell)


def _welfare_series(path: str):
    rows = _read_rows(path, WELFARE_COLUMNS)
    series: dict[str, dict[str, list[float]]] = {}
    for row in rows:
        mech = row[1]
        slot = series.setdefault(mech, {"beta": [], "piS": [], "se_piS": [], "piC": [],
                                        "se_piC": [], "Pi": [], "se_Pi": []})
        slot["beta"].append(float(row[0]))
        slot["piS"].append(float(row[2]))
        slot["se_piS"].append(float(row[3]))
        slot["piC"].append(float(row[4]))
        slot["se_piC"].append(float(row[5]))
        slot["Pi"].append(float(row[6]))
        slot["se_Pi"].append(float(row[7]))
    return series

_MECH_LABELS = {"hybrid": "hybrid mechanism", "gs": "pure GS mechanism"}
_MECH_STYLE = {"hybrid": dict(color="tab:blue", marker="o"), "gs": dict(color="tab:red", marker="s")}


def _render_welfare(spec: FigureSpec, fig) -> None:
    field, se_field, y_label, y_max = {
        "F3": ("piS", "se_piS", "expected aggregate utility of students", 50),
        "F4": ("piC", "se_piC", "expected aggregate utility of colleges", 50),
        "F5": ("Pi", "se_Pi", "expected social welfare", 100),
    }[spec.figure]
    ax = fig.subplots()
    for mech, slot in sorted(_welfare_series(spec.input_csv).items()):
        ax.errorbar(slot["beta"], slot[field], yerr=slot[se_field], markersize=3,
                    linewidth=1.0, capsize=2, label=_MECH_LABELS.get(mech, mech),
                    **_MECH_STYLE.get(mech, {}))
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, y_max)
    ax.set_xlabel("degree of preference correlation")
    ax.set_ylabel(y_label)
    ax.legend(loc="lower left")
    ax.grid(True, alpha=0.3)


def _strategy_table(path: str):
    rows = _read_rows(path, STRATEGY_COLUMNS)
    table = []
    for row in rows:
        table.append({
            "k": int(row[0]),
            "u_strategic": _maybe_float(row[1]),
            "se_strategic": _maybe_float(row[2]),
            "u_truthful": _maybe_float(row[3]),
            "se_truthful": _maybe_float(row[4]),
            "piS": float(row[5]),
            "piC_submitted": float(row[6]),
            "piC_true": float(row[7]),
        })
    return sorted(table, key=lambda r: r["k"])


def _present(table, value_key, se_key):
    rows = [r for r in table if r[value_key] is not None]
    return ([r["k"] for r in rows], [r[value_key] for r in rows], [r[se_key] or 0.0 for r in rows])


def _render_strategy_utility(spec: FigureSpec, fig) -> None:
    table = _strategy_table(spec.input_csv)
    ax = fig.subplots()
    for key, se_key, label, style in (
        ("u_strategic", "se_strategic", "per strategic student", dict(color="tab:blue", marker="o")),
        ("u_truthful", "se_truthful", "per truthful student", dict(color="tab:red", marker="s")),
    ):
        k, values, errs = _present(table, key, se_key)
        ax.errorbar(k, values, yerr=errs, markersize=4, linewidth=1.0, capsize=2,
                    label=label, **style)
    ax.set_xlim(-0.3, max(r["k"] for r in table) + 0.3)
    ax.set_ylim(0.0, 10.0)
    ax.set_xlabel("number of strategic students")
    ax.set_ylabel("expected utility per student")
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3)


def _render_strategy_aggregate(spec: FigureSpec, fig) -> None:
    table = _strategy_table(spec.input_csv)
    ax = fig.subplots()
    k = [r["k"] for r in table]
    for key, label, style in (
        ("piS", "students", dict(color="tab:blue", marker="o")),
        ("piC_submitted", "colleges (submitted lists)", dict(color="tab:red", marker="s")),
        ("piC_true", "colleges (true lists)", dict(color="tab:green", marker="*")),
    ):
        ax.plot(k, [r[key] for r in table], markersize=5, linewidth=1.0, label=label, **style)
    ax.set_xlim(-0.3, max(k) + 0.3)
    ax.set_ylim(0.0, 50.0)
    ax.set_xlabel("number of strategic students")
    ax.set_ylabel("expected aggregate utility")
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)


def _render_per_rank(spec: FigureSpec, fig) -> None:
    rows = _read_rows(spec.input_csv, PER_RANK_COLUMNS)
    panels: dict[float, dict[str, dict[int, tuple[float, float]]]] = {}
    for row in rows:
        beta, rank, mode = float(row[0]), int(row[1]), row[2]
        panels.setdefault(beta, {}).setdefault(mode, {})[rank] = (float(row[3]), float(row[4]))
    betas = sorted(panels)
    if len(betas) != PER_RANK_PANELS:
        raise SchemaError(
            f"{spec.input_csv}: per-rank grid needs exactly {PER_RANK_PANELS} "
            f"correlation levels, found {len(betas)}"
        )
    axes = fig.subplots(2, 3, sharex=True, sharey=True)
    styles = {
        "truthful": dict(color="tab:blue", marker="o", label="truthful"),
        "strategy_s": dict(color="tab:red", marker="s", label="shielding strategy"),
    }
    for ax, beta in zip(axes.flat, betas):
        for mode, style in styles.items():
            points = panels[beta].get(mode, {})
            ranks = sorted(points)
            ax.errorbar(ranks, [points[r][0] for r in ranks],
                        yerr=[points[r][1] for r in ranks],
                        markersize=3, linewidth=0.8, capsize=1.5, **style)
        ax.set_title(f"correlation {beta:g}", fontsize=9)
        ax.set_ylim(0.0, 10.0)
        ax.grid(True, alpha=0.3)
    for ax in axes[1]:
        ax.set_xlabel("score rank")
    for ax in axes[:, 0]:
        ax.set_ylabel("expected utility")
    handles, labels = axes.flat[0].get_legend_handles_labels()
    fig.legend(handles, labels, loc="lower center", ncol=2, frameon=False)


_RENDERERS = {
    "F3": (_render_welfare, (6.4, 4.2)),
    "F4": (_render_welfare, (6.4, 4.2)),
    "F5": (_render_welfare, (6.4, 4.2)),
    "F6": (_render_strategy_utility, (6.4, 4.2)),
    "F7": (_render_strategy_aggregate, (6.4, 4.2)),
    "F8": (_render_per_rank, (9.6, 6.4)),
}

_DEFAULT_TITLES = {
    "F3": "Students' aggregate utility vs preference correlation",
    "F4": "Colleges' aggregate utility vs preference correlation",
    "F5": "Social welfare vs preference correlation",
    "F6": "Per-student utility vs number of strategic students",
    "F7": "Aggregate utilities vs number of strategic students",
    "F8": "Per-rank utility, truthful vs strategic",
}


def render(spec: FigureSpec) -> str:
    """Draw the figure and write it to spec.output_path; returns the path.

    Raises SchemaError when the CSV header does not match the figure and
    NoDataError when there is nothing to plot; no image file is produced in
    either case.
    """
    renderer, size = _RENDERERS[spec.figure]
    fig = plt.figure(figsize=size)
    try:
        renderer(spec, fig)
        fig.suptitle(spec.title or _DEFAULT_TITLES[spec.figure])
        if spec.figure == "F8":
            fig.subplots_adjust(bottom=0.14)
        fig.savefig(spec.output_path, metadata=_metadata_for(spec.output_path))
    finally:
        plt.close(fig)
    return spec.output_path


def _metadata_for(path: str) -> dict | None:
    # strip the volatile creation date so vector output is reproducible
    if path.endswith(".svg"):
        return {"Date": None}
    if path.endswith(".png"):
        return {"Software": "matchplots"}
    return None

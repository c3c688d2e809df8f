"""Render publication-style figures from clusterchain CSV/JSON outputs.

Each figure consumes only files written by the ``clusterchain`` CLI; no
physics is recomputed here.  CSV schemas are validated against the columns
the figure expects and a :class:`SchemaError` names the first offending
column on mismatch.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "clusterchain-plots"  # deterministic ids
matplotlib.rcParams["svg.fonttype"] = "none"  # keep annotations as text

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["SchemaError", "FIGURES", "read_table", "render"]

_SCHEMAS = {
    "fig1": ["N", "m", "h", "l", "S"],
    "fig3": ["N", "m", "h", "parts", "S_cmi"],
    "fig5": ["N", "m", "h", "k_index", "E_minus_E0"],
    "fig6": ["N", "m", "h", "parts", "S_cmi"],
    "figB": ["m", "N", "S_half"],
}


class SchemaError(ValueError):
    """Input file does not match the schema expected by the figure."""


@dataclass(frozen=True)
class Table:
    """One parsed CSV: column-name -> float array."""

    path: str
    columns: dict


def read_table(path: str, expected: list[str]) -> Table:
    """Read a CSV and validate its header against ``expected`` columns."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: empty file, expected columns {expected}")
    header = rows[0]
    for i, name in enumerate(expected):
        got = header[i] if i < len(header) else "<missing>"
        if got != name:
            raise SchemaError(f"{path}: column {i} is {got!r}, expected {name!r}")
    if len(header) > len(expected):
        raise SchemaError(f"{path}: unexpected extra column {header[len(expected)]!r}")
    body = rows[1:]
    if not body:
        raise SchemaError(f"{path}: no data rows")
    try:
        data = np.array([[float(v) for v in row] for row in body])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric cell ({exc})") from exc
    return Table(path=path, columns={name: data[:, i] for i, name in enumerate(expected)})


def _label(table: Table) -> str:
    m = int(table.columns["m"][0])
    h = table.columns["h"][0]
    return f"$m={m}$, $h={h:g}$"


def _render_fig1(tables, fig):
    axes = fig.subplots(2, 2).ravel()
    for ax, table, tag in zip(axes, tables, "abcd"):
        ax.plot(table.columns["l"], table.columns["S"], ".-", ms=3, lw=0.8)
        ax.set_xlabel(r"$l$")
        ax.set_ylabel(r"$S_l$")
        ax.set_title(f"({tag}) {_label(table)}", fontsize=9)
    for ax in axes[len(tables):]:
        ax.set_axis_off()


def _render_fig3(tables, fig):
    axes = fig.subplots(2, 2).ravel()
    for ax, table, tag in zip(axes, tables, "abcd"):
        parts = int(table.columns["parts"][0])
        ax.plot(table.columns["N"], table.columns["S_cmi"], "o-", ms=3, lw=0.8)
        ax.set_xlabel(r"$N$")
        ax.set_ylabel(rf"$S_{{\mathrm{{cmi}}}}^{{({parts})}}$")
        ax.set_title(f"({tag}) {_label(table)}", fontsize=9)
    for ax in axes[len(tables):]:
        ax.set_axis_off()


def _render_fig5(tables, fig):
    axes = fig.subplots(2, 2).ravel()
    for ax, table, tag in zip(axes, tables, "abcd"):
        ax.plot(table.columns["k_index"], table.columns["E_minus_E0"], "_",
                ms=8, mew=1.2)
        ax.set_xlabel("level index")
        ax.set_ylabel(r"$E_k - E_0$")
        ax.set_title(f"({tag}) {_label(table)}", fontsize=9)
    for ax in axes[len(tables):]:
        ax.set_axis_off()


def _render_fig6(tables, fig):
    axes = fig.subplots(2, 4).ravel()
    tags = ["a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2"]
    for ax, table, tag in zip(axes, tables, tags):
        ax.plot(table.columns["N"], table.columns["S_cmi"], "o-", ms=3, lw=0.8)
        ax.set_xlabel(r"$N$")
        ax.set_ylabel(r"$S_{\mathrm{cmi}}$")
        ax.set_title(f"({tag}) {_label(table)}", fontsize=8)
    for ax in axes[len(tables):]:
        ax.set_axis_off()


def _render_figB(tables, fig, fit):
    if fit is None:
        raise SchemaError("figB requires the fit summary JSON among --inputs")
    table = tables[0]
    ms = sorted(set(int(v) for v in table.columns["m"]))
    axes = np.atleast_1d(fig.subplots(1, len(ms)))
    for ax, m, tag in zip(axes, ms, "abcd"):
        sel = table.columns["m"] == m
        n = table.columns["N"][sel]
        s = table.columns["S_half"][sel]
        ax.plot(np.log2(n), s, "o", ms=4)
        key = str(m)
        if key not in fit:
            raise SchemaError(f"fit summary has no entry for m={m}")
        slope = fit[key]["slope"]
        intercept = fit[key]["intercept"]
        x = np.log2(np.array([n.min(), n.max()]))
        ax.plot(x, slope * x + intercept, "r--", lw=1.0,
                label=f"slope = {slope:.4f}")
        ax.legend(fontsize=8, frameon=False)
        ax.set_xlabel(r"$\log_2 N$")
        ax.set_ylabel(r"$S_{N/2}$")
        ax.set_title(f"({tag}) $m={m}$", fontsize=9)


FIGURES = {
    "fig1": (_render_fig1, 4, (7.0, 5.5)),
    "fig3": (_render_fig3, 4, (7.0, 5.5)),
    "fig5": (_render_fig5, 4, (7.0, 5.5)),
    "fig6": (_render_fig6, 8, (11.0, 5.0)),
    "figB": (_render_figB, 1, (9.0, 3.2)),
}


def render(figure_id: str, inputs: list[str], output: str) -> None:
    """Render one figure from CLI output files and write it to ``output``.

    Parameters
    ----------
    figure_id : str
        One of ``fig1``, ``fig3``, ``fig5``, ``fig6``, ``figB``.
    inputs : list of str
        CSV paths (``figB`` additionally takes the fit-summary ``.json``).
    output : str
        Image path; format from the extension (SVG recommended).

    Raises
    ------
    SchemaError
        On empty inputs, header mismatch (naming the offending column),
        non-numeric cells, or a missing figB fit entry.  Nothing is
        written in that case.
    """
    if figure_id not in FIGURES:
        raise SchemaError(f"unknown figure {figure_id!r}, expected one of "
                          f"{sorted(FIGURES)}")
    renderer, max_panels, size = FIGURES[figure_id]
    fit = None
    csv_paths = []
    for path in inputs:
        if path.endswith(".json"):
            with open(path) as fh:
                fit = json.load(fh)
        else:
            csv_paths.append(path)
    if not csv_paths:
        raise SchemaError("no CSV inputs given")
    if len(csv_paths) > max_panels:
        raise SchemaError(f"{figure_id} takes at most {max_panels} CSV inputs")
    tables = [read_table(p, _SCHEMAS[figure_id]) for p in csv_paths]

    fig = plt.figure(figsize=size)
    try:
        if figure_id == "figB":
            _render_figB(tables, fig, fit)
        else:
            renderer(tables, fig)
        fig.tight_layout()
        fig.savefig(output, metadata=_deterministic_metadata(output))
    finally:
        plt.close(fig)


def _deterministic_metadata(output: str):
    """Strip volatile metadata so identical inputs give identical bytes."""
    if output.endswith(".svg"):
        return {"Date": None}
    if output.endswith(".png"):
        return {"Software": None}
    return None

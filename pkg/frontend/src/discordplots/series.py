"""Load and validate sweep CSVs produced by the simulation CLI.

A sweep file has one row per parameter value with analytic rate columns and
one Monte Carlo estimate (value + bootstrap sigma) per row.  The mismatch
sweep carries an extra ``i_q_optics`` column for the simulated-gate curve;
every other column layout is rejected.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

REQUIRED_COLUMNS = ("parameter", "i_q_analytic", "i_c_analytic", "i_exp_mc", "sigma_mc")
OPTIONAL_CURVE = "i_q_optics"


class SchemaError(ValueError):
    """The CSV header does not match the sweep schema."""


@dataclass(frozen=True)
class SweepSeries:
    """One sweep: equal-length columns over a strictly increasing parameter."""

    parameter_name: str
    parameter: tuple[float, ...]
    i_q_analytic: tuple[float, ...]
    i_c_analytic: tuple[float, ...]
    i_exp: tuple[float, ...]
    sigma: tuple[float, ...]
    i_q_optics: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.parameter)
        if n == 0:
            raise ValueError("series has no rows")
        columns = [self.i_q_analytic, self.i_c_analytic, self.i_exp, self.sigma]
        if self.i_q_optics is not None:
            columns.append(self.i_q_optics)
        if any(len(c) != n for c in columns):
            raise ValueError("column lengths differ")
        if any(b <= a for a, b in zip(self.parameter, self.parameter[1:])):
            raise ValueError("parameter values must be strictly increasing")
        if any(s < 0 for s in self.sigma):
            raise ValueError("sigma must be non-negative")

    @property
    def n_points(self) -> int:
        return len(self.parameter)

    def curves(self) -> list[tuple[str, tuple[float, ...]]]:
        """Line curves in drawing order; the classical bound renders dashed."""
        out = [("i_q_analytic", self.i_q_analytic)]
        if self.i_q_optics is not None:
            out.append(("i_q_optics", self.i_q_optics))
        out.append(("i_c_analytic", self.i_c_analytic))
        return out


def _parse_cell(row_number: int, name: str, cell: str | None) -> float:
    if cell is None or cell.strip() == "":
        raise ValueError(f"row {row_number}: missing value for '{name}'")
    try:
        return float(cell)
    except ValueError:
        raise ValueError(f"row {row_number}: bad value {cell!r} for '{name}'") from None


def load_series(path: str | Path) -> SweepSeries:
    """Read a sweep CSV, checking the header and every cell.

    Raises SchemaError naming the first missing required column, and plain
    ValueError for an empty file, unparsable cells, or broken invariants.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames
        if header is None:
            raise ValueError("empty CSV: no header row")
        for name in REQUIRED_COLUMNS:
            if name not in header:
                raise SchemaError(f"missing column '{name}'")
        has_optics = OPTIONAL_CURVE in header

        names = list(REQUIRED_COLUMNS) + ([OPTIONAL_CURVE] if has_optics else [])
        columns: dict[str, list[float]] = {name: [] for name in names}
        for row_number, row in enumerate(reader, start=2):
            for name in names:
                columns[name].append(_parse_cell(row_number, name, row.get(name)))
    if not columns["parameter"]:
        raise ValueError("empty CSV: no data rows")

    return SweepSeries(
        parameter_name=header[0],
        parameter=tuple(columns["parameter"]),
        i_q_analytic=tuple(columns["i_q_analytic"]),
        i_c_analytic=tuple(columns["i_c_analytic"]),
        i_exp=tuple(columns["i_exp_mc"]),
        sigma=tuple(columns["sigma_mc"]),
        i_q_optics=tuple(columns[OPTIONAL_CURVE]) if has_optics else None,
    )

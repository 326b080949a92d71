"""Reader for the convergence CSV schema produced by ``trihelm convergence``."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class MissingColumn(KeyError):
    """A requested column is absent from the CSV header."""

    def __init__(self, name: str, available):
        self.name = name
        super().__init__(
            f"column {name!r} not found; available columns: {', '.join(available)}"
        )

    def __str__(self) -> str:  # KeyError would re-quote the message
        return self.args[0]


@dataclass
class ConvergenceTable:
    """Columns of a convergence CSV; blank cells are NaN."""

    header: list
    columns: dict  # name -> float ndarray

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise MissingColumn(name, self.header)
        return self.columns[name]

    @property
    def error_columns(self) -> list:
        return [name for name in self.header if name.startswith("err_")]


def read_convergence_csv(path) -> ConvergenceTable:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV") from None
        rows = [row for row in reader if row]
    data = {name: [] for name in header}
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise ValueError(
                f"{path}: line {lineno} has {len(row)} cells, expected {len(header)}"
            )
        for name, cell in zip(header, row):
            data[name].append(float(cell) if cell.strip() else float("nan"))
    return ConvergenceTable(
        header=header,
        columns={name: np.asarray(vals) for name, vals in data.items()},
    )

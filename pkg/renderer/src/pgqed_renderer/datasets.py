"""Reading the unit-tagged CSV and JSON datasets the solver CLI emits."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class MissingColumnError(KeyError):
    """A recipe asked for a column the dataset does not carry."""


@dataclass
class Dataset:
    path: Path
    columns: dict[str, str]        # name -> unit
    table: dict[str, np.ndarray]   # name -> values (numeric or str)

    def numeric(self, name: str) -> np.ndarray:
        if name not in self.table:
            raise MissingColumnError(
                f"{self.path.name} has no column {name!r}; available: "
                f"{sorted(self.table)}")
        values = self.table[name]
        if values.dtype.kind not in "fiu":
            raise MissingColumnError(f"column {name!r} in {self.path.name} "
                                     "is not numeric")
        return values

    def unit(self, name: str) -> str:
        return self.columns[name]


def load_dataset(path) -> Dataset:
    path = Path(path)
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    names, units = [], {}
    for col in header:
        if "[" not in col or not col.endswith("]"):
            raise MissingColumnError(f"{path.name}: header column {col!r} "
                                     "carries no unit tag")
        name, unit = col[:-1].split("[", 1)
        names.append(name)
        units[name] = unit
    raw = [line.split(",") for line in lines[1:] if line]
    table = {}
    for j, name in enumerate(names):
        column = [row[j] for row in raw]
        try:
            table[name] = np.array([float(v) for v in column])
        except ValueError:
            table[name] = np.array(column)
    return Dataset(path=path, columns=units, table=table)


def load_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)

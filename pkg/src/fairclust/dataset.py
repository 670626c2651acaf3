"""CSV ingestion: one-hot / min-max encoding into distance and fairness views."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

KINDS = ("continuous", "categorical")


class DataError(Exception):
    """Raised for unusable input data (missing file, unknown column, no rows)."""


class UnknownColumnError(DataError):
    """A feature spec names a column the file does not have."""


# Feature choices for the three benchmark tables; each expects data/<name>.csv.
PRESETS = {
    "adult": {"distance_columns": ["educationnum", "age"],
              "fairness_columns": ["salary", "hoursperweek"],
              "kinds": {"salary": "categorical"}},
    "bank": {"distance_columns": ["duration", "age"],
             "fairness_columns": ["education", "balance"],
             "kinds": {"education": "categorical"}},
    "diabetes": {"distance_columns": ["age", "number_emergency"],
                 "fairness_columns": ["time_in_hospital", "num_lab_procedures"],
                 "kinds": {"age": "categorical"}},
}


def preset_spec(name: str) -> "FeatureSpec":
    if name not in PRESETS:
        raise KeyError(f"unknown dataset {name!r}; supported: {', '.join(PRESETS)}")
    return FeatureSpec.from_dict(PRESETS[name])


@dataclass
class RawTable:
    column_names: list[str]
    rows: list[list[str]]
    ragged: int = 0  # rows discarded for having the wrong cell count
    row_ids: list[int] | None = None  # file data-row index of each kept row

    def __post_init__(self):
        if self.row_ids is None:
            self.row_ids = list(range(len(self.rows)))
        width = len(self.column_names)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise DataError(f"row {i} has {len(row)} cells, expected {width}")


@dataclass
class FeatureSpec:
    distance_columns: list[str]
    fairness_columns: list[str]
    column_kinds: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.distance_columns or not self.fairness_columns:
            raise ValueError("distance_columns and fairness_columns must be non-empty")
        for col in self.columns:
            kind = self.column_kinds.setdefault(col, "continuous")
            if kind not in KINDS:
                raise ValueError(f"column {col!r}: unknown kind {kind!r}")

    @property
    def columns(self) -> list[str]:
        seen = dict.fromkeys(self.distance_columns + self.fairness_columns)
        return list(seen)

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureSpec":
        return cls(list(d["distance_columns"]), list(d["fairness_columns"]),
                   dict(d.get("kinds", d.get("column_kinds", {}))))

    @classmethod
    def from_json(cls, path) -> "FeatureSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {"distance_columns": list(self.distance_columns),
                "fairness_columns": list(self.fairness_columns),
                "kinds": {c: self.column_kinds[c] for c in self.columns}}


@dataclass
class Dataset:
    distance_vectors: np.ndarray
    fairness_vectors: np.ndarray
    point_ids: np.ndarray
    dropped_rows: int = 0

    def __post_init__(self):
        self.distance_vectors = np.atleast_2d(np.asarray(self.distance_vectors, dtype=float))
        self.fairness_vectors = np.atleast_2d(np.asarray(self.fairness_vectors, dtype=float))
        self.point_ids = np.asarray(self.point_ids)
        n = self.distance_vectors.shape[0]
        if n < 1:
            raise DataError("dataset has no points")
        if self.fairness_vectors.shape[0] != n or self.point_ids.shape[0] != n:
            raise DataError("distance/fairness/id arrays disagree on point count")

    @property
    def n(self) -> int:
        return self.distance_vectors.shape[0]

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=int)
        return Dataset(self.distance_vectors[idx], self.fairness_vectors[idx],
                       self.point_ids[idx])


def read_table(path) -> RawTable:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such data file: {path}")
    with open(path, newline="") as fh:
        head = fh.readline()
        fh.seek(0)
        delim = ";" if head.count(";") > head.count(",") else ","
        reader = csv.reader(fh, delimiter=delim)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        rows = [[c.strip() for c in r] for r in reader if r]
    # ragged rows are dropped later, so keep only well-formed ones here
    ids = [i for i, r in enumerate(rows) if len(r) == len(header)]
    return RawTable(header, [rows[i] for i in ids], len(rows) - len(ids), ids)


def _parse_float(cell: str):
    if cell in ("", "?", "NA", "nan", "NaN"):
        return None
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if np.isfinite(v) else None


def minmax(col: np.ndarray) -> np.ndarray:
    lo, hi = col.min(), col.max()
    if hi == lo:
        return np.zeros_like(col)
    return (col - lo) / (hi - lo)


def encode(table: RawTable, spec: FeatureSpec) -> Dataset:
    missing = [c for c in spec.columns if c not in table.column_names]
    if missing:
        raise UnknownColumnError(f"unknown column {missing[0]!r}")
    pos = {c: table.column_names.index(c) for c in spec.columns}

    usable, values = [], {c: [] for c in spec.columns}
    for i, row in enumerate(table.rows):
        parsed = {}
        for c in spec.columns:
            cell = row[pos[c]]
            if spec.column_kinds[c] == "continuous":
                v = _parse_float(cell)
            else:
                v = None if cell in ("", "?", "NA") else cell
            if v is None:
                break
            parsed[c] = v
        else:
            usable.append(i)
            for c, v in parsed.items():
                values[c].append(v)
    dropped = len(table.rows) - len(usable) + table.ragged
    if not usable:
        raise DataError("zero usable rows after parsing")
    if dropped:
        log.info("dropped %d unparseable rows", dropped)

    blocks = {}
    for c in spec.columns:
        if spec.column_kinds[c] == "continuous":
            blocks[c] = minmax(np.array(values[c], dtype=float))[:, None]
        else:
            cells = np.array(values[c], dtype=object)
            levels = sorted(set(values[c]))
            blocks[c] = (cells[:, None] == np.array(levels, dtype=object)[None, :]).astype(float)

    dist = np.hstack([blocks[c] for c in spec.distance_columns])
    fair = np.hstack([blocks[c] for c in spec.fairness_columns])
    return Dataset(dist, fair, np.array(table.row_ids)[usable], dropped_rows=dropped)


def load_csv(path, spec: FeatureSpec) -> Dataset:
    """Load a CSV file and encode the columns named in ``spec``.

    Point ids are the 0-based data-row indices in the file. Rows with a
    missing or unparseable cell in any used column are dropped and counted
    in ``Dataset.dropped_rows``.
    """
    return encode(read_table(path), spec)


def sample(ds: Dataset, size: int, seed) -> Dataset:
    if size < 1 or size > ds.n:
        raise ValueError(f"sample size {size} not in [1, {ds.n}]")
    rng = np.random.default_rng(seed)
    idx = rng.choice(ds.n, size=size, replace=False)
    return ds.subset(idx)

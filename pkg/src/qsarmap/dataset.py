"""Descriptor tables: CSV ingestion, deduplication, z-scoring and labeling."""

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .exceptions import DatasetError

#: Descriptor columns of the reference 23-descriptor carcinogenicity schema.
CARCINOGENICITY_DESCRIPTORS = (
    "Weight", "HDon", "HAcc", "XlogP", "TPSA", "Polariz", "Dipole", "LogS",
    "NRotBond", "NVRO5", "NVERO5", "NAtoms", "NStereo", "Complexity",
    "RComplexity", "Diameter", "InertiaX", "InertiaY", "InertiaZ", "Span",
    "RGyr", "Eccentric", "Aspheric",
)


@dataclass(frozen=True)
class DescriptorTable:
    """N compounds by d descriptors plus one numeric endpoint.

    ``warnings`` accumulates human-readable notes from processing steps
    (duplicates removed, conflicting endpoints) so they can be reported.
    """

    compound_ids: tuple
    descriptor_names: tuple
    values: np.ndarray
    endpoint_name: str
    endpoint: np.ndarray
    duplicates_removed: int = 0
    normalized: bool = False
    warnings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        endpoint = np.array(self.endpoint, dtype=float)
        ids = tuple(str(c) for c in self.compound_ids)
        names = tuple(str(c) for c in self.descriptor_names)
        if values.ndim != 2:
            raise DatasetError("descriptor values must be a 2-D matrix")
        n, d = values.shape
        if d < 1:
            raise DatasetError("table needs at least one descriptor column")
        if n < 2:
            raise DatasetError(f"table needs at least 2 compounds, got {n}")
        if len(names) != d:
            raise DatasetError(f"{len(names)} descriptor names for {d} columns")
        if len(ids) != n or endpoint.shape != (n,):
            raise DatasetError("compound ids, values and endpoint disagree on N")
        if len(set(ids)) != n:
            raise DatasetError("compound ids are not unique")
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(endpoint))):
            raise DatasetError("table contains non-finite values")
        values.flags.writeable = False
        endpoint.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "endpoint", endpoint)
        object.__setattr__(self, "compound_ids", ids)
        object.__setattr__(self, "descriptor_names", names)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @property
    def n_compounds(self):
        return self.values.shape[0]

    @property
    def n_descriptors(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class EndpointLabeling:
    """Binary classes from a strict ``endpoint > threshold`` rule.

    ``labels[i]`` is True for the positive class (active / toxic).
    """

    threshold: float
    labels: np.ndarray
    class_names: tuple = ("active", "inactive")

    def __post_init__(self):
        labels = np.array(self.labels, dtype=bool)
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "threshold", float(self.threshold))
        object.__setattr__(self, "class_names", tuple(self.class_names))

    @property
    def n_positive(self):
        return int(self.labels.sum())

    @property
    def n_negative(self):
        return int(self.labels.size - self.labels.sum())

    @property
    def counts(self):
        return {self.class_names[0]: self.n_positive,
                self.class_names[1]: self.n_negative}

    def __len__(self):
        return self.labels.size


def _parse_float(text, row, column):
    try:
        value = float(text)
    except ValueError:
        value = None
    if value is None or not math.isfinite(value):
        raise DatasetError(
            f"row {row}, column {column!r}: cannot parse {text!r} as a finite number"
        )
    return value


def load_csv(path, endpoint_column):
    """Read a descriptor table from a comma-separated file.

    The first column holds compound identifiers, ``endpoint_column`` names
    the activity column and every other column is a descriptor. Row numbers
    in error messages count the header as row 1.

    Parameters
    ----------
    path : str or Path
    endpoint_column : str

    Returns
    -------
    DescriptorTable
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise DatasetError(f"{path}: file is empty")

    header = [h.strip() for h in rows[0]]
    seen = set()
    for col, name in enumerate(header, start=1):
        if not name:
            raise DatasetError(f"{path}: header column {col} is empty")
        if name in seen:
            raise DatasetError(f"{path}: duplicate header name {name!r}")
        seen.add(name)
    if endpoint_column not in seen:
        raise DatasetError(f"{path}: endpoint column {endpoint_column!r} not in header")
    if header.index(endpoint_column) == 0:
        raise DatasetError(f"{path}: endpoint column cannot be the ID column")
    if len(header) < 3:
        raise DatasetError(f"{path}: need an ID column, descriptors and an endpoint")

    end_idx = header.index(endpoint_column)
    desc_idx = [i for i in range(1, len(header)) if i != end_idx]

    ids, values, endpoint = [], [], []
    for rownum, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DatasetError(
                f"{path}: row {rownum} has {len(row)} fields, header has {len(header)}"
            )
        cid = row[0].strip()
        if not cid:
            raise DatasetError(f"{path}: row {rownum}, column {header[0]!r}: empty ID")
        if cid in ids:
            raise DatasetError(f"{path}: row {rownum}: duplicate compound ID {cid!r}")
        ids.append(cid)
        values.append([_parse_float(row[i].strip(), rownum, header[i]) for i in desc_idx])
        endpoint.append(_parse_float(row[end_idx].strip(), rownum, endpoint_column))

    if len(ids) < 2:
        raise DatasetError(f"{path}: need at least 2 data rows, got {len(ids)}")

    return DescriptorTable(
        compound_ids=ids,
        descriptor_names=[header[i] for i in desc_idx],
        values=np.array(values),
        endpoint_name=endpoint_column,
        endpoint=np.array(endpoint),
    )


def deduplicate(table):
    """Drop compounds whose descriptor vector exactly repeats an earlier one.

    The first occurrence is kept. A warning is recorded when collapsed rows
    carried different endpoint values.
    """
    keep = []
    first_of = {}
    notes = []
    for i, row in enumerate(table.values):
        key = row.tobytes()
        if key in first_of:
            j = first_of[key]
            if table.endpoint[i] != table.endpoint[j]:
                notes.append(
                    f"duplicate descriptors: {table.compound_ids[i]!r} dropped in favour "
                    f"of {table.compound_ids[j]!r} despite differing endpoint "
                    f"({float(table.endpoint[i])!r} vs {float(table.endpoint[j])!r})"
                )
            continue
        first_of[key] = i
        keep.append(i)

    removed = table.n_compounds - len(keep)
    if removed == 0:
        return table
    if len(keep) < 2:
        raise DatasetError(f"only {len(keep)} distinct compound(s) after deduplication")
    notes.insert(0, f"{removed} duplicate compound(s) removed")
    return replace(
        table,
        compound_ids=[table.compound_ids[i] for i in keep],
        values=table.values[keep],
        endpoint=table.endpoint[keep],
        duplicates_removed=table.duplicates_removed + removed,
        warnings=table.warnings + tuple(notes),
    )


def zscore(values):
    """Column-wise z-scores with the N-1 standard deviation; constant columns become 0."""
    values = np.asarray(values, dtype=float)
    out = np.zeros_like(values)
    for j in range(values.shape[1]):
        col = values[:, j]
        if np.all(col == col[0]):
            continue
        centered = col - col.mean()
        centered -= centered.mean()  # second pass removes rounding in the first mean
        peak = np.max(np.abs(centered))
        if peak == 0:
            continue
        unit = centered / peak  # guards the sum of squares against underflow
        out[:, j] = unit / np.sqrt(unit @ unit / (col.size - 1))
    return out


def normalize(table):
    """Return a copy of ``table`` with every descriptor column z-scored.

    The endpoint column is left untouched.
    """
    return replace(table, values=zscore(table.values), normalized=True)


def label(table, threshold, class_names=("active", "inactive")):
    """Mark compounds with ``endpoint > threshold`` (strictly) as positive."""
    return EndpointLabeling(
        threshold=threshold,
        labels=table.endpoint > threshold,
        class_names=class_names,
    )


def mean_threshold(table):
    """Arithmetic mean of the endpoint, the default toxicity cut-off."""
    return float(np.mean(table.endpoint))

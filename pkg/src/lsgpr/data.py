"""Dataset handling: the Doppler generator, CSV in/out, scaling, and
seeded train/validation/test splits."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from lsgpr.exceptions import (DataError, DataFileError, NonNumericCellError,
                              TargetColumnError)


@dataclass(frozen=True)
class ScalingInfo:
    """Per-column transform metadata; the target is the last column.

    ``kind`` is "minmax" (offset=min, scale=max-min) or "standard"
    (offset=mean, scale=population sd).  Constant columns carry scale 0
    and are listed in ``constant_columns``; they map to 0 and invert to
    their offset.
    """

    kind: str
    offsets: tuple[float, ...]
    scales: tuple[float, ...]
    constant_columns: tuple[int, ...] = ()


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    scaling: ScalingInfo | None = None

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        y = np.array(self.y, dtype=float).ravel()
        if X.shape[0] != y.shape[0]:
            raise DataError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
        if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
            raise DataError("dataset contains non-finite values")
        if len(self.feature_names) != X.shape[1]:
            raise DataError(f"{len(self.feature_names)} feature names for "
                            f"{X.shape[1]} columns")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class SplitSpec:
    fractions: tuple[float, float, float]
    seed: int

    def __post_init__(self):
        if len(self.fractions) != 3 or any(f < 0 for f in self.fractions):
            raise ValueError(f"need three non-negative fractions, got {self.fractions}")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ValueError(f"fractions must sum to 1, got {sum(self.fractions)}")


def doppler_function(x):
    """sqrt(x(1-x)) * sin(2.1 pi / (x + 0.05)) on [0, 1]."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.clip(x * (1.0 - x), 0.0, None)) * np.sin(2.1 * np.pi / (x + 0.05))


def gen_doppler(n: int, noise_variance: float, seed: int,
                noise_is_sd: bool = False) -> Dataset:
    """n noisy Doppler samples with inputs uniform on [0, 1].

    ``noise_variance`` is the variance of the additive Gaussian noise;
    pass ``noise_is_sd=True`` to interpret it as a standard deviation
    instead.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if noise_variance < 0:
        raise ValueError(f"noise must be non-negative, got {noise_variance}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=n)
    sd = noise_variance if noise_is_sd else math.sqrt(noise_variance)
    y = doppler_function(x) + sd * rng.standard_normal(n)
    return Dataset(X=x[:, None], y=y, feature_names=("x",))


def _parse_cell(text: str, path, row: int, column: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise NonNumericCellError(path, row, column) from None


def load_csv(path, target, delimiter: str = ",",
             has_header: bool = True) -> Dataset:
    """Read a numeric CSV into a Dataset.

    ``target`` selects the target column by header name or 0-based index.
    Error messages for bad cells give 1-based file row and column.
    """
    try:
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle, delimiter=delimiter))
    except OSError as err:
        raise DataFileError(f"cannot read {path}: {err}") from err
    if not rows:
        raise DataFileError(f"{path} is empty")

    header = None
    first_data_row = 1
    if has_header:
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        first_data_row = 2
        if not rows:
            raise DataFileError(f"{path} has a header but no data rows")

    width = len(rows[0])
    values = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataFileError(
                f"{path}: row {first_data_row + i} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row):
            values[i, j] = _parse_cell(cell.strip(), path, first_data_row + i, j + 1)

    if isinstance(target, str):
        if header is None:
            raise TargetColumnError(
                f"target {target!r} requires a header row in {path}")
        try:
            target_idx = header.index(target)
        except ValueError:
            raise TargetColumnError(
                f"no column named {target!r} in {path}; header is {header}") from None
    else:
        target_idx = int(target)
        if target_idx < 0:
            target_idx += width
        if not 0 <= target_idx < width:
            raise TargetColumnError(
                f"target index {target} out of range for {width} columns in {path}")

    feature_cols = [j for j in range(width) if j != target_idx]
    names = ([header[j] for j in feature_cols] if header is not None
             else [f"col{j}" for j in feature_cols])
    return Dataset(X=values[:, feature_cols], y=values[:, target_idx],
                   feature_names=tuple(names))


def load_matrix_csv(path, delimiter: str = ",",
                    has_header: bool = True) -> np.ndarray:
    """Read an all-numeric CSV (no target column) as an n x d matrix."""
    try:
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle, delimiter=delimiter))
    except OSError as err:
        raise DataFileError(f"cannot read {path}: {err}") from err
    first_data_row = 1
    if has_header:
        rows = rows[1:]
        first_data_row = 2
    if not rows:
        raise DataFileError(f"{path} has no data rows")
    width = len(rows[0])
    values = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataFileError(
                f"{path}: row {first_data_row + i} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row):
            values[i, j] = _parse_cell(cell.strip(), path, first_data_row + i, j + 1)
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path} contains non-finite values")
    return values


def save_csv(data: Dataset, path, target_name: str = "y") -> None:
    """Write a Dataset as CSV (header row, full float precision)."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(list(data.feature_names) + [target_name])
        for row, target in zip(data.X, data.y):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(target))])


def save_table(path, columns: dict) -> None:
    """Write named columns of floats as CSV, in insertion order."""
    names = list(columns)
    arrays = [np.asarray(columns[name], dtype=float).ravel() for name in names]
    if len({a.size for a in arrays}) > 1:
        raise ValueError("columns have mismatched lengths")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(names)
        for i in range(arrays[0].size if arrays else 0):
            writer.writerow([repr(float(a[i])) for a in arrays])


def _columns(data: Dataset) -> np.ndarray:
    return np.column_stack([data.X, data.y])


def _rebuild(data: Dataset, matrix: np.ndarray, scaling) -> Dataset:
    return Dataset(X=matrix[:, :-1], y=matrix[:, -1],
                   feature_names=data.feature_names, scaling=scaling)


def scale_minmax(data: Dataset) -> Dataset:
    """Map every column (features and target) onto [0, 1].

    Constant columns map to 0 and are flagged in the scaling metadata.
    """
    M = _columns(data)
    lo = M.min(axis=0)
    hi = M.max(axis=0)
    span = hi - lo
    constant = tuple(int(j) for j in np.flatnonzero(span == 0))
    safe = np.where(span == 0, 1.0, span)
    scaled = (M - lo) / safe
    scaled[:, list(constant)] = 0.0
    info = ScalingInfo(kind="minmax", offsets=tuple(map(float, lo)),
                       scales=tuple(map(float, span)),
                       constant_columns=constant)
    return _rebuild(data, scaled, info)


def standardize(data: Dataset) -> Dataset:
    """Per-column (v - mean) / sd with population sd; constants map to 0."""
    M = _columns(data)
    mean = M.mean(axis=0)
    sd = M.std(axis=0)
    constant = tuple(int(j) for j in np.flatnonzero(sd == 0))
    safe = np.where(sd == 0, 1.0, sd)
    scaled = (M - mean) / safe
    scaled[:, list(constant)] = 0.0
    info = ScalingInfo(kind="standard", offsets=tuple(map(float, mean)),
                       scales=tuple(map(float, sd)),
                       constant_columns=constant)
    return _rebuild(data, scaled, info)


def unscale(data: Dataset) -> Dataset:
    """Invert the recorded scaling exactly; constant columns restore their
    offset."""
    if data.scaling is None:
        raise DataError("dataset has no scaling metadata to invert")
    M = _columns(data)
    offsets = np.array(data.scaling.offsets)
    scales = np.array(data.scaling.scales)
    safe = np.where(scales == 0, 1.0, scales)
    raw = M * safe + offsets
    for j in data.scaling.constant_columns:
        raw[:, j] = offsets[j]
    return _rebuild(data, raw, None)


def _subset(data: Dataset, idx: np.ndarray) -> Dataset:
    return Dataset(X=data.X[idx], y=data.y[idx],
                   feature_names=data.feature_names, scaling=data.scaling)


def split(data: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset, Dataset]:
    """Seeded permutation, then contiguous train/validation/test slices.

    Part sizes are floor(fraction * n) with the remainder joining train.
    A nonzero fraction that would produce an empty part is an error.
    """
    n = data.n
    f_train, f_val, f_test = spec.fractions
    n_val = math.floor(f_val * n + 1e-9)
    n_test = math.floor(f_test * n + 1e-9)
    n_train = n - n_val - n_test
    for name, frac, size in (("train", f_train, n_train),
                             ("validation", f_val, n_val),
                             ("test", f_test, n_test)):
        if frac > 0 and size == 0:
            raise DataError(f"{name} fraction {frac} yields an empty part at n={n}")
    perm = np.random.default_rng(spec.seed).permutation(n)
    return (_subset(data, perm[:n_train]),
            _subset(data, perm[n_train:n_train + n_val]),
            _subset(data, perm[n_train + n_val:]))

#!/usr/bin/python
#
# Copyright 2026 The octree Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Binary datasets: the binarized matrix and its duplicate-merged, weighted
form."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from octree.dataset.errors import DataError, LabelError


def _check_binary(X: np.ndarray) -> None:
  if X.ndim != 2:
    raise DataError("Feature matrix must be 2-d, got shape {}".format(X.shape))
  if X.size and not np.isin(X, (0, 1)).all():
    raise DataError("Feature matrix must only contain 0 and 1.")


def _default_names(n: int) -> Tuple[str, ...]:
  return tuple("x{}".format(i) for i in range(n))


@dataclass(frozen=True, eq=False)
class BinarizedDataset:
  """|I| x |F| binary matrix with class indices in {0, ..., |K| - 1}.

  `classes` holds the original label identifiers by class index and
  `degenerate` flags constant columns produced by binarization.

  """
  X: np.ndarray
  y: np.ndarray
  n_classes: int
  feature_names: Tuple[str, ...] = ()
  classes: Tuple[str, ...] = ()
  degenerate: Tuple[bool, ...] = ()

  def __post_init__(self):
    X = np.asarray(self.X, dtype=np.uint8)
    y = np.asarray(self.y, dtype=int)
    object.__setattr__(self, "X", X)
    object.__setattr__(self, "y", y)
    _check_binary(X)
    if y.shape != (X.shape[0],):
      raise DataError("Expected {} labels, got {}".format(X.shape[0], y.shape))
    if self.n_classes < 1:
      raise LabelError("Need at least one class.")
    if y.size and (y.min() < 0 or y.max() >= self.n_classes):
      raise LabelError("Labels must lie in [0, {})".format(self.n_classes))
    if not self.feature_names:
      object.__setattr__(self, "feature_names", _default_names(X.shape[1]))
    if not self.classes:
      object.__setattr__(self, "classes",
                         tuple(str(k) for k in range(self.n_classes)))
    if not self.degenerate:
      object.__setattr__(self, "degenerate", (False,) * X.shape[1])
    if len(self.feature_names) != X.shape[1] or \
       len(self.degenerate) != X.shape[1]:
      raise DataError("Feature metadata doesn't match {} columns".format(
          X.shape[1]))
    if len(self.classes) != self.n_classes:
      raise LabelError("Expected {} class names, got {}".format(
          self.n_classes, len(self.classes)))

  @property
  def n_rows(self) -> int:
    return self.X.shape[0]

  @property
  def n_features(self) -> int:
    return self.X.shape[1]

  @property
  def w(self) -> np.ndarray:
    return np.ones(self.n_rows, dtype=int)

  def check_classes(self) -> None:
    """Errors unless every class index below n_classes occurs."""
    missing = set(range(self.n_classes)) - set(self.y.tolist())
    if missing:
      raise LabelError("Classes {} have no rows.".format(sorted(missing)))

  def subset(self, rows: Sequence[int]) -> "BinarizedDataset":
    rows = np.asarray(rows, dtype=int)
    return BinarizedDataset(self.X[rows], self.y[rows], self.n_classes,
                            self.feature_names, self.classes, self.degenerate)


@dataclass(frozen=True, eq=False)
class UniqueDataset:
  """Duplicate-merged dataset: unique (row, label) pairs with integer weights
  w and, per unique row, the original row indices it stands for."""
  X: np.ndarray
  y: np.ndarray
  w: np.ndarray
  origin_map: Tuple[Tuple[int, ...], ...]
  n_classes: int
  feature_names: Tuple[str, ...] = ()
  classes: Tuple[str, ...] = ()
  degenerate: Tuple[bool, ...] = ()

  def __post_init__(self):
    X = np.asarray(self.X, dtype=np.uint8)
    y = np.asarray(self.y, dtype=int)
    w = np.asarray(self.w, dtype=int)
    for k, v in (("X", X), ("y", y), ("w", w)):
      object.__setattr__(self, k, v)
    _check_binary(X)
    n = X.shape[0]
    if y.shape != (n,) or w.shape != (n,):
      raise DataError("Labels and weights must have {} entries.".format(n))
    if n and w.min() < 1:
      raise DataError("Weights must be positive integers.")
    if y.size and (y.min() < 0 or y.max() >= self.n_classes):
      raise LabelError("Labels must lie in [0, {})".format(self.n_classes))
    if len(self.origin_map) != n or \
       any(len(o) != c for o, c in zip(self.origin_map, w)):
      raise DataError("origin_map must list exactly w_i rows per instance.")
    keys = {(X[i].tobytes(), int(y[i]))
            for i in range(n)}
    if len(keys) != n:
      raise DataError("Unique datasets can't repeat a (row, label) pair.")
    if not self.feature_names:
      object.__setattr__(self, "feature_names", _default_names(X.shape[1]))
    if not self.classes:
      object.__setattr__(self, "classes",
                         tuple(str(k) for k in range(self.n_classes)))
    if not self.degenerate:
      object.__setattr__(self, "degenerate", (False,) * X.shape[1])

  @staticmethod
  def from_arrays(X,
                  y,
                  w=None,
                  n_classes: Optional[int] = None) -> "UniqueDataset":
    """Builds a unique dataset directly from already unique rows; origin
    indices are assigned consecutively by weight."""
    X = np.asarray(X, dtype=np.uint8)
    y = np.asarray(y, dtype=int)
    w = np.ones(len(y), dtype=int) if w is None else np.asarray(w, dtype=int)
    if n_classes is None:
      n_classes = int(y.max()) + 1 if y.size else 1
    ends = np.cumsum(w)
    origin = tuple(
        tuple(range(int(e - c), int(e))) for e, c in zip(ends, w))
    return UniqueDataset(X, y, w, origin, n_classes)

  @property
  def n_unique(self) -> int:
    return self.X.shape[0]

  @property
  def n_features(self) -> int:
    return self.X.shape[1]

  @property
  def total(self) -> int:
    """|I|, the number of original rows."""
    return int(self.w.sum())

  @property
  def n_plus(self) -> int:
    return int(self.w[self.y == 1].sum())

  @property
  def n_minus(self) -> int:
    return int(self.w[self.y == 0].sum())

  def expand(self) -> BinarizedDataset:
    """Re-expands to the original rows, in original order."""
    n = self.total
    rows = np.zeros(n, dtype=int)
    for u, origin in enumerate(self.origin_map):
      rows[list(origin)] = u
    return BinarizedDataset(self.X[rows], self.y[rows], self.n_classes,
                            self.feature_names, self.classes, self.degenerate)

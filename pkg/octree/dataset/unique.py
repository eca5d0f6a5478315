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
"""Duplicate merging: from binarized rows to weighted unique instances."""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from octree.dataset.base import BinarizedDataset, UniqueDataset
from octree.dataset.errors import DataError
from octree.dataset.mdlp import BinRules


def _group(keys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
  """Groups identical rows of `keys`. Returns (first row of each group, group
  index per row), with groups numbered in first-occurrence order."""
  if keys.shape[0] == 0:
    return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
  _, first, inverse = np.unique(keys,
                                axis=0,
                                return_index=True,
                                return_inverse=True)
  order = np.argsort(first)
  rank = np.empty_like(order)
  rank[order] = np.arange(len(order))
  return first[order], rank[np.reshape(inverse, -1)]


def _merge(X: np.ndarray, y: np.ndarray, w: np.ndarray,
           origins: Sequence[Sequence[int]], n_classes: int,
           names: Tuple[str, ...], classes: Tuple[str, ...],
           degenerate: Tuple[bool, ...]) -> UniqueDataset:
  keys = np.column_stack([X, y]).astype(np.int64)
  first, group = _group(keys)
  merged: List[List[int]] = [[] for _ in first]
  for i, g in enumerate(group):
    merged[g].extend(origins[i])
  weights = np.bincount(group, weights=w, minlength=len(first)).astype(int)
  return UniqueDataset(X[first], y[first], weights,
                       tuple(tuple(sorted(o)) for o in merged),
                       n_classes, names, classes, degenerate)


def reduce_unique(data: BinarizedDataset) -> UniqueDataset:
  """Merges identical (row, label) pairs. Rows with equal features but
  different labels stay apart."""
  return _merge(data.X, data.y, np.ones(data.n_rows, dtype=int),
                [(i,) for i in range(data.n_rows)], data.n_classes,
                data.feature_names, data.classes, data.degenerate)


def expand(data: UniqueDataset) -> BinarizedDataset:
  return data.expand()


def restrict_features(data: UniqueDataset, features: Sequence[int]
                     ) -> Tuple[UniqueDataset, Tuple[int, ...]]:
  """Projects onto `features` and merges rows that become identical.

  Returns the restricted dataset and the feature map: column j of the result
  is column map[j] of `data`.

  """
  features = tuple(int(f) for f in features)
  if len(set(features)) != len(features):
    raise DataError("Duplicate features in {}".format(features))
  if any(not 0 <= f < data.n_features for f in features):
    raise DataError("Features {} outside [0, {})".format(features,
                                                         data.n_features))

  cols = list(features)
  ret = _merge(data.X[:, cols], data.y, data.w, data.origin_map,
               data.n_classes, tuple(data.feature_names[f] for f in cols),
               data.classes, tuple(data.degenerate[f] for f in cols))
  return ret, features


def unique_report(data: UniqueDataset,
                  rules: Optional[BinRules] = None) -> Dict[str, Any]:
  """Sizes of a unique dataset, and the upper bound on |U| when the rules
  that produced it are known."""
  ret: Dict[str, Any] = {
      "rows": data.total,
      "unique": data.n_unique,
      "features": data.n_features,
      "classes": data.n_classes,
      "degenerate": int(sum(data.degenerate)),
  }
  if rules is not None:
    ret["bound"] = rules.unique_bound(data.total)
  return ret


def per_row(data: UniqueDataset, values: Sequence[float]) -> np.ndarray:
  """Spreads one value per unique instance over the original rows."""
  values = np.asarray(values, dtype=float)
  if values.shape != (data.n_unique,):
    raise DataError("Expected {} values, got {}".format(data.n_unique,
                                                        values.shape))
  ret = np.zeros(data.total)
  for u, origin in enumerate(data.origin_map):
    ret[list(origin)] = values[u]
  return ret


def per_unique(data: UniqueDataset, row_values: Sequence[float]) -> np.ndarray:
  """Mean of per-row values over the rows each unique instance stands for."""
  row_values = np.asarray(row_values, dtype=float)
  return np.array([row_values[list(o)].mean() for o in data.origin_map])

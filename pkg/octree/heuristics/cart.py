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
"""Greedy CART trees and random-forest feature rankings on binary data."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.ensemble import RandomForestClassifier

from octree.dataset import UniqueDataset
from octree.tree import ClassTree, Node

MIN_DECREASE = 1e-12


def _class_weights(y: np.ndarray, w: np.ndarray, n_classes: int) -> np.ndarray:
  """|rows| x |K| matrix with w_i in the column of y_i."""
  ret = np.zeros((len(y), n_classes))
  ret[np.arange(len(y)), y] = w
  return ret


def _impurity(counts: np.ndarray) -> np.ndarray:
  """Weighted gini, size * (1 - sum_k p_k^2), along the last axis."""
  size = counts.sum(axis=-1)
  with np.errstate(divide="ignore", invalid="ignore"):
    ret = size - np.where(size > 0, (counts**2).sum(axis=-1) / size, 0.0)
  return ret


def _majority(counts: np.ndarray) -> int:
  return int(np.argmax(counts))


def best_split(X: np.ndarray, W: np.ndarray) -> Optional[Tuple[int, float]]:
  """The feature whose split minimizes the children's weighted gini, with
  its impurity decrease. Ties go to the lowest feature index; features that
  leave a side empty never split."""
  total = W.sum(axis=0)
  right = X.T.astype(float) @ W
  left = total[None, :] - right
  sizes = np.stack([left.sum(axis=1), right.sum(axis=1)])
  valid = (sizes > 0).all(axis=0)
  if not valid.any():
    return None
  children = _impurity(left) + _impurity(right)
  children = np.where(valid, children, np.inf)
  f = int(np.argmin(children))
  return f, float(_impurity(total) - children[f])


def fit_cart(data: UniqueDataset, depth: int) -> ClassTree:
  """Grows a depth-limited gini tree top-down, weighting unique rows by w.

  A node becomes a leaf predicting its weighted majority class (lowest index
  on ties) when it is pure, sits at the bottom level or no split lowers its
  impurity.

  """
  if depth < 1:
    raise ValueError("CART depth must be at least 1, got {}".format(depth))
  W = _class_weights(data.y, data.w, data.n_classes)
  roles: Dict[int, Node] = {}
  stack = [(1, 0, np.arange(data.n_unique))]
  while stack:
    n, level, rows = stack.pop()
    counts = W[rows].sum(axis=0)
    split = None
    if level < depth and _impurity(counts) > MIN_DECREASE:
      split = best_split(data.X[rows], W[rows])
    if split is None or split[1] <= MIN_DECREASE:
      roles[n] = Node.leaf(_majority(counts))
      continue
    f = split[0]
    roles[n] = Node.branch(f)
    right = data.X[rows, f] == 1
    stack.append((2 * n, level + 1, rows[~right]))
    stack.append((2 * n + 1, level + 1, rows[right]))

  tree = ClassTree.from_roles(depth, roles, data.n_features)
  logging.debug("CART at depth %d uses features %s.", depth, tree.features())
  return tree


@dataclass(frozen=True)
class FeatureRanking:
  """Per-feature importances and the features ordered by them."""
  importances: Tuple[float, ...]
  order: Tuple[int, ...]

  def __post_init__(self):
    if sorted(self.order) != list(range(len(self.importances))):
      raise ValueError("order must be a permutation of the features.")
    imp = np.asarray(self.importances, dtype=float)
    if imp.size and (not np.isfinite(imp).all() or imp.min() < 0):
      raise ValueError("Importances must be finite and non-negative.")

  @staticmethod
  def from_importances(importances: Sequence[float]) -> "FeatureRanking":
    """Orders by non-increasing importance, lowest index first on ties."""
    imp = np.asarray(importances, dtype=float)
    order = np.argsort(-imp, kind="stable")
    return FeatureRanking(tuple(float(v) for v in imp),
                          tuple(int(f) for f in order))

  def top(self, k: int, exclude: Iterable[int] = ()) -> Tuple[int, ...]:
    """The first k ranked features not in `exclude`."""
    skip = set(exclude)
    return tuple(f for f in self.order if f not in skip)[:max(k, 0)]


def rf_ranking(data: UniqueDataset,
               n_trees: int = 100,
               seed: int = 0) -> FeatureRanking:
  """Mean-decrease-impurity importances of a random forest.

  The forest trains on the re-expanded rows, so every bootstrap sample has
  |I| rows.

  """
  if n_trees < 1:
    raise ValueError("n_trees must be positive, got {}".format(n_trees))
  rows = data.expand()
  forest = RandomForestClassifier(n_estimators=n_trees,
                                  criterion="gini",
                                  max_features="sqrt",
                                  bootstrap=True,
                                  random_state=seed)
  forest.fit(rows.X, rows.y)
  ranking = FeatureRanking.from_importances(
      np.nan_to_num(forest.feature_importances_, nan=0.0))
  logging.info("Random forest ranking, top features: %s",
               list(ranking.order[:10]))
  return ranking


def export_ranking(ranking: FeatureRanking,
                   names: Optional[Sequence[str]] = None) -> pd.DataFrame:
  """Ranking as a (feature, importance) table in ranked order."""
  features = [names[f] if names else f for f in ranking.order]
  return pd.DataFrame({
      "feature": features,
      "importance": [ranking.importances[f] for f in ranking.order],
  })

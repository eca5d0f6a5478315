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
"""Exhaustive search over every valid tree of depth at most 2.

Used as ground truth for the branch-and-cut solver on small instances.

"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Optional

from octree.dataset import UniqueDataset
from octree.tree import (ClassTree, MetricSpec, Node, evaluate,
                         objective_value)

MAX_FEATURES = 8
MAX_UNIQUE = 16
MAX_DEPTH = 2


class OracleLimitError(ValueError):
  """Raised for instances too large to enumerate."""


@dataclass(frozen=True)
class OracleResult:
  objective: float
  tree: ClassTree
  count: int

  def matches(self, objective: float, tol: float = 1e-9) -> bool:
    return abs(self.objective - objective) <= tol * max(1.0, abs(objective))

  def to_dict(self) -> Dict[str, Any]:
    return {
        "objective": self.objective,
        "count": self.count,
        "tree": self.tree.to_dict(),
    }


def _subtrees(n: int, level: int, depth: int, features,
              n_classes: int) -> Iterator[Dict[int, Node]]:
  for k in range(n_classes):
    yield {n: Node.leaf(k)}
  if level == depth:
    return
  for f in features:
    for left in _subtrees(2 * n, level + 1, depth, features, n_classes):
      for right in _subtrees(2 * n + 1, level + 1, depth, features, n_classes):
        yield {n: Node.branch(f), **left, **right}


def enumerate_trees(depth: int, n_features: int, n_classes: int,
                    features=None) -> Iterator[ClassTree]:
  """Every structurally valid depth-`depth` tree, interior leaves
  included."""
  features = range(n_features) if features is None else features
  for roles in _subtrees(1, 0, depth, list(features), n_classes):
    yield ClassTree.from_roles(depth, roles, n_features)


def _check_limits(data: UniqueDataset, depth: int) -> None:
  if not 1 <= depth <= MAX_DEPTH:
    raise OracleLimitError("Depth {} exceeds {}".format(depth, MAX_DEPTH))
  if data.n_features > MAX_FEATURES:
    raise OracleLimitError("{} features exceed {}".format(
        data.n_features, MAX_FEATURES))
  if data.n_unique > MAX_UNIQUE:
    raise OracleLimitError("{} unique rows exceed {}".format(
        data.n_unique, MAX_UNIQUE))


def enumerate_optimal(data: UniqueDataset,
                      depth: int,
                      spec: MetricSpec,
                      lam: float = 0.0,
                      max_branch_nodes: Optional[int] = None) -> OracleResult:
  """The best tree for the objective the masters maximize. Degenerate
  features never split, as in the masters. Ties keep the first tree
  enumerated."""
  _check_limits(data, depth)
  spec.check_classes(data.n_classes)
  kappa = None if spec.kappa is None else list(spec.kappa)
  features = [f for f in range(data.n_features) if not data.degenerate[f]]

  best: Optional[ClassTree] = None
  best_value = -float("inf")
  count = 0
  for tree in enumerate_trees(depth, data.n_features, data.n_classes,
                              features):
    count += 1
    splits = tree.splits()
    if max_branch_nodes is not None and splits > max_branch_nodes:
      continue
    value = objective_value(evaluate(tree, data, kappa), spec, lam, splits)
    if value > best_value + 1e-12:
      best, best_value = tree, value

  logging.info("Enumerated %d depth-%d trees; best %.6f.", count, depth,
               best_value)
  return OracleResult(best_value, best, count)

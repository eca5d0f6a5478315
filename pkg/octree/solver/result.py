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
"""Solve results, gaps and tree extraction."""

import datetime
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from octree.formulation import FormulationArtifacts, read_tree
from octree.tree import ClassTree, TreeError
from octree.util import json_str


def compute_gap(ub: float, lb: float) -> float:
  """100 * (UB - LB) / UB in percent. A zero UB gives 0 when LB is zero too
  and 100 otherwise; the absolute value of UB is used for negative bounds."""
  if not np.isfinite(ub) or not np.isfinite(lb):
    return 100.0
  if ub == 0:
    return 0.0 if lb == 0 else 100.0
  return max(0.0, 100.0 * (ub - lb) / abs(ub))


def extract_tree(values,
                 art: FormulationArtifacts,
                 n_features: Optional[int] = None) -> ClassTree:
  """Decodes the tree of an integral master assignment."""
  values = np.asarray(values, dtype=float)
  if values.shape != (art.num_variables,):
    raise TreeError("Expected {} values, got {}".format(
        art.num_variables, values.shape))
  return read_tree(art.tree, values, n_features)


@dataclass(frozen=True)
class SolveResult:
  """Outcome of a branch-and-cut run on a maximization master.

  `objective` is the incumbent value (LB) and `bound` the best bound (UB).

  """
  tree: ClassTree
  objective: float
  bound: float
  status: str
  nodes: int = 0
  lp_iterations: int = 0
  cuts: Dict[str, int] = field(default_factory=dict)
  wall_time: float = field(default=0.0, compare=False)
  metric: str = "accuracy"
  started_at: str = field(
      compare=False,
      default_factory=lambda: datetime.datetime.now().isoformat(
          timespec="seconds"))

  def __post_init__(self):
    if self.objective > self.bound + 1e-9 * max(1.0, abs(self.bound)):
      raise ValueError("Incumbent {} exceeds the bound {}".format(
          self.objective, self.bound))

  @property
  def ub(self) -> float:
    return self.bound

  @property
  def lb(self) -> float:
    return self.objective

  @property
  def gap(self) -> float:
    return compute_gap(self.bound, self.objective)

  @property
  def optimal(self) -> bool:
    return self.status == "optimal"

  def to_dict(self) -> Dict[str, Any]:
    """Deterministic fields under "result"; timing under "log"."""
    return {
        "result": {
            "status": self.status,
            "metric": self.metric,
            "objective": self.objective,
            "ub": self.bound,
            "lb": self.objective,
            "gap": self.gap,
            "nodes": self.nodes,
            "lp_iterations": self.lp_iterations,
            "cuts": dict(sorted(self.cuts.items())),
            "tree": self.tree.to_dict(),
        },
        "log": {
            "started_at": self.started_at,
            "wall_time": self.wall_time,
        },
    }

  def to_json(self) -> str:
    return json_str(self.to_dict(), indent=2)

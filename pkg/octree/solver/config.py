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
"""Solver knobs."""

from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class SolveConfig:
  """Every setting of a branch-and-cut run.

  Args:
    time_limit: wall-clock seconds for the whole run, warm start included.
    gap_tolerance: stop once 100 * (UB - LB) / UB falls to 100 times this.
    lam: split penalty lambda in [0, 1).
    zero_threshold: a feature counts as unused in an LP solution when the
                    sum of its b values is at most this.
    max_branch_nodes: optional cap on the number of branching nodes.
    node_limit: optional cap on processed search nodes.
    fractional_benders: also separate exact min-cut rows at LP points whose
                        tree structure is fractional.

  """
  time_limit: float = 900.0
  gap_tolerance: float = 0.0
  lam: float = 0.0
  enable_conflict_cuts: bool = True
  enable_feature_cuts: bool = True
  enable_warm_start: bool = True
  enable_node_heuristic: bool = True
  seed: int = 0
  zero_threshold: float = 1e-6
  max_branch_nodes: Optional[int] = None
  node_limit: Optional[int] = None
  lp_iteration_limit: int = 50000
  feature_cut_every: int = 10
  heuristic_every: int = 50
  cut_pool_limit: int = 5000
  max_cut_rounds: int = 5
  feature_increment: int = 5
  rf_trees: int = 100
  sub_mip_time: float = 5.0
  sub_mip_nodes: int = 500
  fractional_benders: bool = False

  def __post_init__(self):
    if not self.time_limit > 0:
      raise ValueError("time_limit must be positive, got {}".format(
          self.time_limit))
    if not 0 <= self.gap_tolerance < 1:
      raise ValueError("gap_tolerance must lie in [0, 1), got {}".format(
          self.gap_tolerance))
    if not 0 <= self.lam < 1:
      raise ValueError("lambda must lie in [0, 1), got {}".format(self.lam))
    if self.zero_threshold < 0:
      raise ValueError("zero_threshold must be non-negative.")
    if self.max_branch_nodes is not None and self.max_branch_nodes < 0:
      raise ValueError("max_branch_nodes must be non-negative.")
    if self.node_limit is not None and self.node_limit < 1:
      raise ValueError("node_limit must be positive.")
    for k in ("lp_iteration_limit", "feature_cut_every", "heuristic_every",
              "rf_trees", "sub_mip_nodes"):
      if getattr(self, k) < 1:
        raise ValueError("{} must be positive.".format(k))
    for k in ("cut_pool_limit", "max_cut_rounds", "feature_increment"):
      if getattr(self, k) < 0:
        raise ValueError("{} must be non-negative.".format(k))
    if not self.sub_mip_time > 0:
      raise ValueError("sub_mip_time must be positive.")

  def sub_mip(self) -> "SolveConfig":
    """Settings of the short-horizon solves run by the node heuristic."""
    return replace(self,
                   time_limit=self.sub_mip_time,
                   node_limit=self.sub_mip_nodes,
                   enable_warm_start=False,
                   enable_node_heuristic=False)

  def with_time(self, seconds: float) -> "SolveConfig":
    return replace(self, time_limit=max(seconds, 1e-3))

  def to_dict(self) -> Dict[str, Any]:
    return asdict(self)

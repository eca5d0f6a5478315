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
"""Tests for solver settings."""

import pytest

from octree.solver import SolveConfig


def test_defaults():
  config = SolveConfig()
  assert config.time_limit == 900.0
  assert config.gap_tolerance == 0.0
  assert config.enable_conflict_cuts and config.enable_feature_cuts
  assert config.max_branch_nodes is None
  assert config.to_dict()["zero_threshold"] == 1e-6


@pytest.mark.parametrize("kwargs", [
    dict(time_limit=0),
    dict(gap_tolerance=-0.1),
    dict(gap_tolerance=1.0),
    dict(lam=1.0),
    dict(lam=-0.5),
    dict(zero_threshold=-1e-3),
    dict(max_branch_nodes=-1),
    dict(node_limit=0),
    dict(heuristic_every=0),
    dict(cut_pool_limit=-1),
    dict(sub_mip_time=0),
])
def test_validation(kwargs):
  with pytest.raises(ValueError):
    SolveConfig(**kwargs)


def test_sub_mip():
  config = SolveConfig(time_limit=60, sub_mip_time=2.5, sub_mip_nodes=10,
                       lam=0.1)
  sub = config.sub_mip()
  assert sub.time_limit == 2.5
  assert sub.node_limit == 10
  assert not sub.enable_warm_start
  assert not sub.enable_node_heuristic
  assert sub.lam == 0.1

  # the original is untouched
  assert config.enable_node_heuristic


def test_with_time():
  config = SolveConfig()
  assert config.with_time(12.0).time_limit == 12.0
  assert config.with_time(-3.0).time_limit == pytest.approx(1e-3)

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
"""Tests for exhaustive tree enumeration."""

import pytest

import octree.dataset as d
import octree.oracle as o
from octree.tree import MetricError, MetricSpec, Role


@pytest.mark.parametrize("depth, n_features, n_classes, expected", [
    (1, 2, 2, 2 + 2 * 4),
    (1, 3, 3, 3 + 3 * 9),
    (2, 2, 2, 2 + 2 * 10**2),
])
def test_tree_count(depth, n_features, n_classes, expected):
  trees = list(o.enumerate_trees(depth, n_features, n_classes))
  assert len(trees) == expected
  assert len(set(trees)) == expected


def test_example(example):
  result = o.enumerate_optimal(example, 2, MetricSpec())
  assert result.objective == 3.0
  assert result.count == 2 + 4 * (2 + 4 * 4)**2
  assert result.matches(3.0 + 1e-12)
  assert not result.matches(2.0)
  assert result.to_dict()["objective"] == 3.0


def test_depth_one(example):
  result = o.enumerate_optimal(example, 1, MetricSpec())
  assert result.objective == 3.0
  assert result.tree.features() == [3]


def test_split_penalty(separable):
  result = o.enumerate_optimal(separable, 2, MetricSpec(), lam=0.5)
  # one split gains 0.5 * 2 and costs 0.5
  assert result.objective == pytest.approx(0.5 * 8 - 0.5)
  assert result.tree.splits() == 1


def test_branch_cap(example):
  result = o.enumerate_optimal(example, 2, MetricSpec(), max_branch_nodes=0)
  assert result.tree.node(1).role is Role.LEAF
  assert result.objective == 2.0


def test_degenerate_features_never_split():
  data = d.UniqueDataset.from_arrays([[0, 1], [1, 1]], [0, 1])
  data = d.UniqueDataset(data.X, data.y, data.w, data.origin_map, 2,
                         degenerate=(True, False))
  result = o.enumerate_optimal(data, 1, MetricSpec())
  assert result.objective == 1.0
  assert result.tree.splits() == 0


def test_limits(random_unique):
  with pytest.raises(o.OracleLimitError):
    o.enumerate_optimal(random_unique(0, 10, 9), 1, MetricSpec())
  with pytest.raises(o.OracleLimitError):
    o.enumerate_optimal(random_unique(0, 10, 3), 3, MetricSpec())
  with pytest.raises(o.OracleLimitError):
    o.enumerate_optimal(random_unique(0, 64, 8), 1, MetricSpec())
  with pytest.raises(MetricError):
    o.enumerate_optimal(random_unique(0, 10, 3, n_classes=3), 1,
                        MetricSpec.from_name("mcc"))

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
"""Tests for solve results."""

import json

import numpy as np
import pytest

import octree.formulation as f
from octree.solver import SolveResult, compute_gap, extract_tree
from octree.tree import ClassTree, MetricSpec, TreeError


@pytest.mark.parametrize("ub, lb, expected", [
    (4.0, 3.0, 25.0),
    (3.0, 3.0, 0.0),
    (0.0, 0.0, 0.0),
    (0.0, -1.0, 100.0),
    (-2.0, -3.0, 50.0),
    (float("inf"), 1.0, 100.0),
    (1.0, float("-inf"), 100.0),
])
def test_compute_gap(ub, lb, expected):
  assert compute_gap(ub, lb) == pytest.approx(expected)


def test_gap_never_negative():
  assert compute_gap(3.0, 3.0 + 1e-12) == 0.0


def test_result_fields():
  tree = ClassTree.constant(2, 1, 4)
  result = SolveResult(tree, 3.0, 4.0, "time_limit", nodes=7, cuts={
      "benders": 2,
      "conflict": 1
  })
  assert result.lb == 3.0
  assert result.ub == 4.0
  assert result.gap == pytest.approx(25.0)
  assert not result.optimal

  d = result.to_dict()
  assert set(d) == {"result", "log"}
  assert d["result"]["status"] == "time_limit"
  assert d["result"]["nodes"] == 7
  assert list(d["result"]["cuts"]) == ["benders", "conflict"]
  assert ClassTree.from_dict(d["result"]["tree"]) == tree
  assert "wall_time" in d["log"]
  assert json.loads(result.to_json()) == json.loads(json.dumps(d))


def test_result_equality_ignores_timing():
  tree = ClassTree.constant(1, 0)
  a = SolveResult(tree, 2.0, 2.0, "optimal", wall_time=1.0)
  b = SolveResult(tree, 2.0, 2.0, "optimal", wall_time=5.0)
  assert a == b
  assert a.optimal
  assert a.gap == 0.0


def test_objective_above_bound():
  with pytest.raises(ValueError):
    SolveResult(ClassTree.constant(1, 0), 5.0, 4.0, "optimal")


def test_extract_tree(example):
  model, art = f.build_benders_master(example, 1, 0.0, MetricSpec())
  tree = ClassTree.constant(1, 1, 4)
  values = np.zeros(model.num_variables)
  f.tree_values(art.tree, tree, values)
  assert extract_tree(values, art, 4) == tree

  with pytest.raises(TreeError):
    extract_tree(values[:-1], art)

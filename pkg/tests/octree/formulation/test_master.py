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
"""Tests for the Benders master and its cut rows."""

import json

import numpy as np
import pytest

import octree.dataset as d
import octree.formulation as f
import octree.formulation.master as fm
import octree.tree as t
from octree.tree import Metric, MetricSpec, Node


def test_build(example):
  model, art = f.build_benders_master(example, 2, 0.0, MetricSpec())
  assert len(art.g) == example.n_unique
  assert art.depth == 2
  assert art.num_variables == model.num_variables
  assert art.lam == 0.0
  assert art.max_branch_nodes is None
  assert not any(r.family == "benders" for r in model.constraints)

  priority = art.priority()
  assert priority[art.tree.b[1, 0]] == fm.PRIORITY_B
  assert priority[art.tree.p[4]] == fm.PRIORITY_P
  assert priority[art.g[0]] == fm.PRIORITY_G


def test_build_rejects(example):
  with pytest.raises(t.TreeError):
    f.build_benders_master(example, 2, 1.0, MetricSpec())

  three = d.UniqueDataset.from_arrays([[0], [1], [1]], [0, 1, 2])
  with pytest.raises(t.MetricError):
    f.build_benders_master(three, 1, 0.0, MetricSpec(Metric.MCC))


def test_branch_cap_and_degenerate():
  data = d.UniqueDataset(np.array([[0, 1], [0, 0]]), [0, 1], [1, 1],
                         ((0,), (1,)), 2, degenerate=(True, False))
  model, art = f.build_benders_master(data, 1, 0.0, MetricSpec(), 0)
  assert art.max_branch_nodes == 0
  assert model.variable(art.tree.b[1, 0]).ub == 0.0
  assert "max_branch" in [r.name for r in model.constraints]


def test_cut_capacity(example):
  model, art = f.build_benders_master(example, 1, 0.0, MetricSpec())
  tv = art.tree

  assert f.cut_capacity(art, example, 0, [0]).terms == {}
  assert f.cut_capacity(art, example, 0, [0]).constant == 1.0

  # x_0 = (0, 1, 0, 0), label 0
  cap = f.cut_capacity(art, example, 0, [0, 1])
  assert cap.constant == 0.0
  assert set(cap.terms) == {tv.b[1, 0], tv.b[1, 1], tv.b[1, 2], tv.b[1, 3],
                            tv.c[1, 0]}

  cap = f.cut_capacity(art, example, 0, [0, 1, 2])
  assert set(cap.terms) == {tv.b[1, 1], tv.c[1, 0], tv.c[2, 0]}


def test_cut_sets_are_checked(example):
  _, art = f.build_benders_master(example, 1, 0.0, MetricSpec())
  with pytest.raises(ValueError):
    f.cut_capacity(art, example, 0, [1])
  with pytest.raises(ValueError):
    f.cut_capacity(art, example, 0, [0, 9])


def test_benders_cut_separates_misclassified(example):
  model, art = f.build_benders_master(example, 1, 0.0, MetricSpec())
  tree = t.ClassTree.from_roles(1, {
      1: Node.branch(3),
      2: Node.leaf(0),
      3: Node.leaf(1)
  }, 4)
  values = np.zeros(model.num_variables)
  f.tree_values(art.tree, tree, values)
  values[list(art.g)] = 1.0

  # instance 1 has label 1 but reaches leaf 2, which predicts 0
  row = f.benders_cut(model, art, example, 1, [0, 1, 2])
  assert row.family == "benders"
  assert row.name == "benders_1_0_1_2"
  assert row.violation(values) == pytest.approx(1.0)

  row = f.benders_cut(model, art, example, 0, [0, 1, 2])
  assert row.violation(values) <= 0


def test_symbols(example):
  model, art = f.build_benders_master(example, 1, 0.0,
                                      MetricSpec(Metric.GMEAN))
  doc = json.loads(art.to_json(model))
  assert doc["objective"] == "gmean"
  assert doc["depth"] == 1
  assert doc["symbols"]["b"]["1_3"] == "b_1_3"
  assert doc["symbols"]["g"] == ["g_0", "g_1", "g_2", "g_3"]
  assert doc["symbols"]["g2"] == "g2"
  assert "eta" in doc["symbols"]

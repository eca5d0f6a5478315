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
"""Tests for Benders, conflict and feature-activated cut separation."""

import networkx as nx
import numpy as np
import pytest

import octree.formulation as f
import octree.heuristics as h
import octree.solver.cuts as c
import octree.tree as t
from octree.oracle import enumerate_trees
from octree.tree import MetricSpec, Node


@pytest.fixture
def master(example):
  model, art = f.build_benders_master(example, 1, 0.0, MetricSpec())
  return model, art


def stump_values(model, art, feature):
  tree = t.ClassTree.from_roles(1, {
      1: Node.branch(feature),
      2: Node.leaf(0),
      3: Node.leaf(1)
  }, 4)
  values = np.zeros(model.num_variables)
  f.tree_values(art.tree, tree, values)
  values[list(art.g)] = 1.0
  return values


def test_static_conflict_cuts(example, master):
  model, art = master
  cuts = c.static_conflict_cuts(example)
  assert len(cuts) == 1

  cut = cuts[0]
  assert cut.members == (0, 1)
  assert cut.class_sizes == (1, 1)
  assert (cut.rhs, cut.coefficient, cut.family) == (1, 1, "conflict")

  row = cut.to_row(model, art)
  assert row.name == "conflict_0_1"
  assert row.family == "conflict"
  assert row.coefs == ((art.g[0], 1.0), (art.g[1], 1.0))
  assert row.rhs == 1.0


def test_no_conflicts(separable):
  assert c.static_conflict_cuts(separable) == []


def test_benders_rows_at_integral_points(example, master):
  model, art = master
  values = stump_values(model, art, 3)
  assert c.structure_integral(values, art)

  rows = c.benders_rows(model, values, art, example)
  assert [r.name for r in rows] == ["benders_1_0_1_2"]
  assert rows[0].violation(values) == pytest.approx(1.0)

  assert c.separate_benders(values, art, example, 1) == frozenset({0, 1, 2})
  assert c.separate_benders(values, art, example, 3) is None

  # nothing to cut once the misclassified instance is dropped
  values[art.g[1]] = 0.0
  assert c.benders_rows(model, values, art, example) == []


def test_benders_needs_integral_structure(example, master):
  model, art = master
  values = stump_values(model, art, 3)
  values[art.tree.b[1, 3]] = 0.5
  assert not c.structure_integral(values, art)
  with pytest.raises(ValueError):
    c.benders_rows(model, values, art, example)
  with pytest.raises(ValueError):
    c.separate_benders(values, art, example, 0)


def max_flow(values, art, data, i):
  tv = art.tree
  topo = tv.topology
  x, label = data.X[i], int(data.y[i])
  G = nx.DiGraph()
  G.add_edge("s", 1, capacity=1.0)
  for n in topo.nodes:
    G.add_edge(n, "t", capacity=float(values[tv.c[n, label]]))
    if not topo.is_leaf(n):
      for child, side in ((2 * n, 0), (2 * n + 1, 1)):
        cap = sum(values[tv.b[n, f]]
                  for f in range(tv.n_features)
                  if x[f] == side)
        G.add_edge(n, child, capacity=float(cap))
  return nx.maximum_flow_value(G, "s", "t")


@pytest.mark.parametrize("seed", range(8))
def test_min_cut_matches_max_flow(random_unique, seed):
  data = random_unique(seed, 10, 3)
  model, art = f.build_benders_master(data, 2, 0.0, MetricSpec())
  values = np.random.RandomState(seed).uniform(0, 1, model.num_variables)

  for i in range(data.n_unique):
    capacity, S = c.min_cut(values, art, data, i)
    assert capacity == pytest.approx(max_flow(values, art, data, i))
    assert f.cut_capacity(art, data, i, S).value(values) == pytest.approx(
        min(capacity, 1.0))


def test_min_cut_rows(example, master):
  model, art = master
  values = stump_values(model, art, 3)
  values[art.tree.b[1, 3]] = 0.6
  values[art.tree.b[1, 1]] = 0.4

  rows = c.min_cut_rows(model, values, art, example)
  for row in rows:
    assert row.family == "benders"
    assert row.violation(values) > c.VIOLATION_TOL

  integral = stump_values(model, art, 3)
  assert [r.name for r in c.min_cut_rows(model, integral, art, example)
         ] == ["benders_1_0_1_2"]


def test_feature_activated_cut(example, master):
  model, art = master
  tv = art.tree
  values = np.zeros(model.num_variables)
  values[tv.b[1, 1]] = 0.5
  values[tv.b[1, 2]] = 0.5
  values[art.g[2]] = 1.0
  values[art.g[3]] = 1.0

  assert c.unused_features(values, art, 1e-6) == (0, 3)
  values[tv.b[1, 0]] = 0.2
  assert c.unused_features(values, art, 1e-6) == (3,)

  cuts = c.separate_feature_activated(values, art, example)
  assert len(cuts) == 1
  cut = cuts[0]
  assert cut.members == (2, 3)
  assert cut.features == (3,)
  assert cut.family == "feature"
  assert cut.violation(values, art) == pytest.approx(1.0)

  row = cut.to_row(model, art)
  assert row.name == "feature_2_3__3"
  assert row.rhs == 1.0
  assert dict(row.coefs) == {art.g[2]: 1.0, art.g[3]: 1.0, tv.b[1, 3]: -1.0}

  # a split on the dropped feature relaxes the cut
  values[tv.b[1, 3]] = 1.0
  assert c.separate_feature_activated(values, art, example) == []


def test_feature_cuts_skip_static_groups(example, master):
  model, art = master
  values = np.zeros(model.num_variables)
  values[art.tree.b[1, 0]] = 1.0
  values[list(art.g)] = 1.0
  cuts = c.separate_feature_activated(values, art, example)
  assert [cut.members for cut in cuts] == [(2, 3)]
  assert cuts[0].features == (1, 2, 3)


def test_cut_pool():
  a = c.ConflictCut((0, 1), (1, 1))
  b = c.ConflictCut((0, 1), (1, 1), (3,))
  d = c.ConflictCut((2, 3), (1, 1), (3,))

  pool = c.CutPool(2)
  assert pool.add_all([a, a, b]) == [a, b]
  assert len(pool) == 2
  assert pool.full
  assert b in pool
  assert not pool.add(d)
  assert d not in pool


TREES = list(enumerate_trees(2, 4, 2))


# 50 datasets with 20 trees each.
@pytest.mark.parametrize("seed", range(50))
def test_cuts_hold_at_every_tree(random_unique, seed):
  rng = np.random.RandomState(seed)
  data = random_unique(seed, 12, 4)
  model, art = f.build_benders_master(data, 2, 0.0, MetricSpec())
  conflicts = c.static_conflict_cuts(data)

  for k in rng.choice(len(TREES), size=20, replace=False):
    tree = TREES[k]
    values = h.tree_to_assignment(tree, art, data)
    for cut in conflicts:
      assert cut.violation(values, art) <= 0, tree
    assert c.separate_feature_activated(values, art, data) == [], tree
    assert c.benders_rows(model, values, art, data) == [], tree


@pytest.mark.parametrize("seed", range(10))
def test_path_trace_agrees_with_min_cut(random_unique, seed):
  rng = np.random.RandomState(seed)
  data = random_unique(seed, 10, 3)
  model, art = f.build_benders_master(data, 2, 0.0, MetricSpec())
  trees = list(enumerate_trees(2, 3, 2))
  values = np.zeros(model.num_variables)
  f.tree_values(art.tree, trees[rng.randint(len(trees))], values)
  values[list(art.g)] = rng.randint(0, 2, data.n_unique)

  for i in range(data.n_unique):
    capacity, _ = c.min_cut(values, art, data, i)
    violated = values[art.g[i]] > capacity + c.VIOLATION_TOL
    assert (c.separate_benders(values, art, data, i) is not None) == violated

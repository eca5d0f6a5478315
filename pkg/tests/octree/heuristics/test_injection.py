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
"""Tests for warm-start injection."""

import itertools

import numpy as np
import pytest

import octree.formulation as f
import octree.heuristics as h
import octree.solver as s
from octree.oracle import enumerate_optimal
from octree.tree import (ClassTree, MetricSpec, Node, Role, TreeError,
                         evaluate, objective_value)


def stump(feature, left=0, right=1, n_features=4):
  return ClassTree.from_roles(1, {
      1: Node.branch(feature),
      2: Node.leaf(left),
      3: Node.leaf(right)
  }, n_features)


def test_lift_tree(example):
  tree = stump(3)
  lifted = h.lift_tree(tree, 3)
  assert lifted.depth == 3
  assert lifted.node(2) == Node.leaf(0)
  assert all(lifted.node(n).role is Role.PRUNED for n in range(4, 16))
  np.testing.assert_array_equal(lifted.predict(example.X),
                                tree.predict(example.X))
  assert h.lift_tree(tree, 1) == tree

  with pytest.raises(TreeError):
    h.lift_tree(lifted, 2)


@pytest.mark.parametrize("name", ["accuracy", "f1", "ba", "mcc"])
def test_tree_to_assignment(example, name):
  spec = MetricSpec.from_name(name)
  model, art = f.build_benders_master(example, 2, 0.1, spec)
  tree = stump(3)

  values = h.tree_to_assignment(tree, art, example)
  assert model.check_feasible(values) == []
  expected = objective_value(evaluate(tree, example), spec, 0.1, 1)
  assert model.objective_value(values) == pytest.approx(expected)
  assert values[list(art.g)].tolist() == [1.0, 0.0, 1.0, 1.0]


def test_negative_mcc_has_no_encoding(separable):
  model, art = f.build_benders_master(separable, 1, 0.0,
                                      MetricSpec.from_name("mcc"))
  with pytest.raises(f.EncodingError):
    h.tree_to_assignment(stump(1, 1, 0, 3), art, separable)


def test_warm_start_state():
  state = h.WarmStartState()
  t2 = ClassTree.constant(2, 0)
  state.record(2, t2, [3, 1], t2, t2)
  assert state.features[2] == (1, 3)

  with pytest.raises(ValueError):
    state.record(3, ClassTree.constant(3, 0), [1], t2, t2)
  with pytest.raises(TreeError):
    state.record(3, t2, [1, 3, 4], t2, t2)

  state.record(3, ClassTree.constant(3, 1), [1, 3, 4], t2, t2)
  assert state.to_dict()["3"]["features"] == [1, 3, 4]
  assert list(state.to_dict()) == ["2", "3"]


def test_feasible_solution_injection(random_unique):
  data = random_unique(0, 20, 6)
  ranking = h.FeatureRanking.from_importances([0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
  calls = []

  def solve(depth, features, start):
    calls.append((depth, features, start))
    return start

  state = h.WarmStartState()
  trees = h.feasible_solution_injection(data, 3, ranking, 1, solve, state)

  assert [(d, feats is None) for d, feats, _ in calls] == [(2, False),
                                                           (2, True),
                                                           (3, False),
                                                           (3, True)]
  cart3 = h.fit_cart(data, 3)
  f2, f3 = calls[0][1], calls[2][1]
  assert set(cart3.features()) <= set(f2)
  assert set(f2) <= set(f3)
  assert len(f3) == min(len(f2) + 1, data.n_features)

  assert calls[0][2] == h.fit_cart(data, 2)
  assert calls[2][2] == h.lift_tree(trees[0], 3)
  assert [t.depth for t in trees] == [2, 3]
  assert sorted(state.trees) == [2, 3]


def test_injection_arguments(random_unique):
  data = random_unique(0, 10, 3)
  ranking = h.FeatureRanking.from_importances([1.0, 0.0, 0.0])
  with pytest.raises(ValueError):
    h.feasible_solution_injection(data, 1, ranking, 1, None)
  with pytest.raises(ValueError):
    h.feasible_solution_injection(data, 2, ranking, -1, None)


def test_history_set():
  history = h.HistorySet()
  assert history.add([3, 1])
  assert not history.add((1, 3, 3))
  assert [1, 3] in history
  assert (1,) not in history
  assert len(history) == 1


def test_candidate_features(example):
  model, art = f.build_benders_master(example, 2, 0.0, MetricSpec())
  tv = art.tree
  values = np.zeros(model.num_variables)
  values[tv.b[1, 2]] = 0.7
  values[tv.b[2, 3]] = 0.4
  values[tv.b[3, 3]] = 0.4

  np.testing.assert_allclose(h.feature_scores(values, art), [0, 0, 0.7, 0.8])
  assert h.candidate_features(values, art, [0], width=1) == (0, 3)
  assert h.candidate_features(values, art, [], width=2) == (2, 3)
  # ties fall back to the lowest index
  assert h.candidate_features(values, art, [2, 3], width=1) == (0, 2, 3)


def test_node_heuristic_injection(example):
  model, art = f.build_benders_master(example, 1, 0.0, MetricSpec())
  values = np.zeros(model.num_variables)
  history = h.HistorySet()
  asked = []

  def solve_sub(features, start):
    asked.append(features)
    return stump(3)

  found = h.node_heuristic_injection(values, art, None, history, example,
                                     model, solve_sub, 2.0)
  assert found is not None
  assert model.objective_value(found) == pytest.approx(3.0)
  assert asked == [(0, 1, 2)]
  assert (0, 1, 2) in history

  # the same subset is never solved twice
  assert h.node_heuristic_injection(values, art, None, history, example,
                                    model, solve_sub, 2.0) is None
  assert len(asked) == 1

  # no improvement on the incumbent
  assert h.node_heuristic_injection(values, art, stump(3), history, example,
                                    model, solve_sub, 3.0) is None
  assert asked[-1] == (0, 1, 2, 3)

  assert h.node_heuristic_injection(values, art, stump(1), h.HistorySet(),
                                    example, model, lambda *_: None) is None


def labelings_by_hand(shape, data, spec, lam):
  best = -np.inf
  leaves = sorted(shape.leaves)
  for labels in itertools.product(*(shape.leaves[n] for n in leaves)):
    tree = shape.tree(dict(zip(leaves, labels)), data.n_features)
    counts = evaluate(tree, data, spec.kappa)
    if spec.name == "mcc" and counts.tp * counts.tn < counts.fp * counts.fn:
      continue
    best = max(best, objective_value(counts, spec, lam, tree.splits()))
  return best


SHAPES = [
    f.TreeShape(1, {1: 0}, {2: (0, 1), 3: (0, 1)}),
    f.TreeShape(2, {1: 2}, {2: (0, 1), 3: (1,)}),
    f.TreeShape(2, {1: 0, 2: 1, 3: 2}, {4: (0, 1), 5: (0, 1), 6: (0, 1),
                                        7: (0, 1)}),
]


@pytest.mark.parametrize("shape", SHAPES)
@pytest.mark.parametrize("name", ["accuracy", "f1", "mcc", "ba", "gmean",
                                  "fm", "iou", "dor"])
@pytest.mark.parametrize("seed", range(3))
def test_best_labeling(random_unique, shape, name, seed):
  data = random_unique(seed, 12, 3)
  spec = MetricSpec.from_name(name)
  tree = h.best_labeling(shape, data, spec, 0.1)

  expected = labelings_by_hand(shape, data, spec, 0.1)
  if not np.isfinite(expected):
    assert tree is None
    return
  assert objective_value(evaluate(tree, data), spec, 0.1,
                         tree.splits()) == pytest.approx(expected)
  assert {n: tree.node(n).value for n in shape.branches} == shape.branches
  for n, labels in shape.leaves.items():
    assert tree.node(n).value in labels


def test_best_labeling_instance_costs(random_unique):
  data = random_unique(5, 12, 3)
  spec = MetricSpec.from_name("icost",
                              kappa=np.linspace(0.5, 3.0, data.n_unique))
  shape = SHAPES[2]
  tree = h.best_labeling(shape, data, spec)
  counts = evaluate(tree, data, spec.kappa)
  assert objective_value(counts, spec, 0.0, 3) == pytest.approx(
      labelings_by_hand(shape, data, spec, 0.0))


def test_best_labeling_multiclass(random_unique):
  data = random_unique(1, 15, 3, n_classes=3)
  shape = f.TreeShape(1, {1: 1}, {2: (0, 1, 2), 3: (0, 2)})
  tree = h.best_labeling(shape, data, MetricSpec())
  assert evaluate(tree, data).correct_total == pytest.approx(
      labelings_by_hand(shape, data, MetricSpec(), 0.0))


def test_best_labeling_limit(monkeypatch, random_unique):
  monkeypatch.setattr(h.injection, "MAX_LABELINGS", 8)
  with pytest.raises(ValueError):
    h.best_labeling(SHAPES[2], random_unique(0, 12, 3), MetricSpec())


def tree_value(tree, data, spec):
  return objective_value(evaluate(tree, data), spec, 0.0, tree.splits())


@pytest.mark.parametrize("seed", range(3))
def test_depth_incremental_solves_never_lose_ground(random_unique, seed):
  data = random_unique(seed, 12, 3)
  spec = MetricSpec()
  state = h.WarmStartState()
  result = s.train(data, 3, spec, s.SolveConfig(time_limit=30, rf_trees=10),
                   state=state)

  assert sorted(state.trees) == [2, 3]
  for d in (2, 3):
    tree = state.trees[d]
    assert tree_value(tree, data, spec) >= \
        tree_value(state.full_starts[d], data, spec) - 1e-9
    model, art = f.build_benders_master(data, d, 0.0, spec)
    assert model.check_feasible(h.tree_to_assignment(tree, art, data)) == []

  lifted = h.lift_tree(state.trees[2], 3)
  assert state.sub_starts[3] == lifted
  assert tree_value(state.full_starts[3], data, spec) >= \
      tree_value(lifted, data, spec) - 1e-9
  assert tree_value(state.trees[3], data, spec) >= \
      tree_value(lifted, data, spec) - 1e-9
  assert result.tree == state.trees[3]
  assert result.objective == pytest.approx(tree_value(result.tree, data, spec))


@pytest.mark.parametrize("seed", range(4))
def test_node_heuristic_on_restricted_solves(random_unique, seed):
  data = random_unique(seed, 14, 5)
  spec = MetricSpec.from_name("f1")
  model, art = f.build_benders_master(data, 2, 0.0, spec)
  cfg = s.SolveConfig(time_limit=30,
                      enable_warm_start=False,
                      enable_node_heuristic=False)

  def solve_sub(features, start):
    return s.solve_restricted(data, 2, features, spec, cfg, start=start).tree

  values = np.zeros(model.num_variables)
  values[art.tree.b[1, seed % 5]] = 1.0
  incumbent = ClassTree.constant(2, 1, data.n_features)
  incumbent_objective = tree_value(incumbent, data, spec)

  found = h.node_heuristic_injection(values, art, incumbent, h.HistorySet(),
                                     data, model, solve_sub,
                                     incumbent_objective)
  if found is not None:
    assert model.check_feasible(found) == []
    assert model.objective_value(found) > incumbent_objective

  best = enumerate_optimal(data, 2, spec)
  assert h.node_heuristic_injection(values, art, best.tree, h.HistorySet(),
                                    data, model, solve_sub,
                                    best.objective) is None

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
"""Tests for the objective encodings.

Each encoding is checked against the closed-form objective on every
correct-classification pattern of small weighted datasets, both by
completing the auxiliaries and by maximizing with g fixed.

"""

import itertools

import numpy as np
import pytest

import octree.dataset as d
import octree.formulation as f
import octree.formulation.objectives as ob
import octree.tree as t
from octree.milp import LinearExpr, Model, Sense
from octree.solver.search import SearchStatus, solve_milp
from octree.tree import Metric, MetricSpec

KAPPA = (1.0, 0.5, 2.0, 3.0)


def specs(kappa):
  return [
      MetricSpec(),
      MetricSpec(Metric.FBETA, beta=2.0),
      MetricSpec(Metric.MCC),
      MetricSpec(Metric.BALANCED_ACCURACY),
      MetricSpec(Metric.COST, c_plus=2.0, c_minus=1.0),
      MetricSpec(Metric.INSTANCE_COST, kappa=kappa),
      MetricSpec(Metric.GMEAN),
      MetricSpec(Metric.FOWLKES_MALLOWS),
      MetricSpec(Metric.IOU),
      MetricSpec(Metric.DOR, dor_bound=20.0),
      MetricSpec(Metric.DOR, dor_bound=1.5),
      MetricSpec(Metric.COMBINATION, alpha1=1.0, alpha2=0.5),
  ]


SPECS = specs(KAPPA)


@pytest.fixture
def data():
  """Three positives (one of weight 2) and two negatives."""
  return d.UniqueDataset.from_arrays([[0, 0], [0, 1], [1, 0], [1, 1]],
                                     [1, 1, 0, 0], [1, 2, 1, 1])


def eight_rows():
  """Every vector over three features, with uneven weights."""
  X = list(itertools.product([0, 1], repeat=3))
  return d.UniqueDataset.from_arrays(X, [1, 0, 1, 1, 0, 0, 1, 0],
                                     [1, 3, 1, 2, 1, 2, 1, 1])


EIGHT_KAPPA = tuple(np.linspace(0.5, 3.0, 8))


def build(data, spec):
  model = Model()
  g = [model.add_binary("g_{}".format(i)) for i in range(data.n_unique)]
  objective = f.encode_objective(model, g, data, spec)
  return model, g, objective


def expected(data, spec, pattern):
  kappa = spec.kappa if spec.kappa is not None else KAPPA
  if len(kappa) != data.n_unique:
    kappa = EIGHT_KAPPA
  pred = np.where(np.array(pattern) == 1, data.y, 1 - data.y)
  counts = t.ConfusionCounts.from_predictions(data.y, pred, data.w,
                                              np.array(kappa))
  return counts, t.objective_value(counts, spec, 0.0, 0)


def check_exact(data, spec, pattern):
  model, g, _ = build(data, spec)
  for i, v in zip(g, pattern):
    model.fix(i, v)
  counts, want = expected(data, spec, pattern)
  result = solve_milp(model)

  if spec.kind is Metric.MCC and t.metric(counts, spec) < 0:
    assert result.status is SearchStatus.INFEASIBLE, pattern
    return
  assert result.status is SearchStatus.OPTIMAL, pattern
  assert result.objective == pytest.approx(want, abs=1e-6), pattern


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
def test_complete_matches_closed_form(data, spec):
  model, g, objective = build(data, spec)
  for pattern in itertools.product([0, 1], repeat=data.n_unique):
    counts, want = expected(data, spec, pattern)
    values = np.zeros(model.num_variables)
    values[g] = pattern

    if spec.kind is Metric.MCC and t.metric(counts, spec) < 0:
      with pytest.raises(f.EncodingError):
        objective.complete(values, counts.tp, counts.tn)
      continue

    objective.complete(values, counts.tp, counts.tn)
    assert model.check_feasible(values, tol=1e-6) == [], pattern
    assert model.objective_value(values) == pytest.approx(want), pattern


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
def test_encoding_is_exact(data, spec):
  """With g fixed, the best objective the rows allow is the closed form."""
  for pattern in itertools.product([0, 1], repeat=data.n_unique):
    check_exact(data, spec, pattern)


@pytest.mark.parametrize("spec", specs(EIGHT_KAPPA), ids=lambda s: s.name)
def test_encoding_is_exact_on_every_pattern_of_eight_rows(spec):
  data = eight_rows()
  model, g, objective = build(data, spec)
  for pattern in itertools.product([0, 1], repeat=data.n_unique):
    counts, want = expected(data, spec, pattern)
    values = np.zeros(model.num_variables)
    values[g] = pattern
    if spec.kind is not Metric.MCC or t.metric(counts, spec) >= 0:
      objective.complete(values, counts.tp, counts.tn)
      assert model.check_feasible(values, tol=1e-6) == [], pattern
      assert model.objective_value(values) == pytest.approx(want), pattern
    check_exact(data, spec, pattern)


def test_lambda_penalizes_splits(data):
  model = Model()
  g = [model.add_binary("g_{}".format(i)) for i in range(data.n_unique)]
  splits = model.add_integer("splits", 0, 3)
  f.encode_objective(model, g, data, MetricSpec(), 0.25,
                     LinearExpr.var(splits))

  values = np.array([1, 1, 0, 1, 2], dtype=float)
  assert model.objective_value(values) == pytest.approx(0.75 * 4 - 0.5)


def test_binary_metrics_need_both_classes():
  one_class = d.UniqueDataset.from_arrays([[0], [1]], [1, 1], n_classes=2)
  model = Model()
  g = [model.add_binary("g_{}".format(i)) for i in range(2)]
  with pytest.raises(t.MetricError):
    f.encode_objective(model, g, one_class, MetricSpec(Metric.MCC))

  three = d.UniqueDataset.from_arrays([[0], [1], [1]], [0, 1, 2])
  model = Model()
  g = [model.add_binary("g_{}".format(i)) for i in range(3)]
  with pytest.raises(t.MetricError):
    f.encode_objective(model, g, three, MetricSpec(Metric.FBETA))
  f.encode_objective(model, g, three, MetricSpec())


def test_instance_cost_length(data):
  model = Model()
  g = [model.add_binary("g_{}".format(i)) for i in range(data.n_unique)]
  with pytest.raises(t.MetricError):
    f.encode_objective(model, g, data,
                       MetricSpec(Metric.INSTANCE_COST, kappa=(1.0,)))

  with pytest.raises(t.MetricError):
    f.encode_objective(model, g[:2], data, MetricSpec())


def test_complete_before_encode():
  with pytest.raises(f.EncodingError):
    f.make_objective(MetricSpec()).complete(np.zeros(3), 1, 1)


def test_every_metric_has_an_encoding():
  assert set(f.OBJECTIVES) == set(Metric)


def test_bit_helpers():
  assert [f.ceil_log2(x) for x in (1, 2, 3, 4, 5, 8, 9)] == [
      0, 1, 2, 2, 3, 3, 4
  ]
  with pytest.raises(ValueError):
    f.ceil_log2(0)

  assert ob.bits_of(6, 3) == [0, 1, 1]
  with pytest.raises(f.EncodingError):
    ob.bits_of(8, 3)


def test_mccormick_and_and_var():
  model = Model()
  x = model.add_variable("x", 0.0, 4.0)
  bit = model.add_binary("bit")
  y = f.mccormick(model, x, bit, 4.0, "y")
  a = model.add_binary("a")
  z = f.and_var(model, bit, a, "z")

  def feasible(xv, bv, yv, av, zv):
    return model.check_feasible(np.array([xv, bv, yv, av, zv])) == []

  assert feasible(3.0, 1, 3.0, 1, 1)
  assert feasible(3.0, 0, 0.0, 1, 0)
  assert not feasible(3.0, 1, 2.0, 1, 1)
  assert not feasible(3.0, 0, 1.0, 0, 0)
  assert not feasible(3.0, 1, 3.0, 1, 0)
  assert not feasible(3.0, 1, 3.0, 0, 1)


def test_count_terms(data):
  model = Model()
  g = [model.add_binary("g_{}".format(i)) for i in range(data.n_unique)]
  terms = ob.CountTerms(tuple(g), data.y, data.w, 2, LinearExpr())
  assert (terms.n_plus, terms.n_minus, terms.total) == (3, 2, 5)
  assert terms.tp().terms == {g[0]: 1.0, g[1]: 2.0}
  assert terms.tn().terms == {g[2]: 1.0, g[3]: 1.0}
  assert model.make_constraint(terms.correct(), Sense.LE, 5).coefs == (
      (0, 1.0), (1, 2.0), (2, 1.0), (3, 1.0))

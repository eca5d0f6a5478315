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
"""Tests for confusion counts, metrics and master objective values."""

import math

from hypothesis import given
import hypothesis.strategies as st
import numpy as np
import pytest
from sklearn import metrics as skm

import octree.tree as t
import octree.tree.metrics as tm
from octree.tree import Metric, MetricSpec


def counts(tp, tn, fp, fn):
  return t.ConfusionCounts(tp, tn, fp, fn)


def labels(tp, tn, fp, fn):
  """(y_true, y_pred) arrays with the given confusion matrix."""
  y = [1] * tp + [0] * tn + [0] * fp + [1] * fn
  pred = [1] * tp + [0] * tn + [1] * fp + [0] * fn
  return np.array(y), np.array(pred)


def value(kind, c, **params):
  return t.metric(c, MetricSpec(kind, **params))


def test_counts():
  c = counts(3, 4, 1, 2)
  assert (c.n_plus, c.n_minus, c.total, c.correct) == (5, 5, 10, 7)

  with pytest.raises(t.MetricError):
    counts(-1, 0, 0, 0)


def test_from_predictions():
  y, pred = labels(3, 4, 1, 2)
  c = t.ConfusionCounts.from_predictions(y, pred)
  assert c == counts(3, 4, 1, 2)

  w = np.arange(1, 11)
  c = t.ConfusionCounts.from_predictions(y, pred, w)
  assert c.tp == 1 + 2 + 3
  assert c.fn == 9 + 10


@given(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20),
       st.integers(0, 20))
def test_metrics_match_sklearn(tp, tn, fp, fn):
  if tp + tn + fp + fn == 0:
    return
  y, pred = labels(tp, tn, fp, fn)
  c = counts(tp, tn, fp, fn)

  assert value(Metric.ACCURACY, c) == pytest.approx(
      skm.accuracy_score(y, pred))
  assert value(Metric.FBETA, c, beta=2.0) == pytest.approx(
      skm.fbeta_score(y, pred, beta=2.0, zero_division=0))
  assert value(Metric.MCC, c) == pytest.approx(skm.matthews_corrcoef(y, pred),
                                               abs=1e-9)
  if tp + fp + fn > 0:
    assert value(Metric.IOU, c) == pytest.approx(skm.jaccard_score(y, pred))
  if tp + fn > 0 and tn + fp > 0:
    assert value(Metric.BALANCED_ACCURACY, c) == pytest.approx(
        skm.balanced_accuracy_score(y, pred))


def test_closed_forms():
  c = counts(3, 4, 1, 2)
  assert value(Metric.FBETA, c) == pytest.approx(2 / 3)
  assert value(Metric.MCC, c) == pytest.approx(10 / math.sqrt(600))
  assert value(Metric.GMEAN, c) == pytest.approx(math.sqrt(0.6 * 0.8))
  assert value(Metric.FOWLKES_MALLOWS, c) == pytest.approx(math.sqrt(0.45))
  assert value(Metric.IOU, c) == pytest.approx(0.5)
  assert value(Metric.DOR, c) == pytest.approx(6.0)
  assert value(Metric.COST, c, c_plus=2.0, c_minus=3.0) == pytest.approx(7.0)
  assert value(Metric.COMBINATION, c, alpha1=2.0,
               alpha2=0.5) == pytest.approx(2 * 2 / 3 + 0.5 * 0.7)


def test_fbeta_forms_agree():
  tp, tn, n_plus, n_minus = 3.0, 4.0, 5.0, 5.0
  precision = tp / (tp + n_minus - tn)
  recall = tp / n_plus
  for beta in (0.5, 1.0, 3.0):
    assert float(tm.fbeta(tp, tn, n_plus, n_minus, beta)) == pytest.approx(
        float(tm.fbeta_from_rates(precision, recall, beta)))


def test_zero_denominators():
  negatives = counts(0, 4, 0, 0)
  assert value(Metric.FBETA, negatives) == 0.0
  assert value(Metric.MCC, negatives) == 0.0
  assert value(Metric.IOU, negatives) == 0.0
  assert value(Metric.GMEAN, negatives) == 0.0
  assert value(Metric.BALANCED_ACCURACY, negatives) == 0.5

  perfect = counts(2, 2, 0, 0)
  assert value(Metric.DOR, perfect, dor_bound=50.0) == 50.0
  assert value(Metric.DOR, counts(100, 100, 1, 1), dor_bound=50.0) == 50.0


def test_instance_cost():
  spec = MetricSpec(Metric.INSTANCE_COST, kappa=(1.0, 2.0))
  c = t.ConfusionCounts(1, 1, 0, 1, kappa_reward=3.0, kappa_total=5.0)
  assert t.metric(c, spec) == 2.0
  assert t.objective_value(c, spec, 0.0, 0) == 3.0

  with pytest.raises(t.MetricError):
    t.metric(counts(1, 1, 0, 1), spec)

  with pytest.raises(t.MetricError):
    MetricSpec(Metric.INSTANCE_COST)

  with pytest.raises(t.MetricError):
    MetricSpec(Metric.INSTANCE_COST, kappa=(1.0, -1.0))


def test_objective_values():
  c = counts(3, 4, 1, 2)
  accuracy = MetricSpec()
  assert t.objective_value(c, accuracy, 0.1, 2) == pytest.approx(6.1)

  mcc = MetricSpec(Metric.MCC)
  assert t.objective_value(c, mcc, 0.0, 0) == pytest.approx(
      value(Metric.MCC, c)**2)
  assert t.objective_value(counts(1, 1, 4, 4), mcc, 0.0, 0) == 0.0

  gmean = MetricSpec(Metric.GMEAN)
  assert t.objective_value(c, gmean, 0.05, 1) == pytest.approx(0.48 - 0.05)

  cost = MetricSpec(Metric.COST, c_plus=2.0, c_minus=3.0)
  assert t.objective_value(c, cost, 0.0, 0) == pytest.approx(2 * 3 + 3 * 4)


def test_objective_array_is_vectorized():
  spec = MetricSpec(Metric.FOWLKES_MALLOWS)
  tp = np.array([0.0, 1.0, 3.0])
  tn = np.array([5.0, 2.0, 4.0])
  got = tm.objective_array(tp, tn, 5.0, 5.0, spec, 0.01, np.array([0, 1, 2]))
  want = [
      t.objective_value(counts(a, b, 5 - b, 5 - a), spec, 0.01, s)
      for a, b, s in zip(tp, tn, [0, 1, 2])
  ]
  np.testing.assert_allclose(got, want)


def test_multiclass_counts():
  c = t.ClassCounts((2.0, 1.0, 0.0), (3.0, 1.0, 2.0))
  assert t.metric(c, MetricSpec()) == pytest.approx(0.5)
  assert t.objective_value(c, MetricSpec(), 0.5, 2) == pytest.approx(0.5)

  with pytest.raises(t.MetricError):
    t.metric(c, MetricSpec(Metric.MCC))


def test_spec_from_name():
  assert MetricSpec.from_name("accuracy") == MetricSpec()

  f1 = MetricSpec.from_name("F1", beta=4.0)
  assert f1.kind is Metric.FBETA
  assert f1.beta == 1.0

  cost = MetricSpec.from_name("cost", c_plus=2.0, c_minus=None)
  assert (cost.c_plus, cost.c_minus) == (2.0, 1.0)
  assert cost.name == "cost"

  with pytest.raises(t.MetricError):
    MetricSpec.from_name("auc")


def test_spec_validation():
  for params in ({"beta": 0.0}, {"c_plus": -1.0}, {"alpha2": -0.5},
                 {"dor_bound": 0.0}):
    with pytest.raises(t.MetricError):
      MetricSpec(**params)

  MetricSpec().check_classes(3)
  with pytest.raises(t.MetricError):
    MetricSpec(Metric.FBETA).check_classes(3)


def test_with_kappa():
  spec = MetricSpec(Metric.INSTANCE_COST, kappa=(1.0,)).with_kappa([2, 3])
  assert spec.kappa == (2.0, 3.0)
  assert spec.kind is Metric.INSTANCE_COST

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
"""Confusion counts and every metric the formulations can optimize.

`metric` returns a metric in its usual definition. `objective_value` returns
the quantity the matching MIP master maximizes (squared forms for MCC, G-Mean
and Fowlkes-Mallows, reward forms for the cost-sensitive variants) minus the
split penalty. Both accept numpy arrays of counts so the oracle can score many
trees at once.

"""

import enum
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np

from octree.tree.errors import MetricError

Number = Union[float, np.ndarray]


@dataclass(frozen=True)
class ConfusionCounts:
  """Weighted binary confusion matrix. Class 1 is the positive class.

  `kappa_reward` and `kappa_total` are only set when instance costs were
  supplied to evaluate: sum(kappa_i w_i g_i) and sum(kappa_i w_i).

  """
  tp: float
  tn: float
  fp: float
  fn: float
  kappa_reward: Optional[float] = None
  kappa_total: Optional[float] = None

  def __post_init__(self):
    if min(self.tp, self.tn, self.fp, self.fn) < 0:
      raise MetricError("Confusion counts must be non-negative: {}".format(
          self))

  @property
  def n_plus(self) -> float:
    return self.tp + self.fn

  @property
  def n_minus(self) -> float:
    return self.tn + self.fp

  @property
  def total(self) -> float:
    return self.n_plus + self.n_minus

  @property
  def correct(self) -> float:
    return self.tp + self.tn

  @staticmethod
  def from_predictions(y: np.ndarray,
                       pred: np.ndarray,
                       w: Optional[np.ndarray] = None,
                       kappa: Optional[np.ndarray] = None) -> "ConfusionCounts":
    y = np.asarray(y)
    pred = np.asarray(pred)
    w = np.ones(len(y)) if w is None else np.asarray(w, dtype=float)
    hit = y == pred
    pos = y == 1

    def s(mask):
      return float(w[mask].sum())

    reward, total = None, None
    if kappa is not None:
      kw = np.asarray(kappa, dtype=float) * w
      reward, total = float(kw[hit].sum()), float(kw.sum())

    return ConfusionCounts(tp=s(hit & pos),
                           tn=s(hit & ~pos),
                           fp=s(~hit & ~pos),
                           fn=s(~hit & pos),
                           kappa_reward=reward,
                           kappa_total=total)


@dataclass(frozen=True)
class ClassCounts:
  """Per-class weighted correct counts for multiclass trees."""
  correct: Tuple[float, ...]
  totals: Tuple[float, ...]

  @property
  def total(self) -> float:
    return float(sum(self.totals))

  @property
  def correct_total(self) -> float:
    return float(sum(self.correct))

  @staticmethod
  def from_predictions(y: np.ndarray,
                       pred: np.ndarray,
                       n_classes: int,
                       w: Optional[np.ndarray] = None) -> "ClassCounts":
    y = np.asarray(y)
    w = np.ones(len(y)) if w is None else np.asarray(w, dtype=float)
    hit = y == np.asarray(pred)
    correct = tuple(float(w[hit & (y == k)].sum()) for k in range(n_classes))
    totals = tuple(float(w[y == k].sum()) for k in range(n_classes))
    return ClassCounts(correct, totals)


Counts = Union[ConfusionCounts, ClassCounts]


class Metric(enum.Enum):
  ACCURACY = "accuracy"
  FBETA = "fbeta"
  MCC = "mcc"
  BALANCED_ACCURACY = "ba"
  COST = "cost"
  INSTANCE_COST = "icost"
  GMEAN = "gmean"
  FOWLKES_MALLOWS = "fm"
  IOU = "iou"
  DOR = "dor"
  COMBINATION = "combo"


@dataclass(frozen=True)
class MetricSpec:
  """A metric variant and its parameters.

  Args:
    kind: the metric.
    beta: F-beta weight, also the inner F-beta of the combination.
    c_plus, c_minus: misclassification costs of positives and negatives.
    kappa: per-unique-instance cost weights for the instance cost variant.
    alpha1, alpha2: combination weights of F-beta and accuracy.
    dor_bound: upper bound on the diagnostic odds ratio.

  """
  kind: Metric = Metric.ACCURACY
  beta: float = 1.0
  c_plus: float = 1.0
  c_minus: float = 1.0
  kappa: Optional[Tuple[float, ...]] = field(default=None, compare=False)
  alpha1: float = 1.0
  alpha2: float = 1.0
  dor_bound: float = 1000.0

  def __post_init__(self):
    if self.beta <= 0:
      raise MetricError("beta must be positive, got {}".format(self.beta))
    if self.c_plus < 0 or self.c_minus < 0:
      raise MetricError("Costs must be non-negative.")
    if self.alpha1 < 0 or self.alpha2 < 0:
      raise MetricError("Combination weights must be non-negative.")
    if self.dor_bound <= 0:
      raise MetricError("The DOR bound must be positive.")
    if self.kind is Metric.INSTANCE_COST:
      if self.kappa is None:
        raise MetricError("The instance cost metric needs kappa weights.")
      if any(k < 0 or not np.isfinite(k) for k in self.kappa):
        raise MetricError("kappa weights must be finite and non-negative.")

  @property
  def name(self) -> str:
    return self.kind.value

  @property
  def binary_only(self) -> bool:
    return self.kind is not Metric.ACCURACY

  def check_classes(self, n_classes: int) -> None:
    if self.binary_only and n_classes != 2:
      raise MetricError("Metric {} needs binary labels, got {} classes".format(
          self.name, n_classes))

  def with_kappa(self, kappa: Sequence[float]) -> "MetricSpec":
    return MetricSpec(self.kind, self.beta, self.c_plus, self.c_minus,
                      tuple(float(k) for k in kappa), self.alpha1, self.alpha2,
                      self.dor_bound)

  @staticmethod
  def from_name(name: str, **params: Any) -> "MetricSpec":
    """Builds a spec from a command-line objective name. `f1` is F-beta with
    beta fixed to one."""
    name = name.lower()
    if name == "f1":
      params = {**params, "beta": 1.0}
      name = "fbeta"
    try:
      kind = Metric(name)
    except ValueError:
      raise MetricError("Unknown objective {!r}; choose from {}".format(
          name, ", ".join(["f1"] + [m.value for m in Metric])))
    params = {k: v for k, v in params.items() if v is not None}
    return MetricSpec(kind, **params)


def _div(num: Number, den: Number) -> np.ndarray:
  """num / den with zero wherever den is zero."""
  num = np.asarray(num, dtype=float)
  den = np.asarray(den, dtype=float)
  safe = np.where(den != 0, den, 1.0)
  return np.where(den != 0, num / safe, 0.0)


def fbeta(tp: Number, tn: Number, n_plus: Number, n_minus: Number,
          beta: float) -> np.ndarray:
  """Count form: (1+b^2) TP / (b^2 n+ + n- + TP - TN)."""
  b2 = beta * beta
  tp = np.asarray(tp, dtype=float)
  tn = np.asarray(tn, dtype=float)
  return _div((1 + b2) * tp, b2 * np.asarray(n_plus) + n_minus + tp - tn)


def fbeta_from_rates(precision: Number, recall: Number,
                     beta: float) -> np.ndarray:
  """Precision/recall form of F-beta."""
  b2 = beta * beta
  precision = np.asarray(precision, dtype=float)
  recall = np.asarray(recall, dtype=float)
  return _div((1 + b2) * precision * recall, b2 * precision + recall)


def mcc_parts(tp: Number, tn: Number, n_plus: Number, n_minus: Number):
  """Returns (A, U, V) with MCC = A / sqrt(n+ n- U V)."""
  tp = np.asarray(tp, dtype=float)
  tn = np.asarray(tn, dtype=float)
  a = n_plus * tn + n_minus * tp - n_plus * n_minus
  u = tp - tn + n_minus
  v = tn - tp + n_plus
  return a, u, v


def mcc(tp: Number, tn: Number, n_plus: Number, n_minus: Number) -> np.ndarray:
  a, u, v = mcc_parts(tp, tn, n_plus, n_minus)
  den = np.asarray(n_plus * n_minus * u * v, dtype=float)
  return _div(a, np.sqrt(np.maximum(den, 0.0)))


def mcc_squared(tp: Number, tn: Number, n_plus: Number,
                n_minus: Number) -> np.ndarray:
  """max(MCC, 0)^2, written as A^2 / (n+ n- U V) for A > 0."""
  a, u, v = mcc_parts(tp, tn, n_plus, n_minus)
  ret = _div(a * a, n_plus * n_minus * u * v)
  return np.where(a > 0, ret, 0.0)


def _rates(tp, tn, fp, fn, spec: MetricSpec, kappa_reward, kappa_total,
           squared: bool) -> np.ndarray:
  n_plus = tp + fn
  n_minus = tn + fp
  total = n_plus + n_minus
  kind = spec.kind

  if kind is Metric.ACCURACY:
    return _div(tp + tn, total)
  if kind is Metric.FBETA:
    return fbeta(tp, tn, n_plus, n_minus, spec.beta)
  if kind is Metric.MCC:
    if squared:
      return mcc_squared(tp, tn, n_plus, n_minus)
    return mcc(tp, tn, n_plus, n_minus)
  if kind is Metric.BALANCED_ACCURACY:
    return 0.5 * (_div(tp, n_plus) + _div(tn, n_minus))
  if kind is Metric.COST:
    if squared:
      return spec.c_plus * tp + spec.c_minus * tn
    return spec.c_plus * fn + spec.c_minus * fp
  if kind is Metric.INSTANCE_COST:
    if kappa_reward is None or kappa_total is None:
      raise MetricError("Instance costs need counts evaluated with kappa.")
    if squared:
      return np.asarray(kappa_reward, dtype=float)
    return np.asarray(kappa_total, dtype=float) - kappa_reward
  if kind is Metric.GMEAN:
    g2 = _div(tp * tn, n_plus * n_minus)
    return g2 if squared else np.sqrt(g2)
  if kind is Metric.FOWLKES_MALLOWS:
    fm2 = _div(tp * tp, n_plus * (tp + fp))
    return fm2 if squared else np.sqrt(fm2)
  if kind is Metric.IOU:
    return _div(tp, tp + fp + fn)
  if kind is Metric.DOR:
    den = np.asarray(fp * fn, dtype=float)
    ratio = _div(tp * tn, den)
    return np.where(den > 0, np.minimum(ratio, spec.dor_bound), spec.dor_bound)
  if kind is Metric.COMBINATION:
    f = fbeta(tp, tn, n_plus, n_minus, spec.beta)
    return spec.alpha1 * f + spec.alpha2 * _div(tp + tn, total)

  raise MetricError("Unsupported metric {}".format(kind))


def _as_float(x: np.ndarray) -> float:
  return float(np.asarray(x))


def metric(counts: Counts, spec: MetricSpec) -> float:
  """Closed-form value of `spec` on `counts`.

  Zero denominators: F-beta, MCC, G-Mean, Fowlkes-Mallows, IoU and recalls
  become 0; the DOR is clamped to its bound.

  """
  if isinstance(counts, ClassCounts):
    if spec.kind is not Metric.ACCURACY:
      raise MetricError("Multiclass trees only support accuracy.")
    return _as_float(_div(counts.correct_total, counts.total))

  c = counts
  return _as_float(
      _rates(c.tp, c.tn, c.fp, c.fn, spec, c.kappa_reward, c.kappa_total,
             False))


def objective_array(tp: Number,
                    tn: Number,
                    n_plus: float,
                    n_minus: float,
                    spec: MetricSpec,
                    lam: float,
                    splits: Number,
                    kappa_reward: Optional[Number] = None) -> np.ndarray:
  """Vectorized objective_value over arrays of (TP, TN, splits)."""
  tp = np.asarray(tp, dtype=float)
  tn = np.asarray(tn, dtype=float)
  splits = np.asarray(splits, dtype=float)
  fp = n_minus - tn
  fn = n_plus - tp

  if spec.kind is Metric.ACCURACY:
    return (1 - lam) * (tp + tn) - lam * splits

  kappa_total = None if kappa_reward is None else 0.0
  score = _rates(tp, tn, fp, fn, spec, kappa_reward, kappa_total, True)
  return score - lam * splits


def objective_value(counts: Counts, spec: MetricSpec, lam: float,
                    splits: int) -> float:
  """The value the master formulation for `spec` maximizes at a tree with
  these counts and `splits` branch nodes."""
  if isinstance(counts, ClassCounts):
    if spec.kind is not Metric.ACCURACY:
      raise MetricError("Multiclass trees only support accuracy.")
    return (1 - lam) * counts.correct_total - lam * splits

  return _as_float(
      objective_array(counts.tp, counts.tn, counts.n_plus, counts.n_minus,
                      spec, lam, splits, counts.kappa_reward))

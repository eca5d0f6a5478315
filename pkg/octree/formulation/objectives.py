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
"""Objective encodings for the master problem.

Every metric is a ratio or product of the confusion counts TP and TN, which
are linear in the correct-classification indicators g:

  TP = sum_{y_i = 1} w_i g_i        TN = sum_{y_i = 0} w_i g_i

Nonlinear metrics are linearized exactly: integers are written in binary
(sum_k 2^k bit_k), products of a bounded score with a bit become McCormick
variables and products of two bits become AND variables. Each encoding also
knows how to fill in its auxiliary values from the counts of a given tree,
which is how warm starts are completed into master-feasible assignments.

"""

from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from typing import (Any, Dict, Iterable, List, Optional, Sequence, Tuple,
                    Type)

import numpy as np

from octree.milp import LinearExpr, Model, Sense, VarType
from octree.tree import Metric, MetricError, MetricSpec
from octree.tree import metrics as m


class EncodingError(ValueError):
  """Raised when counts have no feasible encoding (a tree with negative MCC
  violates A >= 0)."""


def ceil_log2(x: int) -> int:
  if x < 1:
    raise ValueError("ceil_log2 needs a positive integer, got {}".format(x))
  return (int(x) - 1).bit_length()


def bits_of(value: int, count: int) -> List[int]:
  if value < 0 or value >= 2**count:
    raise EncodingError("{} doesn't fit in {} bits".format(value, count))
  return [(int(value) >> k) & 1 for k in range(count)]


def binary_expansion(model: Model, name: str, count: int) -> List[int]:
  return [model.add_binary("{}_{}".format(name, k)) for k in range(count)]


def power_sum(ids: Sequence[int]) -> LinearExpr:
  return LinearExpr.weighted((i, 2.0**k) for k, i in enumerate(ids))


def mccormick(model: Model, x: int, bit: int, upper: float, name: str) -> int:
  """Adds y = x * bit for x in [0, upper] and a binary bit."""
  y = model.add_variable(name, 0.0, upper)
  vy, vx, vb = LinearExpr.var(y), LinearExpr.var(x), LinearExpr.var(bit)
  model.add_constraint(vy - upper * vb, Sense.LE, 0.0, name + "_bit")
  model.add_constraint(vy - vx, Sense.LE, 0.0, name + "_ub")
  model.add_constraint(vy - vx - upper * vb, Sense.GE, -upper, name + "_lb")
  return y


def and_var(model: Model, a: int, b: int, name: str) -> int:
  """Adds y = a AND b for binaries a and b."""
  y = model.add_binary(name)
  vy, va, vb = LinearExpr.var(y), LinearExpr.var(a), LinearExpr.var(b)
  model.add_constraint(vy - va, Sense.LE, 0.0, name + "_a")
  model.add_constraint(vy - vb, Sense.LE, 0.0, name + "_b")
  model.add_constraint(vy - va - vb, Sense.GE, -1.0, name + "_ab")
  return y


@dataclass(frozen=True)
class CountTerms:
  """The confusion counts as linear expressions in the g variables."""
  g: Tuple[int, ...]
  y: np.ndarray
  w: np.ndarray
  n_classes: int
  splits: LinearExpr
  lam: float = 0.0

  @property
  def n_plus(self) -> int:
    return int(self.w[self.y == 1].sum())

  @property
  def n_minus(self) -> int:
    return int(self.w[self.y == 0].sum())

  @property
  def total(self) -> int:
    return int(self.w.sum())

  def _count(self, mask: np.ndarray) -> LinearExpr:
    return LinearExpr.weighted(
        (self.g[i], float(self.w[i])) for i in np.flatnonzero(mask))

  def tp(self) -> LinearExpr:
    return self._count(self.y == 1)

  def tn(self) -> LinearExpr:
    return self._count(self.y == 0)

  def correct(self) -> LinearExpr:
    return self._count(np.ones(len(self.g), dtype=bool))


def _flatten(item: Any) -> List[int]:
  if isinstance(item, (list, tuple)):
    return [i for sub in item for i in _flatten(sub)]
  return [int(item)]


class AbstractObjective(metaclass=ABCMeta):
  """Adds one metric's variables and rows to a model and sets the objective
  score - lam * splits."""
  kind: Metric

  def __init__(self, spec: MetricSpec):
    self.spec = spec
    self.symbols: Dict[str, Any] = {}
    self.terms: Optional[CountTerms] = None

  def encode(self, model: Model, terms: CountTerms) -> None:
    if self.spec.binary_only:
      self.spec.check_classes(terms.n_classes)
      if terms.n_plus == 0 or terms.n_minus == 0:
        raise MetricError("Metric {} needs both classes in the data.".format(
            self.spec.name))
    self.terms = terms
    score = self._encode(model, terms)
    model.set_objective(score - terms.lam * terms.splits)

  @abstractmethod
  def _encode(self, model: Model, terms: CountTerms) -> LinearExpr:
    """Adds auxiliaries and rows; returns the score expression."""

  def _complete(self, values: np.ndarray, tp: int, tn: int) -> None:
    pass

  def complete(self, values: np.ndarray, tp: float, tn: float) -> None:
    """Sets every auxiliary variable to its value at a tree with these
    counts, in place."""
    if self.terms is None:
      raise EncodingError("Objective {} was never encoded.".format(
          self.spec.name))
    tp, tn = int(round(tp)), int(round(tn))
    if "tp_bits" in self.symbols:
      self._set(values, "tp_bits", bits_of(tp, len(self.symbols["tp_bits"])))
    if "tn_bits" in self.symbols:
      self._set(values, "tn_bits", bits_of(tn, len(self.symbols["tn_bits"])))
    self._complete(values, tp, tn)

  def aux_ids(self) -> List[int]:
    return _flatten(list(self.symbols.values()))

  def _set(self, values: np.ndarray, key: str, vals: Any) -> None:
    ids = self.symbols[key]
    if isinstance(ids, int):
      values[ids] = float(vals)
      return
    for i, v in zip(_flatten(ids), np.asarray(vals, dtype=float).ravel()):
      values[i] = v

  # Shared TP / TN expansions.

  def tp_bits(self, model: Model) -> List[int]:
    if "tp_bits" not in self.symbols:
      count = max(1, self.terms_bits(self.terms.n_plus))
      ids = binary_expansion(model, "tpbit", count)
      model.add_constraint(power_sum(ids) - self.terms.tp(), Sense.EQ, 0.0,
                           "tp_bits")
      self.symbols["tp_bits"] = ids
    return self.symbols["tp_bits"]

  def tn_bits(self, model: Model) -> List[int]:
    if "tn_bits" not in self.symbols:
      count = max(1, self.terms_bits(self.terms.n_minus))
      ids = binary_expansion(model, "tnbit", count)
      model.add_constraint(power_sum(ids) - self.terms.tn(), Sense.EQ, 0.0,
                           "tn_bits")
      self.symbols["tn_bits"] = ids
    return self.symbols["tn_bits"]

  @staticmethod
  def terms_bits(bound: int) -> int:
    """Bits needed for integers in [0, bound]."""
    return int(bound).bit_length()


class AccuracyObjective(AbstractObjective):
  """(1 - lam) * sum w_i g_i - lam * splits; multiclass data allowed."""
  kind = Metric.ACCURACY

  def _encode(self, model, terms):
    return (1 - terms.lam) * terms.correct()


class BalancedAccuracyObjective(AbstractObjective):
  kind = Metric.BALANCED_ACCURACY

  def _encode(self, model, terms):
    return 0.5 * (terms.tp() * (1.0 / terms.n_plus) +
                  terms.tn() * (1.0 / terms.n_minus))


class CostObjective(AbstractObjective):
  """Reward form of the cost-sensitive metric: c+ TP + c- TN."""
  kind = Metric.COST

  def _encode(self, model, terms):
    return self.spec.c_plus * terms.tp() + self.spec.c_minus * terms.tn()


class InstanceCostObjective(AbstractObjective):
  """sum kappa_i w_i g_i with one cost per unique instance."""
  kind = Metric.INSTANCE_COST

  def _encode(self, model, terms):
    kappa = self.spec.kappa
    if len(kappa) != len(terms.g):
      raise MetricError("Got {} kappa weights for {} instances.".format(
          len(kappa), len(terms.g)))
    return LinearExpr.weighted(
        (g, k * float(w)) for g, k, w in zip(terms.g, kappa, terms.w))


class FBetaObjective(AbstractObjective):
  """F-beta = (1+b^2) TP / (b^2 n+ + n- + TP - TN).

  The denominator tail n- + TP - TN is expanded into bits delta_k and
  gamma_k = F * delta_k, so the score row

    F b^2 n+ + sum_k 2^k gamma_k <= (1 + b^2) TP

  is linear.

  """
  kind = Metric.FBETA

  def _fbeta_rows(self, model: Model, terms: CountTerms) -> int:
    b2 = self.spec.beta**2
    count = ceil_log2(terms.total) + 1
    f = model.add_variable("fscore", 0.0, 1.0)
    delta = binary_expansion(model, "delta", count)
    model.add_constraint(
        power_sum(delta) - terms.tp() + terms.tn(), Sense.EQ,
        float(terms.n_minus), "fbeta_expand")
    gamma = [
        mccormick(model, f, d, 1.0, "gamma_{}".format(k))
        for k, d in enumerate(delta)
    ]
    score = b2 * terms.n_plus * LinearExpr.var(f) + power_sum(gamma)
    model.add_constraint(score - (1 + b2) * terms.tp(), Sense.LE, 0.0,
                         "fbeta_score")
    self.symbols.update(fscore=f, delta=delta, gamma=gamma)
    return f

  def _encode(self, model, terms):
    return LinearExpr.var(self._fbeta_rows(model, terms))

  def _complete(self, values, tp, tn):
    t = self.terms
    f = float(m.fbeta(tp, tn, t.n_plus, t.n_minus, self.spec.beta))
    delta = bits_of(t.n_minus + tp - tn, len(self.symbols["delta"]))
    self._set(values, "fscore", f)
    self._set(values, "delta", delta)
    self._set(values, "gamma", [f * d for d in delta])


class CombinationObjective(FBetaObjective):
  """alpha1 * F-beta + alpha2 * (TP + TN) / |I|."""
  kind = Metric.COMBINATION

  def _encode(self, model, terms):
    f = self._fbeta_rows(model, terms)
    acc = (terms.tp() + terms.tn()) * (1.0 / terms.total)
    return self.spec.alpha1 * LinearExpr.var(f) + self.spec.alpha2 * acc


class MccObjective(AbstractObjective):
  """Maximizes MCC^2 = A^2 / (n+ n- U V) over trees with A >= 0.

    A = n+ TN + n- TP - n+ n-,  U = TP - TN + n-,  V = TN - TP + n+

  U, V and A are expanded into bits; UV becomes sum 2^(r+s) chi_rs with
  chi_rs = u_r AND v_s, MCC2 * UV becomes sum 2^(r+s) theta_rs with
  theta_rs = MCC2 * chi_rs, and A^2 becomes sum 2^(t+t') pi_tt'. A = 0 forces
  MCC2 = 0 through MCC2 <= A.

  """
  kind = Metric.MCC

  def _encode(self, model, terms):
    npos, nneg, total = terms.n_plus, terms.n_minus, terms.total
    ub_bits = ceil_log2(total) + 1
    a_bits = ceil_log2(npos * nneg) + 1
    tp, tn = terms.tp(), terms.tn()

    mcc2 = model.add_variable("mcc2", 0.0, 1.0)
    a = model.add_integer("mcc_a", 0.0, float(npos * nneg))
    u = model.add_integer("mcc_u", 0.0, float(total))
    v = model.add_integer("mcc_v", 0.0, float(total))
    model.add_constraint(
        LinearExpr.var(a) - npos * tn - nneg * tp, Sense.EQ,
        -float(npos * nneg), "mcc_a_def")
    model.add_constraint(
        LinearExpr.var(u) - tp + tn, Sense.EQ, float(nneg), "mcc_u_def")
    model.add_constraint(
        LinearExpr.var(v) - tn + tp, Sense.EQ, float(npos), "mcc_v_def")

    ubits = binary_expansion(model, "u", ub_bits)
    vbits = binary_expansion(model, "v", ub_bits)
    abits = binary_expansion(model, "abit", a_bits)
    for var, bits, name in ((u, ubits, "u"), (v, vbits, "v"), (a, abits, "a")):
      model.add_constraint(
          power_sum(bits) - LinearExpr.var(var), Sense.EQ, 0.0,
          "mcc_{}_bits".format(name))

    chi = [[
        and_var(model, ubits[r], vbits[s], "chi_{}_{}".format(r, s))
        for s in range(ub_bits)
    ]
           for r in range(ub_bits)]
    theta = [[
        mccormick(model, mcc2, chi[r][s], 1.0, "theta_{}_{}".format(r, s))
        for s in range(ub_bits)
    ]
             for r in range(ub_bits)]
    pi = [[
        and_var(model, abits[t], abits[t2], "pi_{}_{}".format(t, t2))
        for t2 in range(a_bits)
    ]
          for t in range(a_bits)]

    lhs = LinearExpr.weighted(
        (theta[r][s], npos * nneg * 2.0**(r + s))
        for r in range(ub_bits)
        for s in range(ub_bits))
    rhs = LinearExpr.weighted((pi[t][t2], 2.0**(t + t2))
                              for t in range(a_bits)
                              for t2 in range(a_bits))
    model.add_constraint(lhs - rhs, Sense.LE, 0.0, "mcc_main")
    model.add_constraint(
        LinearExpr.var(mcc2) - LinearExpr.var(a), Sense.LE, 0.0, "mcc_zero")

    self.symbols.update(mcc2=mcc2, a=a, u=u, v=v, u_bits=ubits, v_bits=vbits,
                        a_bits=abits, chi=chi, theta=theta, pi=pi)
    return LinearExpr.var(mcc2)

  def _complete(self, values, tp, tn):
    npos, nneg = self.terms.n_plus, self.terms.n_minus
    a, u, v = (int(x) for x in m.mcc_parts(tp, tn, npos, nneg))
    if a < 0:
      raise EncodingError("Trees with negative MCC (A = {}) have no feasible "
                          "encoding.".format(a))
    score = float(m.mcc_squared(tp, tn, npos, nneg))
    ub = np.array(bits_of(u, len(self.symbols["u_bits"])))
    vb = np.array(bits_of(v, len(self.symbols["v_bits"])))
    ab = np.array(bits_of(a, len(self.symbols["a_bits"])))
    chi = np.outer(ub, vb)
    for key, val in (("mcc2", score), ("a", a), ("u", u), ("v", v),
                     ("u_bits", ub), ("v_bits", vb), ("a_bits", ab),
                     ("chi", chi), ("theta", score * chi),
                     ("pi", np.outer(ab, ab))):
      self._set(values, key, val)


class GMeanObjective(AbstractObjective):
  """G-Mean^2 = TP TN / (n+ n-), with TP TN = sum 2^(k+l) eta_kl."""
  kind = Metric.GMEAN

  def _encode(self, model, terms):
    gp, gn = self.tp_bits(model), self.tn_bits(model)
    g2 = model.add_variable("g2", 0.0, 1.0)
    eta = [[
        and_var(model, gp[k], gn[l], "eta_{}_{}".format(k, l))
        for l in range(len(gn))
    ]
           for k in range(len(gp))]
    prod = LinearExpr.weighted((eta[k][l], 2.0**(k + l))
                               for k in range(len(gp))
                               for l in range(len(gn)))
    model.add_constraint(
        float(terms.n_plus * terms.n_minus) * LinearExpr.var(g2) - prod,
        Sense.LE, 0.0, "g2_main")
    self.symbols.update(g2=g2, eta=eta)
    return LinearExpr.var(g2)

  def _complete(self, values, tp, tn):
    t = self.terms
    gp = np.array(bits_of(tp, len(self.symbols["tp_bits"])))
    gn = np.array(bits_of(tn, len(self.symbols["tn_bits"])))
    self._set(values, "g2", tp * tn / float(t.n_plus * t.n_minus))
    self._set(values, "eta", np.outer(gp, gn))


class FowlkesMallowsObjective(AbstractObjective):
  """FM^2 = TP^2 / (n+ (TP + FP)).

  With FP = n- - TN the row FM2 n+ (TP + n- - TN) <= TP^2 needs FM2 * TP,
  FM2 * TN and TP^2, written through the shared bits. TP = 0 forces FM2 = 0
  through FM2 <= TP.

  """
  kind = Metric.FOWLKES_MALLOWS

  def _encode(self, model, terms):
    gp, gn = self.tp_bits(model), self.tn_bits(model)
    fm2 = model.add_variable("fm2", 0.0, 1.0)
    dplus = [
        mccormick(model, fm2, b, 1.0, "dplus_{}".format(k))
        for k, b in enumerate(gp)
    ]
    dminus = [
        mccormick(model, fm2, b, 1.0, "dminus_{}".format(l))
        for l, b in enumerate(gn)
    ]
    xi = [[
        and_var(model, gp[r], gp[s], "xi_{}_{}".format(r, s))
        for s in range(len(gp))
    ]
          for r in range(len(gp))]

    npos = float(terms.n_plus)
    square = LinearExpr.weighted((xi[r][s], 2.0**(r + s))
                                 for r in range(len(gp))
                                 for s in range(len(gp)))
    lhs = (npos * terms.n_minus * LinearExpr.var(fm2) + npos *
           (power_sum(dplus) - power_sum(dminus)))
    model.add_constraint(lhs - square, Sense.LE, 0.0, "fm2_main")
    model.add_constraint(
        LinearExpr.var(fm2) - terms.tp(), Sense.LE, 0.0, "fm2_zero")
    self.symbols.update(fm2=fm2, dplus=dplus, dminus=dminus, xi=xi)
    return LinearExpr.var(fm2)

  def _complete(self, values, tp, tn):
    t = self.terms
    fp = t.n_minus - tn
    score = float(m._div(tp * tp, t.n_plus * (tp + fp)))
    gp = np.array(bits_of(tp, len(self.symbols["tp_bits"])))
    gn = np.array(bits_of(tn, len(self.symbols["tn_bits"])))
    self._set(values, "fm2", score)
    self._set(values, "dplus", score * gp)
    self._set(values, "dminus", score * gn)
    self._set(values, "xi", np.outer(gp, gp))


class IouObjective(AbstractObjective):
  """IoU = TP / (|I| - TN), as |I| IoU - IoU TN <= TP."""
  kind = Metric.IOU

  def _encode(self, model, terms):
    gn = self.tn_bits(model)
    iou = model.add_variable("iou", 0.0, 1.0)
    dminus = [
        mccormick(model, iou, b, 1.0, "dminus_{}".format(l))
        for l, b in enumerate(gn)
    ]
    lhs = float(terms.total) * LinearExpr.var(iou) - power_sum(dminus)
    model.add_constraint(lhs - terms.tp(), Sense.LE, 0.0, "iou_main")
    model.add_constraint(
        LinearExpr.var(iou) - terms.tp(), Sense.LE, 0.0, "iou_zero")
    self.symbols.update(iou=iou, dminus=dminus)
    return LinearExpr.var(iou)

  def _complete(self, values, tp, tn):
    score = float(m._div(tp, self.terms.total - tn))
    gn = np.array(bits_of(tn, len(self.symbols["tn_bits"])))
    self._set(values, "iou", score)
    self._set(values, "dminus", score * gn)


class DorObjective(AbstractObjective):
  """Diagnostic odds ratio TP TN / (FP FN), bounded above by D.

  Expanding DOR (n+ - TP)(n- - TN) <= TP TN gives

    n+ n- DOR - n- DOR TP - n+ DOR TN + DOR TP TN - TP TN <= 0

  with every product written through the shared bits and McCormick
  envelopes over [0, D]. A zero denominator leaves DOR free up to D.

  """
  kind = Metric.DOR

  def _encode(self, model, terms):
    bound = float(self.spec.dor_bound)
    gp, gn = self.tp_bits(model), self.tn_bits(model)
    dor = model.add_variable("dor", 0.0, bound)
    dplus = [
        mccormick(model, dor, b, bound, "dplus_{}".format(k))
        for k, b in enumerate(gp)
    ]
    dminus = [
        mccormick(model, dor, b, bound, "dminus_{}".format(l))
        for l, b in enumerate(gn)
    ]
    eta = [[
        and_var(model, gp[k], gn[l], "eta_{}_{}".format(k, l))
        for l in range(len(gn))
    ]
           for k in range(len(gp))]
    zeta = [[
        mccormick(model, dor, eta[k][l], bound, "zeta_{}_{}".format(k, l))
        for l in range(len(gn))
    ]
            for k in range(len(gp))]

    npos, nneg = float(terms.n_plus), float(terms.n_minus)
    pairs = [(k, l) for k in range(len(gp)) for l in range(len(gn))]
    row = (npos * nneg * LinearExpr.var(dor) - nneg * power_sum(dplus) -
           npos * power_sum(dminus) +
           LinearExpr.weighted((zeta[k][l], 2.0**(k + l)) for k, l in pairs) -
           LinearExpr.weighted((eta[k][l], 2.0**(k + l)) for k, l in pairs))
    model.add_constraint(row, Sense.LE, 0.0, "dor_main")
    self.symbols.update(dor=dor, dplus=dplus, dminus=dminus, eta=eta,
                        zeta=zeta)
    return LinearExpr.var(dor)

  def _complete(self, values, tp, tn):
    t = self.terms
    score = float(
        m.objective_array(tp, tn, t.n_plus, t.n_minus, self.spec, 0.0, 0))
    gp = np.array(bits_of(tp, len(self.symbols["tp_bits"])))
    gn = np.array(bits_of(tn, len(self.symbols["tn_bits"])))
    eta = np.outer(gp, gn)
    for key, val in (("dor", score), ("dplus", score * gp),
                     ("dminus", score * gn), ("eta", eta),
                     ("zeta", score * eta)):
      self._set(values, key, val)


OBJECTIVES: Dict[Metric, Type[AbstractObjective]] = {
    cls.kind: cls for cls in (AccuracyObjective, FBetaObjective, MccObjective,
                              BalancedAccuracyObjective, CostObjective,
                              InstanceCostObjective, GMeanObjective,
                              FowlkesMallowsObjective, IouObjective,
                              DorObjective, CombinationObjective)
}


def make_objective(spec: MetricSpec) -> AbstractObjective:
  return OBJECTIVES[spec.kind](spec)


def encode_objective(model: Model,
                     g: Iterable[int],
                     data,
                     spec: MetricSpec,
                     lam: float = 0.0,
                     splits: Optional[LinearExpr] = None
                    ) -> AbstractObjective:
  """Encodes `spec` over existing correct-classification variables `g` (one
  per row of `data`, which provides y, w and n_classes) and sets the model
  objective."""
  terms = CountTerms(tuple(int(i) for i in g), np.asarray(data.y),
                     np.asarray(data.w), data.n_classes,
                     splits if splits is not None else LinearExpr(), lam)
  if len(terms.g) != len(terms.y):
    raise MetricError("Need one g variable per instance.")
  objective = make_objective(spec)
  objective.encode(model, terms)
  return objective

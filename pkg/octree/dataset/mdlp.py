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
"""Supervised binarization: MDLP discretization of numeric attributes followed
by one-hot encoding of every bin and category.

Numeric columns use bin-membership semantics. With cut points c_1 < ... < c_m
an attribute gets m + 1 columns for the bins (-inf, c_1], (c_1, c_2], ...,
(c_m, inf), and exactly one of them is 1 in each row.

"""

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import entropy

import octree.dataset.errors as e
from octree.dataset.base import BinarizedDataset
from octree.dataset.raw import RawDataset

NUMERIC = "numeric"
CATEGORICAL = "categorical"
BINARY = "binary"
PASSTHROUGH = "passthrough"

KINDS = (NUMERIC, CATEGORICAL, BINARY, PASSTHROUGH)


def _fmt(x: float) -> str:
  return "{:.6g}".format(x)


@dataclass(frozen=True)
class AttributeRule:
  """How one raw attribute becomes binary columns.

  Kinds:
    numeric: MDLP cut points; one column per bin. No cuts leaves a single
             constant-0 column flagged degenerate.
    categorical: one column per category, in the listed order.
    binary: a 0/1 numeric attribute with both values present; columns for
            value 0 and value 1.
    passthrough: an already binarized 0/1 column copied as is.

  """
  name: str
  kind: str
  cut_points: Tuple[float, ...] = ()
  categories: Tuple[str, ...] = ()

  def __post_init__(self):
    if self.kind not in KINDS:
      raise e.DataError("Unknown rule kind {!r}".format(self.kind))
    cuts = self.cut_points
    if any(a >= b for a, b in zip(cuts, cuts[1:])):
      raise e.DataError("Cut points of {} must be strictly increasing: "
                        "{}".format(self.name, cuts))
    if self.kind == CATEGORICAL and not self.categories:
      raise e.DataError("Categorical attribute {} has no categories.".format(
          self.name))

  @property
  def arity(self) -> int:
    """m_a, the number of columns this attribute contributes."""
    if self.kind == NUMERIC:
      return len(self.cut_points) + 1
    if self.kind == CATEGORICAL:
      return len(self.categories)
    if self.kind == BINARY:
      return 2
    return 1

  @property
  def bins(self) -> int:
    """Number of distinct encoded values; a passthrough column has two."""
    return 2 if self.kind == PASSTHROUGH else self.arity

  @property
  def degenerate(self) -> bool:
    return self.kind in (NUMERIC, CATEGORICAL) and self.arity == 1

  def column_names(self) -> List[str]:
    n = self.name
    if self.kind == PASSTHROUGH:
      return [n]
    if self.kind == BINARY:
      return ["{}=0".format(n), "{}=1".format(n)]
    if self.kind == CATEGORICAL:
      return ["{}={}".format(n, c) for c in self.categories]

    cuts = [_fmt(c) for c in self.cut_points]
    if not cuts:
      return [n]
    ret = ["{}<={}".format(n, cuts[0])]
    ret += ["{}<{}<={}".format(lo, n, hi) for lo, hi in zip(cuts, cuts[1:])]
    ret.append("{}>{}".format(n, cuts[-1]))
    return ret

  def encode(self, values: pd.Series) -> np.ndarray:
    """|rows| x arity 0/1 matrix for the raw column `values`."""
    n = len(values)
    if self.degenerate:
      return np.zeros((n, 1), dtype=np.uint8)

    if self.kind == CATEGORICAL:
      v = values.astype(str).to_numpy()
      return np.stack([v == c for c in self.categories],
                      axis=1).astype(np.uint8)

    x = pd.to_numeric(values, errors="coerce").to_numpy(dtype=float)
    if np.isnan(x).any():
      raise e.DataError("Attribute {} expects numbers.".format(self.name))

    if self.kind == PASSTHROUGH:
      if not np.isin(x, (0, 1)).all():
        raise e.DataError("Attribute {} expects 0/1 values.".format(
            self.name))
      return x.astype(np.uint8).reshape(-1, 1)

    if self.kind == BINARY:
      return np.stack([x <= 0.5, x > 0.5], axis=1).astype(np.uint8)

    bin_of = np.searchsorted(np.asarray(self.cut_points), x, side="left")
    ret = np.zeros((n, self.arity), dtype=np.uint8)
    ret[np.arange(n), bin_of] = 1
    return ret

  def to_dict(self) -> Dict:
    ret = {"name": self.name, "kind": self.kind}
    if self.kind == NUMERIC:
      ret["cut_points"] = list(self.cut_points)
    if self.kind == CATEGORICAL:
      ret["categories"] = list(self.categories)
    return ret

  @staticmethod
  def from_dict(d: Dict) -> "AttributeRule":
    return AttributeRule(d["name"], d["kind"],
                         tuple(float(c) for c in d.get("cut_points", ())),
                         tuple(str(c) for c in d.get("categories", ())))


@dataclass(frozen=True)
class BinRules:
  """Binarization rules for every attribute plus the label encoding."""
  attributes: Tuple[AttributeRule, ...]
  classes: Tuple[str, ...]
  label: str = "label"

  @property
  def arities(self) -> List[int]:
    return [a.arity for a in self.attributes]

  def column_names(self) -> List[str]:
    return [c for a in self.attributes for c in a.column_names()]

  def degenerate_mask(self) -> List[bool]:
    return [a.degenerate for a in self.attributes for _ in range(a.arity)]

  def unique_bound(self, n_rows: int) -> int:
    """min(|K| * prod(m_a), |I|), the largest possible unique dataset."""
    cells = len(self.classes)
    for a in self.attributes:
      cells *= a.bins
      if cells >= n_rows:
        return n_rows
    return min(cells, n_rows)

  def to_dict(self) -> Dict:
    return {
        "label": self.label,
        "classes": list(self.classes),
        "attributes": [a.to_dict() for a in self.attributes]
    }

  def to_json(self) -> str:
    return json.dumps(self.to_dict(), indent=2)

  @staticmethod
  def from_json(s: str) -> "BinRules":
    try:
      d = json.loads(s)
      return BinRules(
          tuple(AttributeRule.from_dict(a) for a in d["attributes"]),
          tuple(str(c) for c in d["classes"]), d.get("label", "label"))
    except (KeyError, TypeError, ValueError) as err:
      if isinstance(err, e.DataError):
        raise
      raise e.DataError("Malformed rules document: {}".format(err))


# MDLP.


def _entropy(counts: np.ndarray) -> float:
  if counts.sum() == 0:
    return 0.0
  return float(entropy(counts, base=2))


def _accept(total: np.ndarray, left: np.ndarray, right: np.ndarray) -> bool:
  """The MDL stopping criterion for splitting a set with class counts `total`
  into `left` and `right`."""
  n = total.sum()
  ent = _entropy(total)
  ent1, ent2 = _entropy(left), _entropy(right)
  gain = ent - (left.sum() * ent1 + right.sum() * ent2) / n

  k = np.count_nonzero(total)
  k1 = np.count_nonzero(left)
  k2 = np.count_nonzero(right)
  delta = math.log2(3**k - 2) - (k * ent - k1 * ent1 - k2 * ent2)
  return gain > (math.log2(n - 1) + delta) / n


def mdlp_cut_points(values: Sequence[float], y: Sequence[int],
                    n_classes: Optional[int] = None) -> List[float]:
  """Recursive entropy-minimizing cut points accepted by the MDL criterion.

  Candidates sit at midpoints between adjacent distinct values; among equal
  weighted entropies the smallest threshold wins.

  """
  x = np.asarray(values, dtype=float)
  y = np.asarray(y, dtype=int)
  if n_classes is None:
    n_classes = int(y.max()) + 1 if y.size else 1

  order = np.argsort(x, kind="mergesort")
  x, y = x[order], y[order]
  onehot = np.zeros((len(y), n_classes), dtype=int)
  onehot[np.arange(len(y)), y] = 1
  prefix = np.vstack([np.zeros((1, n_classes), dtype=int),
                      np.cumsum(onehot, axis=0)])

  cuts: List[float] = []

  def recurse(lo: int, hi: int) -> None:
    total = prefix[hi] - prefix[lo]
    if np.count_nonzero(total) < 2:
      return
    ks = lo + 1 + np.flatnonzero(x[lo + 1:hi] > x[lo:hi - 1])
    if not ks.size:
      return

    lefts = prefix[ks] - prefix[lo]
    rights = total - lefts
    scores = ((ks - lo) * entropy(lefts, base=2, axis=1) +
              (hi - ks) * entropy(rights, base=2, axis=1)) / (hi - lo)
    # first index among near-equal minima, i.e. the smallest threshold
    best_k = int(ks[np.flatnonzero(scores <= scores.min() + 1e-12)[0]])

    left = prefix[best_k] - prefix[lo]
    if not _accept(total, left, total - left):
      return

    cuts.append((x[best_k - 1] + x[best_k]) / 2.0)
    recurse(lo, best_k)
    recurse(best_k, hi)

  recurse(0, len(x))
  return sorted(cuts)


def _label_indices(labels: Sequence[str],
                   classes: Sequence[str]) -> np.ndarray:
  index = {c: i for i, c in enumerate(classes)}
  try:
    return np.array([index[v] for v in labels], dtype=int)
  except KeyError as err:
    raise e.LabelError("Unknown label {}".format(err))


def learn_rule(name: str, column: pd.Series, y: np.ndarray,
               n_classes: int) -> AttributeRule:
  if not pd.api.types.is_numeric_dtype(column):
    return AttributeRule(name, CATEGORICAL,
                         categories=tuple(sorted(set(column.astype(str)))))

  x = column.to_numpy(dtype=float)
  if set(np.unique(x).tolist()) == {0.0, 1.0}:
    return AttributeRule(name, BINARY)
  return AttributeRule(name, NUMERIC,
                       cut_points=tuple(mdlp_cut_points(x, y, n_classes)))


def apply_rules(rules: BinRules, data: RawDataset) -> BinarizedDataset:
  """Binarizes `data` with rules learned elsewhere. Values past the outer cut
  points land in the open-ended bins; unseen categories encode as all zeros."""
  names = [a.name for a in rules.attributes]
  if names != data.feature_names:
    raise e.ArityError("Rules cover attributes {} but data has {}".format(
        names, data.feature_names))

  y = _label_indices(data.labels, rules.classes)
  blocks = [a.encode(data.features[a.name]) for a in rules.attributes]
  return BinarizedDataset(np.hstack(blocks), y, len(rules.classes),
                          tuple(rules.column_names()), rules.classes,
                          tuple(rules.degenerate_mask()))


def mdlp_binarize(data: RawDataset) -> Tuple[BinRules, BinarizedDataset]:
  """Learns rules on `data` and applies them. Deterministic."""
  classes = data.classes()
  if len(classes) < 2:
    raise e.SingleClassError(
        "MDLP needs at least two classes, found {}".format(list(classes)))

  y = _label_indices(data.labels, classes)
  rules = BinRules(
      tuple(
          learn_rule(name, data.features[name], y, len(classes))
          for name in data.feature_names), classes, data.label_name)
  ret = apply_rules(rules, data)
  ret.check_classes()
  return rules, ret


def passthrough_rules(data: RawDataset) -> Optional[BinRules]:
  """Rules copying every column as is when all features are already 0/1, else
  None."""
  for name in data.feature_names:
    column = data.features[name]
    if not pd.api.types.is_numeric_dtype(column) or \
       not np.isin(column.to_numpy(dtype=float), (0, 1)).all():
      return None

  return BinRules(
      tuple(AttributeRule(n, PASSTHROUGH) for n in data.feature_names),
      data.classes(), data.label_name)

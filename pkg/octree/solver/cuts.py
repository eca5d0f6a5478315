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
"""Cut separation for the Benders master.

Three families:

  benders   g_i <= capacity of an s-t cut in instance i's flow network.
  conflict  unique instances with identical features but different labels
            can't all be correct; added once, before the search.
  feature   the same bound for instances that only become identical once the
            features unused by the LP solution are dropped; it is relaxed by
            every split on a dropped feature.

"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np

from octree.dataset import UniqueDataset
from octree.formulation import (SOURCE, FormulationArtifacts, TreeVars,
                                benders_cut, read_tree)
from octree.milp import Constraint, LinearExpr, Model, Sense
from octree.tree import Role, TreeError

INT_TOL = 1e-6
VIOLATION_TOL = 1e-6


def _values(solution) -> np.ndarray:
  return np.asarray(getattr(solution, "values", solution), dtype=float)


def _structure_ids(tv: TreeVars) -> List[int]:
  return tv.b_ids + tv.p_ids + tv.c_ids


def structure_integral(values: np.ndarray, art: FormulationArtifacts) -> bool:
  v = values[_structure_ids(art.tree)]
  return bool(np.all(np.abs(v - np.round(v)) <= INT_TOL))


# Benders cuts.


def _trace(values: np.ndarray, tv: TreeVars, x: np.ndarray) -> List[int]:
  """Root-to-leaf path of x through an integral tree."""
  topo = tv.topology
  path = [1]
  n = 1
  while round(values[tv.p[n]]) != 1:
    if topo.is_leaf(n):
      raise ValueError("Bottom node {} is not a leaf.".format(n))
    chosen = [
        f for f in range(tv.n_features) if round(values[tv.b[n, f]]) == 1
    ]
    if len(chosen) != 1:
      raise ValueError("Node {} neither branches nor predicts.".format(n))
    n = 2 * n + int(x[chosen[0]] == 1)
    path.append(n)
  return path


def separate_benders(values, art: FormulationArtifacts, data: UniqueDataset,
                     i: int) -> Optional[FrozenSet[int]]:
  """Path-trace separation for instance i at a point with integral b, p and
  c (g may be fractional).

  Returns the source side S of a capacity-0 cut violated by the point, or
  None when every cut of instance i holds.

  """
  values = _values(values)
  if not structure_integral(values, art):
    raise ValueError("Benders separation needs integral b, p and c.")

  g = values[art.g[i]]
  if g <= VIOLATION_TOL:
    return None

  tv = art.tree
  path = _trace(values, tv, data.X[i])
  if g > values[tv.c[path[-1], int(data.y[i])]] + VIOLATION_TOL:
    return frozenset([SOURCE] + path)
  return None


def _leaf_nodes(values: np.ndarray, tv: TreeVars, X: np.ndarray) -> np.ndarray:
  """The node where each row of X stops in an integral tree."""
  try:
    tree = read_tree(tv, values)
  except TreeError as e:
    raise ValueError(str(e))

  at = np.ones(X.shape[0], dtype=int)
  for n in tv.topology.nodes:
    here = at == n
    node = tree.node(n)
    if here.any() and node.role is Role.BRANCH:
      at[here] = 2 * n + (X[here, node.value] == 1)
  return at


def benders_rows(model: Model, values, art: FormulationArtifacts,
                 data: UniqueDataset) -> List[Constraint]:
  """Violated path-trace cuts for every instance at once."""
  values = _values(values)
  if not structure_integral(values, art):
    raise ValueError("Benders separation needs integral b, p and c.")

  tv = art.tree
  leaves = _leaf_nodes(values, tv, data.X)
  g = values[list(art.g)]
  c = np.array([values[tv.c[n, int(k)]] for n, k in zip(leaves, data.y)])
  rows = []
  for i in np.flatnonzero((g > VIOLATION_TOL) & (g > c + VIOLATION_TOL)):
    leaf = int(leaves[i])
    S = [SOURCE, leaf] + tv.topology.ancestors(leaf)
    rows.append(benders_cut(model, art, data, int(i), S))
  return rows


def min_cut(values, art: FormulationArtifacts, data: UniqueDataset,
            i: int) -> Tuple[float, FrozenSet[int]]:
  """Exact minimum s-t cut of instance i's network at any point.

  The network minus the sink is a tree, so the cheapest way to separate the
  subtree under n from t is cap(n, t) plus, per child, the smaller of
  cutting the arc into the child or separating the child's own subtree.
  Ties cut the arc.

  """
  values = _values(values)
  tv = art.tree
  topo = tv.topology
  x, label = data.X[i], int(data.y[i])
  bvals = {n: np.array([values[tv.b[n, f]] for f in range(tv.n_features)])
           for n in topo.branch_nodes}

  def arc(n, side):
    return float(bvals[n][x == side].sum())

  cost = {}
  for n in reversed(topo.nodes):
    cost[n] = float(values[tv.c[n, label]])
    if not topo.is_leaf(n):
      for child, side in ((2 * n, 0), (2 * n + 1, 1)):
        cost[n] += min(arc(n, side), cost[child])

  if cost[1] >= 1.0:
    return 1.0, frozenset([SOURCE])

  S = {SOURCE, 1}
  stack = [1]
  while stack:
    n = stack.pop()
    if topo.is_leaf(n):
      continue
    for child, side in ((2 * n, 0), (2 * n + 1, 1)):
      if cost[child] < arc(n, side):
        S.add(child)
        stack.append(child)
  return cost[1], frozenset(S)


def min_cut_rows(model: Model, values, art: FormulationArtifacts,
                 data: UniqueDataset) -> List[Constraint]:
  values = _values(values)
  rows = []
  for i in range(data.n_unique):
    g = values[art.g[i]]
    if g <= VIOLATION_TOL:
      continue
    capacity, S = min_cut(values, art, data, i)
    if g > capacity + VIOLATION_TOL:
      rows.append(benders_cut(model, art, data, i, S))
  return rows


# Conflict cuts.


@dataclass(frozen=True)
class ConflictCut:
  """sum_{i in members} g_i <= rhs + coefficient * sum_{n, f in features}
  b[n, f], where rhs is the largest per-class member count and coefficient
  is |members| - rhs. Without features this is the plain conflict bound."""
  members: Tuple[int, ...]
  class_sizes: Tuple[int, ...]
  features: Tuple[int, ...] = ()

  @property
  def rhs(self) -> int:
    return max(self.class_sizes)

  @property
  def coefficient(self) -> int:
    return len(self.members) - self.rhs

  @property
  def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return self.members, self.features

  @property
  def family(self) -> str:
    return "feature" if self.features else "conflict"

  def expression(self, art: FormulationArtifacts) -> LinearExpr:
    ret = LinearExpr.sum(art.g[i] for i in self.members)
    if self.features:
      tv = art.tree
      ret = ret - LinearExpr.sum(
          (tv.b[n, f] for n in tv.topology.branch_nodes for f in self.features),
          float(self.coefficient))
    return ret

  def violation(self, values, art: FormulationArtifacts) -> float:
    return self.expression(art).value(_values(values)) - self.rhs

  def to_row(self, model: Model, art: FormulationArtifacts) -> Constraint:
    name = "{}_{}".format(self.family, "_".join(map(str, self.members)))
    if self.features:
      name += "__" + "_".join(map(str, self.features))
    return model.make_constraint(self.expression(art), Sense.LE,
                                 float(self.rhs), name, self.family)


def _conflict_groups(X: np.ndarray, y: np.ndarray, n_classes: int,
                     features: Tuple[int, ...] = ()) -> List[ConflictCut]:
  """Groups rows of X by pattern, in order of first occurrence, and keeps
  the groups holding at least two labels."""
  if X.shape[0] == 0:
    return []
  _, first, inverse = np.unique(X, axis=0, return_index=True,
                                return_inverse=True)
  inverse = inverse.reshape(-1)
  ret = []
  for group in np.argsort(first, kind="stable"):
    members = np.flatnonzero(inverse == group)
    labels = y[members]
    if len(np.unique(labels)) < 2:
      continue
    sizes = tuple(int((labels == k).sum()) for k in range(n_classes))
    ret.append(ConflictCut(tuple(int(i) for i in members), sizes, features))
  return ret


def static_conflict_cuts(data: UniqueDataset) -> List[ConflictCut]:
  """One cut per group of unique instances with identical features and at
  least two labels."""
  return _conflict_groups(data.X, data.y, data.n_classes)


def unused_features(values, art: FormulationArtifacts,
                    zero_threshold: float) -> Tuple[int, ...]:
  values = _values(values)
  tv = art.tree
  usage = np.zeros(tv.n_features)
  for (_, f), i in tv.b.items():
    usage[f] += values[i]
  return tuple(int(f) for f in np.flatnonzero(usage <= zero_threshold))


def separate_feature_activated(values,
                               art: FormulationArtifacts,
                               data: UniqueDataset,
                               zero_threshold: float = 1e-6
                              ) -> List[ConflictCut]:
  """Violated feature-activated conflict cuts at an LP point.

  Features whose b values sum to at most `zero_threshold` are dropped;
  instances that then share a pattern and hold two labels form a group.
  Groups whose members already agree on every feature are left to the
  static cuts.

  """
  values = _values(values)
  dropped = unused_features(values, art, zero_threshold)
  if not dropped:
    return []
  kept = [f for f in range(data.n_features) if f not in set(dropped)]

  ret = []
  for cut in _conflict_groups(data.X[:, kept], data.y, data.n_classes,
                              dropped):
    rows = data.X[list(cut.members)]
    if (rows == rows[0]).all():
      continue
    if cut.violation(values, art) > VIOLATION_TOL:
      ret.append(cut)
  return ret


class CutPool():
  """Deduplicates cuts by (members, features) and stops accepting new ones
  once `limit` are stored."""

  def __init__(self, limit: int):
    self.limit = limit
    self._keys: Set[Tuple[Tuple[int, ...], Tuple[int, ...]]] = set()
    self.cuts: List[ConflictCut] = []
    self._warned = False

  def __len__(self) -> int:
    return len(self.cuts)

  def __contains__(self, cut: ConflictCut) -> bool:
    return cut.key in self._keys

  @property
  def full(self) -> bool:
    return len(self.cuts) >= self.limit

  def add(self, cut: ConflictCut) -> bool:
    if cut.key in self._keys:
      return False
    if self.full:
      if not self._warned:
        logging.info("Cut pool is full (%d cuts); dropping new cuts.",
                     self.limit)
        self._warned = True
      return False
    self._keys.add(cut.key)
    self.cuts.append(cut)
    return True

  def add_all(self, cuts: Sequence[ConflictCut]) -> List[ConflictCut]:
    return [c for c in cuts if self.add(c)]

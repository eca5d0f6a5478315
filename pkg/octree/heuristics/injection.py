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
"""Warm starts for the Benders master.

Trees become full master assignments through tree_to_assignment. Two
injection schemes feed them to the search: a depth-incremental one that
grows the feature set along a random-forest ranking before the search
starts, and a node heuristic that re-solves small sub-MIPs on the features
an LP relaxation leans on.

"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import (Any, Callable, Dict, Iterable, List, Optional, Set,
                    Tuple)

import numpy as np

from octree.dataset import UniqueDataset
from octree.formulation import (EncodingError, FormulationArtifacts,
                                TreeShape, tree_values)
from octree.heuristics.cart import FeatureRanking, fit_cart
from octree.milp import Model
from octree.tree import ClassTree, Metric, MetricSpec, Role, TreeError
from octree.tree import metrics as m

# (depth, features or None for all, start) -> tree in full feature indices.
SolveHandle = Callable[[int, Optional[Tuple[int, ...]], Optional[ClassTree]],
                       ClassTree]

# (features, start) -> tree in full feature indices, or None.
SubSolveHandle = Callable[[Tuple[int, ...], Optional[ClassTree]],
                          Optional[ClassTree]]

NODE_HEURISTIC_WIDTH = 3

# Labelings best_labeling scores at once.
MAX_LABELINGS = 1 << 16


def lift_tree(tree: ClassTree, depth: int) -> ClassTree:
  """Embeds `tree` into a deeper topology. Node ids don't change, so former
  leaves become interior leaves with pruned descendants."""
  if depth < tree.depth:
    raise TreeError("Can't lift a depth-{} tree to depth {}".format(
        tree.depth, depth))
  roles = {
      n: node
      for n, node in enumerate(tree.nodes, start=1)
      if node.role is not Role.PRUNED
  }
  return ClassTree.from_roles(depth, roles, tree.n_features)


def tree_to_assignment(tree: ClassTree, art: FormulationArtifacts,
                       data: UniqueDataset) -> np.ndarray:
  """Full master assignment of `tree`: structure, g from routing, and every
  auxiliary of the objective encoding.

  Raises EncodingError when the encoding can't represent the tree, which
  happens for trees with negative MCC.

  """
  if tree.depth < art.depth:
    tree = lift_tree(tree, art.depth)
  values = np.zeros(art.num_variables)
  tree_values(art.tree, tree, values)

  correct = tree.predict(data.X) == data.y
  values[list(art.g)] = correct.astype(float)
  tp = data.w[correct & (data.y == 1)].sum()
  tn = data.w[correct & (data.y == 0)].sum()
  art.objective.complete(values, tp, tn)
  return values


def best_labeling(shape: TreeShape, data: UniqueDataset, spec: MetricSpec,
                  lam: float = 0.0) -> Optional[ClassTree]:
  """The labeling of `shape`'s leaves with the best master objective.

  Every objective is nondecreasing in the correct-classification counts, so
  this is also the best the master can reach with this shape. Labelings the
  master can't encode (negative MCC) are skipped; returns None when none is
  left. Raises ValueError for binary data with more than MAX_LABELINGS
  labelings to score.

  """
  leaves = sorted(shape.leaves)
  at = shape.leaf_of(data.X)
  w = data.w.astype(float)

  if data.n_classes != 2:
    labels = {}
    for n in leaves:
      here = at == n
      scores = [w[here & (data.y == k)].sum() for k in shape.leaves[n]]
      labels[n] = shape.leaves[n][int(np.argmax(scores))]
    return shape.tree(labels, data.n_features)

  choices = [shape.leaves[n] for n in leaves]
  count = 1
  for c in choices:
    count *= len(c)
  if count > MAX_LABELINGS:
    raise ValueError("{} labelings exceed {}".format(count, MAX_LABELINGS))
  options = np.array(list(itertools.product(*choices)))

  pos = np.array([w[(at == n) & (data.y == 1)].sum() for n in leaves])
  neg = np.array([w[(at == n) & (data.y == 0)].sum() for n in leaves])
  tp = (options == 1) @ pos
  tn = (options == 0) @ neg
  reward = None
  if spec.kappa is not None:
    kw = np.asarray(spec.kappa, dtype=float) * w
    kpos = np.array([kw[(at == n) & (data.y == 1)].sum() for n in leaves])
    kneg = np.array([kw[(at == n) & (data.y == 0)].sum() for n in leaves])
    reward = (options == 1) @ kpos + (options == 0) @ kneg

  npos, nneg = w[data.y == 1].sum(), w[data.y == 0].sum()
  value = m.objective_array(tp, tn, npos, nneg, spec, lam, shape.splits,
                            reward)
  if spec.kind is Metric.MCC:
    a, _, _ = m.mcc_parts(tp, tn, npos, nneg)
    value = np.where(a < 0, -np.inf, value)
  best = int(np.argmax(value))
  if not np.isfinite(value[best]):
    return None
  return shape.tree(dict(zip(leaves, options[best].tolist())), data.n_features)


@dataclass
class WarmStartState:
  """Per-depth record of a depth-incremental warm start: the tree T_d, the
  feature set F_d and the two warm starts handed to the solver."""
  trees: Dict[int, ClassTree] = field(default_factory=dict)
  features: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
  sub_starts: Dict[int, ClassTree] = field(default_factory=dict)
  full_starts: Dict[int, ClassTree] = field(default_factory=dict)

  def record(self, depth: int, tree: ClassTree, features: Iterable[int],
             sub_start: ClassTree, full_start: ClassTree) -> None:
    features = tuple(sorted(set(features)))
    previous = self.features.get(depth - 1)
    if previous is not None and not set(previous) <= set(features):
      raise ValueError("Feature sets must grow with depth: {} vs {}".format(
          previous, features))
    if tree.depth != depth:
      raise TreeError("Expected a depth-{} tree, got depth {}".format(
          depth, tree.depth))
    self.trees[depth] = tree
    self.features[depth] = features
    self.sub_starts[depth] = sub_start
    self.full_starts[depth] = full_start

  def to_dict(self) -> Dict[str, Any]:
    return {
        str(d): {
            "features": list(self.features[d]),
            "tree": self.trees[d].to_dict(),
        } for d in sorted(self.trees)
    }


def _grow(features: Iterable[int], ranking: FeatureRanking,
          k: int) -> Tuple[int, ...]:
  features = set(features)
  return tuple(sorted(features | set(ranking.top(k, features))))


def feasible_solution_injection(data: UniqueDataset,
                                depth: int,
                                ranking: FeatureRanking,
                                k: int,
                                solve: SolveHandle,
                                state: Optional[WarmStartState] = None
                               ) -> List[ClassTree]:
  """Depth-incremental warm start; returns T_2, ..., T_depth.

  At depth 2 the reduced problem uses the features of the depth-`depth` CART
  tree plus the first k ranked features outside them, warm started from the
  depth-2 CART tree. Every later depth adds the next k ranked features and
  starts from the previous tree lifted one level. Each reduced solution then
  warm starts the full problem. The handle must return a tree at least as
  good as its start.

  """
  if depth < 2:
    raise ValueError("Depth-incremental warm starts need depth >= 2.")
  if k < 0:
    raise ValueError("Feature increment must be non-negative, got {}".format(k))
  state = WarmStartState() if state is None else state

  cart = fit_cart(data, depth)
  features = _grow(cart.features(), ranking, k)
  start = fit_cart(data, 2)

  trees: List[ClassTree] = []
  for d in range(2, depth + 1):
    if trees:
      features = _grow(features, ranking, k)
      start = lift_tree(trees[-1], d)
    reduced = solve(d, features, start)
    tree = solve(d, None, reduced)
    features = tuple(sorted(set(features) | set(tree.features())))
    state.record(d, tree, features, start, reduced)
    trees.append(tree)
    logging.info("Warm start at depth %d: %d features, %d splits.", d,
                 len(features), tree.splits())
  return trees


class HistorySet():
  """Feature subsets the node heuristic already tried, in sorted form."""

  def __init__(self):
    self._seen: Set[Tuple[int, ...]] = set()

  @staticmethod
  def canonical(features: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted({int(f) for f in features}))

  def __contains__(self, features: Iterable[int]) -> bool:
    return self.canonical(features) in self._seen

  def __len__(self) -> int:
    return len(self._seen)

  def add(self, features: Iterable[int]) -> bool:
    """Returns False when the subset was seen before."""
    key = self.canonical(features)
    if key in self._seen:
      return False
    self._seen.add(key)
    return True


def feature_scores(values: np.ndarray, art: FormulationArtifacts) -> np.ndarray:
  """score(f) = sum over branch nodes of b[n, f] at an LP solution."""
  ret = np.zeros(art.tree.n_features)
  for (_, f), i in art.tree.b.items():
    ret[f] += values[i]
  return ret


def candidate_features(values: np.ndarray,
                       art: FormulationArtifacts,
                       incumbent_features: Iterable[int],
                       width: int = NODE_HEURISTIC_WIDTH) -> Tuple[int, ...]:
  """The incumbent's features plus the `width` best scored other ones."""
  base = set(incumbent_features)
  score = feature_scores(values, art)
  fresh = sorted((f for f in range(len(score)) if f not in base),
                 key=lambda f: (-score[f], f))
  return HistorySet.canonical(base | set(fresh[:width]))


def node_heuristic_injection(values: np.ndarray,
                             art: FormulationArtifacts,
                             incumbent: Optional[ClassTree],
                             history: HistorySet,
                             data: UniqueDataset,
                             model: Model,
                             solve_sub: SubSolveHandle,
                             incumbent_objective: Optional[float] = None
                            ) -> Optional[np.ndarray]:
  """Solves a short sub-MIP on the features an LP solution favours.

  Returns a master assignment only when it is feasible and strictly beats
  `incumbent_objective`. `history` gains the subset exactly when a sub-MIP
  is attempted.

  """
  incumbent_features = incumbent.features() if incumbent is not None else ()
  subset = candidate_features(np.asarray(values), art, incumbent_features)
  if subset in history:
    return None
  history.add(subset)

  tree = solve_sub(subset, incumbent)
  if tree is None:
    return None
  try:
    assignment = tree_to_assignment(tree, art, data)
  except EncodingError as e:
    logging.debug("Sub-MIP tree has no encoding: %s", e)
    return None

  objective = model.objective_value(assignment)
  if incumbent_objective is not None and \
     objective <= incumbent_objective + 1e-9 * max(1.0, abs(objective)):
    return None
  problems = model.check_feasible(assignment)
  if problems:
    logging.warning("Sub-MIP assignment fails the master: %s", problems[:3])
    return None
  logging.debug("Node heuristic on %s found %.6f.", subset, objective)
  return assignment

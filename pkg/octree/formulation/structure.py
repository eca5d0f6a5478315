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
"""Tree-structure variables shared by every formulation.

b[n, f] selects the split feature of branch node n, p[n] marks n as a leaf
and c[n, k] assigns label k to a leaf. The structural rows say that every
node either branches, is a leaf, or sits below a leaf, and that every leaf
carries exactly one label.

"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from octree.milp import LinearExpr, Model, Sense, VarType
from octree.tree import ClassTree, Node, Role, TreeError, TreeTopology

INT_TOL = 1e-6


@dataclass(frozen=True)
class TreeVars:
  """Model ids of the structural variables of one depth-D tree."""
  topology: TreeTopology
  n_features: int
  n_classes: int
  b: Dict[Tuple[int, int], int]
  p: Dict[int, int]
  c: Dict[Tuple[int, int], int]

  @property
  def b_ids(self) -> List[int]:
    return list(self.b.values())

  @property
  def p_ids(self) -> List[int]:
    return list(self.p.values())

  @property
  def c_ids(self) -> List[int]:
    return list(self.c.values())

  def branch_row(self, n: int) -> LinearExpr:
    """sum_f b[n, f] + p[n] + sum over ancestors of p."""
    expr = LinearExpr.sum(self.b[n, f] for f in range(self.n_features))
    return expr + LinearExpr.sum([self.p[n]] + [
        self.p[m] for m in self.topology.ancestors(n)
    ])

  def leaf_row(self, n: int) -> LinearExpr:
    return LinearExpr.sum([self.p[n]] +
                          [self.p[m] for m in self.topology.ancestors(n)])

  def split_count(self) -> LinearExpr:
    return LinearExpr.sum(self.b_ids)

  def side(self, n: int, x: np.ndarray, value: int) -> LinearExpr:
    """Sum of b[n, f] over the features with x[f] == value; the capacity of
    the arc from n to its left (value 0) or right (value 1) child."""
    feats = np.flatnonzero(np.asarray(x) == value)
    return LinearExpr.sum(self.b[n, int(f)] for f in feats)

  @staticmethod
  def from_model(model: Model, topo: TreeTopology, n_features: int,
                 n_classes: int) -> "TreeVars":
    """Looks the structural variables of a built model up by name."""
    vid = model.variable_id
    b = {(n, f): vid("b_{}_{}".format(n, f))
         for n in topo.branch_nodes
         for f in range(n_features)}
    p = {n: vid("p_{}".format(n)) for n in topo.nodes}
    c = {(n, k): vid("c_{}_{}".format(n, k))
         for n in topo.nodes
         for k in range(n_classes)}
    return TreeVars(topo, n_features, n_classes, b, p, c)


def add_tree_variables(model: Model,
                       topo: TreeTopology,
                       n_features: int,
                       n_classes: int,
                       degenerate: Sequence[bool] = ()) -> TreeVars:
  """Adds b, p and c. Splits on degenerate (constant) columns are fixed to
  zero; the variables stay so feature indices line up with the data."""
  if n_features < 1 or n_classes < 1:
    raise TreeError("Need at least one feature and one class.")
  degenerate = tuple(degenerate) or (False,) * n_features

  b = {}
  for n in topo.branch_nodes:
    for f in range(n_features):
      ub = 0.0 if degenerate[f] else 1.0
      b[n, f] = model.add_variable("b_{}_{}".format(n, f), 0.0, ub,
                                   VarType.BINARY)
  p = {n: model.add_binary("p_{}".format(n)) for n in topo.nodes}
  c = {(n, k): model.add_binary("c_{}_{}".format(n, k))
       for n in topo.nodes
       for k in range(n_classes)}
  return TreeVars(topo, n_features, n_classes, b, p, c)


def add_tree_constraints(model: Model, tv: TreeVars) -> None:
  for n in tv.topology.branch_nodes:
    model.add_constraint(tv.branch_row(n), Sense.EQ, 1.0,
                         "branch_{}".format(n))
  for n in tv.topology.leaf_nodes:
    model.add_constraint(tv.leaf_row(n), Sense.EQ, 1.0, "leaf_{}".format(n))
  for n in tv.topology.nodes:
    expr = LinearExpr.sum(tv.c[n, k] for k in range(tv.n_classes))
    model.add_constraint(expr - LinearExpr.var(tv.p[n]), Sense.EQ, 0.0,
                         "label_{}".format(n))


def add_branch_cap(model: Model, tv: TreeVars, cap: int) -> None:
  """Limits the number of branching nodes to `cap`."""
  if cap < 0:
    raise TreeError("max_branch_nodes must be non-negative, got {}".format(cap))
  model.add_constraint(tv.split_count(), Sense.LE, float(cap), "max_branch")


def tree_values(tv: TreeVars, tree: ClassTree, values: np.ndarray) -> None:
  """Writes the (b, p, c) encoding of `tree` into `values` in place."""
  if tree.depth != tv.topology.depth:
    raise TreeError("Tree depth {} doesn't match the model's {}".format(
        tree.depth, tv.topology.depth))
  for i in tv.b_ids + tv.p_ids + tv.c_ids:
    values[i] = 0.0

  for n, node in enumerate(tree.nodes, start=1):
    if node.role is Role.BRANCH:
      if node.value >= tv.n_features:
        raise TreeError("Node {} splits on unknown feature {}".format(
            n, node.value))
      values[tv.b[n, node.value]] = 1.0
    elif node.role is Role.LEAF:
      if node.value >= tv.n_classes:
        raise TreeError("Node {} predicts unknown class {}".format(
            n, node.value))
      values[tv.p[n]] = 1.0
      values[tv.c[n, node.value]] = 1.0


def _on(values: np.ndarray, ids: Iterable[int]) -> List[int]:
  """Positions in `ids` whose value is one; raises on fractional entries."""
  ret = []
  for pos, i in enumerate(ids):
    v = values[i]
    if abs(v - round(v)) > INT_TOL:
      raise TreeError("Variable {} has fractional value {}".format(i, v))
    if round(v) == 1:
      ret.append(pos)
  return ret


def read_tree(tv: TreeVars,
              values: np.ndarray,
              n_features: Optional[int] = None) -> ClassTree:
  """Decodes an integral structural assignment into a ClassTree.

  Raises TreeError when the assignment breaks the structural rows: a node
  with two roles, a reachable node with none, or a leaf without exactly one
  label.

  """
  topo = tv.topology
  roles: Dict[int, Node] = {}
  stack = [1]
  while stack:
    n = stack.pop()
    feats = _on(values, [tv.b[n, f] for f in range(tv.n_features)]) \
        if not topo.is_leaf(n) else []
    leaf = _on(values, [tv.p[n]])
    labels = _on(values, [tv.c[n, k] for k in range(tv.n_classes)])

    if len(feats) + len(leaf) != 1:
      raise TreeError("Node {} must either branch once or be a leaf.".format(n))
    if leaf:
      if len(labels) != 1:
        raise TreeError("Leaf {} needs exactly one label, has {}".format(
            n, len(labels)))
      roles[n] = Node.leaf(labels[0])
    else:
      if labels:
        raise TreeError("Branch node {} carries a label.".format(n))
      roles[n] = Node.branch(feats[0])
      stack.extend([2 * n + 1, 2 * n])

  return ClassTree.from_roles(topo.depth, roles,
                              n_features if n_features is not None else
                              tv.n_features)


@dataclass(frozen=True)
class TreeShape:
  """Split features of the reachable branch nodes and, per leaf, the labels
  it may still take."""
  depth: int
  branches: Dict[int, int]
  leaves: Dict[int, Tuple[int, ...]]

  @property
  def splits(self) -> int:
    return len(self.branches)

  def tree(self, labels: Dict[int, int],
           n_features: Optional[int] = None) -> ClassTree:
    roles = {n: Node.branch(f) for n, f in self.branches.items()}
    roles.update({n: Node.leaf(labels[n]) for n in self.leaves})
    return ClassTree.from_roles(self.depth, roles, n_features)

  def leaf_of(self, X: np.ndarray) -> np.ndarray:
    """Leaf node id each row of X reaches."""
    return self.tree({n: n for n in self.leaves}).predict(X)


def fixed_shape(tv: TreeVars, lb: np.ndarray,
                ub: np.ndarray) -> Optional[TreeShape]:
  """The tree shape the structural rows force under these bounds, or None
  while a reachable node can still take more than one role.

  A node's role is forced once one of its b[n, f] and p[n] has lower bound
  one, or all but one have upper bound zero.

  """
  topo = tv.topology
  branches: Dict[int, int] = {}
  leaves: Dict[int, Tuple[int, ...]] = {}
  stack = [1]
  while stack:
    n = stack.pop()
    group = [] if topo.is_leaf(n) else [
        (f, tv.b[n, f]) for f in range(tv.n_features)
    ]
    group.append((-1, tv.p[n]))
    on = [f for f, i in group if lb[i] > 0.5]
    free = [f for f, i in group if ub[i] > 0.5]
    if len(on) == 1:
      role = on[0]
    elif not on and len(free) == 1:
      role = free[0]
    else:
      return None

    if role >= 0:
      branches[n] = role
      stack.extend([2 * n + 1, 2 * n])
      continue
    labels = [k for k in range(tv.n_classes) if ub[tv.c[n, k]] > 0.5]
    chosen = [k for k in labels if lb[tv.c[n, k]] > 0.5]
    if len(chosen) > 1 or not labels:
      return None
    leaves[n] = tuple(chosen or labels)
  return TreeShape(topo.depth, branches, leaves)

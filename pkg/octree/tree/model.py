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
"""Fitted classification trees: node roles, routing, evaluation and
serialization.

A ClassTree stores one role per node of the complete depth-D topology. A leaf
may sit above the bottom level, in which case every node below it is stored as
Pruned. Routing goes left when the split feature is 0 and right when it is 1.

"""

import enum
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from octree.tree.errors import TreeError
from octree.tree.metrics import ClassCounts, ConfusionCounts
from octree.tree.topology import TreeTopology, topology


class Role(enum.Enum):
  BRANCH = "branch"
  LEAF = "leaf"
  PRUNED = "pruned"


@dataclass(frozen=True)
class Node:
  role: Role
  value: Optional[int] = None

  @staticmethod
  def branch(feature: int) -> "Node":
    return Node(Role.BRANCH, int(feature))

  @staticmethod
  def leaf(label: int) -> "Node":
    return Node(Role.LEAF, int(label))

  @staticmethod
  def pruned() -> "Node":
    return Node(Role.PRUNED)


@dataclass(frozen=True)
class ClassTree:
  """A depth-D tree. nodes[n - 1] holds the role of node n.

  Args:
    depth: depth of the underlying complete topology.
    nodes: one Node per topology node, breadth-first.
    n_features: optional feature count the tree was trained on; when set,
                routing checks the arity of every input against it.

  """
  depth: int
  nodes: Tuple[Node, ...]
  n_features: Optional[int] = None

  def __post_init__(self):
    topo = topology(self.depth)
    if len(self.nodes) != topo.num_nodes:
      raise TreeError("A depth-{} tree needs {} nodes, got {}".format(
          self.depth, topo.num_nodes, len(self.nodes)))

    if self.nodes[0].role is Role.PRUNED:
      raise TreeError("The root can't be pruned.")

    for n in topo.nodes:
      node = self.nodes[n - 1]
      if node.role is not Role.PRUNED and (node.value is None or
                                           node.value < 0):
        raise TreeError("Node {} needs a non-negative value.".format(n))
      if node.role is Role.BRANCH and self.n_features is not None and \
         node.value >= self.n_features:
        raise TreeError("Node {} splits on feature {} but the tree has {} "
                        "features.".format(n, node.value, self.n_features))
      if topo.is_leaf(n):
        if node.role is Role.BRANCH:
          raise TreeError("Bottom node {} can't branch.".format(n))
        continue

      children = [self.nodes[2 * n - 1], self.nodes[2 * n]]
      if node.role is Role.BRANCH:
        if any(c.role is Role.PRUNED for c in children):
          raise TreeError("Children of branch node {} can't be pruned.".format(
              n))
      elif any(c.role is not Role.PRUNED for c in children):
        raise TreeError("Nodes below {} node {} must be pruned.".format(
            node.role.value, n))

  @property
  def topology(self) -> TreeTopology:
    return topology(self.depth)

  def node(self, n: int) -> Node:
    return self.nodes[n - 1]

  @staticmethod
  def from_roles(depth: int,
                 roles: Mapping[int, Node],
                 n_features: Optional[int] = None) -> "ClassTree":
    """Builds a tree from the roles of its reachable nodes; every node not in
    `roles` is Pruned."""
    topo = topology(depth)
    nodes = [roles.get(n, Node.pruned()) for n in topo.nodes]
    return ClassTree(depth, tuple(nodes), n_features)

  @staticmethod
  def constant(depth: int,
               label: int,
               n_features: Optional[int] = None) -> "ClassTree":
    return ClassTree.from_roles(depth, {1: Node.leaf(label)}, n_features)

  def features(self) -> List[int]:
    return sorted({n.value for n in self.nodes if n.role is Role.BRANCH})

  def splits(self) -> int:
    return sum(1 for n in self.nodes if n.role is Role.BRANCH)

  def leaves(self) -> List[int]:
    return [i + 1 for i, n in enumerate(self.nodes) if n.role is Role.LEAF]

  def with_features(self, mapping: Mapping[int, int],
                    n_features: Optional[int]) -> "ClassTree":
    """Renumbers split features through `mapping`."""
    nodes = tuple(
        Node.branch(mapping[n.value]) if n.role is Role.BRANCH else n
        for n in self.nodes)
    return ClassTree(self.depth, nodes, n_features)

  def _check_arity(self, width: int) -> None:
    if self.n_features is not None and width != self.n_features:
      raise TreeError("Tree expects {} features, input has {}".format(
          self.n_features, width))
    used = self.features()
    if used and used[-1] >= width:
      raise TreeError("Tree splits on feature {} but input has {}".format(
          used[-1], width))

  def route(self, x) -> Tuple[int, int]:
    """Returns (leaf node, predicted label) for a single binary vector."""
    x = np.asarray(x)
    self._check_arity(x.shape[0])
    n = 1
    while True:
      node = self.nodes[n - 1]
      if node.role is Role.LEAF:
        return n, node.value
      n = 2 * n + int(x[node.value] == 1)

  def predict(self, X) -> np.ndarray:
    """Vectorized routing over the rows of X; returns predicted labels."""
    X = np.asarray(X)
    if X.ndim != 2:
      raise TreeError("Expected a matrix, got shape {}".format(X.shape))
    self._check_arity(X.shape[1])
    at = np.ones(X.shape[0], dtype=int)
    out = np.full(X.shape[0], -1, dtype=int)
    for n in self.topology.nodes:
      here = at == n
      if not here.any():
        continue
      node = self.nodes[n - 1]
      if node.role is Role.LEAF:
        out[here] = node.value
      elif node.role is Role.BRANCH:
        at[here] = 2 * n + (X[here, node.value] == 1)
    return out

  # Serialization.

  def to_dict(self) -> Dict[str, Any]:
    nodes = []
    for n, node in enumerate(self.nodes, start=1):
      entry: Dict[str, Any] = {"id": n, "role": node.role.value}
      if node.role is Role.BRANCH:
        entry["feature"] = node.value
      elif node.role is Role.LEAF:
        entry["label"] = node.value
      nodes.append(entry)
    ret: Dict[str, Any] = {"depth": self.depth, "nodes": nodes}
    if self.n_features is not None:
      ret["n_features"] = self.n_features
    return ret

  def to_json(self) -> str:
    return json.dumps(self.to_dict(), indent=2)

  @staticmethod
  def from_dict(d: Mapping[str, Any]) -> "ClassTree":
    try:
      depth = int(d["depth"])
      roles = {}
      for entry in d["nodes"]:
        role = Role(entry["role"])
        if role is Role.BRANCH:
          roles[int(entry["id"])] = Node.branch(entry["feature"])
        elif role is Role.LEAF:
          roles[int(entry["id"])] = Node.leaf(entry["label"])
    except (KeyError, TypeError, ValueError) as e:
      raise TreeError("Malformed tree document: {}".format(e))
    return ClassTree.from_roles(depth, roles, d.get("n_features"))

  @staticmethod
  def from_json(s: str) -> "ClassTree":
    return ClassTree.from_dict(json.loads(s))

  def to_dot(self,
             feature_names: Optional[List[str]] = None,
             class_names: Optional[List[str]] = None) -> str:
    """Graphviz source; left edges are labeled 0 and right edges 1."""

    def fname(f):
      return feature_names[f] if feature_names else "x{}".format(f)

    def cname(k):
      return class_names[k] if class_names else str(k)

    lines = ["digraph tree {", "  node [fontname=\"helvetica\"];"]
    for n, node in enumerate(self.nodes, start=1):
      if node.role is Role.BRANCH:
        lines.append("  n{} [shape=box, label={}];".format(
            n, json.dumps(fname(node.value))))
        lines.append("  n{} -> n{} [label=\"0\"];".format(n, 2 * n))
        lines.append("  n{} -> n{} [label=\"1\"];".format(n, 2 * n + 1))
      elif node.role is Role.LEAF:
        lines.append("  n{} [shape=ellipse, label={}];".format(
            n, json.dumps(cname(node.value))))
    lines.append("}")
    return "\n".join(lines) + "\n"


def route(tree: ClassTree, x) -> Tuple[int, int]:
  return tree.route(x)


def evaluate(tree: ClassTree,
             data,
             kappa: Optional[np.ndarray] = None
            ) -> Union[ConfusionCounts, ClassCounts]:
  """Weighted counts of `tree` on a dataset with X, y, n_classes and
  (optionally) per-row weights w."""
  pred = tree.predict(data.X)
  w = getattr(data, "w", None)
  if data.n_classes == 2:
    return ConfusionCounts.from_predictions(data.y, pred, w, kappa)
  return ClassCounts.from_predictions(data.y, pred, data.n_classes, w)

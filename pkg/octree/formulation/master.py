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
"""The Benders master over a unique dataset.

The master keeps the tree structure (b, p, c) and one binary g_i per unique
instance. The flow subproblem of instance i is replaced by min-cut rows

  g_i <= cap_i(S)    for node sets S containing the source,

which are never written up front; the search adds them lazily when an
integer candidate violates one (see octree.solver.cuts).

"""

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Tuple

import numpy as np

from octree.dataset import UniqueDataset
from octree.formulation.objectives import AbstractObjective, encode_objective
from octree.formulation.structure import (TreeVars, add_branch_cap,
                                          add_tree_constraints,
                                          add_tree_variables)
from octree.milp import Constraint, LinearExpr, Model, Sense
from octree.tree import MetricSpec, TreeError, topology

SOURCE = 0

# Branching priorities; larger values branch first.
PRIORITY_B = 4
PRIORITY_P = 3
PRIORITY_C = 2
PRIORITY_G = 1


@dataclass(frozen=True)
class FormulationArtifacts:
  """Maps the symbols of a built master onto model variable ids."""
  tree: TreeVars
  g: Tuple[int, ...]
  objective: AbstractObjective
  spec: MetricSpec
  lam: float
  num_variables: int
  max_branch_nodes: Optional[int] = None

  @property
  def depth(self) -> int:
    return self.tree.topology.depth

  def priority(self) -> np.ndarray:
    ret = np.zeros(self.num_variables, dtype=int)
    for ids, level in ((self.tree.b_ids, PRIORITY_B),
                       (self.tree.p_ids, PRIORITY_P),
                       (self.tree.c_ids, PRIORITY_C), (self.g, PRIORITY_G)):
      ret[list(ids)] = level
    return ret

  def symbols(self) -> Dict[str, Any]:
    tv = self.tree
    ret: Dict[str, Any] = {
        "b": {"{}_{}".format(n, f): i for (n, f), i in tv.b.items()},
        "p": {str(n): i for n, i in tv.p.items()},
        "c": {"{}_{}".format(n, k): i for (n, k), i in tv.c.items()},
        "g": list(self.g),
    }
    ret.update(self.objective.symbols)
    return ret

  def to_dict(self, model: Model) -> Dict[str, Any]:
    """Symbol table with variable names in place of ids."""

    def named(item):
      if isinstance(item, dict):
        return {k: named(v) for k, v in item.items()}
      if isinstance(item, (list, tuple)):
        return [named(v) for v in item]
      return model.variable(item).name

    return {
        "depth": self.depth,
        "objective": self.spec.name,
        "lambda": self.lam,
        "max_branch_nodes": self.max_branch_nodes,
        "symbols": named(self.symbols()),
    }

  def to_json(self, model: Model) -> str:
    return json.dumps(self.to_dict(model), indent=2)


def build_benders_master(data: UniqueDataset,
                         depth: int,
                         lam: float,
                         spec: MetricSpec,
                         max_branch_nodes: Optional[int] = None
                        ) -> Tuple[Model, FormulationArtifacts]:
  """Structural rows, g binaries and the objective encoding of `spec`; no
  Benders cuts."""
  if not 0 <= lam < 1:
    raise TreeError("lambda must lie in [0, 1), got {}".format(lam))
  spec.check_classes(data.n_classes)

  topo = topology(depth)
  model = Model("benders_{}".format(spec.name))
  tv = add_tree_variables(model, topo, data.n_features, data.n_classes,
                          data.degenerate)
  add_tree_constraints(model, tv)
  if max_branch_nodes is not None:
    add_branch_cap(model, tv, max_branch_nodes)

  g = tuple(model.add_binary("g_{}".format(i)) for i in range(data.n_unique))
  objective = encode_objective(model, g, data, spec, lam, tv.split_count())

  art = FormulationArtifacts(tv, g, objective, spec, lam, model.num_variables,
                             max_branch_nodes)
  logging.info("Built the %s master at depth %d: %d variables, %d rows.",
               spec.name, depth, model.num_variables, model.num_constraints)
  return model, art


def _check_cut_set(tv: TreeVars, nodes: Iterable[int]) -> frozenset:
  S = frozenset(int(n) for n in nodes)
  if SOURCE not in S:
    raise ValueError("Cut sets must contain the source.")
  bad = [n for n in S if n != SOURCE and not 1 <= n <= tv.topology.num_nodes]
  if bad:
    raise ValueError("Cut set holds nodes outside the tree: {}".format(
        sorted(bad)))
  return S


def cut_capacity(art: FormulationArtifacts, data: UniqueDataset, i: int,
                 nodes: Iterable[int]) -> LinearExpr:
  """Capacity of the arcs leaving `nodes` in instance i's flow network.

  Arc capacities: s -> 1 is 1; n -> 2n is the sum of b[n, f] over features
  with x_f = 0; n -> 2n + 1 the sum over x_f = 1; n -> t is c[n, y_i].

  """
  tv = art.tree
  S = _check_cut_set(tv, nodes)
  x, label = data.X[i], int(data.y[i])

  ret = LinearExpr()
  if 1 not in S:
    ret = ret + 1.0
  for n in sorted(S - {SOURCE}):
    if not tv.topology.is_leaf(n):
      for child, side in ((2 * n, 0), (2 * n + 1, 1)):
        if child not in S:
          ret = ret + tv.side(n, x, side)
    ret = ret + LinearExpr.var(tv.c[n, label])
  return ret


def benders_cut(model: Model, art: FormulationArtifacts, data: UniqueDataset,
                i: int, nodes: Iterable[int]) -> Constraint:
  """The row g_i <= cap_i(S)."""
  S = sorted(frozenset(nodes))
  expr = LinearExpr.var(art.g[i]) - cut_capacity(art, data, i, S)
  name = "benders_{}_{}".format(i, "_".join(str(n) for n in S))
  return model.make_constraint(expr, Sense.LE, 0.0, name, family="benders")

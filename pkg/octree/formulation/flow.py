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
"""Flow formulations: every instance is a unit of flow from the source s
through the tree to the sink t, and reaching t means it is classified
correctly.

The source is node 0, so the arc into node n always comes from n // 2. Flow
variables are named z_{i}_{a}_{n} for the arc a -> n and z_{i}_{n}_t for the
arc n -> t.

"""

import logging
from typing import Sequence

import numpy as np

from octree.dataset import BinarizedDataset, UniqueDataset
from octree.formulation.structure import (TreeVars, add_tree_constraints,
                                          add_tree_variables)
from octree.milp import LinearExpr, Model, Sense, VarType
from octree.tree import TreeError, topology


def _check_lambda(lam: float) -> None:
  if not 0 <= lam < 1:
    raise TreeError("lambda must lie in [0, 1), got {}".format(lam))


def _add_flows(model: Model, tv: TreeVars, X: np.ndarray, y: np.ndarray,
               weights: Sequence[float], vtype: VarType) -> LinearExpr:
  """Adds flow variables and conservation/capacity rows for every row of X.
  Returns the weighted sum of flow into the sink."""
  topo = tv.topology
  sink_flow = LinearExpr()

  for i in range(X.shape[0]):
    x, label = X[i], int(y[i])
    into = {
        n: model.add_variable("z_{}_{}_{}".format(i, n // 2, n), 0.0, 1.0,
                              vtype) for n in topo.nodes
    }
    out = {
        n: model.add_variable("z_{}_{}_t".format(i, n), 0.0, 1.0, vtype)
        for n in topo.nodes
    }

    for n in topo.nodes:
      if topo.is_leaf(n):
        kept = LinearExpr.var(out[n])
      else:
        left, right = 2 * n, 2 * n + 1
        kept = LinearExpr.sum([into[left], into[right], out[n]])
        model.add_constraint(
            LinearExpr.var(into[left]) - tv.side(n, x, 0), Sense.LE, 0.0,
            "flow_left_{}_{}".format(i, n))
        model.add_constraint(
            LinearExpr.var(into[right]) - tv.side(n, x, 1), Sense.LE, 0.0,
            "flow_right_{}_{}".format(i, n))

      model.add_constraint(
          LinearExpr.var(into[n]) - kept, Sense.EQ, 0.0,
          "flow_{}_{}".format(i, n))
      model.add_constraint(
          LinearExpr.var(out[n]) - LinearExpr.var(tv.c[n, label]), Sense.LE,
          0.0, "flow_sink_{}_{}".format(i, n))

    sink_flow = sink_flow + LinearExpr.sum(out.values(), float(weights[i]))

  return sink_flow


def _build(name: str, X: np.ndarray, y: np.ndarray, n_classes: int,
           degenerate, weights, depth: int, lam: float,
           vtype: VarType) -> Model:
  _check_lambda(lam)
  topo = topology(depth)
  model = Model(name)
  tv = add_tree_variables(model, topo, X.shape[1], n_classes, degenerate)
  add_tree_constraints(model, tv)
  sink_flow = _add_flows(model, tv, X, y, weights, vtype)
  model.set_objective((1 - lam) * sink_flow - lam * tv.split_count())
  logging.info("Built %s: %d variables, %d constraints.", name,
               model.num_variables, model.num_constraints)
  return model


def build_flowoct(data: BinarizedDataset, depth: int, lam: float) -> Model:
  """One binary flow per original row, objective
  (1 - lam) * sum z[n, t] - lam * sum b."""
  return _build("flowoct", data.X, data.y, data.n_classes, data.degenerate,
                np.ones(data.n_rows), depth, lam, VarType.BINARY)


def build_wflowoct(data: UniqueDataset, depth: int, lam: float) -> Model:
  """One flow per unique row, weighted by its multiplicity.

  Flows are continuous: once b and c are integral the flow network has
  integral capacities, so an optimal vertex sends integral flow.

  """
  return _build("wflowoct", data.X, data.y, data.n_classes, data.degenerate,
                data.w, depth, lam, VarType.CONTINUOUS)


def flow_tree_vars(model: Model, data, depth: int) -> TreeVars:
  return TreeVars.from_model(model, topology(depth), data.n_features,
                             data.n_classes)

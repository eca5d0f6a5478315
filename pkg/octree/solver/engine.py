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
"""Solving the Benders master: cut callbacks, restricted solves and the
end-to-end training entry point."""

import logging
import time
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from octree.dataset import (UniqueDataset, per_row, per_unique,
                            restrict_features)
from octree.formulation import (EncodingError, FormulationArtifacts,
                                TreeShape, build_benders_master,
                                fixed_shape)
from octree.heuristics import (HistorySet, SubSolveHandle, WarmStartState,
                               best_labeling, feasible_solution_injection,
                               fit_cart, node_heuristic_injection,
                               rf_ranking, tree_to_assignment)
from octree.milp import Constraint, Model
from octree.reporter import AbstractReporter
from octree.solver.config import SolveConfig
from octree.solver.cuts import (INT_TOL, CutPool, benders_rows, min_cut_rows,
                                separate_feature_activated,
                                static_conflict_cuts, structure_integral)
from octree.solver.result import SolveResult, extract_tree
from octree.solver.search import (BranchAndCut, Callback, SearchNode,
                                  SearchStatus, Settled, SolverError)
from octree.tree import ClassTree, MetricError, MetricSpec, TreeError

# Fraction of the time limit the depth-incremental warm start may spend
# before the final solve.
WARM_START_SHARE = 0.25


class MasterCallback(Callback):
  """Separation and primal heuristics for one Benders master.

  Benders rows are lazy at integral points and cuts at fractional points
  whose tree is integral; with `fractional_benders` the exact min cut runs
  at every other point. Feature-activated conflict cuts are separated at the
  root and every `feature_cut_every`-th node, the node heuristic at the root
  and every `heuristic_every`-th node.

  Branching fixes b and p until the bounds force a tree shape. A node with
  a forced shape and untouched g and auxiliary bounds is settled by the best
  labeling of that shape, since every objective grows with the correct
  counts.

  """

  def __init__(self,
               model: Model,
               art: FormulationArtifacts,
               data: UniqueDataset,
               cfg: SolveConfig,
               sub_solve: Optional[SubSolveHandle] = None):
    self.model = model
    self.art = art
    self.data = data
    self.cfg = cfg
    self.sub_solve = sub_solve
    self.pool = CutPool(cfg.cut_pool_limit)
    self.history = HistorySet()

    tv = art.tree
    self._shape_ids = np.array(tv.b_ids + tv.p_ids, dtype=int)
    rest = model.integer_mask()
    rest[tv.b_ids + tv.p_ids + tv.c_ids] = False
    self._rest = np.flatnonzero(rest)
    self._lb = model.lower_bounds()
    self._ub = model.upper_bounds()

  def _settled(self, shape: TreeShape) -> Optional[Settled]:
    try:
      tree = best_labeling(shape, self.data, self.art.spec, self.art.lam)
      if tree is None:
        return Settled()
      return Settled(tree_to_assignment(tree, self.art, self.data))
    except ValueError as e:
      logging.debug("Can't settle shape %s: %s", shape, e)
      return None

  def lazy(self, search: BranchAndCut,
           values: np.ndarray) -> List[Constraint]:
    return benders_rows(self.model, values, self.art, self.data)

  def cuts(self, search: BranchAndCut, node: SearchNode,
           values: np.ndarray) -> List[Constraint]:
    rows = []
    if structure_integral(values, self.art):
      rows.extend(benders_rows(self.model, values, self.art, self.data))
    elif self.cfg.fractional_benders:
      rows.extend(min_cut_rows(self.model, values, self.art, self.data))

    if self.cfg.enable_feature_cuts and \
       search.nodes % self.cfg.feature_cut_every == 0 and \
       not self.pool.full:
      fresh = self.pool.add_all(
          separate_feature_activated(values, self.art, self.data,
                                     self.cfg.zero_threshold))
      rows.extend(c.to_row(self.model, self.art) for c in fresh)
    return rows

  def branch(self, search: BranchAndCut, node: SearchNode,
             values: np.ndarray) -> Optional[int]:
    v = values[self._shape_ids]
    if np.any(np.abs(v - np.round(v)) > INT_TOL):
      return None
    ids = self._shape_ids
    open_ = ids[(node.ub[ids] - node.lb[ids] > 0.5) & (v > 0.5)]
    return int(open_[0]) if open_.size else None

  def resolve(self, search: BranchAndCut,
              node: SearchNode) -> Optional[Settled]:
    rest = self._rest
    if np.any(node.lb[rest] != self._lb[rest]) or \
       np.any(node.ub[rest] != self._ub[rest]):
      return None
    shape = fixed_shape(self.art.tree, node.lb, node.ub)
    return None if shape is None else self._settled(shape)

  def _lp_tree(self, values: np.ndarray) -> Optional[np.ndarray]:
    """Best labeling of the tree shape an LP point encodes, if it encodes
    one."""
    ids = self._shape_ids
    v = np.round(values[ids])
    if np.any(np.abs(values[ids] - v) > INT_TOL):
      return None
    lb = np.zeros_like(values)
    ub = np.ones_like(values)
    lb[ids] = ub[ids] = v
    shape = fixed_shape(self.art.tree, lb, ub)
    settled = None if shape is None else self._settled(shape)
    return None if settled is None else settled.values

  def heuristic(self, search: BranchAndCut, node: SearchNode,
                values: np.ndarray) -> Optional[np.ndarray]:
    candidate = self._lp_tree(values)
    if candidate is not None:
      search.try_incumbent(candidate)
    if self.sub_solve is None or \
       search.nodes % self.cfg.heuristic_every != 0 or search.out_of_time():
      return None
    incumbent = None
    if search.incumbent is not None:
      incumbent = extract_tree(search.incumbent, self.art, self.data.n_features)
    return node_heuristic_injection(values, self.art, incumbent,
                                    self.history, self.data, self.model,
                                    self.sub_solve,
                                    search.incumbent_objective)


def _constant_fallback(model: Model, art: FormulationArtifacts,
                       data: UniqueDataset
                      ) -> Optional[Tuple[ClassTree, np.ndarray, float]]:
  """The best single-leaf tree, as (tree, assignment, objective)."""
  best = None
  for k in range(data.n_classes):
    tree = ClassTree.constant(art.depth, k, data.n_features)
    try:
      values = tree_to_assignment(tree, art, data)
    except EncodingError:
      continue
    if model.check_feasible(values):
      continue
    objective = model.objective_value(values)
    if best is None or objective > best[2]:
      best = (tree, values, objective)
  return best


def _sub_solver(data: UniqueDataset, art: FormulationArtifacts,
                cfg: SolveConfig) -> SubSolveHandle:
  sub_cfg = replace(cfg.sub_mip(),
                    lam=art.lam,
                    max_branch_nodes=art.max_branch_nodes)

  def run(features: Tuple[int, ...],
          start: Optional[ClassTree]) -> Optional[ClassTree]:
    try:
      return solve_restricted(data, art.depth, features, art.spec, sub_cfg,
                              start=start).tree
    except (SolverError, TreeError, MetricError) as e:
      logging.debug("Sub-MIP on %s failed: %s", features, e)
      return None

  return run


def solve(model: Model,
          art: FormulationArtifacts,
          data: UniqueDataset,
          cfg: SolveConfig,
          reporter: Optional[AbstractReporter] = None,
          start: Optional[ClassTree] = None) -> SolveResult:
  """Branch-and-cut on a master built by build_benders_master for `data`.

  `model` itself is left untouched; static conflict rows go into a copy.
  A timed-out search without an incumbent returns the best constant tree.

  """
  master = model.copy()
  if cfg.enable_conflict_cuts:
    conflicts = static_conflict_cuts(data)
    for cut in conflicts:
      master.add_row(cut.to_row(master, art))
    if conflicts:
      logging.info("Added %d static conflict cuts.", len(conflicts))

  sub_solve = _sub_solver(data, art, cfg) \
      if cfg.enable_node_heuristic else None
  callback = MasterCallback(master, art, data, cfg, sub_solve)
  search = BranchAndCut(master,
                        callback,
                        art.priority(),
                        reporter,
                        time_limit=cfg.time_limit,
                        node_limit=cfg.node_limit,
                        gap_tolerance=cfg.gap_tolerance,
                        lp_iteration_limit=cfg.lp_iteration_limit,
                        max_cut_rounds=cfg.max_cut_rounds)

  if start is not None:
    try:
      accepted = search.try_incumbent(tree_to_assignment(start, art, data))
    except (EncodingError, TreeError) as e:
      logging.debug("Warm start has no master encoding: %s", e)
      accepted = False
    if not accepted:
      logging.warning("Warm start tree was rejected by the master.")

  ret = search.run()
  if ret.status is SearchStatus.INFEASIBLE:
    raise SolverError("The {} master is infeasible.".format(master.name))

  objective, bound = ret.objective, ret.bound
  if ret.values is None:
    fallback = _constant_fallback(master, art, data)
    if fallback is None:
      raise SolverError("No incumbent and no constant tree fits the master.")
    logging.warning("No incumbent after %d nodes; using a constant tree.",
                    ret.nodes)
    tree, _, objective = fallback
    bound = max(bound, objective)
  else:
    tree = extract_tree(ret.values, art, data.n_features)

  return SolveResult(tree,
                     objective,
                     bound,
                     ret.status.value,
                     nodes=ret.nodes,
                     lp_iterations=ret.lp_iterations,
                     cuts=ret.cuts,
                     wall_time=ret.wall_time,
                     metric=art.spec.name)


def restrict_spec(spec: MetricSpec, data: UniqueDataset,
                  restricted: UniqueDataset) -> MetricSpec:
  """Carries per-instance costs over to a restricted dataset. Merged rows
  get the mean cost of their original rows, so every total is unchanged."""
  if spec.kappa is None:
    return spec
  return spec.with_kappa(per_unique(restricted, per_row(data, spec.kappa)))


def solve_restricted(data: UniqueDataset,
                     depth: int,
                     features: Sequence[int],
                     spec: MetricSpec,
                     cfg: SolveConfig,
                     start: Optional[ClassTree] = None,
                     reporter: Optional[AbstractReporter] = None
                    ) -> SolveResult:
  """Solves the master on a feature subset; the returned tree splits on
  full feature indices."""
  features = tuple(sorted({int(f) for f in features}))
  if not features:
    model, art = build_benders_master(data, depth, cfg.lam, spec,
                                      cfg.max_branch_nodes)
    fallback = _constant_fallback(model, art, data)
    if fallback is None:
      raise SolverError("No constant tree fits the master.")
    tree, _, objective = fallback
    return SolveResult(tree, objective, objective, "optimal",
                       metric=spec.name)

  sub, mapping = restrict_features(data, features)
  model, art = build_benders_master(sub, depth, cfg.lam,
                                    restrict_spec(spec, data, sub),
                                    cfg.max_branch_nodes)
  sub_start = None
  if start is not None:
    try:
      sub_start = start.with_features({f: j for j, f in enumerate(mapping)},
                                      len(mapping))
    except KeyError:
      logging.debug("Start tree uses features outside %s.", mapping)

  ret = solve(model, art, sub, cfg, reporter, sub_start)
  return replace(ret,
                 tree=ret.tree.with_features(dict(enumerate(mapping)),
                                             data.n_features))


def train(data: UniqueDataset,
          depth: int,
          spec: MetricSpec,
          cfg: SolveConfig,
          reporter: Optional[AbstractReporter] = None,
          state: Optional[WarmStartState] = None) -> SolveResult:
  """Fits an optimal depth-`depth` tree for `spec`.

  With warm starts on, depth 1 starts from CART and deeper trees from the
  depth-incremental scheme, whose last full solve is the returned one. The
  warm-start solves before it share WARM_START_SHARE of the time limit.

  """
  started = time.monotonic()
  model, art = build_benders_master(data, depth, cfg.lam, spec,
                                    cfg.max_branch_nodes)
  if not cfg.enable_warm_start:
    return solve(model, art, data, cfg, reporter)
  if depth == 1:
    return solve(model, art, data, cfg, reporter, start=fit_cart(data, 1))

  def remaining() -> float:
    return cfg.time_limit - (time.monotonic() - started)

  share = cfg.time_limit * WARM_START_SHARE / (2 * depth - 3)
  final: List[SolveResult] = []

  def handle(d: int, features: Optional[Tuple[int, ...]],
             start: Optional[ClassTree]) -> ClassTree:
    if features is None and d == depth:
      ret = solve(model, art, data, cfg.with_time(remaining()), reporter,
                  start)
      final.append(ret)
      return ret.tree
    warm_cfg = cfg.with_time(min(share, remaining()))
    try:
      if features is not None:
        return solve_restricted(data, d, features, spec, warm_cfg, start).tree
      m, a = build_benders_master(data, d, cfg.lam, spec, cfg.max_branch_nodes)
      return solve(m, a, data, warm_cfg, start=start).tree
    except SolverError as e:
      if start is None:
        raise
      logging.warning("Warm-start solve at depth %d failed (%s); keeping "
                      "its start.", d, e)
      return start

  ranking = rf_ranking(data, cfg.rf_trees, cfg.seed)
  feasible_solution_injection(data, depth, ranking, cfg.feature_increment,
                              handle, state)
  return replace(final[-1], wall_time=time.monotonic() - started)

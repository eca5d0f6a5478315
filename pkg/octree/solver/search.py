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
"""Best-first branch-and-cut over a Model.

The search solves LP relaxations with the dense simplex in octree.milp,
branches on the most fractional integer variable of the highest priority
class, and asks a Callback for three things:

  lazy       rows that cut off an integral LP solution which isn't really
             feasible (Benders cuts); the node is re-solved after adding them.
  cuts       valid inequalities violated by a fractional LP solution.
  heuristic  a full candidate assignment to try as the new incumbent.
  branch     the variable to branch on, overriding the default rule.
  resolve    the optimum of a node it can solve outright; the node is then
             closed without branching.

Internally every model is maximized; minimization models are negated on the
way in and out.

"""

import enum
import heapq
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set

import numpy as np

from octree.milp import Basis, Constraint, DenseLp, LpStatus, Model
from octree.milp.simplex import DEFAULT_ITERATION_LIMIT
from octree.reporter import AbstractReporter, NullReporter
from octree.solver.result import compute_gap

INT_TOL = 1e-6
FEAS_TOL = 1e-7
ABS_GAP = 1e-7


class SolverError(RuntimeError):
  """Raised when a search can't produce a meaningful answer: an infeasible
  master or an unbounded relaxation."""


class SearchStatus(enum.Enum):
  OPTIMAL = "optimal"
  TIME_LIMIT = "time_limit"
  NODE_LIMIT = "node_limit"
  INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SearchNode:
  id: int
  depth: int
  bound: float
  lb: np.ndarray = field(repr=False)
  ub: np.ndarray = field(repr=False)
  basis: Optional[Basis] = field(default=None, repr=False)


@dataclass(frozen=True)
class SearchResult:
  status: SearchStatus
  values: Optional[np.ndarray]
  objective: float
  bound: float
  nodes: int
  lp_iterations: int
  cuts: Dict[str, int]
  wall_time: float

  @property
  def has_incumbent(self) -> bool:
    return self.values is not None


@dataclass(frozen=True)
class Settled:
  """A node solved outright: `values` is its best assignment, or None when
  the node holds no feasible point."""
  values: Optional[np.ndarray] = None


class Callback():
  """Search hooks. The defaults do nothing."""

  def lazy(self, search: "BranchAndCut",
           values: np.ndarray) -> List[Constraint]:
    return []

  def cuts(self, search: "BranchAndCut", node: SearchNode,
           values: np.ndarray) -> List[Constraint]:
    return []

  def heuristic(self, search: "BranchAndCut", node: SearchNode,
                values: np.ndarray) -> Optional[np.ndarray]:
    return None

  def branch(self, search: "BranchAndCut", node: SearchNode,
             values: np.ndarray) -> Optional[int]:
    return None

  def resolve(self, search: "BranchAndCut",
              node: SearchNode) -> Optional[Settled]:
    return None


class BranchAndCut():
  """A single-threaded, deterministic best-bound search.

  Args:
    model: the MILP. Rows added by cuts go to the search's LP, never to the
           model itself.
    callback: separation and heuristic hooks.
    priority: per-variable branching class; higher classes branch first.
    reporter: receives ub, lb, gap, open, cuts and depth after every node.
    time_limit: seconds before the search stops with the best bound so far.
    node_limit: processed nodes before the search stops.
    gap_tolerance: prune nodes whose bound is within this fraction of the
                   incumbent.

  """

  def __init__(self,
               model: Model,
               callback: Optional[Callback] = None,
               priority: Optional[Sequence[int]] = None,
               reporter: Optional[AbstractReporter] = None,
               time_limit: Optional[float] = None,
               node_limit: Optional[int] = None,
               gap_tolerance: float = 0.0,
               lp_iteration_limit: int = DEFAULT_ITERATION_LIMIT,
               max_cut_rounds: int = 5):
    self.model = model
    self.callback = callback or Callback()
    self.reporter = reporter or NullReporter()
    self.time_limit = time_limit
    self.node_limit = node_limit
    self.gap_tolerance = gap_tolerance
    self.lp_iteration_limit = lp_iteration_limit
    self.max_cut_rounds = max_cut_rounds

    n = model.num_variables
    self._sign = 1.0 if model.maximize else -1.0
    self._lp = DenseLp(model)
    self._int = model.integer_mask()
    self._priority = np.zeros(n, dtype=int) if priority is None else \
        np.asarray(priority, dtype=int)
    if self._priority.shape != (n,):
      raise ValueError("Need one priority per variable.")

    self._row_names: Set[str] = {r.name for r in model.constraints}
    self.rows: List[Constraint] = []
    self.cut_counts: Counter = Counter(
        r.family for r in model.constraints if r.family != "model")

    self.incumbent: Optional[np.ndarray] = None
    self._best = -math.inf
    self._bound = math.inf
    self._tolerated = -math.inf
    self.nodes = 0
    self.lp_iterations = 0
    self._next_id = 0
    self._start = time.monotonic()

  # State shared with callbacks.

  @property
  def incumbent_objective(self) -> Optional[float]:
    if self.incumbent is None:
      return None
    return self._sign * self._best

  @property
  def elapsed(self) -> float:
    return time.monotonic() - self._start

  def out_of_time(self) -> bool:
    return self.time_limit is not None and self.elapsed >= self.time_limit

  def add_rows(self, rows: Sequence[Constraint]) -> int:
    """Adds rows not seen before to the relaxation; returns how many."""
    fresh = []
    for row in rows:
      if row.name in self._row_names:
        continue
      self._row_names.add(row.name)
      fresh.append(row)
    if fresh:
      self._lp.add_rows(fresh)
      self.rows.extend(fresh)
      self.cut_counts.update(r.family for r in fresh)
    return len(fresh)

  def _violated(self, rows: Sequence[Constraint],
                values: np.ndarray) -> List[Constraint]:
    return [
        r for r in rows
        if r.violation(values) > FEAS_TOL * max(1.0, abs(r.rhs)) and
        r.name not in self._row_names
    ]

  def _feasible(self, values: np.ndarray) -> bool:
    problems = self.model.check_feasible(values)
    if problems:
      logging.debug("Rejected candidate: %s", problems[:3])
      return False
    return all(
        r.violation(values) <= FEAS_TOL * max(1.0, abs(r.rhs))
        for r in self.rows)

  def _round(self, values) -> np.ndarray:
    ret = np.array(values, dtype=float)
    ret[self._int] = np.round(ret[self._int])
    return ret

  def _accept(self, values: np.ndarray) -> bool:
    value = self._sign * self.model.objective_value(values)
    if value > self._best + 1e-9 * max(1.0, abs(value)):
      self._best = value
      self.incumbent = values
      logging.info("New incumbent %.6f after %d nodes.",
                   self._sign * value, self.nodes)
      return True
    return False

  def _admissible(self, values) -> Optional[np.ndarray]:
    values = self._round(values)
    if values.shape != (self.model.num_variables,) or \
       not self._feasible(values):
      return None
    lazy = self._violated(self.callback.lazy(self, values), values)
    if lazy:
      self.add_rows(lazy)
      logging.debug("Candidate violates %d lazy rows.", len(lazy))
      return None
    return values

  def try_incumbent(self, values) -> bool:
    """Checks a candidate against the model, every added row and the lazy
    rows of the callback; keeps it when it improves the incumbent. Lazy rows
    it violates are added to the relaxation."""
    values = self._admissible(values)
    return values is not None and self._accept(values)

  # Search.

  def _prunable(self, bound: float) -> bool:
    slack = max(ABS_GAP, self.gap_tolerance * abs(bound))
    if bound <= self._best + slack:
      if bound > self._best + ABS_GAP:
        self._tolerated = max(self._tolerated, bound)
      return True
    return False

  def _select(self, values: np.ndarray) -> Optional[int]:
    frac = np.abs(values - np.round(values))
    candidates = np.flatnonzero(self._int & (frac > INT_TOL))
    if candidates.size == 0:
      return None
    dist = np.abs(values[candidates] - np.floor(values[candidates]) - 0.5)
    order = np.lexsort((candidates, dist, -self._priority[candidates]))
    return int(candidates[order[0]])

  def _unfixed(self, lb: np.ndarray, ub: np.ndarray) -> Optional[int]:
    candidates = np.flatnonzero(self._int & (ub - lb > 0.5))
    if candidates.size == 0:
      return None
    order = np.lexsort((candidates, -self._priority[candidates]))
    return int(candidates[order[0]])

  def _child(self, parent: SearchNode, lb, ub, bound,
             basis) -> SearchNode:
    self._next_id += 1
    return SearchNode(self._next_id, parent.depth + 1, bound, lb, ub, basis)

  def _split(self, node: SearchNode, var: int, value: float, bound: float,
             basis: Optional[Basis]) -> List[SearchNode]:
    down_ub = node.ub.copy()
    down_ub[var] = math.floor(value)
    up_lb = node.lb.copy()
    up_lb[var] = math.ceil(value)
    return [
        self._child(node, node.lb, down_ub, bound, basis),
        self._child(node, up_lb, node.ub, bound, basis)
    ]

  def _settle(self, node: SearchNode) -> bool:
    """Closes `node` when the callback solves it outright."""
    settled = self.callback.resolve(self, node)
    if settled is None:
      return False
    if settled.values is None:
      return True
    values = self._admissible(settled.values)
    if values is None:
      logging.debug("Resolved optimum of node %d fails the model check.",
                    node.id)
      return False
    self._accept(values)
    return True

  def _process(self, node: SearchNode) -> List[SearchNode]:
    if self._settle(node):
      return []
    basis = node.basis
    bound = node.bound
    rounds = 0
    cold = False
    while True:
      sol = self._lp.solve(node.lb, node.ub, basis, self.lp_iteration_limit)
      self.lp_iterations += sol.iterations

      if sol.status is LpStatus.INFEASIBLE:
        return []
      if sol.status is LpStatus.UNBOUNDED:
        raise SolverError("The LP relaxation of {} is unbounded.".format(
            self.model.name))
      if sol.status is LpStatus.ITERATION_LIMIT:
        var = self._unfixed(node.lb, node.ub)
        if var is None:
          logging.warning("Dropping node %d: LP iteration limit with every "
                          "integer variable fixed.", node.id)
          return []
        mid = 0.5 * (node.lb[var] + node.ub[var])
        return self._split(node, var, mid, bound, None)

      basis = sol.basis
      bound = min(bound, self._sign * sol.objective)
      if self._prunable(bound):
        return []

      values = sol.values
      var = self._select(values)
      if var is None:
        lazy = self._violated(self.callback.lazy(self, values), values)
        if lazy:
          self.add_rows(lazy)
          continue
        candidate = self._round(values)
        if self._feasible(candidate):
          self._accept(candidate)
          return []
        if not cold:
          # Retry from scratch before splitting the node.
          cold, basis = True, None
          continue
        var = self._unfixed(node.lb, node.ub)
        if var is None:
          logging.warning("Integral LP solution at node %d fails the model "
                          "check with every integer variable fixed.", node.id)
          return []
        logging.debug("Integral LP solution at node %d fails the model "
                      "check; splitting on variable %d.", node.id, var)
        return self._split(node, var, 0.5 * (node.lb[var] + node.ub[var]),
                           bound, None)

      if rounds < self.max_cut_rounds and not self.out_of_time():
        cuts = self._violated(self.callback.cuts(self, node, values), values)
        if cuts:
          self.add_rows(cuts)
          rounds += 1
          continue

      candidate = self.callback.heuristic(self, node, values)
      if candidate is not None:
        self.try_incumbent(candidate)
      if self._prunable(bound):
        return []
      chosen = self.callback.branch(self, node, values)
      if chosen is not None and node.ub[chosen] - node.lb[chosen] > 0.5:
        if abs(values[chosen] - round(values[chosen])) <= INT_TOL:
          return self._split(node, chosen,
                             0.5 * (node.lb[chosen] + node.ub[chosen]), bound,
                             basis)
        var = chosen
      return self._split(node, var, values[var], bound, basis)

  def _global_bound(self, heap) -> float:
    top = -heap[0][0][0] if heap else -math.inf
    self._bound = min(self._bound, max(top, self._best))
    return self._bound

  def _report(self, heap, node: SearchNode) -> None:
    ub = self._global_bound(heap)
    m: Dict[str, float] = {"ub": self._sign * ub}
    if self.incumbent is not None:
      m["lb"] = self._sign * self._best
      m["gap"] = compute_gap(ub, self._best)
    m.update(open=len(heap), cuts=sum(self.cut_counts.values()),
             depth=node.depth)
    self.reporter.report_all(self.nodes, m)

  def run(self) -> SearchResult:
    self._start = time.monotonic()
    root = SearchNode(0, 0, math.inf, self.model.lower_bounds(),
                      self.model.upper_bounds())
    heap = [((-root.bound, 0, root.id), root)]
    status = SearchStatus.OPTIMAL

    while heap:
      if self.out_of_time():
        status = SearchStatus.TIME_LIMIT
        break
      if self.node_limit is not None and self.nodes >= self.node_limit:
        status = SearchStatus.NODE_LIMIT
        break

      _, node = heapq.heappop(heap)
      if self._prunable(node.bound):
        continue
      for child in self._process(node):
        heapq.heappush(heap, ((-child.bound, -child.depth, child.id), child))
      self.nodes += 1
      self._report(heap, node)

    if status is SearchStatus.OPTIMAL:
      if self.incumbent is None:
        status = SearchStatus.INFEASIBLE
      else:
        self._bound = max(self._best, self._tolerated)
    else:
      self._global_bound(heap)

    self.reporter.report_all(self.nodes, {
        "nodes": self.nodes,
        "lp_iterations": self.lp_iterations
    })
    objective = math.nan if self.incumbent is None else \
        self._sign * self._best
    return SearchResult(status, self.incumbent, objective,
                        self._sign * self._bound, self.nodes,
                        self.lp_iterations, dict(self.cut_counts),
                        self.elapsed)


def solve_milp(model: Model, **kwargs) -> SearchResult:
  """Solves a plain MILP without callbacks."""
  return BranchAndCut(model, **kwargs).run()

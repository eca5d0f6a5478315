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
"""Dense bounded-variable simplex for the LP relaxations of a Model.

Every row gets a slack column, so the working problem is

  min  cost @ x   s.t.  [A | I] x = rhs,  lb <= x <= ub

with slack bounds [0, inf) for <= rows, (-inf, 0] for >= rows and [0, 0] for
equalities. Nonbasic columns always sit at a finite bound.

Three entry paths exist:

- cold start: structural columns at their lower bounds, slacks basic where
  that is feasible, artificial columns elsewhere, then phase 1 and phase 2;
- primal warm start: a supplied basis that is still primal feasible goes
  straight to phase 2;
- dual warm start: a supplied basis that lost primal feasibility (bounds
  tightened by branching, violated rows appended by a cut round) but is still
  dual feasible is repaired with the bounded dual simplex.

Pricing uses Dantzig's rule and falls back to Bland's rule after a run of
degenerate pivots, which rules out cycling.

"""

import enum
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from octree.milp.model import Constraint, Model

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_TOL = 1e-9
REFACTOR_EVERY = 64
DEGENERATE_RUN = 50
DEFAULT_ITERATION_LIMIT = 50000


class LpStatus(enum.Enum):
  OPTIMAL = "optimal"
  INFEASIBLE = "infeasible"
  UNBOUNDED = "unbounded"
  ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class Basis:
  """Column indices of a basis in the structural-plus-slack column space,
  plus the nonbasic columns that sit at their upper bound."""
  n: int
  rows: int
  basic: Tuple[int, ...]
  at_upper: Tuple[int, ...]


@dataclass(frozen=True)
class LpSolution:
  status: LpStatus
  values: np.ndarray
  objective: float
  iterations: int = 0
  basis: Optional[Basis] = None

  @property
  def optimal(self) -> bool:
    return self.status is LpStatus.OPTIMAL


class _Singular(Exception):
  pass


class _Tableau():
  """Revised-simplex state with an explicit basis inverse."""

  def __init__(self, A, rhs, lb, ub, basic, at_upper):
    self.A = A
    self.rhs = rhs
    self.lb = lb
    self.ub = ub
    m, ncols = A.shape
    self.m = m
    self.basic = np.asarray(basic, dtype=int)
    self.is_basic = np.zeros(ncols, dtype=bool)
    self.is_basic[self.basic] = True
    at_upper = np.asarray(at_upper, dtype=bool).copy()
    at_upper[~np.isfinite(ub)] = False
    at_upper[~np.isfinite(lb)] = True
    self.at_upper = at_upper
    self.x = np.where(at_upper, ub, lb)
    self.x[self.is_basic] = 0.0
    self.binv = np.eye(m)
    self.since_refactor = 0
    self.refactor()

  def refactor(self) -> None:
    if self.m:
      try:
        binv = np.linalg.inv(self.A[:, self.basic])
      except np.linalg.LinAlgError:
        raise _Singular()
      if not np.all(np.isfinite(binv)):
        raise _Singular()
      self.binv = binv
      x = self.x.copy()
      x[self.basic] = 0.0
      self.x[self.basic] = binv @ (self.rhs - self.A @ x)
    self.since_refactor = 0

  def pivot(self, r: int, q: int, alpha: np.ndarray) -> None:
    row = self.binv[r] / alpha[r]
    self.binv -= np.outer(alpha, row)
    self.binv[r] = row
    self.is_basic[self.basic[r]] = False
    self.basic[r] = q
    self.is_basic[q] = True
    self.since_refactor += 1

  def infeasibility(self) -> np.ndarray:
    xb = self.x[self.basic]
    return np.maximum(self.lb[self.basic] - xb, xb - self.ub[self.basic])

  def primal_feasible(self) -> bool:
    return self.m == 0 or bool(self.infeasibility().max() <= FEAS_TOL)

  def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
    y = cost[self.basic] @ self.binv
    return cost - y @ self.A

  def dual_feasible(self, cost: np.ndarray) -> bool:
    d = self.reduced_costs(cost)
    free = ~self.is_basic & (self.ub > self.lb)
    bad_lower = free & ~self.at_upper & (d < -OPT_TOL)
    bad_upper = free & self.at_upper & (d > OPT_TOL)
    return not (bad_lower.any() or bad_upper.any())


class _Counter():

  def __init__(self, limit: int):
    self.limit = limit
    self.iterations = 0

  @property
  def exhausted(self) -> bool:
    return self.iterations >= self.limit


def _primal(tab: _Tableau, cost: np.ndarray, counter: _Counter) -> LpStatus:
  """Primal simplex from a primal feasible basis."""
  bland = False
  degenerate = 0
  while True:
    if counter.exhausted:
      return LpStatus.ITERATION_LIMIT
    if tab.since_refactor >= REFACTOR_EVERY:
      tab.refactor()

    d = tab.reduced_costs(cost)
    movable = ~tab.is_basic & (tab.ub > tab.lb)
    can_inc = movable & ~tab.at_upper & (d < -OPT_TOL)
    can_dec = movable & tab.at_upper & (d > OPT_TOL)
    candidates = np.flatnonzero(can_inc | can_dec)
    if candidates.size == 0:
      return LpStatus.OPTIMAL

    if bland:
      q = candidates[0]
    else:
      q = candidates[np.argmax(np.abs(d[candidates]))]

    direction = 1.0 if can_inc[q] else -1.0
    alpha = tab.binv @ tab.A[:, q]
    delta = direction * alpha
    xb = tab.x[tab.basic]

    step = np.inf
    if tab.m:
      ratios = np.full(tab.m, np.inf)
      dec = delta > PIVOT_TOL
      inc = delta < -PIVOT_TOL
      with np.errstate(invalid="ignore"):
        ratios[dec] = (xb[dec] - tab.lb[tab.basic][dec]) / delta[dec]
        ratios[inc] = (tab.ub[tab.basic][inc] - xb[inc]) / -delta[inc]
      ratios = np.maximum(ratios, 0.0)
      step = ratios.min()

    flip = tab.ub[q] - tab.lb[q]
    if flip <= step:
      if not np.isfinite(flip):
        return LpStatus.UNBOUNDED
      tab.x[tab.basic] = xb - flip * delta
      tab.at_upper[q] = direction > 0
      tab.x[q] = tab.ub[q] if direction > 0 else tab.lb[q]
      counter.iterations += 1
      bland, degenerate = False, 0
      continue

    ties = np.flatnonzero(ratios <= step + 1e-12)
    if bland:
      r = ties[np.argmin(tab.basic[ties])]
    else:
      r = ties[np.argmax(np.abs(alpha[ties]))]

    leaving = tab.basic[r]
    hits_lower = delta[r] > 0
    tab.x[tab.basic] = xb - step * delta
    tab.x[q] += direction * step
    tab.x[leaving] = tab.lb[leaving] if hits_lower else tab.ub[leaving]
    tab.at_upper[leaving] = not hits_lower
    tab.pivot(r, q, alpha)
    counter.iterations += 1

    if step < 1e-12:
      degenerate += 1
      if degenerate > DEGENERATE_RUN:
        bland = True
    else:
      bland, degenerate = False, 0


def _dual(tab: _Tableau, cost: np.ndarray, counter: _Counter) -> LpStatus:
  """Bounded dual simplex from a dual feasible basis."""
  while True:
    if counter.exhausted:
      return LpStatus.ITERATION_LIMIT
    if tab.since_refactor >= REFACTOR_EVERY:
      tab.refactor()
    if tab.m == 0:
      return LpStatus.OPTIMAL

    viol = tab.infeasibility()
    r = int(np.argmax(viol))
    if viol[r] <= FEAS_TOL:
      return LpStatus.OPTIMAL

    xb = tab.x[tab.basic]
    below = xb[r] < tab.lb[tab.basic[r]]
    target = tab.lb[tab.basic[r]] if below else tab.ub[tab.basic[r]]

    d = tab.reduced_costs(cost)
    row = tab.binv[r] @ tab.A
    movable = ~tab.is_basic & (tab.ub > tab.lb)
    if below:
      eligible = movable & ((~tab.at_upper & (row < -PIVOT_TOL)) |
                            (tab.at_upper & (row > PIVOT_TOL)))
    else:
      eligible = movable & ((~tab.at_upper & (row > PIVOT_TOL)) |
                            (tab.at_upper & (row < -PIVOT_TOL)))

    candidates = np.flatnonzero(eligible)
    if candidates.size == 0:
      return LpStatus.INFEASIBLE

    ratios = np.abs(d[candidates]) / np.abs(row[candidates])
    q = candidates[int(np.argmin(ratios))]

    alpha = tab.binv @ tab.A[:, q]
    theta = (xb[r] - target) / alpha[r]
    leaving = tab.basic[r]
    tab.x[tab.basic] = xb - theta * alpha
    tab.x[q] += theta
    tab.x[leaving] = target
    tab.at_upper[leaving] = not below
    tab.pivot(r, q, alpha)
    counter.iterations += 1


class DenseLp():
  """Dense LP relaxation of a Model that can grow by appended rows and be
  re-solved under different variable bounds.

  Args:
    model: The model whose relaxation to solve. Rows added to the model
           after construction are not seen; pass them to add_rows instead.

  """

  def __init__(self, model: Model):
    self.n = model.num_variables
    self._maximize = model.maximize
    self._c = model.objective_vector()
    self._constant = model.objective_constant
    self._cost = -self._c if self._maximize else self._c.copy()
    self._lb = model.lower_bounds()
    self._ub = model.upper_bounds()
    A, senses, rhs = model.row_arrays()
    self._A = np.zeros((0, self.n))
    self._senses = np.zeros(0, dtype=int)
    self._rhs = np.zeros(0)
    self._append(A, senses, rhs)

  @property
  def num_rows(self) -> int:
    return self._A.shape[0]

  def _append(self, A, senses, rhs) -> None:
    scale = np.abs(A).max(axis=1) if A.shape[0] else np.zeros(0)
    scale[scale == 0] = 1.0
    self._A = np.vstack([self._A, A / scale[:, None]])
    self._senses = np.concatenate([self._senses, senses])
    self._rhs = np.concatenate([self._rhs, rhs / scale])

  def add_rows(self, rows: Sequence[Constraint]) -> None:
    if not rows:
      return
    A = np.zeros((len(rows), self.n))
    senses = np.zeros(len(rows), dtype=int)
    rhs = np.zeros(len(rows))
    code = {"<=": -1, "=": 0, ">=": 1}
    for r, row in enumerate(rows):
      for i, c in row.coefs:
        A[r, i] += c
      senses[r] = code[row.sense.value]
      rhs[r] = row.rhs
    self._append(A, senses, rhs)

  def _columns(self, lb, ub):
    m = self.num_rows
    slack_lb = np.where(self._senses < 0, 0.0,
                        np.where(self._senses > 0, -np.inf, 0.0))
    slack_ub = np.where(self._senses < 0, np.inf, 0.0)
    A = np.hstack([self._A, np.eye(m)])
    cost = np.concatenate([self._cost, np.zeros(m)])
    return A, cost, np.concatenate([lb, slack_lb]), np.concatenate(
        [ub, slack_ub])

  def _warm(self, A, lb, ub, basis: Basis) -> Optional[_Tableau]:
    m = self.num_rows
    if basis.n != self.n or basis.rows > m:
      return None
    basic = list(basis.basic) + [self.n + i for i in range(basis.rows, m)]
    if len(basic) != m:
      return None
    at_upper = np.zeros(A.shape[1], dtype=bool)
    at_upper[list(basis.at_upper)] = True
    try:
      return _Tableau(A, self._rhs, lb, ub, basic, at_upper)
    except _Singular:
      return None

  def _cold(self, A, cost, lb, ub, counter: _Counter):
    """Two-phase start. Returns (status, tableau)."""
    m = self.num_rows
    ncols = A.shape[1]
    x = lb.copy()
    x[self.n:] = 0.0
    residual = self._rhs - A[:, :self.n] @ x[:self.n]
    slack_lb, slack_ub = lb[self.n:], ub[self.n:]
    ok = (residual >= slack_lb - FEAS_TOL) & (residual <= slack_ub + FEAS_TOL)
    bad = np.flatnonzero(~ok)

    arts = np.zeros((m, bad.size))
    arts[bad, np.arange(bad.size)] = np.sign(residual[bad])
    A1 = np.hstack([A, arts])
    lb1 = np.concatenate([lb, np.zeros(bad.size)])
    ub1 = np.concatenate([ub, np.full(bad.size, np.inf)])

    basic = np.array([self.n + i for i in range(m)], dtype=int)
    basic[bad] = ncols + np.arange(bad.size)
    at_upper = np.zeros(A1.shape[1], dtype=bool)
    # slacks of >= rows that are nonbasic sit at their upper bound zero
    at_upper[self.n + bad] = self._senses[bad] > 0

    tab = _Tableau(A1, self._rhs, lb1, ub1, basic, at_upper)
    if bad.size:
      phase1 = np.zeros(A1.shape[1])
      phase1[ncols:] = 1.0
      status = _primal(tab, phase1, counter)
      if status is LpStatus.ITERATION_LIMIT:
        return status, tab
      if tab.x[ncols:].sum() > 1e-7 * max(1, bad.size):
        return LpStatus.INFEASIBLE, tab

      tab.ub[ncols:] = 0.0
      tab.x[ncols:] = 0.0
      self._drive_out(tab, ncols)

    cost1 = np.concatenate([cost, np.zeros(bad.size)])
    return _primal(tab, cost1, counter), tab

  @staticmethod
  def _drive_out(tab: _Tableau, ncols: int) -> None:
    """Pivots basic artificial columns (all at zero) out of the basis where a
    real column can replace them."""
    for r in range(tab.m):
      if tab.basic[r] < ncols:
        continue
      row = tab.binv[r] @ tab.A[:, :ncols]
      row[tab.is_basic[:ncols]] = 0.0
      j = int(np.argmax(np.abs(row)))
      if abs(row[j]) > 1e-7:
        alpha = tab.binv @ tab.A[:, j]
        tab.at_upper[tab.basic[r]] = False
        tab.pivot(r, j, alpha)

  def solve(self,
            lb: Optional[np.ndarray] = None,
            ub: Optional[np.ndarray] = None,
            basis: Optional[Basis] = None,
            iteration_limit: int = DEFAULT_ITERATION_LIMIT) -> LpSolution:
    lb = self._lb if lb is None else np.asarray(lb, dtype=float)
    ub = self._ub if ub is None else np.asarray(ub, dtype=float)
    if np.any(lb > ub + FEAS_TOL):
      return self._verdict(LpStatus.INFEASIBLE, 0)

    A, cost, flb, fub = self._columns(lb, ub)
    counter = _Counter(iteration_limit)
    ncols = A.shape[1]

    tab = None
    status = None
    if basis is not None:
      tab = self._warm(A, flb, fub, basis)
      if tab is not None:
        if tab.primal_feasible():
          status = _primal(tab, cost, counter)
        elif tab.dual_feasible(cost):
          status = _dual(tab, cost, counter)
          if status is LpStatus.OPTIMAL:
            status = _primal(tab, cost, counter)
        if status is not LpStatus.OPTIMAL and status is not LpStatus.UNBOUNDED:
          # infeasibility verdicts and stalls are confirmed from scratch
          tab, status = None, None

    if tab is None:
      status, tab = self._cold(A, cost, flb, fub, counter)

    if status is not LpStatus.OPTIMAL:
      if status is LpStatus.ITERATION_LIMIT:
        logging.warning("LP iteration limit (%d) reached.", iteration_limit)
      return self._verdict(status, counter.iterations)

    try:
      tab.refactor()
    except _Singular:
      logging.warning("Final basis is singular; reporting iteration limit.")
      return self._verdict(LpStatus.ITERATION_LIMIT, counter.iterations)

    values = np.clip(tab.x[:self.n], lb, ub)
    objective = float(self._c @ values) + self._constant

    new_basis = None
    if np.all(tab.basic < ncols):
      at_upper = np.flatnonzero(tab.at_upper[:ncols] & ~tab.is_basic[:ncols])
      new_basis = Basis(self.n, self.num_rows,
                        tuple(int(i) for i in tab.basic),
                        tuple(int(i) for i in at_upper))

    return LpSolution(LpStatus.OPTIMAL, values, objective, counter.iterations,
                      new_basis)

  def _verdict(self, status: LpStatus, iterations: int) -> LpSolution:
    bound = -np.inf if self._maximize else np.inf
    if status is LpStatus.UNBOUNDED:
      bound = -bound
    return LpSolution(status, np.full(self.n, np.nan), bound, iterations)


def solve_lp_relaxation(
    model: Model,
    extra_rows: Optional[Sequence[Constraint]] = None,
    lb: Optional[np.ndarray] = None,
    ub: Optional[np.ndarray] = None,
    basis: Optional[Basis] = None,
    iteration_limit: int = DEFAULT_ITERATION_LIMIT) -> LpSolution:
  """Solves the LP relaxation of `model` (integrality dropped), optionally
  with extra rows and overridden variable bounds."""
  lp = DenseLp(model)
  lp.add_rows(list(extra_rows or []))
  return lp.solve(lb=lb, ub=ub, basis=basis, iteration_limit=iteration_limit)

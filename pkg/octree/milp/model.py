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
"""Solver-agnostic intermediate representation for mixed-integer linear
programs.

A Model owns a list of bounded variables, a list of sparse linear rows and a
linear objective. Formulation builders grow a model through add_variable,
add_constraint and set_objective; the LP solver and the file writers read it
back through the dense accessors at the bottom of the class.

"""

import enum
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np


class ModelError(ValueError):
  """Raised when a model is used inconsistently (unknown ids, bad bounds,
  duplicate names)."""


class VarType(enum.Enum):
  CONTINUOUS = "continuous"
  BINARY = "binary"
  INTEGER = "integer"


class Sense(enum.Enum):
  LE = "<="
  EQ = "="
  GE = ">="


@dataclass(frozen=True)
class Variable:
  id: int
  name: str
  lb: float
  ub: float
  vtype: VarType

  @property
  def is_integer(self) -> bool:
    return self.vtype is not VarType.CONTINUOUS


@dataclass(frozen=True)
class Constraint:
  """A single sparse row: sum(coef * x[id]) <sense> rhs.

  `family` tags the origin of the row (the formulation itself, or a cut
  family added during the search) so statistics can be kept per family.

  """
  name: str
  coefs: Tuple[Tuple[int, float], ...]
  sense: Sense
  rhs: float
  family: str = "model"

  def activity(self, values: np.ndarray) -> float:
    return float(sum(c * values[i] for i, c in self.coefs))

  def violation(self, values: np.ndarray) -> float:
    """Returns the amount by which `values` violates this row; zero or negative
    when satisfied."""
    lhs = self.activity(values)
    if self.sense is Sense.LE:
      return lhs - self.rhs
    if self.sense is Sense.GE:
      return self.rhs - lhs
    return abs(lhs - self.rhs)


class LinearExpr:
  """Sparse affine expression over model variable ids.

  Supports addition, subtraction and scaling, which is enough to write the
  formulations in a readable way:

    expr = LinearExpr.sum(b_ids) + 2 * LinearExpr.var(p) - 1

  """

  def __init__(self,
               terms: Optional[Mapping[int, float]] = None,
               constant: float = 0.0):
    self.terms: Dict[int, float] = {}
    for k, v in (terms or {}).items():
      self.terms[int(k)] = self.terms.get(int(k), 0.0) + float(v)
    self.constant = float(constant)

  @staticmethod
  def var(i: int, coef: float = 1.0) -> "LinearExpr":
    return LinearExpr({int(i): coef})

  @staticmethod
  def sum(ids: Iterable[int], coef: float = 1.0) -> "LinearExpr":
    ret = LinearExpr()
    for i in ids:
      ret.terms[int(i)] = ret.terms.get(int(i), 0.0) + coef
    return ret

  @staticmethod
  def weighted(pairs: Iterable[Tuple[int, float]]) -> "LinearExpr":
    ret = LinearExpr()
    for i, c in pairs:
      ret.terms[int(i)] = ret.terms.get(int(i), 0.0) + float(c)
    return ret

  def _coerce(self, other) -> "LinearExpr":
    if isinstance(other, LinearExpr):
      return other
    return LinearExpr(constant=float(other))

  def __add__(self, other) -> "LinearExpr":
    o = self._coerce(other)
    ret = LinearExpr(self.terms, self.constant + o.constant)
    for k, v in o.terms.items():
      ret.terms[k] = ret.terms.get(k, 0.0) + v
    return ret

  __radd__ = __add__

  def __neg__(self) -> "LinearExpr":
    return self * -1.0

  def __sub__(self, other) -> "LinearExpr":
    return self + (-self._coerce(other))

  def __rsub__(self, other) -> "LinearExpr":
    return self._coerce(other) - self

  def __mul__(self, k: float) -> "LinearExpr":
    k = float(k)
    return LinearExpr({i: v * k for i, v in self.terms.items()},
                      self.constant * k)

  __rmul__ = __mul__

  def value(self, values: np.ndarray) -> float:
    return self.constant + float(
        sum(v * values[i] for i, v in self.terms.items()))

  def nonzero_terms(self) -> Dict[int, float]:
    return {k: v for k, v in self.terms.items() if v != 0.0}

  def __repr__(self) -> str:
    return "LinearExpr({}, {})".format(self.terms, self.constant)


Coefficients = Union[LinearExpr, Mapping[int, float]]


class Model:
  """Mutable, single-owner MILP under construction.

  Args:
    name: Model name, used by the MPS and LP writers.

  """

  def __init__(self, name: str = "model"):
    self.name = name
    self._vars: List[Variable] = []
    self._var_names: Dict[str, int] = {}
    self._rows: List[Constraint] = []
    self._row_names: Dict[str, int] = {}
    self._objective: Dict[int, float] = {}
    self._objective_constant = 0.0
    self.maximize = True

  # Construction.

  def add_variable(self,
                   name: str,
                   lb: float = 0.0,
                   ub: float = 1.0,
                   vtype: VarType = VarType.CONTINUOUS) -> int:
    if name in self._var_names:
      raise ModelError("Duplicate variable name: {}".format(name))
    if not np.isfinite(lb) or not np.isfinite(ub):
      raise ModelError("Variable {} needs finite bounds.".format(name))
    if lb > ub:
      raise ModelError("Variable {} has lb {} > ub {}.".format(name, lb, ub))
    if vtype is VarType.BINARY and (lb < 0 or ub > 1):
      raise ModelError("Binary variable {} must live in [0, 1].".format(name))

    idx = len(self._vars)
    self._vars.append(Variable(idx, name, float(lb), float(ub), vtype))
    self._var_names[name] = idx
    return idx

  def add_binary(self, name: str) -> int:
    return self.add_variable(name, 0.0, 1.0, VarType.BINARY)

  def add_integer(self, name: str, lb: float, ub: float) -> int:
    return self.add_variable(name, lb, ub, VarType.INTEGER)

  def _check_ids(self, ids: Iterable[int]) -> None:
    n = len(self._vars)
    for i in ids:
      if not 0 <= i < n:
        raise ModelError("Unknown variable id: {}".format(i))

  def make_constraint(self,
                      expr: Coefficients,
                      sense: Sense,
                      rhs: float = 0.0,
                      name: Optional[str] = None,
                      family: str = "model") -> Constraint:
    """Returns a row over this model's variables without adding it. Constant
    terms of `expr` move to the right-hand side."""
    if not isinstance(expr, LinearExpr):
      expr = LinearExpr(expr)

    terms = expr.nonzero_terms()
    self._check_ids(terms.keys())
    if name is None:
      name = "r{}".format(len(self._rows))

    coefs = tuple(sorted(terms.items()))
    return Constraint(name, coefs, sense, float(rhs) - expr.constant, family)

  def add_row(self, row: Constraint) -> int:
    self._check_ids(i for i, _ in row.coefs)
    if row.name in self._row_names:
      raise ModelError("Duplicate constraint name: {}".format(row.name))

    idx = len(self._rows)
    self._rows.append(row)
    self._row_names[row.name] = idx
    return idx

  def add_constraint(self,
                     expr: Coefficients,
                     sense: Sense,
                     rhs: float = 0.0,
                     name: Optional[str] = None,
                     family: str = "model") -> int:
    return self.add_row(self.make_constraint(expr, sense, rhs, name, family))

  def set_objective(self, expr: Coefficients, maximize: bool = True) -> None:
    if not isinstance(expr, LinearExpr):
      expr = LinearExpr(expr)

    terms = expr.nonzero_terms()
    self._check_ids(terms.keys())
    self._objective = terms
    self._objective_constant = expr.constant
    self.maximize = maximize

  def set_bounds(self, i: int, lb: float, ub: float) -> None:
    self._check_ids([i])
    if lb > ub:
      raise ModelError("Bounds [{}, {}] are empty.".format(lb, ub))
    self._vars[i] = replace(self._vars[i], lb=float(lb), ub=float(ub))

  def fix(self, i: int, value: float) -> None:
    self.set_bounds(i, value, value)

  def copy(self) -> "Model":
    ret = Model(self.name)
    ret._vars = list(self._vars)
    ret._var_names = dict(self._var_names)
    ret._rows = list(self._rows)
    ret._row_names = dict(self._row_names)
    ret._objective = dict(self._objective)
    ret._objective_constant = self._objective_constant
    ret.maximize = self.maximize
    return ret

  # Access.

  @property
  def num_variables(self) -> int:
    return len(self._vars)

  @property
  def num_constraints(self) -> int:
    return len(self._rows)

  @property
  def variables(self) -> List[Variable]:
    return list(self._vars)

  @property
  def constraints(self) -> List[Constraint]:
    return list(self._rows)

  @property
  def objective(self) -> Dict[int, float]:
    return dict(self._objective)

  @property
  def objective_constant(self) -> float:
    return self._objective_constant

  def variable(self, i: int) -> Variable:
    self._check_ids([i])
    return self._vars[i]

  def variable_id(self, name: str) -> int:
    try:
      return self._var_names[name]
    except KeyError:
      raise ModelError("Unknown variable name: {}".format(name))

  def lower_bounds(self) -> np.ndarray:
    return np.array([v.lb for v in self._vars], dtype=float)

  def upper_bounds(self) -> np.ndarray:
    return np.array([v.ub for v in self._vars], dtype=float)

  def integer_mask(self) -> np.ndarray:
    return np.array([v.is_integer for v in self._vars], dtype=bool)

  def objective_vector(self) -> np.ndarray:
    c = np.zeros(len(self._vars))
    for i, v in self._objective.items():
      c[i] = v
    return c

  def row_arrays(self, start: int = 0, stop: Optional[int] = None):
    """Returns (A, senses, rhs) for rows [start, stop) as dense arrays. Senses
    are encoded as -1 (<=), 0 (=) and +1 (>=)."""
    rows = self._rows[start:stop]
    A = np.zeros((len(rows), len(self._vars)))
    senses = np.zeros(len(rows), dtype=int)
    rhs = np.zeros(len(rows))
    code = {Sense.LE: -1, Sense.EQ: 0, Sense.GE: 1}
    for r, row in enumerate(rows):
      for i, c in row.coefs:
        A[r, i] += c
      senses[r] = code[row.sense]
      rhs[r] = row.rhs
    return A, senses, rhs

  # Evaluation.

  def objective_value(self, values: np.ndarray) -> float:
    return self._objective_constant + float(
        sum(c * values[i] for i, c in self._objective.items()))

  def check_feasible(self,
                     values: np.ndarray,
                     tol: float = 1e-7,
                     int_tol: float = 1e-6) -> List[str]:
    """Returns a list of human readable violations; empty when `values`
    satisfies every bound, integrality requirement and row."""
    values = np.asarray(values, dtype=float)
    if values.shape != (len(self._vars),):
      return ["expected {} values, got {}".format(len(self._vars),
                                                  values.shape)]

    problems = []
    for v in self._vars:
      x = values[v.id]
      if x < v.lb - tol or x > v.ub + tol:
        problems.append("{} = {} outside [{}, {}]".format(v.name, x, v.lb,
                                                          v.ub))
      elif v.is_integer and abs(x - round(x)) > int_tol:
        problems.append("{} = {} is not integral".format(v.name, x))

    for row in self._rows:
      viol = row.violation(values)
      if viol > tol * max(1.0, abs(row.rhs)):
        problems.append("{} violated by {}".format(row.name, viol))

    return problems

  def __repr__(self) -> str:
    return "Model({!r}, {} variables, {} constraints)".format(
        self.name, len(self._vars), len(self._rows))

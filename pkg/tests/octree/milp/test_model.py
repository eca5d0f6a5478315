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
"""Tests for the MILP model representation."""

import numpy as np
import pytest

import octree.milp as mp
from octree.milp import LinearExpr, Sense


@pytest.fixture
def knapsack():
  m = mp.Model("knapsack")
  x = [m.add_binary("x{}".format(i)) for i in range(3)]
  y = m.add_integer("y", 0, 4)
  m.add_constraint(LinearExpr.weighted(zip(x, [2, 3, 4])) + LinearExpr.var(y),
                   Sense.LE, 6, name="capacity")
  m.set_objective(LinearExpr.weighted(zip(x + [y], [3, 4, 5, 1])) + 0.5)
  return m


def test_linear_expr():
  e = 2 * LinearExpr.var(0) + LinearExpr.sum([0, 1]) - 1
  assert e.terms == {0: 3.0, 1: 1.0}
  assert e.constant == -1.0
  assert e.value(np.array([1.0, 2.0])) == 4.0

  d = 5 - e
  assert d.terms == {0: -3.0, 1: -1.0}
  assert d.constant == 6.0
  assert (e - e).nonzero_terms() == {}
  assert (-e).constant == 1.0


def test_variables():
  m = mp.Model()
  a = m.add_variable("a", -1.0, 2.5)
  b = m.add_binary("b")
  assert (a, b) == (0, 1)
  assert m.variable_id("b") == 1
  assert m.variable(a).vtype is mp.VarType.CONTINUOUS
  assert m.integer_mask().tolist() == [False, True]
  np.testing.assert_array_equal(m.lower_bounds(), [-1.0, 0.0])
  np.testing.assert_array_equal(m.upper_bounds(), [2.5, 1.0])

  m.fix(a, 1.0)
  assert (m.variable(a).lb, m.variable(a).ub) == (1.0, 1.0)


def test_variable_errors():
  m = mp.Model()
  m.add_binary("b")
  with pytest.raises(mp.ModelError):
    m.add_binary("b")

  with pytest.raises(mp.ModelError):
    m.add_variable("inf", 0.0, np.inf)

  with pytest.raises(mp.ModelError):
    m.add_variable("empty", 2.0, 1.0)

  with pytest.raises(mp.ModelError):
    m.add_variable("wide", 0.0, 2.0, mp.VarType.BINARY)

  with pytest.raises(mp.ModelError):
    m.variable_id("nope")

  with pytest.raises(mp.ModelError):
    m.set_bounds(0, 1.0, 0.0)


def test_constraints(knapsack):
  row = knapsack.constraints[0]
  assert row.name == "capacity"
  assert row.coefs == ((0, 2.0), (1, 3.0), (2, 4.0), (3, 1.0))
  assert row.family == "model"

  # constants move to the right-hand side
  cut = knapsack.make_constraint(
      LinearExpr.var(0) + LinearExpr.var(1) + 2, Sense.LE, 3, family="cover")
  assert cut.rhs == 1.0
  assert cut.family == "cover"
  assert knapsack.num_constraints == 1

  knapsack.add_row(cut)
  assert knapsack.num_constraints == 2

  with pytest.raises(mp.ModelError):
    knapsack.add_row(cut)

  with pytest.raises(mp.ModelError):
    knapsack.add_constraint({9: 1.0}, Sense.GE, 0)


def test_violation():
  row = mp.Constraint("r", ((0, 1.0), (1, 1.0)), Sense.EQ, 1.0)
  assert row.violation(np.array([1.0, 1.0])) == 1.0
  assert row.violation(np.array([0.5, 0.5])) == 0.0

  ge = mp.Constraint("g", ((0, 1.0),), Sense.GE, 2.0)
  assert ge.violation(np.array([3.0])) == -1.0


def test_objective(knapsack):
  assert knapsack.maximize
  assert knapsack.objective_constant == 0.5
  assert knapsack.objective_value(np.array([1, 1, 0, 1])) == 8.5
  np.testing.assert_array_equal(knapsack.objective_vector(), [3, 4, 5, 1])


def test_check_feasible(knapsack):
  assert knapsack.check_feasible(np.array([1, 1, 0, 1])) == []

  problems = knapsack.check_feasible(np.array([1, 1, 1, 0]))
  assert len(problems) == 1
  assert problems[0].startswith("capacity violated")

  assert "not integral" in knapsack.check_feasible(
      np.array([0.5, 0, 0, 0]))[0]
  assert "outside" in knapsack.check_feasible(np.array([0, 0, 0, 5]))[0]
  assert knapsack.check_feasible(np.zeros(2)) == [
      "expected 4 values, got (2,)"
  ]


def test_copy_is_independent(knapsack):
  other = knapsack.copy()
  other.add_constraint({0: 1.0}, Sense.LE, 0, name="fix0")
  other.set_bounds(3, 0, 1)

  assert knapsack.num_constraints == 1
  assert knapsack.variable(3).ub == 4.0
  assert other.num_constraints == 2


def test_row_arrays(knapsack):
  knapsack.add_constraint({0: 1.0, 3: -1.0}, Sense.GE, -2, name="link")
  A, senses, rhs = knapsack.row_arrays()
  np.testing.assert_array_equal(A, [[2, 3, 4, 1], [1, 0, 0, -1]])
  np.testing.assert_array_equal(senses, [-1, 1])
  np.testing.assert_array_equal(rhs, [6, -2])

  A, _, _ = knapsack.row_arrays(start=1)
  assert A.shape == (1, 4)

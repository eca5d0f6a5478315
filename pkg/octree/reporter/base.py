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
"""Base and combinators; these classes let you compose reporters into compound
reporters.

A reporter receives one event per processed branch-and-bound node: the node
count as `step` and a dict of named values (ub, lb, gap, open, cuts, ...).

"""

from abc import ABCMeta
from typing import Callable, Dict, Optional

import octree.reporter.reader as rd
import octree.types as t
import octree.util as u


class AbstractReporter(metaclass=ABCMeta):
  """Base class for all reporters.

  NOTE - report_all and report are implemented in terms of one another. You
  can choose which one to override, but if you override neither you'll see
  infinite recursion.

  """

  def report_params(self, m: Dict[str, t.Value]) -> None:
    """Logs run parameters (depth, objective, limits) alongside the series."""
    return None

  def report_all(self, step: int, m: Dict[t.SeriesKey, t.Value]) -> None:
    for k, v in m.items():
      self.report(step, k, v)

  def report(self, step: int, k: t.SeriesKey, v: t.Value) -> None:
    return self.report_all(step, {k: v})

  def reader(self) -> Optional[rd.AbstractReader]:
    """Returns a reader over this store, or None if the store can't be read
    back."""
    return None

  def close(self) -> None:
    return None

  # Combinators.

  def with_prefix(self, prefix: t.Prefix) -> "AbstractReporter":
    """Attaches `prefix.` to every key before passing events on."""
    return PrefixedReporter(self, prefix)

  def plus(self, *others: "AbstractReporter") -> "AbstractReporter":
    """Broadcasts every event to this reporter and to all of `others`."""
    return MultiReporter(self, *others)

  def filter_step(self,
                  pred: Callable[[int], bool],
                  on_false: Optional["AbstractReporter"] = None
                 ) -> "AbstractReporter":
    """Only passes on events whose step satisfies `pred`; the rest go to
    `on_false`, if supplied."""

    def step_pred(step, _):
      return pred(step)

    return FilterValuesReporter(self, step_pred, on_false_reporter=on_false)

  def report_each_n(self, n: int) -> "AbstractReporter":
    """Only accepts events where step % n == 0. For n <= 1 this reporter is
    returned untouched."""
    n = max(1, n)
    if n > 1:
      return self.filter_step(lambda step: step % n == 0)
    return self


class FilterValuesReporter(AbstractReporter):
  """Passes on the (step, value) pairs that satisfy a predicate.

  Args:
    base: Backing reporter.
    predicate: function from (step, value) to bool.
    on_false_reporter: optional reporter receiving everything filtered out.

  """

  def __init__(self,
               base: AbstractReporter,
               predicate: Callable[[int, t.Value], bool],
               on_false_reporter: Optional[AbstractReporter] = None):
    self._base = base
    self._pred = predicate
    self._on_false_reporter = on_false_reporter

  def report_params(self, m: Dict[str, t.Value]) -> None:
    return self._base.report_params(m)

  def report_all(self, step: int, m: Dict[t.SeriesKey, t.Value]) -> None:
    good = {k: v for k, v in m.items() if self._pred(step, v)}
    bad = {k: v for k, v in m.items() if k not in good}

    if good:
      self._base.report_all(step, good)

    if self._on_false_reporter and bad:
      self._on_false_reporter.report_all(step, bad)

  def reader(self) -> Optional[rd.AbstractReader]:
    return self._base.reader()

  def close(self) -> None:
    self._base.close()

    if self._on_false_reporter:
      self._on_false_reporter.close()


class MultiReporter(AbstractReporter):
  """Broadcasts every call to all the supplied reporters."""

  def __init__(self, *reporters: AbstractReporter):
    self._reporters = reporters

  def report_params(self, m: Dict[str, t.Value]) -> None:
    for r in self._reporters:
      r.report_params(m)

  def report_all(self, step: int, m: Dict[t.SeriesKey, t.Value]) -> None:
    for r in self._reporters:
      r.report_all(step, m)

  def close(self) -> None:
    for r in self._reporters:
      r.close()


class PrefixedReporter(AbstractReporter):
  """Prepends a prefix to every key before passing events to `base`."""

  def __init__(self, base: AbstractReporter, prefix: t.Prefix):
    self._base = base
    self._prefix = prefix

  def report_params(self, m: Dict[str, t.Value]) -> None:
    return self._base.report_params(m)

  def report_all(self, step: int, m: Dict[t.SeriesKey, t.Value]) -> None:
    self._base.report_all(step, u.attach(m, self._prefix))

  def close(self) -> None:
    self._base.close()

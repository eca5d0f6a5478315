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
"""Reporters at the bottom of the stack. These aren't combinators; they print
or store the events they receive.

"""

import sys
from typing import Dict, List, Optional

import octree.reporter.reader as rd
import octree.types as t
import octree.util as u
from octree.reporter.base import AbstractReporter


class NullReporter(AbstractReporter):
  """Drops everything. The solver's default."""

  def report_all(self, step, m):
    return None

  def reader(self) -> Optional[rd.AbstractReader]:
    return rd.EmptyReader()


class LoggingReporter(AbstractReporter):
  """Writes one line per event to the supplied file handle:

    Node 12: ub = 3.000, lb = 2.000, gap = 33.333, open = 4, cuts = 7

  """

  @staticmethod
  def tqdm():
    """Returns a logging reporter that will work with a tqdm progress bar."""
    return LoggingReporter(u.TqdmFile(sys.stderr))

  def __init__(self, file=sys.stdout, digits: int = 3):
    self._file = file
    self._digits = digits

  def _format(self, v: t.Value) -> str:
    if isinstance(v, bool) or isinstance(v, int):
      return str(v)
    if u.is_number(v):
      return "{num:.{digits}f}".format(num=float(v), digits=self._digits)
    return str(v)

  def report_params(self, m: Dict[str, t.Value]) -> None:
    s = ", ".join("{} = {}".format(k, v) for k, v in m.items())
    print("Params: {}".format(s), file=self._file)

  def report_all(self, step: int, m: Dict[t.SeriesKey, t.Value]) -> None:
    s = ", ".join("{} = {}".format(k, self._format(v)) for k, v in m.items())
    print("Node {}: {}".format(step, s), file=self._file)


class MemoryReporter(AbstractReporter):
  """Keeps every series in a dict of lists, keyed by series name.

  Args:
    m: Optional dict to accumulate into; it's mutated as events arrive.

  """

  def __init__(self, m: Optional[Dict[str, List[t.Value]]] = None):
    if m is None:
      m = {}

    self._m = m
    self.params: Dict[str, t.Value] = {}

  def report_params(self, m: Dict[str, t.Value]) -> None:
    self.params.update(m)

  def report_all(self, step: int, m: Dict[t.SeriesKey, t.Value]) -> None:
    for k, v in m.items():
      self._m.setdefault(str(k), []).append(v)

  def clear(self):
    self._m.clear()

  def reader(self) -> Optional[rd.AbstractReader]:
    return rd.MemoryReader(self._m)

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
"""Readers return the series a reporter has stored."""

from abc import ABCMeta, abstractmethod
from typing import Dict, Iterable, List, Optional

import octree.types as t


class AbstractReader(metaclass=ABCMeta):
  """Base class for readers of reported series.

  NOTE - read_all and read are implemented in terms of one another, so
  extending classes must override at least one of them.

  """

  def read_all(self,
               ks: List[t.SeriesKey]) -> Dict[t.SeriesKey, List[t.Value]]:
    """Maps every requested key to its values; keys the store has never seen
    map to []."""
    return {k: self.read(k) for k in ks}

  def read(self, k: t.SeriesKey) -> List[t.Value]:
    return self.read_all([k])[k]

  @abstractmethod
  def keys(self) -> Iterable[t.SeriesKey]:
    pass

  def close(self) -> None:
    return None


class EmptyReader(AbstractReader):

  def keys(self) -> Iterable[t.SeriesKey]:
    return []

  def read(self, k: t.SeriesKey) -> List[t.Value]:
    return []


class MemoryReader(AbstractReader):
  """Reader that queries the supplied dictionary for values.

  Args:
    m: Dictionary mapping keys to the list of values reported so far.

  """

  def __init__(self, m: Optional[Dict[str, List[t.Value]]] = None):
    if m is None:
      m = {}

    self._m = m

  def keys(self) -> Iterable[t.SeriesKey]:
    return self._m.keys()

  def read(self, k: t.SeriesKey) -> List[t.Value]:
    return self._m.get(str(k), [])

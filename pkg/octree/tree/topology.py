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
"""Index arithmetic for complete binary trees of a fixed depth.

Nodes are numbered breadth-first from 1. Branch nodes are 1..floor(T/2) and
leaf nodes the rest, where T = 2^(D+1) - 1.

"""

import functools
from dataclasses import dataclass
from typing import List

from octree.tree.errors import TreeError

MAX_DEPTH = 20


@dataclass(frozen=True)
class TreeTopology:
  depth: int

  def __post_init__(self):
    if not isinstance(self.depth, int) or not 1 <= self.depth <= MAX_DEPTH:
      raise TreeError("Depth must be an integer in [1, {}], got {!r}".format(
          MAX_DEPTH, self.depth))

  @property
  def num_nodes(self) -> int:
    return 2**(self.depth + 1) - 1

  @property
  def num_branch(self) -> int:
    return self.num_nodes // 2

  @property
  def nodes(self) -> List[int]:
    return list(range(1, self.num_nodes + 1))

  @property
  def branch_nodes(self) -> List[int]:
    return list(range(1, self.num_branch + 1))

  @property
  def leaf_nodes(self) -> List[int]:
    return list(range(self.num_branch + 1, self.num_nodes + 1))

  def _check(self, n: int) -> None:
    if not 1 <= n <= self.num_nodes:
      raise TreeError("Node {} outside a depth-{} tree.".format(n, self.depth))

  def is_leaf(self, n: int) -> bool:
    self._check(n)
    return n > self.num_branch

  def parent(self, n: int) -> int:
    self._check(n)
    if n == 1:
      raise TreeError("The root has no parent.")
    return n // 2

  def left(self, n: int) -> int:
    if self.is_leaf(n):
      raise TreeError("Leaf node {} has no children.".format(n))
    return 2 * n

  def right(self, n: int) -> int:
    return self.left(n) + 1

  def ancestors(self, n: int) -> List[int]:
    """P(n): every node strictly above n, nearest first."""
    self._check(n)
    ret = []
    while n > 1:
      n //= 2
      ret.append(n)
    return ret

  def node_depth(self, n: int) -> int:
    self._check(n)
    return n.bit_length() - 1


@functools.lru_cache(maxsize=None)
def topology(depth: int) -> TreeTopology:
  return TreeTopology(depth)

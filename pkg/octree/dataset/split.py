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
"""Seeded train/validation/test splits.

Sizes: n_val = floor(f_val |I|), n_test = floor(f_test |I|) and the training
set gets the rest. A split that leaves no training rows is an error; empty
validation or test sets are allowed.

"""

import math
from typing import Optional, Sequence, Tuple

import numpy as np
from sklearn.model_selection import train_test_split

from octree.dataset.base import BinarizedDataset
from octree.dataset.errors import SplitError

DEFAULT_FRACTIONS = (0.5, 0.25, 0.25)


def split_sizes(n: int, fractions: Sequence[float]) -> Tuple[int, int, int]:
  if len(fractions) != 3 or any(f <= 0 for f in fractions):
    raise SplitError("Need three positive fractions, got {}".format(
        tuple(fractions)))
  if abs(sum(fractions) - 1.0) > 1e-9:
    raise SplitError("Fractions must sum to 1, got {}".format(sum(fractions)))

  n_val = math.floor(fractions[1] * n + 1e-9)
  n_test = math.floor(fractions[2] * n + 1e-9)
  n_train = n - n_val - n_test
  if n_train < 1:
    raise SplitError("Fractions {} leave no training rows out of {}".format(
        tuple(fractions), n))
  return n_train, n_val, n_test


def _stratify(y: np.ndarray, n_a: int, n_b: int,
              min_count: int) -> Optional[np.ndarray]:
  counts = np.bincount(y)
  counts = counts[counts > 0]
  if counts.min() >= min_count and min(n_a, n_b) >= len(counts):
    return y
  return None


def _cut(idx: np.ndarray, y: np.ndarray, n_second: int, seed: int,
         min_count: int) -> Tuple[np.ndarray, np.ndarray]:
  """Splits idx into (len - n_second, n_second) rows."""
  if n_second == 0:
    return idx, idx[:0]
  if n_second == len(idx):
    return idx[:0], idx
  strat = _stratify(y[idx], len(idx) - n_second, n_second, min_count)
  first, second = train_test_split(idx,
                                   test_size=n_second,
                                   random_state=seed,
                                   shuffle=True,
                                   stratify=strat)
  return np.sort(first), np.sort(second)


def split(data: BinarizedDataset,
          seed: int = 0,
          fractions: Sequence[float] = DEFAULT_FRACTIONS
         ) -> Tuple[BinarizedDataset, BinarizedDataset, BinarizedDataset]:
  """Disjoint (train, val, test) partition, reproducible for a fixed seed.

  Stratifies by label when every class has at least 3 rows and each side of
  a cut can hold one row per class; otherwise shuffles.

  """
  n_train, n_val, n_test = split_sizes(data.n_rows, fractions)
  idx = np.arange(data.n_rows)

  train, holdout = _cut(idx, data.y, n_val + n_test, seed, 3)
  val, test = _cut(holdout, data.y, n_test, seed, 2)
  return data.subset(train), data.subset(val), data.subset(test)

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
"""Tests for train/validation/test splitting."""

import numpy as np
import pytest

import octree.dataset as d
import importlib

# The package re-exports the `split` function, which shadows the submodule.
s = importlib.import_module("octree.dataset.split")


def indexed(n, n_classes=2):
  """Rows whose binary features spell out their own index."""
  bits = int(np.ceil(np.log2(n)))
  X = (np.arange(n)[:, None] >> np.arange(bits)) & 1
  return d.BinarizedDataset(X, np.arange(n) % n_classes, n_classes)


def row_ids(data):
  return set((data.X * (1 << np.arange(data.n_features))).sum(axis=1).tolist())


def test_split_sizes():
  assert s.split_sizes(20, s.DEFAULT_FRACTIONS) == (10, 5, 5)
  assert s.split_sizes(7, (0.5, 0.25, 0.25)) == (5, 1, 1)
  assert s.split_sizes(3, (0.6, 0.2, 0.2)) == (3, 0, 0)

  with pytest.raises(d.SplitError):
    s.split_sizes(10, (0.5, 0.5))

  with pytest.raises(d.SplitError):
    s.split_sizes(10, (0.5, 0.3, 0.3))

  with pytest.raises(d.SplitError):
    s.split_sizes(10, (0.0, 0.5, 0.5))


def test_split_partitions_rows():
  data = indexed(40)
  train, val, test = d.split(data, seed=1)

  assert (train.n_rows, val.n_rows, test.n_rows) == (20, 10, 10)
  ids = [row_ids(part) for part in (train, val, test)]
  assert not ids[0] & ids[1]
  assert not ids[0] & ids[2]
  assert not ids[1] & ids[2]
  assert ids[0] | ids[1] | ids[2] == set(range(40))


def test_split_is_reproducible():
  data = indexed(30, 3)
  first = d.split(data, seed=7)
  second = d.split(data, seed=7)
  for a, b in zip(first, second):
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.y, b.y)


def test_split_stratifies():
  train, val, test = d.split(indexed(40), seed=3)
  for part in (train, val, test):
    counts = np.bincount(part.y, minlength=2)
    assert counts[0] == counts[1]


def test_split_keeps_metadata():
  data = indexed(16)
  train, _, _ = d.split(data)
  assert train.feature_names == data.feature_names
  assert train.classes == data.classes


def test_tiny_split_without_stratification():
  data = d.BinarizedDataset([[0], [1], [1], [0]], [0, 1, 0, 0], 2)
  train, val, test = d.split(data, fractions=(0.5, 0.25, 0.25))
  assert (train.n_rows, val.n_rows, test.n_rows) == (2, 1, 1)

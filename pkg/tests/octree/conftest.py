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
"""Shared datasets for the octree tests."""

import numpy as np
import pytest

import octree.dataset as d


@pytest.fixture
def example_rows():
  """Four rows where rows 0 and 1 share features but not labels, and rows 2
  and 3 only differ in the last feature."""
  X = np.array([[0, 1, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, 1, 1]])
  y = np.array([0, 1, 0, 1])
  return d.BinarizedDataset(X, y, 2)


@pytest.fixture
def example(example_rows):
  return d.reduce_unique(example_rows)


@pytest.fixture
def separable():
  """Labels equal to feature 1; a single split classifies every row."""
  X = np.array([[0, 0, 1], [0, 1, 1], [1, 0, 0], [1, 1, 0], [0, 1, 0]])
  y = X[:, 1].copy()
  return d.UniqueDataset.from_arrays(X, y, [1, 2, 1, 1, 3])


@pytest.fixture
def random_unique():
  """Factory for small random datasets with every class present."""

  def make(seed: int, n_rows: int, n_features: int, n_classes: int = 2):
    rng = np.random.RandomState(seed)
    X = rng.randint(0, 2, size=(n_rows, n_features))
    y = rng.randint(0, n_classes, size=n_rows)
    y[:n_classes] = np.arange(n_classes)
    return d.reduce_unique(d.BinarizedDataset(X, y, n_classes))

  return make

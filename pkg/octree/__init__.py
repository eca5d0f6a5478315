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
from octree.dataset import UniqueDataset, load_dataset, reduce_unique
from octree.solver import SolveConfig, SolveResult, solve, train
from octree.tree import ClassTree, MetricSpec, evaluate, metric

__version__ = "0.1.0"

__all__ = [
    "ClassTree",
    "MetricSpec",
    "SolveConfig",
    "SolveResult",
    "UniqueDataset",
    "evaluate",
    "load_dataset",
    "metric",
    "reduce_unique",
    "solve",
    "train",
]

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
"""Tree topologies, fitted trees and confusion-matrix metrics."""

from octree.tree.errors import MetricError, TreeError
from octree.tree.metrics import (ClassCounts, ConfusionCounts, Metric,
                                 MetricSpec, metric, objective_value)
from octree.tree.model import ClassTree, Node, Role, evaluate, route
from octree.tree.topology import TreeTopology, topology

__all__ = [
    "ClassCounts",
    "ClassTree",
    "ConfusionCounts",
    "Metric",
    "MetricError",
    "MetricSpec",
    "Node",
    "Role",
    "TreeError",
    "TreeTopology",
    "evaluate",
    "metric",
    "objective_value",
    "route",
    "topology",
]

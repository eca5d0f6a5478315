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
"""CART, feature rankings and warm-start injection."""

from octree.formulation import EncodingError
from octree.heuristics.cart import (FeatureRanking, best_split, export_ranking,
                                    fit_cart, rf_ranking)
from octree.heuristics.injection import (HistorySet, SolveHandle,
                                         SubSolveHandle, WarmStartState,
                                         best_labeling, candidate_features,
                                         feature_scores,
                                         feasible_solution_injection,
                                         lift_tree, node_heuristic_injection,
                                         tree_to_assignment)

__all__ = [
    "EncodingError",
    "FeatureRanking",
    "HistorySet",
    "SolveHandle",
    "SubSolveHandle",
    "WarmStartState",
    "best_labeling",
    "best_split",
    "candidate_features",
    "export_ranking",
    "feasible_solution_injection",
    "feature_scores",
    "fit_cart",
    "lift_tree",
    "node_heuristic_injection",
    "rf_ranking",
    "tree_to_assignment",
]

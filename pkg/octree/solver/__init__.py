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
"""Branch-and-cut over the Benders master."""

from octree.solver.config import SolveConfig
from octree.solver.cuts import (ConflictCut, CutPool, benders_rows, min_cut,
                                min_cut_rows, separate_benders,
                                separate_feature_activated,
                                static_conflict_cuts, structure_integral,
                                unused_features)
from octree.solver.engine import (MasterCallback, restrict_spec, solve,
                                  solve_restricted, train)
from octree.solver.result import SolveResult, compute_gap, extract_tree
from octree.solver.search import (BranchAndCut, Callback, SearchNode,
                                  SearchResult, SearchStatus, Settled,
                                  SolverError, solve_milp)

__all__ = [
    "BranchAndCut",
    "Callback",
    "ConflictCut",
    "CutPool",
    "MasterCallback",
    "SearchNode",
    "SearchResult",
    "SearchStatus",
    "Settled",
    "SolveConfig",
    "SolveResult",
    "SolverError",
    "benders_rows",
    "compute_gap",
    "extract_tree",
    "min_cut",
    "min_cut_rows",
    "restrict_spec",
    "separate_benders",
    "separate_feature_activated",
    "solve",
    "solve_milp",
    "solve_restricted",
    "static_conflict_cuts",
    "structure_integral",
    "train",
    "unused_features",
]

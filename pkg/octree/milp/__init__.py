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
"""Mixed-integer program representation, LP relaxation solver and file
writers."""

from octree.milp.export import (MpsFormatError, export_lp, export_mps,
                                read_mps)
from octree.milp.model import (Constraint, LinearExpr, Model, ModelError,
                               Sense, Variable, VarType)
from octree.milp.simplex import (Basis, DenseLp, LpSolution, LpStatus,
                                 solve_lp_relaxation)

__all__ = [
    "Basis",
    "Constraint",
    "DenseLp",
    "LinearExpr",
    "LpSolution",
    "LpStatus",
    "Model",
    "ModelError",
    "MpsFormatError",
    "Sense",
    "Variable",
    "VarType",
    "export_lp",
    "export_mps",
    "read_mps",
    "solve_lp_relaxation",
]

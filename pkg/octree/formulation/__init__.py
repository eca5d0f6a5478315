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
"""Flow formulations, the Benders master and the objective encodings."""

from octree.formulation.flow import (build_flowoct, build_wflowoct,
                                     flow_tree_vars)
from octree.formulation.master import (SOURCE, FormulationArtifacts,
                                       benders_cut, build_benders_master,
                                       cut_capacity)
from octree.formulation.objectives import (OBJECTIVES, AbstractObjective,
                                           CountTerms, EncodingError,
                                           and_var, binary_expansion,
                                           ceil_log2, encode_objective,
                                           make_objective, mccormick)
from octree.formulation.structure import (TreeShape, TreeVars,
                                          add_branch_cap,
                                          add_tree_constraints,
                                          add_tree_variables, fixed_shape,
                                          read_tree, tree_values)

__all__ = [
    "AbstractObjective",
    "CountTerms",
    "EncodingError",
    "FormulationArtifacts",
    "OBJECTIVES",
    "SOURCE",
    "TreeShape",
    "TreeVars",
    "add_branch_cap",
    "add_tree_constraints",
    "add_tree_variables",
    "and_var",
    "benders_cut",
    "binary_expansion",
    "build_benders_master",
    "build_flowoct",
    "build_wflowoct",
    "ceil_log2",
    "cut_capacity",
    "encode_objective",
    "fixed_shape",
    "flow_tree_vars",
    "make_objective",
    "mccormick",
    "read_tree",
    "tree_values",
]

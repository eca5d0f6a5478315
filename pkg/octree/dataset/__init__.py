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
"""Loading, binarizing, merging and splitting datasets."""

from octree.dataset.base import BinarizedDataset, UniqueDataset
from octree.dataset.errors import (ArityError, DataError, EmptyFileError,
                                   LabelError, MissingFileError,
                                   MissingValueError, SingleClassError,
                                   SplitError)
from octree.dataset.io import (load_dataset, read_binarized, read_rules,
                               write_binarized, write_rules)
from octree.dataset.mdlp import (AttributeRule, BinRules, apply_rules,
                                 mdlp_binarize, mdlp_cut_points)
from octree.dataset.raw import RawDataset, load_csv
from octree.dataset.split import split
from octree.dataset.unique import (expand, per_row, per_unique, reduce_unique,
                                   restrict_features, unique_report)

__all__ = [
    "ArityError",
    "AttributeRule",
    "BinRules",
    "BinarizedDataset",
    "DataError",
    "EmptyFileError",
    "LabelError",
    "MissingFileError",
    "MissingValueError",
    "RawDataset",
    "SingleClassError",
    "SplitError",
    "UniqueDataset",
    "apply_rules",
    "expand",
    "load_csv",
    "load_dataset",
    "mdlp_binarize",
    "mdlp_cut_points",
    "per_row",
    "per_unique",
    "read_binarized",
    "read_rules",
    "reduce_unique",
    "restrict_features",
    "split",
    "unique_report",
    "write_binarized",
    "write_rules",
]

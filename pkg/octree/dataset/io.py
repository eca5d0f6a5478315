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
"""Reading and writing binarized datasets and rules."""

import logging
from typing import Optional, Tuple

import pandas as pd

import octree.dataset.errors as e
from octree.dataset.base import BinarizedDataset
from octree.dataset.mdlp import (BinRules, apply_rules, mdlp_binarize,
                                 passthrough_rules)
from octree.dataset.raw import LabelColumn, load_csv

MODES = ("auto", "always", "never")


def write_binarized(data: BinarizedDataset, path: str,
                    label: str = "label") -> None:
  """CSV of 0/1 feature columns followed by the label column, labels written
  with their original identifiers."""
  df = pd.DataFrame(data.X, columns=list(data.feature_names))
  df[label] = [data.classes[k] for k in data.y]
  df.to_csv(path, index=False)


def read_binarized(path: str,
                   label_column: LabelColumn = -1) -> BinarizedDataset:
  raw = load_csv(path, label_column)
  rules = passthrough_rules(raw)
  if rules is None:
    raise e.DataError("{} has feature columns that aren't 0/1.".format(path))
  return apply_rules(rules, raw)


def write_rules(rules: BinRules, path: str) -> None:
  with open(path, "w", encoding="utf-8") as f:
    f.write(rules.to_json())


def read_rules(path: str) -> BinRules:
  try:
    with open(path, encoding="utf-8") as f:
      return BinRules.from_json(f.read())
  except FileNotFoundError:
    raise e.MissingFileError("No such rules file: {}".format(path))


def load_dataset(path: str,
                 label_column: LabelColumn = -1,
                 mode: str = "auto",
                 rules: Optional[BinRules] = None
                ) -> Tuple[BinRules, BinarizedDataset]:
  """Loads a CSV and binarizes it.

  With `rules` the data is encoded with them. Otherwise `never` requires 0/1
  features, `always` runs MDLP, and `auto` runs MDLP only when some feature
  isn't already 0/1.

  """
  if mode not in MODES:
    raise ValueError("mode must be one of {}, got {!r}".format(MODES, mode))

  raw = load_csv(path, label_column)
  if rules is not None:
    return rules, apply_rules(rules, raw)

  if mode != "always":
    passthrough = passthrough_rules(raw)
    if passthrough is not None:
      logging.info("%s is already binary; skipping MDLP.", path)
      data = apply_rules(passthrough, raw)
      data.check_classes()
      return passthrough, data
    if mode == "never":
      raise e.DataError("{} has non-binary features and binarization is "
                        "off.".format(path))

  return mdlp_binarize(raw)

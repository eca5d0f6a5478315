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
"""Raw tabular data as read from CSV, before binarization."""

import csv
import os
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

import octree.dataset.errors as e

LabelColumn = Union[str, int]


@dataclass(frozen=True, eq=False)
class RawDataset:
  """Feature columns plus one label per row.

  `features` holds one pandas column per attribute: float64 for attributes
  whose values all parse as numbers, str otherwise.

  """
  features: pd.DataFrame
  labels: Tuple[str, ...]
  label_name: str = "label"

  def __post_init__(self):
    if len(self.labels) < 1:
      raise e.EmptyFileError("A dataset needs at least one row.")
    if len(self.labels) != self.features.shape[0]:
      raise e.ArityError("{} feature rows but {} labels".format(
          self.features.shape[0], len(self.labels)))
    if self.features.shape[1] < 1:
      raise e.ArityError("A dataset needs at least one feature column.")

  @property
  def feature_names(self) -> List[str]:
    return [str(c) for c in self.features.columns]

  @property
  def n_rows(self) -> int:
    return len(self.labels)

  def is_numeric(self, name: str) -> bool:
    return pd.api.types.is_numeric_dtype(self.features[name])

  def classes(self) -> Tuple[str, ...]:
    """Distinct labels, sorted numerically when every label is a number."""
    distinct = set(self.labels)
    try:
      return tuple(sorted(distinct, key=float))
    except ValueError:
      return tuple(sorted(distinct))

  def rows(self, idx) -> "RawDataset":
    idx = list(idx)
    return RawDataset(self.features.iloc[idx].reset_index(drop=True),
                      tuple(self.labels[i] for i in idx), self.label_name)


def _infer(column: pd.Series) -> pd.Series:
  parsed = pd.to_numeric(column, errors="coerce")
  if parsed.notna().all():
    return parsed.astype(float)
  return column.astype(str)


def _check_arity(path: str) -> None:
  with open(path, newline="", encoding="utf-8") as f:
    reader = csv.reader(f)
    header = next(reader, None)
    if not header:
      raise e.EmptyFileError("{} is empty.".format(path))
    for line, row in enumerate(reader, start=2):
      if row and len(row) != len(header):
        raise e.ArityError("Line {} of {} has {} fields, expected {}".format(
            line, path, len(row), len(header)))


def _label_name(columns: List[str], label_column: LabelColumn) -> str:
  if isinstance(label_column, int):
    try:
      return columns[label_column]
    except IndexError:
      raise e.LabelError("Label column {} out of range for {} columns".format(
          label_column, len(columns)))
  if label_column not in columns:
    raise e.LabelError("No label column named {!r}".format(label_column))
  return label_column


def from_frame(df: pd.DataFrame, label_column: LabelColumn) -> RawDataset:
  """Validates a frame of strings (missing cells as NaN) and infers column
  types."""
  if df.shape[0] == 0:
    raise e.EmptyFileError("No data rows.")

  label = _label_name([str(c) for c in df.columns], label_column)
  if df.shape[1] < 2:
    raise e.ArityError("Need at least one feature column besides the label.")

  labels = df[label]
  missing = np.flatnonzero(labels.isna().to_numpy())
  if missing.size:
    raise e.LabelError("label missing at row {}".format(missing[0] + 1))

  features = df.drop(columns=[label])
  holes = features.isna().to_numpy()
  if holes.any():
    row, col = np.argwhere(holes)[0]
    raise e.MissingValueError("Missing value in column {!r} at row {}".format(
        features.columns[col], row + 1))

  features = features.apply(_infer).reset_index(drop=True)
  return RawDataset(features, tuple(str(v).strip() for v in labels), label)


def load_csv(path: str, label_column: LabelColumn = -1) -> RawDataset:
  """Reads a UTF-8 CSV with a header row. Empty cells count as missing and
  are rejected."""
  if not os.path.isfile(path):
    raise e.MissingFileError("No such file: {}".format(path))
  if os.path.getsize(path) == 0:
    raise e.EmptyFileError("{} is empty.".format(path))

  _check_arity(path)
  try:
    df = pd.read_csv(path,
                     dtype=str,
                     keep_default_na=False,
                     na_values=[""],
                     encoding="utf-8")
  except pd.errors.EmptyDataError:
    raise e.EmptyFileError("{} has no columns.".format(path))
  except pd.errors.ParserError as err:
    raise e.ArityError(str(err))

  return from_frame(df, label_column)

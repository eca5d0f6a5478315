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
"""Utilities grab bag."""

import enum
import json
from functools import singledispatch
from typing import Any, Dict, List

import numpy as np
import tqdm

import octree.types as t


@singledispatch
def to_serializable(val):
  """Used by default."""
  if hasattr(val, "to_dict"):
    return val.to_dict()

  return str(val)


@to_serializable.register(np.floating)
def ts_np_floating(val):
  return float(val)


@to_serializable.register(np.integer)
def ts_np_int(val):
  return int(val)


@to_serializable.register(np.bool_)
def ts_np_bool(val):
  return bool(val)


@to_serializable.register(np.ndarray)
def ts_np_array(val):
  """Convert a numpy array to a serializable list."""
  return val.tolist()


@to_serializable.register(enum.Enum)
def ts_enum(val):
  return val.value


def json_str(item: Any, indent=None) -> str:
  """Like json.dumps, but makes a best effort to serialize anything it finds
  within a nested structure: numpy scalars and arrays, enums, and objects with
  a `to_dict` method.

  """
  return json.dumps(item, default=to_serializable, indent=indent)


def wrap(item: Any) -> List[Any]:
  """Ensures that the input is either a list, or wrapped in a list. Returns []
  for None.

  """
  if item is None:
    return []

  if isinstance(item, list):
    return item

  return [item]


def attach_s(s: t.SeriesKey, prefix: t.Prefix) -> t.SeriesKey:
  """Joins the prefix (or list of prefixes) onto s with dots."""
  return ".".join(wrap(prefix) + [str(s)])


def attach(m: Dict[t.SeriesKey, t.Value],
           prefix: t.Prefix) -> Dict[t.SeriesKey, t.Value]:
  return {attach_s(k, prefix): v for k, v in m.items()}


def is_number(s):
  """Returns true if the supplied item can be converted into a float; false
  otherwise.

  """
  try:
    float(s)
    return True
  except Exception:
    return False


class TqdmFile():
  """File-like that writes through tqdm's `write` so that log lines don't break
  a running progress bar.

  """
  file = None

  def __init__(self, file):
    self.file = file

  def write(self, x):
    if len(x.rstrip()) > 0:
      tqdm.tqdm.write(x.rstrip("\n"), file=self.file, nolock=False)

  def flush(self):
    return getattr(self.file, "flush", lambda: None)()

  def isatty(self):
    return getattr(self.file, "isatty", lambda: False)()

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
"""Errors raised while loading and transforming datasets. Every error is a
DataError, so callers can catch the whole family at once."""


class DataError(ValueError):
  """Base class for dataset problems."""


class MissingFileError(DataError):
  pass


class EmptyFileError(DataError):
  pass


class ArityError(DataError):
  """Rows with the wrong number of fields, or feature sets that don't line
  up."""


class LabelError(DataError):
  """Missing, unknown or unusable labels."""


class MissingValueError(DataError):
  pass


class SingleClassError(DataError):
  """Supervised discretization needs at least two classes."""


class SplitError(DataError):
  pass

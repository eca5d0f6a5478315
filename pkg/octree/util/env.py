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
"""Utilities for interacting with the system environment."""

import logging
import os
from typing import Dict, Mapping, Optional

ENV_PREFIX = "OCTREE"

_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


def extract_params(prefix: Optional[str] = None,
                   env: Optional[Mapping[str, str]] = None) -> Dict[str, str]:
  """Returns every environment variable that starts with the prefix, keyed by
  the rest of its name, lowercased and stripped of leading underscores.

  An environment like this:

  OCTREE_TIME_LIMIT=60
  OCTREE_SEED=3

  returns {"time_limit": "60", "seed": "3"}.

  """
  if prefix is None:
    prefix = ENV_PREFIX

  if env is None:
    env = os.environ

  def relevant():
    for k, v in env.items():
      if k.startswith(prefix):
        stripped = k[len(prefix):].lstrip("_")
        if stripped:
          yield stripped.lower(), v

  return dict(relevant())


def log_level(env: Optional[Mapping[str, str]] = None,
              verbose: bool = False) -> int:
  """Level named by OCTREE_LOG (default warning); verbose forces info unless
  the environment asks for debug."""
  name = extract_params(env=env).get("log", "warning").lower()
  if name not in _LEVELS:
    raise ValueError("OCTREE_LOG must be one of {}, got {!r}".format(
        sorted(_LEVELS), name))
  level = _LEVELS[name]
  return min(level, logging.INFO) if verbose else level

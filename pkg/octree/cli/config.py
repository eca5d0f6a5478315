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
"""Run configuration for the command line.

Settings come from four layers, each overriding the one before: defaults, an
INI file with [data], [model], [solver] and [output] sections, OCTREE_*
environment variables, and command-line flags.

"""

import configparser
import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import pandas as pd

import octree.util.env as env
from octree.dataset import (load_dataset, per_unique, read_rules,
                            reduce_unique)
from octree.dataset import split as split_rows
from octree.dataset.errors import DataError, MissingFileError
from octree.dataset.split import DEFAULT_FRACTIONS, split_sizes
from octree.solver import SolveConfig
from octree.tree import MetricSpec


def _bool(s: str) -> bool:
  v = s.strip().lower()
  if v in ("1", "true", "yes", "on"):
    return True
  if v in ("0", "false", "no", "off"):
    return False
  raise ValueError("Not a boolean: {!r}".format(s))


def _optional_int(s: str) -> Optional[int]:
  return None if s.strip().lower() in ("", "none") else int(s)


def _optional_str(s: str) -> Optional[str]:
  return s.strip() or None


def parse_split(s: str) -> Tuple[float, float, float]:
  """"a,b,c" -> (a, b, c); the fractions must sum to one."""
  parts = tuple(float(p) for p in s.split(","))
  if len(parts) != 3:
    raise ValueError("--split needs three fractions, got {!r}".format(s))
  split_sizes(100, parts)
  return parts


def _label(s: str):
  s = s.strip()
  try:
    return int(s)
  except ValueError:
    return s


@dataclass(frozen=True)
class RunConfig:
  """Everything a command needs besides its positional arguments."""
  # [data]
  data: Optional[str] = None
  label: Any = -1
  binarize: str = "auto"
  rules: Optional[str] = None
  split: Optional[Tuple[float, float, float]] = None
  kappa: Optional[str] = None
  # [model]
  depth: int = 2
  objective: str = "accuracy"
  beta: float = 1.0
  c_plus: float = 1.0
  c_minus: float = 1.0
  alpha1: float = 1.0
  alpha2: float = 1.0
  dor_bound: float = 1000.0
  lam: float = 0.0
  max_branch_nodes: Optional[int] = None
  # [solver]
  time_limit: float = 900.0
  gap_tolerance: float = 0.0
  seed: int = 0
  conflict_cuts: bool = True
  feature_cuts: bool = True
  warm_start: bool = True
  node_heuristic: bool = True
  # [output]
  out: str = "."
  trace: bool = False
  log_every: int = 1
  export_mps: bool = False
  export_lp: bool = False
  save_warm_start: bool = False

  def __post_init__(self):
    if self.depth < 1:
      raise ValueError("depth must be at least 1, got {}".format(self.depth))
    if self.binarize not in ("auto", "always", "never"):
      raise ValueError("binarize must be auto, always or never.")
    if self.log_every < 1:
      raise ValueError("log_every must be at least 1, got {}".format(
          self.log_every))
    for k in ("data", "rules", "kappa"):
      path = getattr(self, k)
      if path is not None and not os.path.exists(path):
        raise MissingFileError("No such {} file: {}".format(k, path))
    # Checks the solver ranges.
    self.solve_config()

  def spec(self, kappa=None) -> MetricSpec:
    return MetricSpec.from_name(self.objective,
                                beta=self.beta,
                                c_plus=self.c_plus,
                                c_minus=self.c_minus,
                                kappa=kappa,
                                alpha1=self.alpha1,
                                alpha2=self.alpha2,
                                dor_bound=self.dor_bound)

  def solve_config(self) -> SolveConfig:
    return SolveConfig(time_limit=self.time_limit,
                       gap_tolerance=self.gap_tolerance,
                       lam=self.lam,
                       seed=self.seed,
                       enable_conflict_cuts=self.conflict_cuts,
                       enable_feature_cuts=self.feature_cuts,
                       enable_warm_start=self.warm_start,
                       enable_node_heuristic=self.node_heuristic,
                       max_branch_nodes=self.max_branch_nodes)

  @property
  def fractions(self) -> Tuple[float, float, float]:
    return self.split or DEFAULT_FRACTIONS

  def to_dict(self) -> Dict[str, Any]:
    return asdict(self)


SECTIONS: Dict[str, Tuple[str, ...]] = {
    "data": ("data", "label", "binarize", "rules", "split", "kappa"),
    "model": ("depth", "objective", "beta", "c_plus", "c_minus", "alpha1",
              "alpha2", "dor_bound", "lam", "max_branch_nodes"),
    "solver": ("time_limit", "gap_tolerance", "seed", "conflict_cuts",
               "feature_cuts", "warm_start", "node_heuristic"),
    "output": ("out", "trace", "log_every", "export_mps", "export_lp",
               "save_warm_start"),
}

_PARSERS: Dict[str, Callable[[str], Any]] = {
    "data": _optional_str,
    "label": _label,
    "binarize": str.strip,
    "rules": _optional_str,
    "split": parse_split,
    "kappa": _optional_str,
    "depth": int,
    "objective": str.strip,
    "beta": float,
    "c_plus": float,
    "c_minus": float,
    "alpha1": float,
    "alpha2": float,
    "dor_bound": float,
    "lam": float,
    "max_branch_nodes": _optional_int,
    "time_limit": float,
    "gap_tolerance": float,
    "seed": int,
    "conflict_cuts": _bool,
    "feature_cuts": _bool,
    "warm_start": _bool,
    "node_heuristic": _bool,
    "out": str.strip,
    "trace": _bool,
    "log_every": int,
    "export_mps": _bool,
    "export_lp": _bool,
    "save_warm_start": _bool,
}

# "lambda" reads better in files and the environment.
_ALIASES = {"lambda": "lam"}


def _key(k: str) -> str:
  k = k.strip().lower().replace("-", "_")
  return _ALIASES.get(k, k)


def parse_entries(entries: Mapping[str, str]) -> Dict[str, Any]:
  """Converts raw string settings to typed RunConfig fields."""
  ret = {}
  for raw, value in entries.items():
    k = _key(raw)
    if k not in _PARSERS:
      raise ValueError("Unknown setting {!r}".format(raw))
    ret[k] = _PARSERS[k](value)
  return ret


def read_ini(path: str) -> Dict[str, Any]:
  """Typed settings of an INI file. Keys must sit in their own section."""
  if not os.path.exists(path):
    raise MissingFileError("No such config file: {}".format(path))
  parser = configparser.ConfigParser()
  parser.read(path, encoding="utf-8")

  entries = {}
  for section in parser.sections():
    if section not in SECTIONS:
      raise ValueError("Unknown section [{}] in {}".format(section, path))
    for k, v in parser.items(section):
      if _key(k) not in SECTIONS[section]:
        raise ValueError("{} doesn't belong in [{}]".format(k, section))
      entries[k] = v
  return parse_entries(entries)


def from_env(environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
  """OCTREE_* variables naming RunConfig fields; others (like OCTREE_LOG)
  are ignored."""
  params = env.extract_params(env=environ)
  return parse_entries({k: v for k, v in params.items() if _key(k) in _PARSERS})


def layered(flags: Mapping[str, Any],
            config_path: Optional[str] = None,
            environ: Optional[Mapping[str, str]] = None) -> RunConfig:
  """Defaults < config file < environment < flags. Flags set to None count
  as not given."""
  values: Dict[str, Any] = {}
  if config_path is not None:
    values.update(read_ini(config_path))
  values.update(from_env(environ))
  names = {f.name for f in fields(RunConfig)}
  values.update(
      {k: v for k, v in flags.items() if k in names and v is not None})
  return RunConfig(**values)


def load_training_data(cfg: RunConfig):
  """Loads, binarizes and (with a split) subsets the data of `cfg`.

  Returns (rules, binarized rows, unique dataset, kappa per unique row or
  None).

  """
  if cfg.data is None:
    raise ValueError("No dataset given.")
  if cfg.kappa is not None and cfg.split is not None:
    raise ValueError("Instance costs can't be combined with --split.")

  rules = read_rules(cfg.rules) if cfg.rules else None
  rules, rows = load_dataset(cfg.data, cfg.label, cfg.binarize, rules)
  if cfg.split is not None:
    rows, _, _ = split_rows(rows, cfg.seed, cfg.split)
  unique = reduce_unique(rows)

  kappa = None
  if cfg.kappa is not None:
    costs = pd.read_csv(cfg.kappa, header=None).iloc[:, 0].to_numpy(float)
    if len(costs) != rows.n_rows:
      raise DataError("{} has {} costs for {} rows".format(
          cfg.kappa, len(costs), rows.n_rows))
    kappa = tuple(float(k) for k in per_unique(unique, costs))
  return rules, rows, unique, kappa

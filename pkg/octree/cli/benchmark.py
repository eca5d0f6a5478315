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
"""Benchmark harness: one training run per (dataset, depth, objective)."""

import contextlib
import itertools
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Sequence

import pandas as pd
import tqdm

from octree.cli.config import RunConfig, load_training_data
from octree.dataset import DataError
from octree.milp import ModelError
from octree.reporter import (AbstractReporter, FSReporter, LoggingReporter,
                             NullReporter)
from octree.solver import SolverError, train
from octree.tree import MetricError, TreeError, evaluate, metric
from octree.util import TqdmFile

COLUMNS = [
    "dataset", "depth", "objective", "status", "time", "ub", "lb", "gap",
    "objective_value", "nodes"
]
SUMMARY = "__summary__"


@dataclass(frozen=True)
class BenchmarkJob:
  dataset: str
  depth: int
  objective: str
  config: RunConfig

  @property
  def name(self) -> str:
    return os.path.splitext(os.path.basename(self.dataset))[0]

  @property
  def key(self) -> str:
    """Prefix for this run's series."""
    return "{}_d{}_{}".format(self.name, self.depth, self.objective)


def make_jobs(config: RunConfig, datasets: Sequence[str],
              depths: Sequence[int],
              objectives: Sequence[str]) -> List[BenchmarkJob]:
  """The cartesian product of the settings, datasets varying slowest."""
  return [
      BenchmarkJob(d, int(depth), obj, config)
      for d, depth, obj in itertools.product(datasets, depths, objectives)
  ]


def job_reporter(job: BenchmarkJob, verbose: bool = False) -> AbstractReporter:
  """Node events of one run, keyed under `job.key`. With `verbose` every
  `log_every`-th node is logged through tqdm; with `trace` every series goes
  to OUT/trace as well.
  """
  cfg = job.config
  ret: AbstractReporter = NullReporter()
  if verbose:
    ret = ret.plus(LoggingReporter.tqdm().report_each_n(cfg.log_every))
  if cfg.trace:
    ret = ret.plus(FSReporter(os.path.join(cfg.out, "trace")))
  return ret.with_prefix(job.key)


def run_job(job: BenchmarkJob, verbose: bool = False) -> Dict[str, Any]:
  """One results row. Failures are recorded with status "error"."""
  row: Dict[str, Any] = {
      "dataset": job.name,
      "depth": job.depth,
      "objective": job.objective
  }
  reporter = job_reporter(job, verbose)
  try:
    cfg = replace(job.config,
                  data=job.dataset,
                  depth=job.depth,
                  objective=job.objective)
    _, _, data, kappa = load_training_data(cfg)
    spec = cfg.spec(kappa)
    result = train(data, cfg.depth, spec, cfg.solve_config(), reporter)
    value = metric(evaluate(result.tree, data, kappa), spec)
    row.update(status=result.status,
               time=result.wall_time,
               ub=result.ub,
               lb=result.lb,
               gap=result.gap,
               objective_value=value,
               nodes=result.nodes)
  except (DataError, TreeError, MetricError, SolverError, ModelError,
          ValueError) as e:
    logging.warning("Run %s failed: %s", row, e)
    row.update(status="error",
               time=math.nan,
               ub=math.nan,
               lb=math.nan,
               gap=math.nan,
               objective_value=math.nan,
               nodes=0)
  finally:
    reporter.close()
  return row


@contextlib.contextmanager
def logging_through_tqdm():
  """Points the root logger's console handlers at tqdm.write for the duration,
  so log lines print above a live progress bar.
  """
  handlers = [
      h for h in logging.getLogger().handlers
      if isinstance(h, logging.StreamHandler) and
      not isinstance(h, logging.FileHandler)
  ]
  streams = [h.stream for h in handlers]
  for h in handlers:
    h.setStream(TqdmFile(h.stream))
  try:
    yield
  finally:
    for h, stream in zip(handlers, streams):
      h.setStream(stream)


def run_benchmark(jobs: Sequence[BenchmarkJob],
                  workers: int = 1,
                  progress: bool = True,
                  verbose: bool = False) -> pd.DataFrame:
  """Runs every job and returns the rows in job order. With more than one
  worker the runs go to separate processes; each run stays single-threaded.
  """
  rows: List[Dict[str, Any]] = [{} for _ in jobs]
  bar = tqdm.tqdm(total=len(jobs), disable=not progress, unit="run")
  with logging_through_tqdm() if progress else contextlib.nullcontext():
    if workers > 1:
      with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(run_job, job, verbose): i
            for i, job in enumerate(jobs)
        }
        for future in as_completed(futures):
          rows[futures[future]] = future.result()
          bar.update()
    else:
      for i, job in enumerate(jobs):
        rows[i] = run_job(job, verbose)
        bar.update()
  bar.close()
  return pd.DataFrame(rows, columns=COLUMNS)


def summarize(results: pd.DataFrame) -> pd.DataFrame:
  """Per (depth, objective) means of the successful runs, one row each."""
  ok = results[results["status"] != "error"]
  numeric = ["time", "ub", "lb", "gap", "objective_value", "nodes"]
  means = ok.groupby(["depth", "objective"], sort=True)[numeric].mean()
  ret = means.reset_index()
  ret["dataset"] = SUMMARY
  ret["status"] = "summary"
  return ret[COLUMNS]


def write_results(results: pd.DataFrame, path: str) -> pd.DataFrame:
  """Appends the summary rows and writes the CSV; returns the full table."""
  table = pd.concat([results, summarize(results)], ignore_index=True)
  table.to_csv(path, index=False)
  return table

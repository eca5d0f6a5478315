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
"""The octree command line.

  octree binarize DATA --out DIR
  octree train DATA --depth 3 --objective f1 --out DIR
  octree evaluate TREE DATA --metrics accuracy,f1,mcc
  octree export SOURCE --format {mps,lp,dot}
  octree oracle-check DATA --depth 2 --objective mcc
  octree benchmark DATA [DATA ...] --depths 2 3 --objectives accuracy f1

Exit codes: 0 success, 1 usage, 2 data error, 3 solver error, 4 oracle
mismatch.

"""

import argparse
import logging
import os
import sys
from dataclasses import replace
from typing import Any, Dict, List, Optional

import pandas as pd

import octree.cli.benchmark as bench
from octree.cli.config import (RunConfig, layered, load_training_data,
                               parse_split, read_rules)
from octree.dataset import (DataError, MissingFileError, load_dataset,
                            reduce_unique, unique_report, write_binarized,
                            write_rules)
from octree.formulation import build_benders_master
from octree.heuristics import WarmStartState
from octree.milp import ModelError, MpsFormatError, export_lp, export_mps
from octree.oracle import OracleLimitError, enumerate_optimal
from octree.reporter import AbstractReporter, FSReporter, LoggingReporter
from octree.solver import SolverError, train
from octree.tree import (ClassTree, Metric, MetricError, TreeError, evaluate,
                         metric)
from octree.util import json_str
from octree.util.env import log_level

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SOLVER = 3
EXIT_MISMATCH = 4

OBJECTIVES = ["f1"] + [m.value for m in Metric]


class _Parser(argparse.ArgumentParser):
  """Exits with EXIT_USAGE on bad arguments."""

  def error(self, message):
    self.print_usage(sys.stderr)
    self.exit(EXIT_USAGE, "{}: error: {}\n".format(self.prog, message))


def _common() -> argparse.ArgumentParser:
  parser = argparse.ArgumentParser(add_help=False)
  parser.add_argument("--config", help="INI file with default settings")
  parser.add_argument("--verbose",
                      action="store_true",
                      help="log at info level")
  return parser


def _data_flags(parser) -> None:
  parser.add_argument("--label",
                      help="label column, by name or index (default: last)")
  parser.add_argument("--binarize", choices=["auto", "always", "never"])
  parser.add_argument("--rules", help="binarization rules JSON to reuse")
  parser.add_argument("--split",
                      type=parse_split,
                      help="train,val,test fractions; trains on the first")
  parser.add_argument("--kappa", help="CSV with one cost per row")


def _model_flags(parser) -> None:
  parser.add_argument("--depth", type=int)
  parser.add_argument("--objective", choices=OBJECTIVES)
  parser.add_argument("--beta", type=float)
  parser.add_argument("--c-plus", dest="c_plus", type=float)
  parser.add_argument("--c-minus", dest="c_minus", type=float)
  parser.add_argument("--alpha1", type=float)
  parser.add_argument("--alpha2", type=float)
  parser.add_argument("--dor-bound", dest="dor_bound", type=float)
  parser.add_argument("--lambda", dest="lam", type=float)
  parser.add_argument("--max-branch-nodes", dest="max_branch_nodes", type=int)


def _solver_flags(parser) -> None:
  parser.add_argument("--time-limit", dest="time_limit", type=float)
  parser.add_argument("--gap-tolerance", dest="gap_tolerance", type=float)
  parser.add_argument("--seed", type=int)
  parser.add_argument("--no-cuts",
                      dest="no_cuts",
                      action="store_true",
                      help="disable conflict and feature-activated cuts")
  parser.add_argument("--no-warm-start",
                      dest="warm_start",
                      action="store_const",
                      const=False)
  parser.add_argument("--no-node-heuristic",
                      dest="node_heuristic",
                      action="store_const",
                      const=False)


def _parser() -> argparse.ArgumentParser:
  parser = _Parser(
      prog="octree",
      description="Optimal classification trees by branch-and-cut.",
      formatter_class=argparse.ArgumentDefaultsHelpFormatter,
  )
  sub = parser.add_subparsers(dest="command", parser_class=_Parser)
  sub.required = True
  common = _common()

  p = sub.add_parser("binarize",
                     parents=[common],
                     help="MDLP-binarize a CSV file")
  p.add_argument("data")
  p.add_argument("--out")
  _data_flags(p)
  p.set_defaults(handler=cmd_binarize)

  p = sub.add_parser("train", parents=[common], help="fit an optimal tree")
  p.add_argument("data")
  _data_flags(p)
  _model_flags(p)
  _solver_flags(p)
  p.add_argument("--out")
  p.add_argument("--trace",
                 action="store_const",
                 const=True,
                 help="persist every solver series as jsonl under OUT/trace")
  p.add_argument("--log-every",
                 dest="log_every",
                 type=int,
                 help="write one solve.log line every N nodes")
  p.add_argument("--export-mps",
                 dest="export_mps",
                 action="store_const",
                 const=True)
  p.add_argument("--export-lp", dest="export_lp", action="store_const",
                 const=True)
  p.add_argument("--save-warm-start",
                 dest="save_warm_start",
                 action="store_const",
                 const=True)
  p.set_defaults(handler=cmd_train)

  p = sub.add_parser("evaluate",
                     parents=[common],
                     help="score a tree on a dataset")
  p.add_argument("tree")
  p.add_argument("data")
  _data_flags(p)
  _model_flags(p)
  p.add_argument("--metrics", default="accuracy,f1,mcc,ba")
  p.add_argument("--format", choices=["json", "csv"], default="json")
  p.add_argument("--output", help="file to write instead of stdout")
  p.set_defaults(handler=cmd_evaluate)

  p = sub.add_parser("export",
                     parents=[common],
                     help="write a master model or a tree's DOT source")
  p.add_argument("source", help="dataset (mps, lp) or tree JSON (dot)")
  p.add_argument("--format", choices=["mps", "lp", "dot"], default="mps")
  p.add_argument("--output", help="file to write instead of stdout")
  _data_flags(p)
  _model_flags(p)
  p.set_defaults(handler=cmd_export)

  p = sub.add_parser("oracle-check",
                     parents=[common],
                     help="compare the solver with exhaustive enumeration")
  p.add_argument("data")
  _data_flags(p)
  _model_flags(p)
  _solver_flags(p)
  p.set_defaults(handler=cmd_oracle_check)

  p = sub.add_parser("benchmark",
                     parents=[common],
                     help="train over datasets x depths x objectives")
  p.add_argument("datasets", nargs="+")
  p.add_argument("--depths", type=int, nargs="+", default=[2])
  p.add_argument("--objectives",
                 nargs="+",
                 choices=OBJECTIVES,
                 default=["accuracy"])
  p.add_argument("--workers", type=int, default=1)
  p.add_argument("--out")
  p.add_argument("--trace",
                 action="store_const",
                 const=True,
                 help="persist every run's series as jsonl under OUT/trace")
  p.add_argument("--log-every",
                 dest="log_every",
                 type=int,
                 help="with --verbose, log every Nth node of each run")
  _data_flags(p)
  _model_flags(p)
  _solver_flags(p)
  p.set_defaults(handler=cmd_benchmark)
  return parser


def _config(args: argparse.Namespace, **overrides: Any) -> RunConfig:
  flags = dict(vars(args))
  if flags.pop("no_cuts", False):
    flags.update(conflict_cuts=False, feature_cuts=False)
  if flags.get("label") is not None:
    flags["label"] = _label(flags["label"])
  flags.update(overrides)
  return layered(flags, args.config)


def _label(s: str):
  try:
    return int(s)
  except ValueError:
    return s


def _write(text: str, path: Optional[str]) -> None:
  if path is None:
    sys.stdout.write(text)
    return
  with open(path, "w", encoding="utf-8") as f:
    f.write(text)


def _stem(path: str) -> str:
  return os.path.splitext(os.path.basename(path))[0]


def cmd_binarize(args) -> int:
  cfg = _config(args)
  rules = read_rules(cfg.rules) if cfg.rules else None
  rules, rows = load_dataset(cfg.data, cfg.label, cfg.binarize, rules)
  os.makedirs(cfg.out, exist_ok=True)
  stem = _stem(cfg.data)
  write_binarized(rows, os.path.join(cfg.out, stem + ".bin.csv"))
  write_rules(rules, os.path.join(cfg.out, stem + ".rules.json"))
  report = unique_report(reduce_unique(rows), rules)
  print(json_str(report, indent=2))
  return EXIT_OK


def _reporter(cfg: RunConfig, log) -> AbstractReporter:
  ret = LoggingReporter(log).report_each_n(cfg.log_every)
  if cfg.trace:
    ret = ret.plus(FSReporter(os.path.join(cfg.out, "trace")))
  return ret


def cmd_train(args) -> int:
  cfg = _config(args)
  _, rows, data, kappa = load_training_data(cfg)
  spec = cfg.spec(kappa)
  os.makedirs(cfg.out, exist_ok=True)

  def out(name):
    return os.path.join(cfg.out, name)

  if cfg.export_mps or cfg.export_lp:
    model, _ = build_benders_master(data, cfg.depth, cfg.lam, spec,
                                    cfg.max_branch_nodes)
    if cfg.export_mps:
      _write(export_mps(model), out("master.mps"))
    if cfg.export_lp:
      _write(export_lp(model), out("master.lp"))

  state = WarmStartState() if cfg.save_warm_start else None
  with open(out("solve.log"), "w", encoding="utf-8") as log:
    reporter = _reporter(cfg, log)
    reporter.report_params({
        "depth": cfg.depth,
        "objective": spec.name,
        "lambda": cfg.lam,
        "rows": rows.n_rows,
        "unique": data.n_unique,
        "features": data.n_features,
    })
    result = train(data, cfg.depth, spec, cfg.solve_config(), reporter, state)
    reporter.close()

  _write(result.tree.to_json() + "\n", out("tree.json"))
  _write(result.to_json() + "\n", out("result.json"))
  _write(
      result.tree.to_dot(list(data.feature_names), list(data.classes)),
      out("tree.dot"))
  if state is not None:
    _write(json_str(state.to_dict(), indent=2) + "\n", out("warm_start.json"))

  summary = {
      k: v
      for k, v in result.to_dict()["result"].items()
      if k not in ("tree", "cuts")
  }
  print(json_str(summary, indent=2))
  return EXIT_OK


def _read_tree(path: str) -> ClassTree:
  try:
    with open(path, encoding="utf-8") as f:
      text = f.read()
  except FileNotFoundError as e:
    raise MissingFileError("No such tree file: {}".format(path)) from e
  except OSError as e:
    raise DataError("Can't read tree file {}: {}".format(path, e)) from e
  return ClassTree.from_json(text)


def _scores(tree: ClassTree, cfg: RunConfig, data, kappa,
            names: List[str]) -> List[Dict[str, Any]]:
  ret = []
  for name in names:
    spec = replace(cfg, objective=name).spec(kappa)
    counts = evaluate(tree, data, kappa if spec.kappa is not None else None)
    ret.append({"metric": name, "value": metric(counts, spec)})
  return ret


def cmd_evaluate(args) -> int:
  cfg = _config(args, split=None)
  tree = _read_tree(args.tree)
  _, _, data, kappa = load_training_data(cfg)
  names = [m.strip() for m in args.metrics.split(",") if m.strip()]
  for name in names:
    if name not in OBJECTIVES:
      raise MetricError("Unknown metric {!r}".format(name))

  scores = _scores(tree, cfg, data, kappa, names)
  if args.format == "csv":
    _write(pd.DataFrame(scores).to_csv(index=False), args.output)
  else:
    _write(json_str(scores, indent=2) + "\n", args.output)
  return EXIT_OK


def cmd_export(args) -> int:
  if args.format == "dot":
    cfg = _config(args)
    tree = _read_tree(args.source)
    names = read_rules(cfg.rules).column_names() if cfg.rules else None
    _write(tree.to_dot(names), args.output)
    return EXIT_OK

  cfg = _config(args, data=args.source)
  _, _, data, kappa = load_training_data(cfg)
  model, _ = build_benders_master(data, cfg.depth, cfg.lam, cfg.spec(kappa),
                                  cfg.max_branch_nodes)
  text = export_mps(model) if args.format == "mps" else export_lp(model)
  _write(text, args.output)
  return EXIT_OK


def cmd_oracle_check(args) -> int:
  cfg = _config(args)
  _, _, data, kappa = load_training_data(cfg)
  spec = cfg.spec(kappa)
  expected = enumerate_optimal(data, cfg.depth, spec, cfg.lam,
                               cfg.max_branch_nodes)
  result = train(data, cfg.depth, spec, cfg.solve_config())

  ok = result.optimal and expected.matches(result.objective)
  print(
      json_str(
          {
              "pass": ok,
              "solver": result.objective,
              "solver_status": result.status,
              "oracle": expected.objective,
              "trees": expected.count,
          },
          indent=2))
  if not ok:
    logging.error("Solver objective %r (%s) differs from the oracle's %r.",
                  result.objective, result.status, expected.objective)
    return EXIT_MISMATCH
  return EXIT_OK


def cmd_benchmark(args) -> int:
  cfg = _config(args)
  jobs = bench.make_jobs(cfg, args.datasets, args.depths, args.objectives)
  results = bench.run_benchmark(jobs,
                                workers=args.workers,
                                verbose=args.verbose)
  os.makedirs(cfg.out, exist_ok=True)
  table = bench.write_results(results, os.path.join(cfg.out, "results.csv"))
  print(table.to_string(index=False))
  return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
  args = _parser().parse_args(sys.argv[1:] if argv is None else argv)
  try:
    logging.basicConfig(level=log_level(verbose=args.verbose),
                        format="%(levelname)s %(name)s: %(message)s")
    return args.handler(args)
  except (DataError, TreeError, MetricError, OracleLimitError) as e:
    logging.error("%s", e)
    return EXIT_DATA
  except (SolverError, ModelError, MpsFormatError) as e:
    logging.error("%s", e)
    return EXIT_SOLVER
  except ValueError as e:
    logging.error("%s", e)
    return EXIT_USAGE


def run():  # pragma: no cover
  sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
  run()

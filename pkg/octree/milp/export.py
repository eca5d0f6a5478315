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
"""Writers for MPS and CPLEX-style LP text, and an MPS reader for checking
that exported models round-trip.

MPS output follows the fixed-format field layout (name fields padded to eight
characters, values right-aligned to twelve) and falls back to wider fields
when a name is longer, which free-format readers accept. Every variable gets
explicit bounds so that no reader-specific defaults apply.

"""

import re
from typing import Dict, List, Tuple

from octree.milp.model import LinearExpr, Model, ModelError, Sense, VarType

_OBJ_ROW = "obj"
_ROW_CODES = {Sense.LE: "L", Sense.EQ: "E", Sense.GE: "G"}
_CODE_SENSES = {v: k for k, v in _ROW_CODES.items()}
_LP_SENSES = {Sense.LE: "<=", Sense.EQ: "=", Sense.GE: ">="}
_BAD_CHARS = re.compile(r"[^A-Za-z0-9_.]")


class MpsFormatError(ValueError):
  """Raised when MPS text can't be read back into a Model."""


def sanitize(name: str) -> str:
  """Returns a name safe for both MPS and LP files."""
  ret = _BAD_CHARS.sub("_", name)
  if not ret or ret[0].isdigit() or ret[0] == ".":
    ret = "x" + ret
  return ret


def _names(model: Model) -> Tuple[List[str], List[str]]:
  """Sanitized variable and row names; errors on collisions."""

  def unique(raw: List[str], kind: str) -> List[str]:
    seen: Dict[str, str] = {}
    ret = []
    for name in raw:
      clean = sanitize(name)
      if clean in seen or clean == _OBJ_ROW:
        raise ModelError("{} name collision after sanitization: {!r} and "
                         "{!r} -> {!r}".format(kind, seen.get(clean, _OBJ_ROW),
                                               name, clean))
      seen[clean] = name
      ret.append(clean)
    return ret

  return (unique([v.name for v in model.variables], "Variable"),
          unique([r.name for r in model.constraints], "Constraint"))


def _num(v: float) -> str:
  return "{:.12g}".format(float(v))


def _field_line(f1: str, f2: str, f3: str = "", f4: str = "") -> str:
  line = " {:<2} {:<8}".format(f1, f2)
  if f3:
    line += "  {:<8}  {:>12}".format(f3, f4)
  return line.rstrip()


def export_mps(model: Model) -> str:
  """Returns the model as MPS text with deterministic row and column order."""
  var_names, row_names = _names(model)

  # column-major view of the rows.
  columns: List[List[Tuple[str, float]]] = [[] for _ in model.variables]
  for i, c in sorted(model.objective.items()):
    columns[i].append((_OBJ_ROW, c))
  for r, row in enumerate(model.constraints):
    for i, c in row.coefs:
      columns[i].append((row_names[r], c))

  lines = ["NAME          {}".format(sanitize(model.name))]
  lines += ["OBJSENSE", "    {}".format("MAX" if model.maximize else "MIN")]
  lines.append("ROWS")
  lines.append(_field_line("N", _OBJ_ROW))
  for r, row in enumerate(model.constraints):
    lines.append(_field_line(_ROW_CODES[row.sense], row_names[r]))

  lines.append("COLUMNS")
  in_int = False
  marker = 0
  for v, entries in zip(model.variables, columns):
    if v.is_integer and not in_int:
      lines.append("    MARKER{:<4}  'MARKER'                 'INTORG'".format(
          marker))
      in_int = True
    elif not v.is_integer and in_int:
      lines.append("    MARKER{:<4}  'MARKER'                 'INTEND'".format(
          marker))
      marker += 1
      in_int = False

    if not entries:
      entries = [(_OBJ_ROW, 0.0)]
    for row_name, c in entries:
      lines.append(_field_line("", var_names[v.id], row_name, _num(c)))
  if in_int:
    lines.append("    MARKER{:<4}  'MARKER'                 'INTEND'".format(
        marker))

  lines.append("RHS")
  if model.objective_constant != 0.0:
    lines.append(
        _field_line("", "RHS", _OBJ_ROW, _num(-model.objective_constant)))
  for r, row in enumerate(model.constraints):
    if row.rhs != 0.0:
      lines.append(_field_line("", "RHS", row_names[r], _num(row.rhs)))

  lines.append("BOUNDS")
  for v in model.variables:
    name = var_names[v.id]
    if v.vtype is VarType.BINARY and v.lb == 0.0 and v.ub == 1.0:
      lines.append(_field_line("BV", "BND", name))
    elif v.lb == v.ub:
      lines.append(_field_line("FX", "BND", name, _num(v.lb)))
    else:
      if v.lb != 0.0:
        lines.append(_field_line("LO", "BND", name, _num(v.lb)))
      lines.append(_field_line("UP", "BND", name, _num(v.ub)))

  lines.append("ENDATA")
  return "\n".join(lines) + "\n"


def _lp_terms(pairs: List[Tuple[str, float]]) -> str:
  if not pairs:
    return "0"

  chunks = []
  for k, (name, c) in enumerate(pairs):
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    term = name if mag == 1.0 else "{} {}".format(_num(mag), name)
    if k == 0:
      chunks.append(term if sign == "+" else "- " + term)
    else:
      chunks.append("{} {}".format(sign, term))

  # keep lines short; LP readers cap line length.
  out, line = [], []
  for chunk in chunks:
    line.append(chunk)
    if len(line) == 8:
      out.append(" ".join(line))
      line = []
  if line:
    out.append(" ".join(line))
  return "\n   ".join(out)


def export_lp(model: Model) -> str:
  """Returns the model as CPLEX-style LP text."""
  var_names, row_names = _names(model)
  lines = ["\\ Problem name: {}".format(sanitize(model.name))]
  if model.objective_constant != 0.0:
    lines.append("\\ Objective constant: {}".format(
        _num(model.objective_constant)))

  lines.append("Maximize" if model.maximize else "Minimize")
  obj = [(var_names[i], c) for i, c in sorted(model.objective.items())]
  lines.append(" obj: " + _lp_terms(obj))

  lines.append("Subject To")
  for r, row in enumerate(model.constraints):
    terms = [(var_names[i], c) for i, c in row.coefs]
    lines.append(" {}: {} {} {}".format(row_names[r], _lp_terms(terms),
                                        _LP_SENSES[row.sense], _num(row.rhs)))

  lines.append("Bounds")
  for v in model.variables:
    if v.vtype is VarType.BINARY:
      continue
    name = var_names[v.id]
    if v.lb == v.ub:
      lines.append(" {} = {}".format(name, _num(v.lb)))
    else:
      lines.append(" {} <= {} <= {}".format(_num(v.lb), name, _num(v.ub)))

  generals = [var_names[v.id] for v in model.variables
              if v.vtype is VarType.INTEGER]
  binaries = [var_names[v.id] for v in model.variables
              if v.vtype is VarType.BINARY]
  if generals:
    lines.append("Generals")
    lines += [" " + n for n in generals]
  if binaries:
    lines.append("Binaries")
    lines += [" " + n for n in binaries]

  lines.append("End")
  return "\n".join(lines) + "\n"


def read_mps(text: str) -> Model:
  """Parses MPS text as written by export_mps (and most fixed or free MPS
  files with finite bounds) back into a Model."""
  name = "model"
  maximize = False
  section = None
  row_order: List[str] = []
  row_sense: Dict[str, Sense] = {}
  obj_row = None
  col_order: List[str] = []
  col_entries: Dict[str, List[Tuple[str, float]]] = {}
  col_int: Dict[str, bool] = {}
  rhs: Dict[str, float] = {}
  bounds: Dict[str, List[float]] = {}
  binary: Dict[str, bool] = {}
  in_int = False

  for lineno, raw in enumerate(text.splitlines(), start=1):
    if not raw.strip() or raw.startswith("*"):
      continue
    tokens = raw.split()
    if not raw[0].isspace():
      section = tokens[0].upper()
      if section == "NAME" and len(tokens) > 1:
        name = tokens[1]
      elif section == "OBJSENSE" and len(tokens) > 1:
        maximize = tokens[1].upper().startswith("MAX")
      elif section == "ENDATA":
        break
      elif section not in ("NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS",
                           "BOUNDS"):
        raise MpsFormatError("Unsupported section {!r} at line {}".format(
            section, lineno))
      continue

    if section == "OBJSENSE":
      maximize = tokens[0].upper().startswith("MAX")
    elif section == "ROWS":
      code, row = tokens[0].upper(), tokens[1]
      if code == "N":
        if obj_row is None:
          obj_row = row
        continue
      if code not in _CODE_SENSES:
        raise MpsFormatError("Bad row type {!r} at line {}".format(
            code, lineno))
      row_order.append(row)
      row_sense[row] = _CODE_SENSES[code]
    elif section == "COLUMNS":
      if len(tokens) >= 3 and tokens[1] == "'MARKER'":
        in_int = tokens[2] == "'INTORG'"
        continue
      col = tokens[0]
      if col not in col_entries:
        col_order.append(col)
        col_entries[col] = []
        col_int[col] = in_int
      pairs = tokens[1:]
      if len(pairs) % 2:
        raise MpsFormatError("Odd COLUMNS entry at line {}".format(lineno))
      for k in range(0, len(pairs), 2):
        col_entries[col].append((pairs[k], float(pairs[k + 1])))
    elif section == "RHS":
      pairs = tokens[1:] if len(tokens) % 2 else tokens
      for k in range(0, len(pairs), 2):
        rhs[pairs[k]] = float(pairs[k + 1])
    elif section == "BOUNDS":
      code, col = tokens[0].upper(), tokens[2]
      lo_hi = bounds.setdefault(col, [0.0, float("inf")])
      value = float(tokens[3]) if len(tokens) > 3 else None
      if code == "BV":
        binary[col] = True
        lo_hi[:] = [0.0, 1.0]
      elif code == "FX":
        lo_hi[:] = [value, value]
      elif code == "LO":
        lo_hi[0] = value
      elif code == "UP":
        lo_hi[1] = value
      else:
        raise MpsFormatError("Unsupported bound type {!r} at line {}".format(
            code, lineno))

  model = Model(name)
  ids = {}
  for col in col_order:
    lb, ub = bounds.get(col, [0.0, float("inf")])
    if binary.get(col):
      vtype = VarType.BINARY
    elif col_int[col]:
      vtype = VarType.INTEGER
    else:
      vtype = VarType.CONTINUOUS
    try:
      ids[col] = model.add_variable(col, lb, ub, vtype)
    except ModelError as e:
      raise MpsFormatError(str(e))

  rows: Dict[str, Dict[int, float]] = {r: {} for r in row_order}
  objective: Dict[int, float] = {}
  for col in col_order:
    for row, c in col_entries[col]:
      if row == obj_row:
        objective[ids[col]] = c
      elif row in rows:
        rows[row][ids[col]] = c
      else:
        raise MpsFormatError("Unknown row {!r} in column {!r}".format(
            row, col))

  for row in row_order:
    model.add_constraint(rows[row], row_sense[row], rhs.get(row, 0.0), name=row)

  constant = -rhs.get(obj_row, 0.0) if obj_row else 0.0
  model.set_objective(LinearExpr(objective, constant), maximize=maximize)
  return model

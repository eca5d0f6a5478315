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
"""Reporter and reader backed by PyFilesystem2, so traces can go to a local
directory (`osfs://`), memory (`mem://`) or any other fs URL. Each series is
stored as a jsonl file named after its key.

"""

import json
from typing import Any, Iterable, List, Optional, Union

import fs as pyfs
from fs.base import FS

import octree.reporter.reader as rd
import octree.types as t
import octree.util as u
from octree.reporter.base import AbstractReporter


class HandleCache():
  """Opens file handles and caches them by absolute path. On close, closes all
  handles and then the filesystem.

  """

  def __init__(self, fs: FS):
    self._m = {}
    self._fs = fs

  def open(self, path: str, mode: str):
    abs_path = pyfs.path.abspath(path)
    handle = self._m.get(abs_path)

    if handle is None:
      handle = self._fs.open(abs_path, mode=mode)
      self._m[abs_path] = handle

    return handle

  def clear(self) -> None:
    for _, handle in self._m.items():
      handle.close()

    self._m.clear()

  def close(self) -> None:
    self.clear()
    self._fs.close()


def load_fs(root: Union[FS, str]) -> FS:
  """Opens (creating if needed) the filesystem at `root` if given a string;
  passes FS instances through."""
  if isinstance(root, str):
    return pyfs.open_fs(root, create=True)

  if isinstance(root, FS):
    return root

  raise ValueError("Not a filesystem or path!")


def jsonl_path(k: t.SeriesKey) -> str:
  return pyfs.path.abspath("{}.jsonl".format(k))


def jsonl_bytes(v: Any) -> bytes:
  """A single line of json, newline included, as utf-8 bytes."""
  return bytes(u.json_str(v) + "\n", "utf8")


class FSReader(rd.AbstractReader):

  def __init__(self, fs: Union[FS, str]):
    self._fs = load_fs(fs)

  def keys(self) -> Iterable[t.SeriesKey]:
    for p in self._fs.walk.files(filter=["*.jsonl"]):
      k, _ = pyfs.path.splitext(pyfs.path.basename(p))
      yield k

  def read(self, k: t.SeriesKey) -> List[t.Value]:
    try:
      with self._fs.open(jsonl_path(k), mode="rb") as handle:
        lines = handle.read().splitlines()
        return [json.loads(s.decode("utf-8")) for s in lines]
    except pyfs.errors.ResourceNotFound:
      return []

  def close(self) -> None:
    self._fs.close()


class FSReporter(AbstractReporter):
  """Appends each reported value as one json line to `<key>.jsonl`.

  Args:
    fs: Either an fs URL string or an fs.base.FS object.

  """

  def __init__(self, fs: Union[FS, str]):
    self._fs = load_fs(fs)
    self._cache = HandleCache(self._fs)

  def _handle(self, k: t.SeriesKey):
    return self._cache.open(jsonl_path(k), mode="wb")

  def report_params(self, m) -> None:
    with self._fs.open("/params.json", mode="w") as f:
      f.write(u.json_str(m))

  def report_all(self, step: int, m) -> None:
    for k, v in m.items():
      handle = self._handle(k)
      handle.write(jsonl_bytes(v))
      handle.flush()

  def reader(self) -> Optional[rd.AbstractReader]:
    return FSReader(self._fs)

  def close(self) -> None:
    self._cache.close()

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
from setuptools import find_packages, setup


def readme():
  try:
    with open('README.md') as f:
      return f.read()
  except Exception:
    return None


REQUIRED_PACKAGES = [
    "fs",
    "numpy>=1.18.0",
    "pandas>=1.0.0",
    "scikit-learn>=0.23.0",
    "scipy>=1.4.0",
    "tqdm>=4.42.1",
]

setup(name='octree',
      version='0.1.0',
      description='Optimal classification trees by Benders branch-and-cut.',
      long_description=readme(),
      long_description_content_type="text/markdown",
      python_requires='>=3.7.0',
      author='The octree Authors',
      license='Apache-2.0',
      packages=find_packages(exclude=('tests', 'docs')),
      install_requires=REQUIRED_PACKAGES,
      include_package_data=True,
      entry_points={'console_scripts': ['octree = octree.cli.main:run',]})

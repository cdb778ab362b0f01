# coding=utf-8
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Packaging for compressed-opt."""

import sys
from pathlib import Path

from setuptools import find_packages, setup

if sys.version_info < (3, 9):
    sys.exit("compressed-opt requires Python >= 3.9.")

from compressed_opt import package_info as info

here = Path(__file__).parent


def read_requirements(path):
    lines = (line.strip() for line in (here / path).read_text().splitlines())
    return [line for line in lines if line and not line.startswith("#")]


setup(
    name=info.__package_name__,
    version=info.__version__,
    description=info.__description__,
    long_description=(here / "README.md").read_text(),
    long_description_content_type="text/markdown",
    author=info.__contact_names__,
    url=info.__url__,
    download_url=info.__download_url__,
    license=info.__license__,
    keywords=info.__keywords__,
    python_requires=">=3.9",
    packages=find_packages(include=["compressed_opt", "compressed_opt.*"]),
    install_requires=read_requirements("requirements.txt"),
    classifiers=[
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Environment :: Console",
    ],
    zip_safe=False,
)

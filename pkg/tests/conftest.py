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

# tests directory-specific settings - this file is run automatically
# by pytest before any tests are run

import sys
import warnings
from os.path import abspath, dirname, join

import pytest

# run against this checkout without reinstalling; tasks/ holds the command
# modules, which import each other as top-level packages
git_repo_path = abspath(join(dirname(dirname(__file__))))
sys.path.insert(1, git_repo_path)
sys.path.insert(2, join(git_repo_path, "tasks"))

warnings.simplefilter(action="ignore", category=FutureWarning)


@pytest.fixture(autouse=True)
def _fresh_global_variables():
    from compressed_opt.global_vars import reset_global_variables

    reset_global_variables()
    yield
    reset_global_variables()


def pytest_sessionfinish(session, exitstatus):
    # If no tests are collected, pytest exists with code 5, which makes the CI fail.
    if exitstatus == 5:
        session.exitstatus = 0

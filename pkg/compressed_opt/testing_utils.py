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

"""Helpers shared by the test suite."""

import asyncio
import contextlib
import inspect
import logging
import os
import random
import re
import shutil
import sys
import tempfile
import unittest
from io import StringIO
from pathlib import Path
from unittest import mock

import numpy as np

_TRUTHY = {'1', 'y', 'yes', 't', 'true', 'on'}
_FALSY = {'0', 'n', 'no', 'f', 'false', 'off'}


def parse_flag_from_env(key, default=False):
    """Read a yes/no flag such as RUN_SLOW from the environment."""
    value = os.environ.get(key)
    if value is None:
        return default
    value = value.strip().lower()
    if value in _TRUTHY:
        return True
    if value in _FALSY:
        return False
    raise ValueError('If set, {} must be yes or no, got {!r}.'.format(
        key, value))


_run_slow_tests = parse_flag_from_env('RUN_SLOW', default=False)


def slow(test_case):
    """Skip a test unless RUN_SLOW is set.

    Used for the empirical convergence checks that grid-search long runs.
    """
    return unittest.skipUnless(_run_slow_tests, 'test is slow')(test_case)


def set_seed(seed: int = 42):
    """Seed ``random`` and numpy's legacy global generator.

    Library code only draws from RandomStreams; this pins ad hoc randomness
    inside tests.
    """
    random.seed(seed)
    np.random.seed(seed)


def apply_print_resets(buf):
    """Drop everything up to a carriage return on each line."""
    return re.sub(r'^.*\r', '', buf, 0, re.M)


class CaptureStd:
    """Capture stdout into ``.out`` and stderr into ``.err``.

    Captured text is echoed back on exit unless ``replay=False``::

        with CaptureStdout() as cs:
            print('round 10 | F: 1.0')
        assert 'F:' in cs.out
    """

    def __init__(self, out=True, err=True, replay=True):
        self.replay = replay
        self._out_buf = StringIO() if out else None
        self._err_buf = StringIO() if err else None
        self.out = 'not capturing stdout' if not out else ''
        self.err = 'not capturing stderr' if not err else ''
        self._stack = None

    def __enter__(self):
        self._stack = contextlib.ExitStack()
        if self._out_buf is not None:
            self._stack.enter_context(contextlib.redirect_stdout(self._out_buf))
        if self._err_buf is not None:
            self._stack.enter_context(contextlib.redirect_stderr(self._err_buf))
        return self

    def __exit__(self, *exc):
        self._stack.close()
        if self._out_buf is not None:
            captured = self._out_buf.getvalue()
            if self.replay:
                sys.stdout.write(captured)
            self.out = apply_print_resets(captured)
        if self._err_buf is not None:
            captured = self._err_buf.getvalue()
            if self.replay:
                sys.stderr.write(captured)
            self.err = captured

    def __repr__(self):
        return 'stdout: {}\nstderr: {}'.format(self.out, self.err)


class CaptureStdout(CaptureStd):
    """CaptureStd for stdout only."""

    def __init__(self, replay=True):
        super().__init__(out=True, err=False, replay=replay)


class CaptureLogger:
    """Collect what one `logging` logger emits into ``.out``::

        with CaptureLogger(logging.getLogger('compressed_opt.training')) as cl:
            ...
        assert 'diverged' in cl.out
    """

    def __init__(self, logger):
        self.logger = logger
        self._buffer = StringIO()
        self._handler = logging.StreamHandler(self._buffer)
        self.out = ''

    def __enter__(self):
        self.logger.addHandler(self._handler)
        return self

    def __exit__(self, *exc):
        self.logger.removeHandler(self._handler)
        self.out = self._buffer.getvalue()

    def __repr__(self):
        return 'captured: {}\n'.format(self.out)


def mockenv(**kwargs):
    """Patch ``os.environ`` for one test::

        @mockenv(COMPRESSED_OPT_LOG='info')
        def test_something(self):
            ...
    """
    return mock.patch.dict(os.environ, kwargs)


class TestCasePlus(unittest.TestCase):
    """``unittest.TestCase`` that knows the checkout layout and cleans up
    its temporary directories.

    * ``repo_root_dir`` / ``tests_dir`` / ``src_dir`` and ``*_str``
      variants.
    * ``get_auto_remove_tmp_dir()``: a fresh directory removed in tearDown.
    * ``get_env()``: ``os.environ`` with the checkout on ``PYTHONPATH`` for
      subprocesses.
    """

    def setUp(self):
        self.teardown_tmp_dirs = []
        test_file = Path(inspect.getfile(self.__class__)).resolve()
        for parent in test_file.parents:
            if (parent / 'compressed_opt').is_dir() and \
                    (parent / 'tests').is_dir():
                self._repo_root_dir = parent
                break
        else:
            raise ValueError("can't find the repository root above {}".format(
                test_file))

    @property
    def repo_root_dir(self):
        return self._repo_root_dir

    @property
    def tests_dir(self):
        return self._repo_root_dir / 'tests'

    @property
    def src_dir(self):
        return self._repo_root_dir

    @property
    def repo_root_dir_str(self):
        return str(self.repo_root_dir)

    @property
    def tests_dir_str(self):
        return str(self.tests_dir)

    @property
    def src_dir_str(self):
        return str(self.src_dir)

    def get_env(self):
        env = os.environ.copy()
        paths = [self.src_dir_str, self.tests_dir_str]
        if env.get('PYTHONPATH'):
            paths.append(env['PYTHONPATH'])
        env['PYTHONPATH'] = os.pathsep.join(paths)
        return env

    def get_auto_remove_tmp_dir(self):
        """A new temporary directory, deleted at the end of the test."""
        tmp_dir = tempfile.mkdtemp(prefix='compressed_opt_test_')
        self.teardown_tmp_dirs.append(tmp_dir)
        return tmp_dir

    def tearDown(self):
        for path in self.teardown_tmp_dirs:
            shutil.rmtree(path, ignore_errors=True)
        self.teardown_tmp_dirs = []


# --- command line tests --- #


class _RunOutput:
    def __init__(self, returncode, stdout, stderr):
        self.returncode = returncode
        self.stdout = stdout
        self.stderr = stderr


async def _pump(stream, lines, sink, label, quiet):
    async for raw in stream:
        line = raw.decode('utf-8').rstrip()
        lines.append(line)
        if not quiet:
            print(label, line, file=sink)


async def _run(cmd, env, stdin, timeout, quiet):
    process = await asyncio.create_subprocess_exec(
        *cmd, stdin=stdin, stdout=asyncio.subprocess.PIPE,
        stderr=asyncio.subprocess.PIPE, env=env)
    out, err = [], []
    await asyncio.wait_for(asyncio.gather(
        _pump(process.stdout, out, sys.stdout, 'stdout:', quiet),
        _pump(process.stderr, err, sys.stderr, 'stderr:', quiet)),
        timeout=timeout)
    return _RunOutput(await process.wait(), out, err)


def execute_subprocess_async(cmd, env=None, stdin=None, timeout=180,
                             quiet=False, echo=True, check=True):
    """Run `cmd` and collect its output lines, streaming them unless
    `quiet`.

    With ``check=True`` a nonzero exit or a run without any output raises
    RuntimeError carrying the captured stderr.
    """
    if echo:
        print('\nRunning: ', ' '.join(cmd))
    result = asyncio.run(_run(cmd, env, stdin, timeout, quiet))
    if check and result.returncode != 0:
        raise RuntimeError("'{}' failed with returncode {}\n\nstderr:\n{}"
                           .format(' '.join(cmd), result.returncode,
                                   '\n'.join(result.stderr)))
    if check and not result.stdout and not result.stderr:
        raise RuntimeError("'{}' produced no output.".format(' '.join(cmd)))
    return result

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

"""Wall-clock phase timers."""

import logging
import time

logger = logging.getLogger(__name__)


class _Timer:
    """Accumulates wall-clock seconds over start/stop pairs.

    Also usable as a context manager: ``with timers('rounds'): ...``.
    """

    def __init__(self, name):
        self.name = name
        self.total = 0.0
        self.running = False
        self._since = None

    def start(self):
        assert not self.running, 'timer {} is already running'.format(
            self.name)
        self._since = time.perf_counter()
        self.running = True

    def stop(self):
        assert self.running, 'timer {} is not running'.format(self.name)
        self.total += time.perf_counter() - self._since
        self.running = False

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()

    def elapsed(self, reset=True):
        """Seconds so far, including a running interval; the timer keeps
        running."""
        seconds = self.total
        if self.running:
            seconds += time.perf_counter() - self._since
        if reset:
            self.total = 0.0
            if self.running:
                self._since = time.perf_counter()
        return seconds


class Timers:
    """Named timers for the setup, rounds and write phases of a run."""

    def __init__(self):
        self.timers = {}

    def __call__(self, name):
        if name not in self.timers:
            self.timers[name] = _Timer(name)
        return self.timers[name]

    def write(self, names, writer, iteration, normalizer=1.0, reset=False):
        """Add time/<name>-time scalars (seconds) to a tensorboard writer."""
        assert normalizer > 0.0
        for name in names:
            if name in self.timers:
                value = self.timers[name].elapsed(reset=reset) / normalizer
                writer.add_scalar('time/{}-time'.format(name), value,
                                  iteration)

    def log(self, names, normalizer=1.0, reset=True):
        """Log 'time (ms) | name: x' for the timers that exist."""
        assert normalizer > 0.0
        string = 'time (ms)'
        for name in names:
            if name not in self.timers:
                continue
            elapsed_ms = self.timers[name].elapsed(
                reset=reset) * 1000.0 / normalizer
            string += ' | {}: {:.2f}'.format(name, elapsed_ms)
        logger.info(string)
        return string

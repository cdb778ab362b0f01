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

"""Seed derivation for per-client, per-round random streams."""

import numpy as np

from compressed_opt.enums import Channel


class RandomStreams:
    """Derives independent generators from (master seed, client, round, channel).

    A stream depends only on its four coordinates, so changing the number of
    clients or the order in which clients are simulated does not change any
    other client's draws.
    """

    def __init__(self, master_seed):
        master_seed = int(master_seed)
        if master_seed < 0:
            raise ValueError('master seed must be nonnegative, got {}'.format(
                master_seed))
        self.master_seed = master_seed

    def __call__(self, client, round_, channel):
        return get_stream(self.master_seed, client, round_, channel)

    def oracle(self, client, round_):
        return self(client, round_, Channel.oracle)

    def setup(self, client):
        return self(client, 0, Channel.setup)

    def compress(self, client, round_):
        return self(client, round_, Channel.compress)

    def compress_cv(self, client, round_):
        return self(client, round_, Channel.compress_cv)

    def __repr__(self):
        return 'RandomStreams(master_seed={})'.format(self.master_seed)


def get_stream(master_seed, client, round_, channel):
    """Return a fresh generator for one (seed, client, round, channel)."""
    return np.random.default_rng(
        [int(master_seed), int(client), int(round_), int(channel)])

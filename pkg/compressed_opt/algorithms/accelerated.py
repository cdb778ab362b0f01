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

"""Accelerated method with inexact gradients and the uncompressed baseline."""

from abc import ABC, abstractmethod

import numpy as np

from compressed_opt.enums import MethodKind

from .state import (
    RoundTrace,
    SetupCost,
    initial_clients,
    initial_state,
)


def average_messages(vectors):
    """Sum client messages in ascending client order, then divide by n."""
    total = np.zeros_like(vectors[0])
    for vector in vectors:
        total = total + vector
    return total / len(vectors)


def begin_round(server, schedule):
    """Return (a_{t+1}, A_{t+1}, y_t) for the round starting at `server`."""
    a = schedule.get_a(server.t + 1)
    A_next = server.A + a
    y = (server.A / A_next) * server.x + (a / A_next) * server.v
    return a, A_next, y


def acc_step(server, schedule, ghat):
    """v_{t+1} = v_t - a_{t+1} ghat; x_{t+1} mixes x_t and v_{t+1}.

    `server.y` must already hold y_t for this round.
    """
    ghat = np.asarray(ghat, dtype=np.float64)
    a = schedule.get_a(server.t + 1)
    A_next = server.A + a
    v_next = server.v - a * ghat
    x_next = (server.A / A_next) * server.x + (a / A_next) * v_next
    return server.replace(x=x_next, v=v_next, A=A_next, t=server.t + 1)


def draw_gradients(oracle, y, t, streams):
    """g_t^i at y for every client, each from its own oracle stream."""
    return [oracle.stochastic_gradient(i, y, streams.oracle(i, t))
            for i in range(oracle.problem.n_clients)]


def error_statistics(clients):
    """(avg_i e^i, avg_i ||e^i||^2)."""
    mean = average_messages([c.e for c in clients])
    sq = 0.0
    for c in clients:
        sq += float(c.e @ c.e)
    return mean, sq / len(clients)


class Method(ABC):
    """A distributed method driven round by round by the training loop.

    Subclasses implement `round`, which maps (server, clients) at the top
    of round t to the states at the top of round t + 1 and a RoundTrace.
    """

    kind = None
    accelerated = True
    messages_per_compression = 1

    def __init__(self, compressor, schedule, snapshots=False):
        self.compressor = compressor
        self.schedule = schedule
        self.snapshots = snapshots

    def init_state(self, x0, oracle, streams):
        """Server and client states at t = 0 plus the setup traffic."""
        server = initial_state(x0, A0=self.schedule.A0)
        clients = initial_clients(oracle.problem.n_clients,
                                  oracle.problem.dimension)
        return server, clients, SetupCost()

    @abstractmethod
    def round(self, server, clients, oracle, streams):
        pass

    @property
    def messages_per_client(self):
        return self.messages_per_compression * self.compressor.messages_per_call

    def __repr__(self):
        return '{}(compressor={!r}, schedule={!r})'.format(
            type(self).__name__, self.compressor, self.schedule)


def accelerated_round(server, clients, oracle, schedule, streams,
                      snapshots=False):
    """Uncompressed accelerated SGD: every client sends g_t^i in full."""
    a, A_next, y = begin_round(server, schedule)
    server = server.replace(y=y)
    gradients = draw_gradients(oracle, y, server.t, streams)
    gbar = average_messages(gradients)
    new_server = acc_step(server, schedule, gbar)

    d = oracle.problem.dimension
    n = len(gradients)
    trace = RoundTrace(
        t=server.t, a=a, A=A_next, y=y, ghat=gbar, gbar=gbar,
        x_next=new_server.x, v_next=new_server.v,
        comm_scalars=n * d, comm_indices=0, messages=n,
        error_mean=None, error_sq_mean=None,
        clients=[{'g': g} for g in gradients] if snapshots else None)
    return new_server, clients, trace


class AcceleratedSGD(Method):
    """Uncompressed baseline. `compressor` is ignored."""

    kind = MethodKind.accelerated

    def __init__(self, compressor, schedule, snapshots=False):
        super().__init__(compressor, schedule, snapshots)

    @property
    def messages_per_client(self):
        return 1

    def round(self, server, clients, oracle, streams):
        return accelerated_round(server, clients, oracle, self.schedule,
                                 streams, self.snapshots)

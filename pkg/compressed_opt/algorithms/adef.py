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

"""Accelerated error feedback with gradient difference compression (ADEF)."""

import numpy as np

from compressed_opt.compressors import CompressionError
from compressed_opt.enums import MethodKind

from .accelerated import (
    Method,
    acc_step,
    average_messages,
    begin_round,
    draw_gradients,
    error_statistics,
)
from .state import ClientState, RoundTrace, SetupCost, initial_state


def adef_init(x0, oracle, schedule, streams):
    """Server/client states at t = 0.

    Every client draws g_tilde_{-1}^i at y_0 from its setup stream (a draw
    independent of round 0) and sends it uncompressed; the server keeps the
    average. Returns (server, clients, setup_cost).
    """
    server = initial_state(x0, A0=schedule.A0)
    _, _, y0 = begin_round(server, schedule)
    n = oracle.problem.n_clients
    d = oracle.problem.dimension

    g_tildes = [oracle.stochastic_gradient(i, y0, streams.setup(i))
                for i in range(n)]
    server = server.replace(y=y0, g_tilde=average_messages(g_tildes))
    clients = [ClientState(e=np.zeros(d), g_tilde=g) for g in g_tildes]
    return server, clients, SetupCost(scalars=n * d, indices=0, messages=n)


def adef_round(server, clients, oracle, compressor, schedule, streams,
               snapshots=False):
    """One ADEF round; returns (server', clients', trace).

    Each client sends two compressed messages: the control-variate update
    C(g - g_tilde) and the error-feedback message C(g - g_tilde - e/a).
    """
    a, A_next, y = begin_round(server, schedule)
    server = server.replace(y=y)
    t = server.t
    gradients = draw_gradients(oracle, y, t, streams)

    new_clients = []
    cv_messages = []
    ef_messages = []
    scalars = indices = 0
    h_total = 0.0
    details = [] if snapshots else None
    for i, (client, g) in enumerate(zip(clients, gradients)):
        delta_cv = g - client.g_tilde
        sent_cv = compressor.compress(delta_cv, streams.compress_cv(i, t))
        g_tilde = client.g_tilde + sent_cv.output

        delta = g - g_tilde - client.e / a
        sent = compressor.compress(delta, streams.compress(i, t))
        e_next = a * (sent.output - delta)

        cv_messages.append(sent_cv.output)
        ef_messages.append(sent.output)
        scalars += sent_cv.transmitted_scalars + sent.transmitted_scalars
        indices += sent_cv.transmitted_indices + sent.transmitted_indices
        residual = g - g_tilde
        h_total += float(residual @ residual)
        new_clients.append(ClientState(e=e_next, g_tilde=g_tilde))
        if snapshots:
            details.append({
                'g': g, 'delta_cv': delta_cv, 'Delta_cv': sent_cv.output,
                'g_tilde': g_tilde, 'delta': delta, 'Delta': sent.output,
                'e_next': e_next,
            })

    server_g_tilde = server.g_tilde + average_messages(cv_messages)
    ghat = server_g_tilde + average_messages(ef_messages)
    new_server = acc_step(server, schedule, ghat).replace(
        g_tilde=server_g_tilde)

    error_mean, error_sq_mean = error_statistics(new_clients)
    client_mean = average_messages([c.g_tilde for c in new_clients])
    n = len(clients)
    trace = RoundTrace(
        t=t, a=a, A=A_next, y=y, ghat=ghat,
        gbar=average_messages(gradients),
        x_next=new_server.x, v_next=new_server.v,
        comm_scalars=scalars, comm_indices=indices,
        messages=2 * n * compressor.messages_per_call,
        error_mean=error_mean, error_sq_mean=error_sq_mean,
        h=h_total / n,
        g_tilde_gap=float(np.linalg.norm(server_g_tilde - client_mean)),
        clients=details)
    return new_server, new_clients, trace


class ADEF(Method):
    """Accelerated error feedback with gradient difference compression."""

    kind = MethodKind.adef
    messages_per_compression = 2

    def __init__(self, compressor, schedule, snapshots=False):
        if compressor.is_absolute:
            raise CompressionError('adef needs a contractive compressor, '
                                   'got {}'.format(compressor))
        super().__init__(compressor, schedule, snapshots)

    def init_state(self, x0, oracle, streams):
        return adef_init(x0, oracle, self.schedule, streams)

    def round(self, server, clients, oracle, streams):
        return adef_round(server, clients, oracle, self.compressor,
                          self.schedule, streams, self.snapshots)

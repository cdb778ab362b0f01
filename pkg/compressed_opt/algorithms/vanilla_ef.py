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

"""Accelerated error feedback without control variates."""

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
from .state import RoundTrace


def vanilla_acc_ef_round(server, clients, oracle, compressor, schedule,
                         streams, snapshots=False):
    """ghat^i = C(e^i / a + g^i); e^i += a (g^i - ghat^i)."""
    a, A_next, y = begin_round(server, schedule)
    server = server.replace(y=y)
    t = server.t
    gradients = draw_gradients(oracle, y, t, streams)

    new_clients = []
    messages = []
    scalars = indices = 0
    details = [] if snapshots else None
    for i, (client, g) in enumerate(zip(clients, gradients)):
        sent = compressor.compress(client.e / a + g, streams.compress(i, t))
        e_next = client.e + a * (g - sent.output)
        messages.append(sent.output)
        scalars += sent.transmitted_scalars
        indices += sent.transmitted_indices
        new_clients.append(client.replace(e=e_next))
        if snapshots:
            details.append({'g': g, 'ghat': sent.output, 'e_next': e_next})

    ghat = average_messages(messages)
    new_server = acc_step(server, schedule, ghat)

    error_mean, error_sq_mean = error_statistics(new_clients)
    trace = RoundTrace(
        t=t, a=a, A=A_next, y=y, ghat=ghat,
        gbar=average_messages(gradients),
        x_next=new_server.x, v_next=new_server.v,
        comm_scalars=scalars, comm_indices=indices,
        messages=len(clients) * compressor.messages_per_call,
        error_mean=error_mean, error_sq_mean=error_sq_mean,
        clients=details)
    return new_server, new_clients, trace


class VanillaAccEF(Method):

    kind = MethodKind.vanilla

    def __init__(self, compressor, schedule, snapshots=False):
        if compressor.is_absolute:
            raise CompressionError('vanilla needs a contractive compressor, '
                                   'got {}'.format(compressor))
        super().__init__(compressor, schedule, snapshots)

    def round(self, server, clients, oracle, streams):
        return vanilla_acc_ef_round(server, clients, oracle, self.compressor,
                                    self.schedule, streams, self.snapshots)

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

"""Classic (unaccelerated) error feedback with a constant step."""

from compressed_opt.compressors import CompressionError
from compressed_opt.enums import MethodKind

from .accelerated import (
    Method,
    average_messages,
    draw_gradients,
    error_statistics,
)
from .state import RoundTrace


def ef_round(server, clients, oracle, compressor, eta, streams,
             snapshots=False):
    """p^i = C(e^i + eta g^i); e^i += eta g^i - p^i; x -= avg p^i.

    The server state keeps v = y = x so the accelerated diagnostics apply.
    """
    if not eta > 0.0:
        raise ValueError('eta must be positive, got {}'.format(eta))
    t = server.t
    x = server.x
    gradients = draw_gradients(oracle, x, t, streams)

    new_clients = []
    messages = []
    scalars = indices = 0
    details = [] if snapshots else None
    for i, (client, g) in enumerate(zip(clients, gradients)):
        corrected = client.e + eta * g
        sent = compressor.compress(corrected, streams.compress(i, t))
        e_next = corrected - sent.output
        messages.append(sent.output)
        scalars += sent.transmitted_scalars
        indices += sent.transmitted_indices
        new_clients.append(client.replace(e=e_next))
        if snapshots:
            details.append({'g': g, 'p': sent.output, 'e_next': e_next})

    step = average_messages(messages)
    x_next = x - step
    new_server = server.replace(x=x_next, v=x_next, y=x, A=server.A + eta,
                                t=t + 1)

    error_mean, error_sq_mean = error_statistics(new_clients)
    trace = RoundTrace(
        t=t, a=eta, A=new_server.A, y=x, ghat=step / eta,
        gbar=average_messages(gradients),
        x_next=x_next, v_next=x_next,
        comm_scalars=scalars, comm_indices=indices,
        messages=len(clients) * compressor.messages_per_call,
        error_mean=error_mean, error_sq_mean=error_sq_mean,
        clients=details)
    return new_server, new_clients, trace


class ErrorFeedback(Method):

    kind = MethodKind.ef
    accelerated = False

    def __init__(self, compressor, schedule, snapshots=False):
        if compressor.is_absolute:
            raise CompressionError('ef needs a contractive compressor, '
                                   'got {}'.format(compressor))
        super().__init__(compressor, schedule, snapshots)

    @property
    def eta(self):
        return self.schedule.get_a(1)

    def round(self, server, clients, oracle, streams):
        return ef_round(server, clients, oracle, self.compressor, self.eta,
                        streams, self.snapshots)

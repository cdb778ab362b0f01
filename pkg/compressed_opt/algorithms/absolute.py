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

"""Accelerated SGD with absolute compression and no error feedback."""

from compressed_opt.compressors import CompressionError
from compressed_opt.enums import MethodKind

from .accelerated import (
    Method,
    acc_step,
    average_messages,
    begin_round,
    draw_gradients,
)
from .state import RoundTrace


def absolute_acc_round(server, oracle, absolute_compressor, schedule, streams,
                       snapshots=False):
    """Clients send C_Delta(g^i); returns (server', trace)."""
    if not absolute_compressor.is_absolute:
        raise CompressionError('absolute_acc_round needs an absolute '
                               'compressor, got {}'.format(absolute_compressor))
    a, A_next, y = begin_round(server, schedule)
    server = server.replace(y=y)
    t = server.t
    gradients = draw_gradients(oracle, y, t, streams)

    messages = []
    scalars = indices = 0
    for i, g in enumerate(gradients):
        sent = absolute_compressor.compress(g, streams.compress(i, t))
        messages.append(sent.output)
        scalars += sent.transmitted_scalars
        indices += sent.transmitted_indices

    ghat = average_messages(messages)
    new_server = acc_step(server, schedule, ghat)
    trace = RoundTrace(
        t=t, a=a, A=A_next, y=y, ghat=ghat,
        gbar=average_messages(gradients),
        x_next=new_server.x, v_next=new_server.v,
        comm_scalars=scalars, comm_indices=indices,
        messages=len(gradients),
        error_mean=None, error_sq_mean=None,
        clients=[{'g': g, 'ghat': m} for g, m in zip(gradients, messages)]
        if snapshots else None)
    return new_server, trace


class AbsoluteAcc(Method):

    kind = MethodKind.absolute

    def __init__(self, compressor, schedule, snapshots=False):
        if not compressor.is_absolute:
            raise CompressionError('absolute needs an absolute compressor, '
                                   'got {}'.format(compressor))
        super().__init__(compressor, schedule, snapshots)

    def round(self, server, clients, oracle, streams):
        new_server, trace = absolute_acc_round(
            server, oracle, self.compressor, self.schedule, streams,
            self.snapshots)
        return new_server, clients, trace

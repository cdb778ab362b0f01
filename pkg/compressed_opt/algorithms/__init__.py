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

from compressed_opt.enums import MethodKind

from .absolute import AbsoluteAcc, absolute_acc_round
from .accelerated import (
    AcceleratedSGD,
    Method,
    acc_step,
    accelerated_round,
    average_messages,
    begin_round,
)
from .adef import ADEF, adef_init, adef_round
from .ef import ErrorFeedback, ef_round
from .neolithic import Neolithic, neolithic_round
from .state import (
    ClientState,
    RoundTrace,
    ServerState,
    SetupCost,
    initial_clients,
    initial_state,
)
from .theory import (
    ProblemConstants,
    neolithic_rounds,
    theorem_branches,
    theorem_M,
)
from .vanilla_ef import VanillaAccEF, vanilla_acc_ef_round

METHODS = {
    MethodKind.adef: ADEF,
    MethodKind.vanilla: VanillaAccEF,
    MethodKind.ef: ErrorFeedback,
    MethodKind.neolithic: Neolithic,
    MethodKind.absolute: AbsoluteAcc,
    MethodKind.accelerated: AcceleratedSGD,
}


def build_method(kind, compressor, schedule, rounds=1, snapshots=False):
    """Instantiate a method; `rounds` is only used by neolithic."""
    try:
        kind = MethodKind(kind)
    except ValueError:
        raise ValueError('{} method is not supported.'.format(kind))
    if kind == MethodKind.neolithic:
        return Neolithic(compressor, schedule, rounds=rounds,
                         snapshots=snapshots)
    return METHODS[kind](compressor, schedule, snapshots=snapshots)

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

import enum


class ProblemKind(str, enum.Enum):
    logistic = 'logistic'
    quadratic = 'quadratic'


class CompressorKind(str, enum.Enum):
    topk = 'topk'
    randk = 'randk'
    identity = 'identity'
    repeated = 'repeated'
    absolute_round = 'absolute_round'
    absolute_threshold = 'absolute_threshold'


class ScheduleKind(str, enum.Enum):
    theorem_adef = 'theorem_adef'
    theorem_vanilla = 'theorem_vanilla'
    theorem_absolute = 'theorem_absolute'
    theorem_neolithic = 'theorem_neolithic'
    experiment_gamma = 'experiment_gamma'
    custom = 'custom'
    constant = 'constant'


class MethodKind(str, enum.Enum):
    adef = 'adef'
    vanilla = 'vanilla'
    ef = 'ef'
    neolithic = 'neolithic'
    absolute = 'absolute'
    accelerated = 'accelerated'


class Channel(enum.IntEnum):
    """Tags keeping independent random streams apart."""
    oracle = 0
    setup = 1
    compress = 2
    compress_cv = 3

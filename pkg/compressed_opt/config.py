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

"""Run configuration schema (JSON on disk, validated with pydantic)."""

import json
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from compressed_opt.enums import MethodKind, ProblemKind, ScheduleKind

DEFAULT_GRID = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0]


class ConfigError(ValueError):
    """Unreadable or invalid run configuration."""


class _Block(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class ProblemConfig(_Block):
    kind: ProblemKind = ProblemKind.logistic
    n_clients: int = Field(4, ge=1)
    d: int = Field(10, ge=1)
    samples_per_client: int = Field(50, ge=1)
    heterogeneity: float = Field(0.0, ge=0.0, le=1.0)
    sigma2: float = Field(0.0, ge=0.0)
    batch_size: int = Field(1, ge=1)
    reg: float = Field(1e-6, ge=0.0)
    seed: int = Field(0, ge=0)
    # logistic only
    flip_y: float = Field(0.1, ge=0.0, le=1.0)
    class_sep: float = Field(1.0, gt=0.0)
    feature_decay: float = Field(1.0, gt=0.0, le=1.0)
    # quadratic only
    eig_min: float = Field(0.01, ge=0.0)
    eig_max: float = Field(1.0, gt=0.0)


class TopKConfig(_Block):
    kind: Literal['topk'] = 'topk'
    k: int = Field(ge=1)


class RandKConfig(_Block):
    kind: Literal['randk'] = 'randk'
    k: int = Field(ge=1)


class IdentityConfig(_Block):
    kind: Literal['identity'] = 'identity'


class AbsoluteRoundConfig(_Block):
    kind: Literal['absolute_round'] = 'absolute_round'
    step: float = Field(gt=0.0)


class AbsoluteThresholdConfig(_Block):
    kind: Literal['absolute_threshold'] = 'absolute_threshold'
    threshold: float = Field(ge=0.0)


class RepeatedConfig(_Block):
    kind: Literal['repeated'] = 'repeated'
    base: 'CompressorConfig'
    rounds: int = Field(ge=1)

    @field_validator('base')
    @classmethod
    def _base_is_contractive(cls, base):
        if base.kind in ('absolute_round', 'absolute_threshold'):
            raise ValueError('repeated needs a contractive base, got {}'
                             .format(base.kind))
        return base


CompressorConfig = Annotated[
    Union[TopKConfig, RandKConfig, IdentityConfig, RepeatedConfig,
          AbsoluteRoundConfig, AbsoluteThresholdConfig],
    Field(discriminator='kind')]

RepeatedConfig.model_rebuild()


class ScheduleConfig(_Block):
    kind: ScheduleKind = ScheduleKind.experiment_gamma
    gamma: Optional[float] = Field(None, gt=0.0)
    delta: Optional[float] = Field(None, gt=0.0, le=1.0)
    M: Optional[float] = Field(None, gt=0.0)
    eta: Optional[float] = Field(None, gt=0.0)
    values: Optional[List[float]] = None
    A0: float = Field(0.0, ge=0.0)

    @model_validator(mode='after')
    def _required_fields(self):
        if self.kind == ScheduleKind.experiment_gamma and self.gamma is None:
            raise ValueError('experiment_gamma schedule needs gamma')
        if self.kind == ScheduleKind.constant and self.eta is None:
            raise ValueError('constant schedule needs eta')
        if self.kind == ScheduleKind.custom and not self.values:
            raise ValueError('custom schedule needs values')
        return self


class MethodConfig(_Block):
    method: MethodKind = MethodKind.adef
    schedule: ScheduleConfig = ScheduleConfig(gamma=0.05)
    repetitions: Union[Literal['auto'], Annotated[int, Field(ge=1)]] = 1


class RunConfig(_Block):
    problem: ProblemConfig = ProblemConfig()
    method: MethodConfig = MethodConfig()
    compressor: CompressorConfig = TopKConfig(k=1)
    rounds: int = Field(1000, ge=0)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    output: str = 'runs/default'
    grid: Optional[List[Annotated[float, Field(gt=0.0)]]] = None
    x0: Optional[List[float]] = None
    reference_tolerance: float = Field(1e-10, gt=0.0)
    divergence_threshold: float = Field(1e12, gt=0.0)
    snapshots: bool = False
    with_weights: bool = False
    write_traces: bool = True
    tail_fraction: float = Field(0.5, gt=0.0, le=1.0)

    @field_validator('seeds')
    @classmethod
    def _seeds_nonnegative(cls, seeds):
        for seed in seeds:
            if seed < 0:
                raise ValueError('seeds must be nonnegative, got {}'.format(
                    seed))
        return seeds

    @field_validator('grid')
    @classmethod
    def _grid_nonempty(cls, grid):
        if grid is not None and len(grid) == 0:
            raise ValueError('grid must not be empty')
        return grid

    @model_validator(mode='after')
    def _blocks_agree(self):
        d = self.problem.d
        _check_k(self.compressor, d)
        if self.x0 is not None and len(self.x0) != d:
            raise ValueError('x0 has length {}, problem.d is {}'.format(
                len(self.x0), d))

        method = self.method.method
        absolute = _is_absolute(self.compressor)
        if method == MethodKind.absolute and not absolute:
            raise ValueError('method absolute needs an absolute compressor')
        if method in (MethodKind.adef, MethodKind.vanilla, MethodKind.ef,
                      MethodKind.neolithic) and absolute:
            raise ValueError('method {} needs a contractive compressor'
                             .format(method.value))

        kind = self.method.schedule.kind
        if method == MethodKind.ef and kind != ScheduleKind.constant:
            raise ValueError('method ef needs a constant schedule')
        if method != MethodKind.ef and kind == ScheduleKind.constant:
            raise ValueError('constant schedules are only for method ef')
        if kind == ScheduleKind.custom and \
                len(self.method.schedule.values) < self.rounds:
            raise ValueError('custom schedule has {} values for {} rounds'
                             .format(len(self.method.schedule.values),
                                     self.rounds))
        return self


def _is_absolute(compressor):
    return compressor.kind in ('absolute_round', 'absolute_threshold')


def _check_k(compressor, d):
    if compressor.kind in ('topk', 'randk') and compressor.k > d:
        raise ValueError('compressor.k = {} exceeds problem.d = {}'.format(
            compressor.k, d))
    if compressor.kind == 'repeated':
        _check_k(compressor.base, d)


def _format_validation_error(error):
    messages = []
    for item in error.errors():
        location = '.'.join(str(part) for part in item['loc'])
        messages.append('{}: {}'.format(location or '<root>', item['msg']))
    return '; '.join(messages)


def parse_config(data):
    """Validate a dict or JSON string into a RunConfig."""
    try:
        if isinstance(data, (str, bytes)):
            return RunConfig.model_validate_json(data)
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError('invalid config: {}'.format(
            _format_validation_error(e))) from None


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError('cannot read config {}: {}'.format(
            path, e.strerror or e)) from None
    try:
        json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError('config {} is not valid JSON: {}'.format(
            path, e)) from None
    try:
        return parse_config(text)
    except ConfigError as e:
        raise ConfigError('{} ({})'.format(e, path)) from None


def serialize_config(config):
    """Deterministic JSON text of a RunConfig."""
    return json.dumps(config.model_dump(mode='json'), sort_keys=True,
                      indent=2) + '\n'


def with_overrides(config, **changes):
    """Copy of `config` with top-level fields replaced, validated again."""
    data = config.model_dump(mode='json')
    data.update({k: v for k, v in changes.items() if v is not None})
    return parse_config(data)


def with_step_size(config, value):
    """Copy of `config` with its gamma (or eta for ef) set to `value`."""
    data = config.model_dump(mode='json')
    schedule = data['method']['schedule']
    if config.method.schedule.kind == ScheduleKind.constant:
        schedule['eta'] = value
    else:
        schedule['kind'] = ScheduleKind.experiment_gamma.value
        schedule['gamma'] = value
    return parse_config(data)


def with_problem(config, **changes):
    """Copy of `config` with problem fields replaced, validated again."""
    data = config.model_dump(mode='json')
    data['problem'].update(changes)
    return parse_config(data)

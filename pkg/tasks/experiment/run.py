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

"""`run` and `grid` commands."""

from compressed_opt import get_args, get_tensorboard_writer
from compressed_opt.config import (
    load_config,
    with_overrides,
    with_problem,
    with_step_size,
)
from compressed_opt.grid_search import grid_search, load_selected_gamma
from compressed_opt.training import run_experiment


def _load():
    args = get_args()
    if args.config is None:
        raise ValueError('{} needs --config FILE'.format(args.command))
    config = with_overrides(load_config(args.config), rounds=args.rounds,
                            seeds=args.seeds)
    if args.n_clients is not None:
        config = with_problem(config, n_clients=args.n_clients)
    if args.step_size is not None and args.step_size_from is not None:
        raise ValueError('--step-size and --step-size-from are exclusive')
    if args.step_size_from is not None:
        gamma = load_selected_gamma(args.step_size_from)
        config = with_step_size(config, gamma)
    elif args.step_size is not None:
        config = with_step_size(config, args.step_size)
    return args, config


def run_main():
    args, config = _load()
    result = run_experiment(config, out=args.out, jobs=args.jobs,
                            log_interval=args.log_interval,
                            writer=get_tensorboard_writer())
    aggregate = result.summary['aggregate']
    print('run {} | final F: {!r} | diverged: {}'.format(
        result.output, aggregate['final_F'], aggregate['diverged']),
        flush=True)
    return 0


def grid_main():
    args, config = _load()
    result = grid_search(config, out=args.out, jobs=args.jobs,
                         log_interval=args.log_interval)
    print('gamma,final_F,diverged', flush=True)
    for point in result.points:
        print('{!r},{!r},{}'.format(point.gamma, point.final_F,
                                    point.diverged))
    print('selected gamma: {!r}'.format(result.selected_gamma), flush=True)
    return 0

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

"""Grid search over the step-size parameter."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

from compressed_opt import get_timers
from compressed_opt.config import DEFAULT_GRID, with_step_size
from compressed_opt.outputs import dumps
from compressed_opt.training import prepare_run, run_seeds, write_run

logger = logging.getLogger(__name__)

GRID_FILE = 'grid.json'


class GridSearchError(RuntimeError):
    """Empty grid, or every grid point diverged."""


@dataclass(frozen=True)
class GridPoint:
    gamma: float
    final_F: float
    diverged: bool
    output: str


@dataclass(frozen=True)
class GridResult:
    points: Tuple[GridPoint, ...]
    selected_gamma: float

    @property
    def selected(self):
        for point in self.points:
            if point.gamma == self.selected_gamma:
                return point
        raise KeyError(self.selected_gamma)


def gamma_dir_name(gamma):
    return 'gamma_{!r}'.format(float(gamma))


def load_selected_gamma(grid_dir):
    """selected_gamma recorded in `grid_dir`/grid.json."""
    path = Path(grid_dir) / GRID_FILE
    try:
        with open(path) as f:
            return float(json.load(f)['selected_gamma'])
    except (OSError, KeyError, ValueError) as e:
        raise GridSearchError('cannot read the selected gamma from {}: {}'
                              .format(path, e)) from None


def select_gamma(points):
    """argmin of the averaged final F; diverged points count as +inf and
    ties go to the smaller gamma."""
    best = None
    for point in sorted(points, key=lambda p: p.gamma):
        if point.diverged or point.final_F != point.final_F:
            continue
        if best is None or point.final_F < best.final_F:
            best = point
    if best is None:
        raise GridSearchError('every grid point diverged: {}'.format(
            ', '.join(repr(p.gamma) for p in points)))
    return best.gamma


def grid_search(config, out=None, jobs=1, log_interval=100):
    """Run every gamma of the grid on the same seeds and pick the best.

    Each gamma is written to its own run directory under `out`. (gamma,
    seed) pairs share one process pool.
    """
    grid = list(config.grid) if config.grid is not None else list(DEFAULT_GRID)
    if not grid:
        raise GridSearchError('grid must not be empty')
    out = Path(out or config.output)

    contexts = [prepare_run(with_step_size(config, gamma)) for gamma in grid]
    jobs_list = [(context, seed) for context in contexts
                 for seed in config.seeds]
    logger.info('> grid search over %d values x %d seeds', len(grid),
                len(config.seeds))

    timers = get_timers()
    with timers('rounds'):
        results = run_seeds(jobs_list, jobs=jobs, log_interval=log_interval)

    points = []
    per_gamma = len(config.seeds)
    for index, (gamma, context) in enumerate(zip(grid, contexts)):
        seed_results = results[index * per_gamma:(index + 1) * per_gamma]
        run_dir = out / gamma_dir_name(gamma)
        experiment = write_run(context, seed_results, run_dir)
        points.append(GridPoint(gamma=float(gamma),
                                final_F=experiment.final_F,
                                diverged=experiment.diverged,
                                output=str(run_dir)))
        logger.info('gamma %r | final F: %.6E | diverged: %s', gamma,
                    experiment.final_F, experiment.diverged)

    result = GridResult(points=tuple(points), selected_gamma=select_gamma(
        points))
    out.mkdir(parents=True, exist_ok=True)
    with open(out / GRID_FILE, 'w') as f:
        f.write(dumps({'points': result.points,
                       'selected_gamma': result.selected_gamma},
                      indent=2) + '\n')
    timers.log(['setup', 'rounds', 'write'])
    return result

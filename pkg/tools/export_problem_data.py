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

"""Export the client datasets of a run config to CSV."""

import argparse
import csv
import logging
import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__),
                                             os.path.pardir)))

from compressed_opt.config import load_config
from compressed_opt.initialize import set_logging_verbosity
from compressed_opt.problems import LogisticProblem, build_problem

logger = logging.getLogger('compressed_opt.tools.export_problem_data')


def get_args(argv=None):
    parser = argparse.ArgumentParser(allow_abbrev=False)
    group = parser.add_argument_group(title='input')
    group.add_argument('--config', type=str, required=True,
                       help='Run config whose problem block is exported.')

    group = parser.add_argument_group(title='output')
    group.add_argument('--output', type=str, required=True,
                       help='CSV file to write.')
    return parser.parse_args(argv)


def logistic_rows(problem):
    d = problem.dimension
    yield ('client', 'label') + tuple('x{}'.format(j) for j in range(d))
    yield from problem.rows()


def quadratic_rows(problem):
    """One center row and d Hessian rows per client."""
    d = problem.dimension
    yield ('client', 'row') + tuple('x{}'.format(j) for j in range(d))
    for i, (hessian, center) in enumerate(zip(problem.hessians,
                                              problem.centers)):
        yield (i, 'center') + tuple(float(v) for v in center)
        for j, row in enumerate(hessian):
            yield (i, 'h{}'.format(j)) + tuple(float(v) for v in row)


def _cell(value):
    return repr(value) if isinstance(value, float) else str(value)


def export(config, output):
    problem = build_problem(config.problem)
    rows = logistic_rows(problem) if isinstance(problem, LogisticProblem) \
        else quadratic_rows(problem)
    count = 0
    with open(output, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        for row in rows:
            writer.writerow([_cell(v) for v in row])
            count += 1
    logger.info('wrote %d rows for %d clients to %s', count - 1,
                problem.n_clients, output)
    return count - 1


def main(argv=None):
    set_logging_verbosity()
    args = get_args(argv)
    config = load_config(args.config)
    export(config, args.output)


if __name__ == '__main__':
    main()

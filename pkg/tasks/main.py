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

"""Main tasks functionality."""

import os
import sys
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__),
                                             os.path.pardir)))

from compressed_opt import get_args
from compressed_opt.config import ConfigError
from compressed_opt.compressors import CompressionError
from compressed_opt.diagnostics import (
    MissingTraceFieldError,
    NoPlateauError,
    RateFitError,
)
from compressed_opt.grid_search import GridSearchError
from compressed_opt.initialize import initialize_compressed_opt
from compressed_opt.learning_rates import ScheduleError
from compressed_opt.problems import ProblemError, ReferenceSolveError

_EXPECTED_ERRORS = (ConfigError, CompressionError, ProblemError,
                    ReferenceSolveError, ScheduleError, MissingTraceFieldError,
                    RateFitError, NoPlateauError, GridSearchError,
                    FileNotFoundError, ValueError)


def dispatch():
    args = get_args()

    if args.command == 'run':
        from experiment.run import run_main as main
    elif args.command == 'grid':
        from experiment.run import grid_main as main
    elif args.command == 'verify':
        from verify.suites import main
    elif args.command == 'report':
        from report.tables import main
    else:
        raise NotImplementedError('Command {} is not implemented.'.format(
            args.command))

    return main()


if __name__ == '__main__':

    initialize_compressed_opt()

    try:
        status = dispatch()
    except _EXPECTED_ERRORS as e:
        print('error: {}'.format(e), file=sys.stderr)
        status = 1

    sys.exit(status)

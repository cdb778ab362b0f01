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

"""compressed_opt arguments."""

import argparse
import logging

logger = logging.getLogger(__name__)

COMMANDS = ('run', 'grid', 'verify', 'report')
VERIFY_SUITES = ('error-identity', 'contractivity', 'lossless-reduction',
                 'rate-fit-synthetic', 'all')
REPORT_KINDS = ('slope', 'speedup', 'plateau')


def parse_args(argv=None, defaults=None):
    """Parse all arguments."""
    parser = build_parser()

    if defaults:
        parser.set_defaults(**defaults)

    args = parser.parse_args(argv)

    # A positional path stands in for --config on run/grid.
    if args.command in ('run', 'grid') and args.config is None and args.paths:
        args.config = args.paths[0]
    if args.command == 'verify' and args.suite is None and args.paths:
        args.suite = args.paths[0]
    if args.command == 'report' and args.kind is None:
        if args.paths and args.paths[0] in REPORT_KINDS:
            args.kind = args.paths.pop(0)
        else:
            args.kind = 'slope'

    assert args.jobs >= 1, '--jobs must be at least 1, got {}'.format(
        args.jobs)
    assert args.log_interval >= 1, '--log-interval must be at least 1'

    if args.print_args:
        _print_args(args)
    return args


def build_parser():
    parser = argparse.ArgumentParser(
        description='compressed_opt: accelerated optimization with '
        'compressed communication', allow_abbrev=False)

    parser.add_argument('command', choices=COMMANDS,
                        help='What to do: run a config, grid-search it, '
                        'verify an invariant suite, or report on run dirs.')
    parser.add_argument('paths', nargs='*', default=[],
                        help='Config path for run/grid, run directories '
                        'for report.')

    parser = _add_run_args(parser)
    parser = _add_verify_args(parser)
    parser = _add_report_args(parser)
    parser = _add_logging_args(parser)
    return parser


def _print_args(args):
    """Print arguments."""
    lines = ['------------------------ arguments ------------------------']
    str_list = []
    for arg in vars(args):
        dots = '.' * (48 - len(arg))
        str_list.append('  {} {} {}'.format(arg, dots, getattr(args, arg)))
    for arg in sorted(str_list, key=lambda x: x.lower()):
        lines.append(arg)
    lines.append('-------------------- end of arguments ---------------------')
    logger.info('\n'.join(lines))


def _add_run_args(parser):
    group = parser.add_argument_group(title='run')

    group.add_argument('--config', type=str, default=None,
                       help='Path to a JSON run config.')
    group.add_argument('--out', type=str, default=None,
                       help='Output directory. Overrides the config\'s '
                       'output path.')
    group.add_argument('--jobs', type=int, default=1,
                       help='Number of parallel (gamma, seed) run slots.')
    group.add_argument('--rounds', type=int, default=None,
                       help='Override the number of communication rounds T.')
    group.add_argument('--seeds', type=int, nargs='+', default=None,
                       help='Override the list of seeds.')
    group.add_argument('--n-clients', type=int, default=None,
                       help='Override problem.n_clients (linear speedup '
                       'sweeps).')
    group.add_argument('--step-size', type=float, default=None,
                       help='Override gamma, or eta for constant schedules.')
    group.add_argument('--step-size-from', type=str, default=None,
                       help='Grid directory whose selected gamma becomes the '
                       'step size.')

    return parser


def _add_verify_args(parser):
    group = parser.add_argument_group(title='verify')

    group.add_argument('--suite', type=str, default=None,
                       help='Invariant suite to verify, one of {}.'.format(
                           ', '.join(VERIFY_SUITES)))
    group.add_argument('--seed', type=int, default=1234,
                       help='Master seed of the verify suite.')

    return parser


def _add_report_args(parser):
    group = parser.add_argument_group(title='report')

    group.add_argument('--kind', type=str, default=None,
                       help='Report kind, one of {}.'.format(
                           ', '.join(REPORT_KINDS)))
    group.add_argument('--window-fraction', type=float, default=0.5,
                       help='Tail fraction of rounds used by slope fits.')
    group.add_argument('--strict', action='store_true',
                       help='Speedup report: fail when some client count '
                       'has not reached a plateau.')

    return parser


def _add_logging_args(parser):
    group = parser.add_argument_group(title='logging')

    group.add_argument('--log-interval', type=int, default=100,
                       help='Report progress every this many rounds.')
    group.add_argument('--tensorboard-dir', type=str, default=None,
                       help='Write per-round scalars to tensorboard here.')
    group.add_argument('--tensorboard-queue-size', type=int, default=1000,
                       help='Size of the tensorboard queue for pending events '
                       'and summaries before one of the `add` calls forces a '
                       'flush to disk.')
    group.add_argument('--print-args', action='store_true',
                       help='Log the parsed arguments table.')

    return parser

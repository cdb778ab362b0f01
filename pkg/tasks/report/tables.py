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

"""Slope, speedup and plateau tables, as CSV on stdout."""

import csv
import sys
from pathlib import Path

from compressed_opt import get_args
from compressed_opt.diagnostics import (
    RateFitError,
    STATUS_PLATEAU,
    STATUS_SATURATED,
    detect_plateau,
    fit_rate,
    speedup_curve,
    tail_window,
)
from compressed_opt.grid_search import (
    GRID_FILE,
    gamma_dir_name,
    load_selected_gamma,
)
from compressed_opt.outputs import SUMMARY_FILE, load_run_metrics, load_summary

SLOPE_HEADER = ('run', 'method', 'rounds', 'window_start', 'window_end',
                'slope', 'intercept', 'r2', 'status')
SPEEDUP_HEADER = ('n', 'stabilized_error', 'status', 'ratio_to_previous')
PLATEAU_HEADER = ('run', 'method', 'rounds', 'final_F', 'stabilized_error',
                  'relative_change', 'status')
STATUS_DIVERGED = 'diverged'


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


def resolve_run_dirs(paths):
    """Run directories behind `paths`; a grid directory stands for the run
    of its selected gamma."""
    if not paths:
        raise ValueError('report needs at least one run directory')
    run_dirs = []
    for path in paths:
        path = Path(path)
        if not (path / SUMMARY_FILE).is_file() and (path / GRID_FILE).is_file():
            path = path / gamma_dir_name(load_selected_gamma(path))
        if not (path / SUMMARY_FILE).is_file():
            raise FileNotFoundError('{} is not a run directory (no {})'.format(
                path, SUMMARY_FILE))
        run_dirs.append(path)
    return run_dirs


def slope_rows(run_dirs, window_fraction=0.5):
    """One row per run: log-log fit of the seed-averaged F over the tail."""
    rows = []
    for run_dir in run_dirs:
        summary = load_summary(run_dir)
        metrics = load_run_metrics(run_dir)
        rounds = int(metrics.t[-1])
        start, end = tail_window(rounds, window_fraction)
        try:
            fit = fit_rate(metrics, window=(start, end))
        except RateFitError:
            rows.append((str(run_dir), summary['method'], rounds, start, end,
                         None, None, None, 'no_fit'))
            continue
        rows.append((str(run_dir), summary['method'], rounds, start, end,
                     fit.slope, fit.intercept, fit.r2, 'ok'))
    return rows


def speedup_rows(run_dirs, strict=False):
    """Stabilized error per client count, from one run directory per n."""
    series = {}
    for run_dir in run_dirs:
        n = int(load_summary(run_dir)['constants']['n'])
        if n in series:
            raise ValueError('two run directories for n = {}'.format(n))
        series[n] = load_run_metrics(run_dir).F
    return [(row.n, row.stabilized_error, row.status, row.ratio_to_previous)
            for row in speedup_curve(series, strict=strict)]


def plateau_rows(run_dirs):
    """Final and stabilized suboptimality of each run."""
    rows = []
    for run_dir in run_dirs:
        summary = load_summary(run_dir)
        aggregate = summary['aggregate']
        plateau = detect_plateau(load_run_metrics(run_dir).F)
        if aggregate['diverged']:
            status = STATUS_DIVERGED
        else:
            status = STATUS_PLATEAU if plateau.reached else STATUS_SATURATED
        rows.append((str(run_dir), summary['method'], summary['rounds'],
                     float(aggregate['final_F']), plateau.stabilized_error,
                     plateau.relative_change, status))
    return rows


def write_csv(header, rows, stream=None):
    stream = stream or sys.stdout
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    writer.writerows([_cell(value) for value in row] for row in rows)
    stream.flush()


def main():
    args = get_args()
    run_dirs = resolve_run_dirs(args.paths)
    if args.kind == 'slope':
        write_csv(SLOPE_HEADER, slope_rows(run_dirs, args.window_fraction))
    elif args.kind == 'speedup':
        write_csv(SPEEDUP_HEADER, speedup_rows(run_dirs, strict=args.strict))
    elif args.kind == 'plateau':
        write_csv(PLATEAU_HEADER, plateau_rows(run_dirs))
    else:
        raise ValueError('{} report is not supported.'.format(args.kind))
    return 0

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

"""Run directory layout and deterministic writers for traces, metrics and
summaries."""

import csv
import dataclasses
import io
import json
import logging
import math
from pathlib import Path

import numpy as np

from compressed_opt.diagnostics import METRIC_COLUMNS, TraceMetrics

logger = logging.getLogger(__name__)

CONFIG_FILE = 'config.json'
SUMMARY_FILE = 'summary.json'
TRACES_DIR = 'traces'
METRICS_DIR = 'metrics'
MEAN_METRICS = 'mean'

TRACE_FIELDS = ('t', 'a', 'A', 'ghat', 'gbar', 'error_mean', 'error_sq_mean',
                'h', 'comm_scalars', 'comm_indices', 'messages')
_INTEGER_COLUMNS = ('t', 'comm_scalars', 'comm_indices', 'messages')


def to_jsonable(value):
    """numpy arrays and scalars to plain lists, floats and ints."""
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(dataclasses.asdict(value))
    return value


def dumps(value, indent=None):
    return json.dumps(to_jsonable(value), sort_keys=True, indent=indent)


def setup_record(initial, setup):
    return {'setup': True, 'x0': initial.x, 'v0': initial.v, 'A0': initial.A,
            'comm_scalars': setup.scalars, 'comm_indices': setup.indices,
            'messages': setup.messages}


def trace_record(record):
    """JSON-ready dict of one RoundTrace."""
    values = {name: getattr(record, name) for name in TRACE_FIELDS}
    values['x'] = record.x_next
    values['v'] = record.v_next
    return values


def read_trace(path):
    """(setup record, round records) from a trace file.

    Round records carry x_next / v_next so they can go straight into
    compute_metrics.
    """
    setup, rounds = None, []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if record.get('setup'):
                setup = record
                continue
            record['x_next'] = record.pop('x')
            record['v_next'] = record.pop('v')
            rounds.append(record)
    return setup, rounds


def _format_cell(value, integer=False):
    if value is None:
        return ''
    value = float(value)
    if math.isnan(value):
        return ''
    if integer and value.is_integer():
        return str(int(value))
    return repr(value)


def metrics_csv_text(metrics):
    """Metrics table as CSV text; floats with repr, NaN as empty."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(metrics.columns)
    for row in metrics.rows():
        writer.writerow([_format_cell(value, name in _INTEGER_COLUMNS)
                         for name, value in zip(metrics.columns, row)])
    return buffer.getvalue()


def read_metrics_csv(path):
    """Inverse of metrics_csv_text."""
    with open(path, newline='') as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        columns = {name: [] for name in header}
        for row in reader:
            for name in header:
                cell = row[name]
                columns[name].append(float('nan') if cell == '' else
                                     float(cell))
    missing = [name for name in METRIC_COLUMNS if name not in columns]
    if missing:
        raise ValueError('{} is missing metric columns {}'.format(
            path, ', '.join(missing)))
    values = {name: np.array(columns[name]) for name in columns}
    values['t'] = values['t'].astype(np.int64)
    return TraceMetrics(**values)


class RunWriter:
    """The one writer of a run directory."""

    def __init__(self, root):
        self.root = Path(root)
        (self.root / TRACES_DIR).mkdir(parents=True, exist_ok=True)
        (self.root / METRICS_DIR).mkdir(parents=True, exist_ok=True)

    def trace_path(self, seed):
        return self.root / TRACES_DIR / 'seed_{}.jsonl'.format(seed)

    def metrics_path(self, name):
        return self.root / METRICS_DIR / '{}.csv'.format(name)

    def write_config(self, text):
        self._write(self.root / CONFIG_FILE, text)

    def write_trace(self, seed, initial, setup, trace):
        lines = [dumps(setup_record(initial, setup))]
        lines.extend(dumps(trace_record(record)) for record in trace)
        self._write(self.trace_path(seed), '\n'.join(lines) + '\n')

    def write_metrics(self, name, metrics):
        self._write(self.metrics_path(name), metrics_csv_text(metrics))

    def write_summary(self, summary):
        self._write(self.root / SUMMARY_FILE, dumps(summary, indent=2) + '\n')

    def _write(self, path, text):
        with open(path, 'w') as f:
            f.write(text)
        logger.debug('wrote %s', path)


def seed_metric_name(seed):
    return 'seed_{}'.format(seed)


def load_run_metrics(run_dir, name=MEAN_METRICS):
    return read_metrics_csv(Path(run_dir) / METRICS_DIR / '{}.csv'.format(
        name))


def load_summary(run_dir):
    with open(Path(run_dir) / SUMMARY_FILE) as f:
        return json.load(f)

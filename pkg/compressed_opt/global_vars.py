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

"""Process-wide state for one command: parsed args, the optional
TensorBoard writer and the named timers."""

import logging

from .arguments import parse_args
from .timers import Timers

logger = logging.getLogger(__name__)

_GLOBAL_ARGS = None
_GLOBAL_TENSORBOARD_WRITER = None
_GLOBAL_TIMERS = None


def get_args():
    _check_set(_GLOBAL_ARGS, 'args')
    return _GLOBAL_ARGS


def get_tensorboard_writer():
    """The SummaryWriter, or None when --tensorboard-dir was not given."""
    return _GLOBAL_TENSORBOARD_WRITER


def get_timers():
    """Timers are created lazily so library callers work without a
    command line."""
    global _GLOBAL_TIMERS
    if _GLOBAL_TIMERS is None:
        _GLOBAL_TIMERS = Timers()
    return _GLOBAL_TIMERS


def set_global_variables(argv=None, defaults=None):
    global _GLOBAL_ARGS
    _check_unset(_GLOBAL_ARGS, 'args')
    _GLOBAL_ARGS = parse_args(argv=argv, defaults=defaults)
    _open_tensorboard_writer(_GLOBAL_ARGS)
    get_timers()
    return _GLOBAL_ARGS


def reset_global_variables():
    """Drop every global so a new command can be dispatched in-process."""
    global _GLOBAL_ARGS, _GLOBAL_TENSORBOARD_WRITER, _GLOBAL_TIMERS
    if _GLOBAL_TENSORBOARD_WRITER is not None:
        _GLOBAL_TENSORBOARD_WRITER.close()
    _GLOBAL_ARGS, _GLOBAL_TENSORBOARD_WRITER, _GLOBAL_TIMERS = None, None, None


def _open_tensorboard_writer(args):
    global _GLOBAL_TENSORBOARD_WRITER
    _check_unset(_GLOBAL_TENSORBOARD_WRITER, 'tensorboard writer')
    if not getattr(args, 'tensorboard_dir', None):
        return
    try:
        from torch.utils.tensorboard import SummaryWriter
    except ModuleNotFoundError:
        logger.warning('--tensorboard-dir given but torch.utils.tensorboard '
                       'cannot be imported; no TensorBoard logs will be '
                       'written.')
        return
    logger.info('> writing tensorboard logs to %s', args.tensorboard_dir)
    _GLOBAL_TENSORBOARD_WRITER = SummaryWriter(
        log_dir=args.tensorboard_dir, max_queue=args.tensorboard_queue_size)


def _check_set(var, name):
    assert var is not None, '{} is not initialized.'.format(name)


def _check_unset(var, name):
    assert var is None, '{} is already initialized.'.format(name)

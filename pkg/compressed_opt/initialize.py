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

"""compressed_opt initialization."""

import logging
import os

from compressed_opt.global_vars import set_global_variables

LOG_ENV_VAR = 'COMPRESSED_OPT_LOG'

_LEVELS = {
    'debug': logging.DEBUG,
    'info': logging.INFO,
    'warning': logging.WARNING,
    'error': logging.ERROR,
}

_logging_configured = False


def set_logging_verbosity(level=None):
    """Configure the package logger from `level` or $COMPRESSED_OPT_LOG.

    Unknown values fall back to warning.
    """
    global _logging_configured
    if level is None:
        level = os.environ.get(LOG_ENV_VAR, 'warning')
    numeric = _LEVELS.get(str(level).strip().lower(), logging.WARNING)

    package_logger = logging.getLogger('compressed_opt')
    if not _logging_configured:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(
            '[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s'))
        package_logger.addHandler(handler)
        package_logger.propagate = False
        _logging_configured = True
    package_logger.setLevel(numeric)
    return numeric


def initialize_compressed_opt(argv=None, args_defaults=None):
    """Set logging verbosity and global variables (args, tensorboard
    writer, timers). Returns the parsed args."""
    set_logging_verbosity()
    return set_global_variables(argv=argv, defaults=args_defaults)

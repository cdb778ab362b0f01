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

MAJOR = 0
MINOR = 3

# Use the following formatting: (major, minor)
VERSION = (MAJOR, MINOR)

__version__ = '.'.join(map(str, VERSION))
__package_name__ = 'compressed-opt'
__contact_names__ = 'compressed-opt developers'
__url__ = 'https://github.com/compressed-opt/compressed-opt'
__download_url__ = 'https://github.com/compressed-opt/compressed-opt/releases'
__description__ = ('compressed-opt: accelerated distributed optimization with '
                   'error feedback and communication compression.')
__license__ = 'Apache License 2.0'
__keywords__ = ('optimization, distributed, compression, error feedback, '
                'acceleration, numpy')

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

from .metrics import (
    METRIC_COLUMNS,
    WEIGHT_COLUMNS,
    MissingTraceFieldError,
    TraceMetrics,
    accumulated_errors,
    average_metrics,
    compute_metrics,
    error_identity_residuals,
    proof_weights,
)
from .rate_fit import MIN_WINDOW, RateFit, RateFitError, fit_rate, tail_window
from .speedup import (
    PLATEAU_TOLERANCE,
    STATUS_PLATEAU,
    STATUS_SATURATED,
    NoPlateauError,
    Plateau,
    SpeedupRow,
    detect_plateau,
    speedup_curve,
)

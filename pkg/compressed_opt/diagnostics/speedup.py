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

"""Plateau detection and stabilized error against the number of clients."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

PLATEAU_TOLERANCE = 0.05
STATUS_PLATEAU = 'plateau'
STATUS_SATURATED = 'saturated'


class NoPlateauError(RuntimeError):
    """The suboptimality never settled."""


@dataclass(frozen=True)
class Plateau:
    reached: bool
    stabilized_error: float
    relative_change: float


@dataclass(frozen=True)
class SpeedupRow:
    n: int
    stabilized_error: float
    status: str
    ratio_to_previous: Optional[float]


def detect_plateau(F, tolerance=PLATEAU_TOLERANCE):
    """Median F over the final quarter, and whether the medians of its two
    halves agree to within `tolerance` relative change."""
    F = np.asarray(getattr(F, 'F', F), dtype=np.float64)
    tail = F[len(F) - max(2, len(F) // 4):]
    if len(tail) < 2 or not np.all(np.isfinite(tail)):
        return Plateau(False, float('nan'), float('inf'))
    half = len(tail) // 2
    first, second = np.median(tail[:half]), np.median(tail[half:])
    scale = max(abs(first), np.finfo(np.float64).tiny)
    change = float(abs(second - first) / scale)
    return Plateau(change < tolerance, float(np.median(tail)), change)


def speedup_curve(series_by_n, tolerance=PLATEAU_TOLERANCE, strict=False):
    """Rows (n, stabilized error, status, ratio to the previous n).

    `series_by_n` maps client counts to seed-averaged F_t series. Runs that
    never settle are reported as saturated, or raise with strict=True.
    """
    rows = []
    previous = None
    for n in sorted(series_by_n):
        plateau = detect_plateau(series_by_n[n], tolerance)
        if not plateau.reached and strict:
            raise NoPlateauError(
                'no plateau for n = {}: tail medians changed by {:.1%}'.format(
                    n, plateau.relative_change))
        ratio = None
        if previous is not None and plateau.stabilized_error > 0.0:
            ratio = previous / plateau.stabilized_error
        rows.append(SpeedupRow(
            n=int(n), stabilized_error=plateau.stabilized_error,
            status=STATUS_PLATEAU if plateau.reached else STATUS_SATURATED,
            ratio_to_previous=ratio))
        previous = plateau.stabilized_error
    return rows

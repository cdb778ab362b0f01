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

"""Server, client and per-round trace records."""

from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np


@dataclass(frozen=True)
class ServerState:
    """Server iterates at the top of round t.

    y holds the extrapolation point of the most recent round; it is
    recomputed by begin_round before it is used.
    """
    x: np.ndarray
    v: np.ndarray
    y: np.ndarray
    A: float
    t: int = 0
    g_tilde: Optional[np.ndarray] = None

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class ClientState:
    """Local error memory e^i and, for gradient difference compression,
    the local control variate g_tilde^i."""
    e: np.ndarray
    g_tilde: Optional[np.ndarray] = None

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class SetupCost:
    """One-time uncompressed traffic before round 0."""
    scalars: int = 0
    indices: int = 0
    messages: int = 0


@dataclass(frozen=True)
class RoundTrace:
    """Everything diagnostics need about round t.

    a and A are a_{t+1} and A_{t+1}. error_mean is avg_i e_{t+1}^i and
    error_sq_mean is avg_i ||e_{t+1}^i||^2; both are None for methods
    without error memory. h is H_t for methods with control variates.
    """
    t: int
    a: float
    A: float
    y: np.ndarray
    ghat: np.ndarray
    gbar: np.ndarray
    x_next: np.ndarray
    v_next: np.ndarray
    comm_scalars: int
    comm_indices: int
    messages: int
    error_mean: Optional[np.ndarray]
    error_sq_mean: Optional[float]
    h: Optional[float] = None
    g_tilde_gap: Optional[float] = None
    clients: Optional[List[dict]] = field(default=None, compare=False)


def initial_state(x0, v0=None, A0=0.0):
    x0 = np.array(x0, dtype=np.float64)
    v0 = x0.copy() if v0 is None else np.array(v0, dtype=np.float64)
    return ServerState(x=x0, v=v0, y=x0.copy(), A=float(A0), t=0)


def initial_clients(n_clients, dimension):
    """e_0^i = 0 for every client."""
    return [ClientState(e=np.zeros(dimension)) for _ in range(n_clients)]

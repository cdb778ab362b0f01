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

"""Invariant suites behind `verify`. Each check prints one PASS/FAIL line."""

from dataclasses import dataclass

import numpy as np

from compressed_opt import get_args
from compressed_opt.compressors import (
    AbsoluteRound,
    AbsoluteThreshold,
    Identity,
    RandK,
    Repeated,
    TopK,
    estimate_contraction_detailed,
)
from compressed_opt.config import parse_config
from compressed_opt.diagnostics import (
    RateFitError,
    compute_metrics,
    error_identity_residuals,
    fit_rate,
)
from compressed_opt.training import prepare_run, train

ERROR_IDENTITY_TOLERANCE = 1e-9
LOSSLESS_TOLERANCE = 1e-12
SLOPE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ''

    def line(self):
        return '{} {}{}'.format('PASS' if self.passed else 'FAIL', self.name,
                                ' | ' + self.detail if self.detail else '')


def _small_logistic(n_clients=4, d=10, sigma2=0.0):
    return {'kind': 'logistic', 'n_clients': n_clients, 'd': d,
            'samples_per_client': 20, 'heterogeneity': 0.5, 'sigma2': sigma2,
            'seed': 0}


def _run(config_dict, seed):
    context = prepare_run(parse_config(config_dict))
    initial, setup, trace, divergence_round = train(
        context, seed, log_interval=10 ** 9)
    return context, initial, setup, trace


def contractivity(seed):
    rng = np.random.default_rng(seed)
    d = 50
    vectors = [rng.standard_normal(d) for _ in range(100)]
    results = []

    for k in (1, 5, 25):
        topk = TopK(d, k)
        bound = 1.0 - topk.contraction_parameter()
        worst = max(float((topk(x).output - x) @ (topk(x).output - x))
                    / float(x @ x) for x in vectors)
        results.append(CheckResult(
            'topk k={} per call'.format(k), worst <= bound,
            'max ratio {:.6f} <= {:.6f}'.format(worst, bound)))

    for k in (1, 5, 25):
        randk = RandK(d, k)
        bound = 1.0 - randk.contraction_parameter()
        estimate = estimate_contraction_detailed(randk, vectors[:5], 2000, rng)
        limit = bound + 3.0 * estimate.standard_error
        results.append(CheckResult(
            'randk k={} mean of 2000 samples'.format(k),
            estimate.ratio <= limit,
            'mean ratio {:.6f} <= {:.6f}'.format(estimate.ratio, limit)))

    identity = Identity(d)
    exact = all(np.array_equal(identity(x).output, x) for x in vectors)
    results.append(CheckResult('identity is exact', exact))

    repeated = Repeated(TopK(d, 5), 3)
    bound = 1.0 - repeated.contraction_parameter()
    worst = max(float((repeated(x).output - x) @ (repeated(x).output - x))
                / float(x @ x) for x in vectors)
    results.append(CheckResult(
        'repeated topk k=5 R=3 per call', worst <= bound + 1e-12,
        'max ratio {:.6f} <= {:.6f}'.format(worst, bound)))

    reconstruct = Repeated(TopK(d, 5), 10)
    exact = all(np.array_equal(reconstruct(x).output, x) for x in vectors)
    results.append(CheckResult('repeated topk k=5 R=d/k reconstructs', exact))

    for compressor in (AbsoluteRound(d, 0.1), AbsoluteThreshold(d, 0.3)):
        bound = compressor.error_bound_sq()
        worst = max(float((compressor(x).output - x)
                          @ (compressor(x).output - x)) for x in vectors)
        results.append(CheckResult(
            '{} error bound'.format(compressor.describe()['kind']),
            worst <= bound + 1e-12,
            'max error {:.6f} <= {:.6f}'.format(worst, bound)))
    return results


def error_identity(seed):
    results = []
    for method in ('adef', 'vanilla'):
        for sigma2 in (0.0, 1.0):
            context, initial, setup, trace = _run({
                'problem': _small_logistic(sigma2=sigma2),
                'method': {'method': method,
                           'schedule': {'kind': 'experiment_gamma',
                                        'gamma': 0.05}},
                'compressor': {'kind': 'topk', 'k': 1},
                'rounds': 200, 'seeds': [seed]}, seed)
            residuals = error_identity_residuals(trace)
            worst = float(residuals.max())
            results.append(CheckResult(
                '{} sigma2={:g} avg error equals accumulated error'.format(
                    method, sigma2),
                worst <= ERROR_IDENTITY_TOLERANCE,
                'max relative residual {:.3e} over {} rounds'.format(
                    worst, len(trace))))

            metrics = compute_metrics(trace, context.problem,
                                      context.reference, initial, setup)
            ordered = bool(np.all(metrics.E <= metrics.Ebar * (1.0 + 1e-6)
                                  + 1e-12))
            results.append(CheckResult(
                '{} sigma2={:g} E <= Ebar'.format(method, sigma2), ordered))
    return results


def lossless_reduction(seed):
    problem = _small_logistic(sigma2=1.0)
    schedule = {'kind': 'experiment_gamma', 'gamma': 0.01}
    base = {'problem': problem, 'compressor': {'kind': 'identity'},
            'rounds': 500, 'seeds': [seed]}

    _, _, _, reference = _run(dict(base, method={
        'method': 'accelerated', 'schedule': schedule}), seed)
    expected = np.stack([r.x_next for r in reference])

    results = []
    for method, extra in (('adef', {}), ('vanilla', {}),
                          ('neolithic', {'repetitions': 3})):
        _, _, _, trace = _run(dict(base, method=dict(
            {'method': method, 'schedule': schedule}, **extra)), seed)
        actual = np.stack([r.x_next for r in trace])
        gap = float(np.max(np.abs(actual - expected)))
        results.append(CheckResult(
            '{} with identity matches uncompressed'.format(method),
            gap <= LOSSLESS_TOLERANCE,
            'max coordinate gap {:.3e} over {} rounds'.format(
                gap, len(trace))))
    return results


def rate_fit_synthetic(seed):
    rng = np.random.default_rng(seed)
    t = np.arange(0, 1001)
    results = []
    for power in (1.0, 2.0):
        c = float(rng.uniform(0.5, 5.0))
        F = np.empty(len(t))
        F[0] = c
        F[1:] = c / t[1:] ** power
        fit = fit_rate((t, F))
        results.append(CheckResult(
            'c/t^{:g} slope'.format(power),
            abs(fit.slope + power) < SLOPE_TOLERANCE,
            'slope {:.9f}, r2 {:.6f}'.format(fit.slope, fit.r2)))
    try:
        fit_rate((t[:8], 1.0 / (t[:8] + 1.0)), window=(1, 7))
        raised = False
    except RateFitError:
        raised = True
    results.append(CheckResult('short window rejected', raised))
    return results


SUITES = {
    'contractivity': contractivity,
    'error-identity': error_identity,
    'lossless-reduction': lossless_reduction,
    'rate-fit-synthetic': rate_fit_synthetic,
}


def run_suites(names, seed):
    results = []
    for name in names:
        for result in SUITES[name](seed):
            results.append(CheckResult('{}: {}'.format(name, result.name),
                                       result.passed, result.detail))
    return results


def main():
    args = get_args()
    if args.suite is None:
        raise ValueError('verify needs --suite, one of {}'.format(
            ', '.join(list(SUITES) + ['all'])))
    if args.suite == 'all':
        names = list(SUITES)
    elif args.suite in SUITES:
        names = [args.suite]
    else:
        raise ValueError('{} suite is not supported.'.format(args.suite))

    results = run_suites(names, args.seed)
    for result in results:
        print(result.line(), flush=True)
    failed = sum(not r.passed for r in results)
    print('{} checks, {} failed'.format(len(results), failed), flush=True)
    return 0 if failed == 0 else 1

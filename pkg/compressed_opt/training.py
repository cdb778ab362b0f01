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

"""Run a configured method over its seeds and persist the results."""

import logging
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from compressed_opt import get_timers
from compressed_opt.algorithms import (
    ProblemConstants,
    RoundTrace,
    build_method,
    neolithic_rounds,
    theorem_M,
)
from compressed_opt.compressors import NonFiniteInputError, build_compressor
from compressed_opt.config import serialize_config, with_problem
from compressed_opt.diagnostics import (
    RateFitError,
    average_metrics,
    compute_metrics,
    detect_plateau,
    fit_rate,
    speedup_curve,
    tail_window,
)
from compressed_opt.enums import MethodKind, ScheduleKind
from compressed_opt.learning_rates import build_step_schedule
from compressed_opt.outputs import MEAN_METRICS, RunWriter, seed_metric_name
from compressed_opt.problems import build_oracle, build_problem, solve_reference
from compressed_opt.random import RandomStreams

logger = logging.getLogger(__name__)

_THEORY_METHODS = {
    ScheduleKind.theorem_adef: MethodKind.adef,
    ScheduleKind.theorem_vanilla: MethodKind.vanilla,
    ScheduleKind.theorem_absolute: MethodKind.absolute,
    ScheduleKind.theorem_neolithic: MethodKind.neolithic,
}


@dataclass
class RunContext:
    """Everything shared by the seeds of one run."""
    config: object
    problem: object
    oracle: object
    reference: object
    compressor: object
    schedule: object
    method: object
    x0: np.ndarray
    constants: ProblemConstants
    delta: Optional[float]
    repetitions: int


@dataclass
class SeedResult:
    seed: int
    initial: object
    setup: object
    trace: List[RoundTrace]
    metrics: object
    divergence_round: Optional[int] = None
    summary: dict = field(default_factory=dict)

    @property
    def diverged(self):
        return self.divergence_round is not None


@dataclass
class ExperimentResult:
    context: RunContext
    seeds: List[SeedResult]
    mean_metrics: object
    summary: dict
    output: Optional[Path] = None

    @property
    def diverged(self):
        return any(s.diverged for s in self.seeds)

    @property
    def final_F(self):
        """Seed-averaged final suboptimality, inf if any seed diverged."""
        if self.diverged:
            return float('inf')
        return float(self.mean_metrics.F[-1])


def problem_constants(problem, oracle, reference, x0, compressor):
    """L, ell, sigma^2, n, R0^2, zeta^2 and Delta for theory-mode
    schedules. zeta^2 is evaluated at x0 and x*."""
    x_star = reference.x_star
    diff = x0 - x_star
    return ProblemConstants(
        L=problem.smoothness(), ell=problem.max_client_smoothness(),
        sigma2=oracle.variance, n=problem.n_clients,
        R0_sq=float(diff @ diff),
        zeta2=problem.gradient_dissimilarity([x0, x_star]),
        Delta=compressor.contraction_parameter()
        if compressor.is_absolute else 0.0)


def contraction_delta(compressor):
    """δ of a contractive compressor, None for absolute ones."""
    if compressor.is_absolute:
        return None
    return compressor.contraction_parameter()


def build_schedule(config, compressor, constants):
    """Step schedule for `config`, computing M when a theory schedule
    leaves it unset."""
    schedule_config = config.method.schedule
    delta = contraction_delta(compressor)
    M = None
    kind = ScheduleKind(schedule_config.kind)
    if kind in _THEORY_METHODS and schedule_config.M is None:
        M = theorem_M(_THEORY_METHODS[kind], constants,
                      schedule_config.delta or delta, max(config.rounds, 1))
        logger.info('> theory constant M = %r for %s', M, kind.value)
    schedule = build_step_schedule(schedule_config, delta=delta, M=M)
    schedule.validate(config.rounds)
    return schedule


def prepare_run(config):
    """Build problem, reference solution, compressor, schedule and method."""
    with get_timers()('setup'):
        return _prepare_run(config)


def _prepare_run(config):
    problem = build_problem(config.problem)
    oracle = build_oracle(problem, config.problem)
    reference = solve_reference(problem, tolerance=config.reference_tolerance)
    logger.info('> reference solution: f* = %r after %d iterations '
                '(||grad f|| = %.3e)', reference.f_star, reference.iterations,
                reference.gradient_norm)

    d = problem.dimension
    compressor = build_compressor(config.compressor, d)
    x0 = np.zeros(d) if config.x0 is None else np.array(config.x0,
                                                        dtype=np.float64)
    constants = problem_constants(problem, oracle, reference, x0, compressor)
    schedule = build_schedule(config, compressor, constants)
    delta = contraction_delta(compressor)

    repetitions = config.method.repetitions
    if repetitions == 'auto':
        repetitions = neolithic_rounds(
            delta, problem.n_clients, max(config.rounds, 1),
            sigma2=constants.sigma2, zeta2=constants.zeta2)
        logger.info('> neolithic repetitions R = %d', repetitions)
    method = build_method(config.method.method, compressor, schedule,
                          rounds=repetitions, snapshots=config.snapshots)

    return RunContext(config=config, problem=problem, oracle=oracle,
                      reference=reference, compressor=compressor,
                      schedule=schedule, method=method, x0=x0,
                      constants=constants, delta=delta,
                      repetitions=int(repetitions))


def is_diverged(x, threshold):
    """‖x‖ > threshold or any entry not finite."""
    if not np.all(np.isfinite(x)):
        return True
    return float(np.linalg.norm(x)) > threshold


def training_log(context, seed, server, error_sum, record, writer=None):
    """Log one progress line and write scalars to tensorboard."""
    rounds = context.config.rounds
    F = context.problem.value(server.x) - context.reference.f_star
    E = float(error_sum @ error_sum)
    log_string = ' seed {} |'.format(seed)
    log_string += ' round {:8d}/{:8d} |'.format(server.t, rounds)
    log_string += ' a: {:.6E} |'.format(record.a)
    log_string += ' F: {:.6E} |'.format(F)
    log_string += ' E: {:.6E} |'.format(E)
    if record.error_sq_mean is not None:
        log_string += ' Ebar: {:.6E} |'.format(record.error_sq_mean)
    if record.h is not None:
        log_string += ' H: {:.6E} |'.format(record.h)
    log_string += ' comm scalars: {} |'.format(record.comm_scalars)
    logger.info(log_string)

    if writer is not None:
        write_scalars(writer, seed, server.t, F, E, record)
    return log_string


def write_scalars(writer, seed, step, F, E, record):
    suffix = '/seed_{}'.format(seed)
    writer.add_scalar('suboptimality/F' + suffix, F, step)
    writer.add_scalar('error/E' + suffix, E, step)
    if record.error_sq_mean is not None:
        writer.add_scalar('error/Ebar' + suffix, record.error_sq_mean, step)
    if record.h is not None:
        writer.add_scalar('control-variate/H' + suffix, record.h, step)
    writer.add_scalar('comm/scalars' + suffix, record.comm_scalars, step)


def replay_scalars(result, log_interval, writer):
    """Write the tensorboard scalars of a finished seed, at the rounds
    `train` would have logged them."""
    for t in range(log_interval, len(result.trace) + 1, log_interval):
        if t == result.divergence_round:
            break
        write_scalars(writer, result.seed, t, float(result.metrics.F[t]),
                      float(result.metrics.E[t]), result.trace[t - 1])


def train(context, seed, log_interval=100, writer=None):
    """Run T rounds of the method for one seed.

    Returns (initial state, setup cost, trace, divergence round). The loop
    stops at the first round whose iterate is diverged.
    """
    config = context.config
    streams = RandomStreams(seed)
    method = context.method
    server, clients, setup = method.init_state(context.x0, context.oracle,
                                               streams)
    initial = server
    trace = []
    divergence_round = None
    error_sum = np.zeros(context.problem.dimension)

    with np.errstate(all='ignore'):
        for _ in range(config.rounds):
            try:
                server, clients, record = method.round(
                    server, clients, context.oracle, streams)
            except NonFiniteInputError:
                divergence_round = server.t
                logger.warning('seed %d diverged in round %d: non-finite '
                               'message', seed, server.t)
                break
            trace.append(record)
            error_sum = error_sum + record.a * (record.ghat - record.gbar)

            if is_diverged(server.x, config.divergence_threshold):
                divergence_round = server.t
                logger.warning('seed %d diverged at round %d', seed,
                               server.t)
                break
            if server.t % log_interval == 0:
                training_log(context, seed, server, error_sum, record, writer)

    return initial, setup, trace, divergence_round


def _fit_summary(metrics, fraction):
    rounds = int(metrics.t[-1])
    try:
        fit = fit_rate(metrics, window=tail_window(rounds, fraction))
    except RateFitError as e:
        return {'error': str(e)}
    return {'window': list(fit.window), 'slope': fit.slope,
            'intercept': fit.intercept, 'r2': fit.r2}


def _plateau_summary(metrics):
    plateau = detect_plateau(metrics.F)
    return {'reached': plateau.reached,
            'stabilized_error': plateau.stabilized_error,
            'relative_change': plateau.relative_change}


def run_seed(context, seed, log_interval=100, writer=None):
    """Train one seed and compute its metrics and summary."""
    initial, setup, trace, divergence_round = train(
        context, seed, log_interval=log_interval, writer=writer)
    with np.errstate(all='ignore'):
        metrics = compute_metrics(trace, context.problem, context.reference,
                                  initial, setup=setup,
                                  with_weights=context.config.with_weights)
    summary = {
        'seed': seed,
        'R0_sq': context.constants.R0_sq,
        'rounds_completed': len(trace),
        'final_F': float(metrics.F[-1]),
        'diverged': divergence_round is not None,
        'divergence_round': divergence_round,
    }
    if trace:
        summary['slope_fit'] = _fit_summary(metrics,
                                            context.config.tail_fraction)
        summary['plateau'] = _plateau_summary(metrics)
    return SeedResult(seed=seed, initial=initial, setup=setup, trace=trace,
                      metrics=metrics, divergence_round=divergence_round,
                      summary=summary)


def _run_seed_job(job):
    context, seed, log_interval = job
    return run_seed(context, seed, log_interval=log_interval)


def run_seeds(jobs_list, jobs=1, log_interval=100, writer=None):
    """Run (context, seed) pairs, in a process pool when jobs > 1.

    Results come back in input order.
    """
    if jobs <= 1 or len(jobs_list) <= 1:
        return [run_seed(context, seed, log_interval=log_interval,
                         writer=writer) for context, seed in jobs_list]
    with multiprocessing.Pool(processes=min(jobs, len(jobs_list))) as pool:
        results = pool.map(_run_seed_job,
                           [(context, seed, log_interval)
                            for context, seed in jobs_list])
    # workers cannot share the writer; scalars are written here instead
    if writer is not None:
        for result in results:
            replay_scalars(result, log_interval, writer)
    return results


def run_summary(context, results, mean_metrics):
    config = context.config
    reference = context.reference
    summary = {
        'method': context.method.kind.value,
        'rounds': config.rounds,
        'delta': context.delta,
        'repetitions': context.repetitions,
        'schedule': context.schedule.state_dict(),
        'reference': {'f_star': reference.f_star,
                      'gradient_norm': reference.gradient_norm,
                      'iterations': reference.iterations},
        'constants': {'L': context.constants.L, 'ell': context.constants.ell,
                      'sigma2': context.constants.sigma2,
                      'n': context.constants.n,
                      'R0_sq': context.constants.R0_sq,
                      'zeta2': context.constants.zeta2,
                      'Delta': context.constants.Delta},
        'seeds': [r.summary for r in results],
    }
    aggregate = {
        'R0_sq': context.constants.R0_sq,
        'final_F': float(mean_metrics.F[-1]),
        'diverged': any(r.diverged for r in results),
        'rounds_completed': len(mean_metrics) - 1,
    }
    if len(mean_metrics) > 1:
        aggregate['slope_fit'] = _fit_summary(mean_metrics,
                                              config.tail_fraction)
        aggregate['plateau'] = _plateau_summary(mean_metrics)
    summary['aggregate'] = aggregate
    return summary


def write_run(context, results, out):
    """Write config, traces, metrics and summary of one run to `out`."""
    with get_timers()('write'):
        return _write_run(context, results, out)


def _write_run(context, results, out):
    with np.errstate(all='ignore'):
        mean_metrics = average_metrics([r.metrics for r in results])
    summary = run_summary(context, results, mean_metrics)

    writer = RunWriter(out)
    writer.write_config(serialize_config(context.config))
    for result in results:
        if context.config.write_traces:
            writer.write_trace(result.seed, result.initial, result.setup,
                               result.trace)
        writer.write_metrics(seed_metric_name(result.seed), result.metrics)
    writer.write_metrics(MEAN_METRICS, mean_metrics)
    writer.write_summary(summary)
    return ExperimentResult(context=context, seeds=results,
                            mean_metrics=mean_metrics, summary=summary,
                            output=Path(out))


def run_experiment(config, out=None, jobs=1, log_interval=100, writer=None):
    """Run every seed of `config` and write its run directory.

    Divergence is recorded in the summary, never raised.
    """
    out = out or config.output
    context = prepare_run(config)
    logger.info('> running %s for %d rounds on seeds %s', context.method,
                config.rounds, config.seeds)
    timers = get_timers()
    with timers('rounds'):
        results = run_seeds([(context, seed) for seed in config.seeds],
                            jobs=jobs, log_interval=log_interval,
                            writer=writer)
    result = write_run(context, results, out)
    if writer is not None:
        timers.write(['setup', 'rounds', 'write'], writer, config.rounds)
    timers.log(['setup', 'rounds', 'write'])
    return result


def speedup_experiment(config, n_values, out=None, jobs=1, log_interval=100,
                       tolerance=None):
    """Run `config` once per client count and tabulate stabilized errors.

    Each client count gets its own run directory n_<n> under `out`.
    """
    out = Path(out or config.output)
    series = {}
    for n in n_values:
        result = run_experiment(with_problem(config, n_clients=n),
                                out=out / 'n_{}'.format(n), jobs=jobs,
                                log_interval=log_interval)
        series[n] = result.mean_metrics.F
    kwargs = {} if tolerance is None else {'tolerance': tolerance}
    return speedup_curve(series, **kwargs)

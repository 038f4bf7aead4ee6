"""
Monte Carlo and exhaustive experiments on random circulants.

An experiment runs a number of trials at each order n of an ``ExperimentSpec``. Each
trial draws its instance from ``SeedSequence(seed, spawn_key=(n, trial))`` (or takes
the next connection set in exhaustive mode), computes its verdicts into a
``TrialRecord``, and the per-order summary compares the observed frequencies with the
expected bounds. Trials run on a process pool and are merged in ``(n, trial)`` order,
so the CSV output only depends on the spec.
"""

import csv
import io
import math
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from logging import getLogger

import numpy as np
from pydantic import BaseModel, ConfigDict

from circulant_canon.canon import canonize_digraph, canonize_graph
from circulant_canon.core import ConnectionSet, Digraph, cayley, iter_connection_sets, random_permutation, relabel
from circulant_canon.models.errors import ExperimentAssertionError, InvalidInputError
from circulant_canon.models.results import CanonResult, ExperimentSpec, SampleModel, TrialRecord
from circulant_canon.models.settings import get_settings, use_settings
from circulant_canon.sampling import is_firm, is_multiplier_free, make_rng, sample
from circulant_canon.spectral import (
    distinct_eigenvalue_count,
    eigenvalue_matrix,
    has_saturated_spectrum,
    has_simple_spectrum,
)
from circulant_canon.walk import is_walk_saturated, walk_matrix, walk_rank
from circulant_canon.wl2 import canonical_cayley_representation

logger = getLogger(__name__)

Instance = ConnectionSet | Digraph

_SPECTRAL = {"simple_spectrum", "3p_collision", "saturated", "multiplier_free"}
_Z = 1.96


class ExperimentReport(BaseModel):
    """Records in (n, trial) order, the summary lines and every failed check."""

    model_config = ConfigDict(frozen=True)

    spec: ExperimentSpec
    records: tuple[TrialRecord, ...]
    summary: tuple[str, ...]
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def wilson_interval(successes: int, trials: int, z: float = _Z) -> tuple[float, float]:
    """The Wilson score interval of a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denominator = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denominator
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denominator
    return max(0.0, centre - half), min(1.0, centre + half)


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def collision_probability(p: int) -> Fraction:
    """P(|S_1| = |S_2|) for independent Bin(p, 1/2) sizes: C(2p, p) / 4^p."""
    return Fraction(math.comb(2 * p, p), 4**p)


def failure_bound(n: int, constant: float) -> float:
    return constant / math.sqrt(n)


def multiplier_bound(n: int, directed: bool) -> float:
    """n 2^(-n/4) for digraphs, 2n 2^(-n/8) for graphs."""
    return n * 2 ** (-n / 4) if directed else 2 * n * 2 ** (-n / 8)


def _checks_walks(spec: ExperimentSpec, trial: int) -> bool:
    return spec.exhaustive or trial % get_settings().walk_check_every == 0


def _base_record(spec: ExperimentSpec, n: int, trial: int, instance: Instance) -> dict:
    label = instance.format() if isinstance(instance, ConnectionSet) else ""
    return {"n": n, "trial": trial, "seed": spec.seed, "connection_set": label}


def _trial_simple_spectrum(spec: ExperimentSpec, n: int, trial: int, s: ConnectionSet) -> TrialRecord:
    fields = _base_record(spec, n, trial, s)
    distinct = distinct_eigenvalue_count(s)
    fields.update(simple_spectrum=distinct == n, distinct_eigenvalues=distinct)
    if _checks_walks(spec, trial):
        w = walk_matrix(cayley(s), [0])
        fields.update(walk_rank=walk_rank(w), walk_discrete=w.distinct_row_count() == n)
    return TrialRecord(**fields)


def _trial_saturated(spec: ExperimentSpec, n: int, trial: int, s: ConnectionSet) -> TrialRecord:
    fields = _base_record(spec, n, trial, s)
    fields.update(saturated=has_saturated_spectrum(s), distinct_eigenvalues=distinct_eigenvalue_count(s))
    if _checks_walks(spec, trial):
        fields.update(walk_rank=walk_rank(walk_matrix(cayley(s), [0])), walk_saturated=is_walk_saturated(s))
    return TrialRecord(**fields)


def _trial_3p_collision(spec: ExperimentSpec, n: int, trial: int, s: ConnectionSet) -> TrialRecord:
    p = n // 3
    matrix = eigenvalue_matrix(s)
    ones = sum(1 for j in s.elements if j % 3 == 1)
    twos = sum(1 for j in s.elements if j % 3 == 2)
    fields = _base_record(spec, n, trial, s)
    fields.update(collision=bool(np.array_equal(matrix[p], matrix[2 * p])), equal_halves=ones == twos)
    return TrialRecord(**fields)


def _trial_multiplier_free(spec: ExperimentSpec, n: int, trial: int, s: ConnectionSet) -> TrialRecord:
    fields = _base_record(spec, n, trial, s)
    fields.update(multiplier_free=is_multiplier_free(s, spec.directed))
    return TrialRecord(**fields)


def _timed(run: Callable[[Digraph], CanonResult], x: Digraph) -> tuple[CanonResult, float]:
    start = time.perf_counter_ns()
    result = run(x)
    return result, (time.perf_counter_ns() - start) / 1000


def _same_outcome(a: CanonResult, b: CanonResult) -> bool:
    if a.outcome != b.outcome:
        return False
    return not a.succeeded or a.canonical_form == b.canonical_form


def _trial_canon_pipeline(spec: ExperimentSpec, n: int, trial: int, instance: Instance) -> TrialRecord:
    fields = _base_record(spec, n, trial, instance)
    x = cayley(instance) if isinstance(instance, ConnectionSet) else instance
    run = canonize_digraph if spec.directed else canonize_graph
    result, elapsed = _timed(run, x)
    rng = make_rng(spec.seed, n, trial, 1)
    consistent = all(
        _same_outcome(result, run(relabel(x, random_permutation(n, rng)))) for _ in range(spec.relabelings)
    )
    fields.update(canon_success=result.succeeded, canon_consistent=consistent)
    if isinstance(instance, ConnectionSet):
        if spec.directed:
            fields.update(simple_spectrum=has_simple_spectrum(instance))
        else:
            fields.update(saturated=has_saturated_spectrum(instance))
    if spec.record_timings:
        fields.update(elapsed_us=elapsed)
    return TrialRecord(**fields)


def _trial_ccr(spec: ExperimentSpec, n: int, trial: int, instance: Instance) -> TrialRecord:
    fields = _base_record(spec, n, trial, instance)
    x = cayley(instance) if isinstance(instance, ConnectionSet) else instance
    firm = is_firm(instance, spec.directed) if isinstance(instance, ConnectionSet) else None
    result, elapsed = _timed(canonical_cayley_representation, x)
    fields.update(firm=firm, ccr_success=result.succeeded)
    if result.succeeded:
        fields.update(ccr_circulant=result.canonical_form.circulant_connection_set() is not None)
        if firm:
            rng = make_rng(spec.seed, n, trial, 1)
            fields.update(
                ccr_consistent=all(
                    _same_outcome(result, canonical_cayley_representation(relabel(x, random_permutation(n, rng))))
                    for _ in range(spec.relabelings)
                )
            )
    if spec.record_timings:
        fields.update(elapsed_us=elapsed)
    return TrialRecord(**fields)


_TRIALS: dict[str, Callable[[ExperimentSpec, int, int, Instance], TrialRecord]] = {
    "simple_spectrum": _trial_simple_spectrum,
    "saturated": _trial_saturated,
    "3p_collision": _trial_3p_collision,
    "multiplier_free": _trial_multiplier_free,
    "canon_pipeline": _trial_canon_pipeline,
    "ccr": _trial_ccr,
}


def _run_trial(task: tuple[ExperimentSpec, int, int, ConnectionSet | None]) -> TrialRecord:
    spec, n, trial, given = task
    if given is None:
        model = SampleModel(kind=spec.model, directed=spec.directed, n=n, seed=spec.seed)
        instance = sample(model, trial)
    else:
        instance = given
    return _TRIALS[spec.experiment](spec, n, trial, instance)


def validate_spec(spec: ExperimentSpec) -> None:
    """Reject experiment/model combinations that the experiment is not defined for."""
    name = spec.experiment
    if name in _SPECTRAL and spec.model == "labeled":
        raise InvalidInputError("spectral experiments need connection sets, not labeled graphs", name)
    if name in ("simple_spectrum", "3p_collision") and not spec.directed:
        raise InvalidInputError("this experiment runs on the digraph model", name)
    if name == "saturated" and spec.directed:
        raise InvalidInputError("this experiment runs on the graph model", name)
    if name == "3p_collision":
        for n in spec.n_values:
            if n % 3 or not is_prime(n // 3):
                raise InvalidInputError(f"n = {n} is not three times a prime", name)
    if name == "ccr" and not spec.directed and min(spec.n_values) < 4:
        raise InvalidInputError("Cayley representations of graphs need n >= 4", name)


def _tasks(spec: ExperimentSpec) -> list[tuple[ExperimentSpec, int, int, ConnectionSet | None]]:
    tasks = []
    for n in spec.n_values:
        if spec.exhaustive:
            sets = iter_connection_sets(n, undirected=not spec.directed)
            tasks.extend((spec, n, trial, s) for trial, s in enumerate(sets))
        else:
            tasks.extend((spec, n, trial, None) for trial in range(spec.trials))
    return tasks


def _collect(spec: ExperimentSpec, tasks: list) -> list[TrialRecord]:
    jobs = spec.jobs or get_settings().jobs
    if jobs <= 1:
        return [_run_trial(task) for task in tasks]
    chunk = max(1, len(tasks) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs, initializer=use_settings, initargs=(get_settings(),)) as pool:
        return list(pool.map(_run_trial, tasks, chunksize=chunk))


def _rate_lines(spec, n, records, flag, bound) -> tuple[list[str], list[str], tuple[float, float]]:
    failures = sum(1 for r in records if getattr(r, flag) is False)
    lo, hi = wilson_interval(failures, len(records))
    fraction = failures / len(records)
    lines = [
        f"n={n} trials={len(records)} failures={failures} f={fraction:.6f}"
        f" ci=[{lo:.6f},{hi:.6f}] bound={bound:.6f}"
    ]
    problems = []
    if spec.exhaustive and fraction > bound:
        problems.append(f"n={n}: exact failure fraction {fraction:.6f} exceeds {bound:.6f}")
    if not spec.exhaustive and lo > bound:
        problems.append(f"n={n}: failure fraction {fraction:.6f} (ci low {lo:.6f}) exceeds {bound:.6f}")
    return lines, problems, (lo, hi)


def _summarize_failure_rates(spec, grouped, flag) -> tuple[list[str], list[str]]:
    lines, problems = [], []
    previous: tuple[int, tuple[float, float]] | None = None
    for n, records in grouped.items():
        more, issues, interval = _rate_lines(spec, n, records, flag, failure_bound(n, spec.constant))
        lines += more
        problems += issues
        if previous is not None and not spec.exhaustive and interval[0] > previous[1][1]:
            problems.append(f"failure fraction increases from n={previous[0]} to n={n}")
        previous = (n, interval)
    return lines, problems


def _summarize_collisions(spec, grouped) -> tuple[list[str], list[str]]:
    lines, problems = [], []
    for n, records in grouped.items():
        exact = collision_probability(n // 3)
        hits = sum(1 for r in records if r.collision)
        measured = hits / len(records)
        sigma = math.sqrt(float(exact) * (1 - float(exact)) / len(records))
        lines.append(f"n={n} trials={len(records)} collisions={hits} measured={measured:.6f} exact={float(exact):.6f}")
        if spec.exhaustive:
            if Fraction(hits, len(records)) < exact:
                problems.append(f"n={n}: exhaustive collision fraction below {exact}")
        elif not float(exact) - 3 * sigma <= measured <= (1 + spec.rel_tol) * float(exact) + 3 * sigma:
            problems.append(f"n={n}: measured {measured:.6f} outside the band around {float(exact):.6f}")
    return lines, problems


def _summarize_multipliers(spec, grouped) -> tuple[list[str], list[str]]:
    lines, problems = [], []
    for n, records in grouped.items():
        bound = multiplier_bound(n, spec.directed)
        misses = sum(1 for r in records if r.multiplier_free is False)
        fraction = misses / len(records)
        allowance = 3 * math.sqrt(min(bound, 1.0) * (1 - min(bound, 1.0)) / len(records))
        lines.append(f"n={n} trials={len(records)} not_free={misses} f={fraction:.6f} bound={bound:.6f}")
        if not spec.exhaustive and fraction > bound + allowance:
            problems.append(f"n={n}: non-multiplier-free fraction {fraction:.6f} exceeds {bound:.6f}")
    return lines, problems


def runtime_slope(orders: list[int], times: list[float]) -> float:
    """Least-squares slope of log(time) against log(n)."""
    return float(np.polyfit(np.log(orders), np.log(times), 1)[0])


def _summarize_canon(spec, grouped, flag) -> tuple[list[str], list[str]]:
    lines, problems = [], []
    orders, medians = [], []
    for n, records in grouped.items():
        successes = sum(1 for r in records if getattr(r, flag))
        lo, hi = wilson_interval(successes, len(records))
        rate = successes / len(records)
        line = f"n={n} trials={len(records)} successes={successes} rate={rate:.6f} ci=[{lo:.6f},{hi:.6f}]"
        if spec.record_timings:
            median = float(np.median([r.elapsed_us for r in records]))
            orders.append(n)
            medians.append(median)
            line += f" median_us={median:.1f}"
        lines.append(line)
        if flag == "canon_success" and spec.model == "cayley" and hi < 1 - failure_bound(n, spec.constant):
            problems.append(f"n={n}: success rate {rate:.6f} below the expected bound")
    if len(orders) >= 2 and min(medians) > 0:
        slope = runtime_slope(orders, medians)
        lines.append(f"runtime slope={slope:.3f}")
        if spec.max_slope is not None and slope > spec.max_slope:
            problems.append(f"runtime slope {slope:.3f} exceeds {spec.max_slope}")
    return lines, problems


def _summarize(spec: ExperimentSpec, records: list[TrialRecord]) -> tuple[list[str], list[str]]:
    grouped: dict[int, list[TrialRecord]] = {}
    for record in records:
        grouped.setdefault(record.n, []).append(record)
    name = spec.experiment
    if name == "simple_spectrum":
        return _summarize_failure_rates(spec, grouped, "simple_spectrum")
    if name == "saturated":
        return _summarize_failure_rates(spec, grouped, "saturated")
    if name == "3p_collision":
        return _summarize_collisions(spec, grouped)
    if name == "multiplier_free":
        return _summarize_multipliers(spec, grouped)
    if name == "canon_pipeline":
        return _summarize_canon(spec, grouped, "canon_success")
    return _summarize_canon(spec, grouped, "ccr_success")


def run_experiment(spec: ExperimentSpec) -> ExperimentReport:
    """Run every trial of ``spec`` and summarize; failed checks are collected, not raised."""
    validate_spec(spec)
    tasks = _tasks(spec)
    logger.info(f"experiment {spec.experiment}: {len(tasks)} trials over n={list(spec.n_values)}")
    records = _collect(spec, tasks)
    failures = [
        f"n={r.n} trial={r.trial} {r.connection_set}: {problem}" for r in records for problem in r.inconsistencies()
    ]
    summary, problems = _summarize(spec, records)
    return ExperimentReport(
        spec=spec, records=tuple(records), summary=tuple(summary), failures=tuple(failures + problems)
    )


_COLUMNS = list(TrialRecord.model_fields)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


def report_csv(report: ExperimentReport) -> str:
    """Header, one row per trial, then the summary and failures as '#' comment lines."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_COLUMNS)
    for record in report.records:
        writer.writerow([_cell(getattr(record, column)) for column in _COLUMNS])
    for line in report.summary:
        buffer.write(f"# {line}\n")
    for line in report.failures:
        buffer.write(f"# FAILED {line}\n")
    return buffer.getvalue()


def check_report(report: ExperimentReport) -> None:
    """Raise when any check of the experiment failed."""
    if report.failures:
        message = f"{len(report.failures)} failed checks; first: {report.failures[0]}"
        raise ExperimentAssertionError(report.spec.experiment, message)

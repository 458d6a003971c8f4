"""
The full verification pipeline over seeded ensembles.

Every fixture runs classify -> atomic chain -> l2 atom bounds -> weights ->
random and adversarial domination -> 2-summing -> g candidate -> interpolation
check -> (1 < p < 2) factor split with X0 estimate -> Fefferman-Stein, and a
failed assertion is recorded against the fixture's seed and index instead of
stopping the run.
"""

import logging
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Callable, Mapping, Optional, Union

import numpy as np
from pydantic import ValidationError

from ..core.atomic import (
    atomic_e_family,
    classify,
    fefferman_stein_check,
    verify_atomic_chain,
    verify_l2_atom_bound,
)
from ..core.dyadic import indicator_matrix
from ..core.errors import BiharpError, ConfigError, InvariantViolation, ensure_le
from ..core.factorize import (
    InterpolationParams,
    g_candidate,
    interpolation_check,
    lower_chain_check,
    pisier_split,
)
from ..core.haar import HaarExpansion, MultiplierSequence, h2_norm_coeff
from ..core.pietsch import (
    ConstantSummary,
    IDENTITY_P,
    IDENTITY_TOLERANCE,
    DominationEvaluator,
    adversarial_search,
    pietsch_weights,
    two_summing_check,
)
from ..schemas.ensemble import EnsembleSpec
from ..schemas.report import Aggregate, FailureRecord, FixtureRecord, RunReport, SuiteConfig
from ..utils.logging import log_action
from .ensembles import fixture_stream, generate_one

logger = logging.getLogger(__name__)

WEIGHT_SUM_TOL = 1e-9

AGGREGATED = (
    "ap_sample",
    "worst_ratio",
    "operator_ratio",
    "level_set_constant",
    "cp_sample",
    "level_mass_ratio",
    "interpolation_margin",
    "lower_constant",
    "fs_constant",
    "factor_defect",
    "implied_c",
    "implied_c_rescaled",
)


def load_config(data: Union[SuiteConfig, Mapping[str, Any]]) -> SuiteConfig:
    if isinstance(data, SuiteConfig):
        return data
    try:
        return SuiteConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid suite config: {exc}") from exc


def fixture_seed(seed: int, index: int) -> int:
    """A 64-bit seed for the stochastic checks of fixture `index`."""
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1, dtype=np.uint64)[0])


@dataclass
class _Stage:
    name: str = "generate"


@dataclass
class FixtureOutcome:
    record: Optional[FixtureRecord] = None
    failure: Optional[FailureRecord] = None


def run_fixture(
    config: SuiteConfig,
    ensemble: int,
    spec: EnsembleSpec,
    index: int,
    p: float,
    f: Optional[HaarExpansion] = None,
) -> FixtureOutcome:
    stage = _Stage()
    try:
        f = generate_one(spec, index) if f is None else f
        record = _pipeline(config, spec, ensemble, index, p, f, stage)
        return FixtureOutcome(record=record)
    except BiharpError as exc:
        failure = FailureRecord(
            ensemble=ensemble,
            kind=spec.kind.value,
            seed=spec.seed,
            index=index,
            p=p,
            stage=stage.name,
            error=type(exc).__name__,
            message=str(exc),
        )
        logger.error("fixture %d of ensemble %d (seed %d, p=%g) failed at %s: %s", index, ensemble, spec.seed, p, stage.name, exc)
        log_action("suite.failure", "fixture", f"{spec.seed}:{index}", failure.model_dump())
        return FixtureOutcome(failure=failure)
    finally:
        indicator_matrix.cache_clear()


def _pipeline(
    config: SuiteConfig,
    spec: EnsembleSpec,
    ensemble: int,
    index: int,
    p: float,
    f: HaarExpansion,
    stage: _Stage,
) -> FixtureRecord:
    grid = f.default_resolution if config.grid is None else config.grid
    seed = fixture_seed(spec.seed, index)
    stream = fixture_stream(seed, 0)

    stage.name = "classify"
    dec = classify(f, p, grid)
    stage.name = "atomic_chain"
    chain = verify_atomic_chain(dec, f)
    stage.name = "l2_atom_bound"
    levels = verify_l2_atom_bound(dec)

    stage.name = "weights"
    omega = pietsch_weights(f, dec)
    total = omega.total()
    ensure_le(abs(total - 1.0), WEIGHT_SUM_TOL, "sum of B-normalized weights is 1", rel=0.0)

    stage.name = "domination"
    random_max = 0.0
    if config.trials:
        ratios, _ = DominationEvaluator(f, omega, grid).ratios(stream.standard_normal((config.trials, len(f))))
        random_max = float(ratios.max())
        ensure_le(random_max, 1.0, "domination ratio over random multipliers")
        if p == IDENTITY_P:
            ensure_le(1.0 - float(ratios.min()), IDENTITY_TOLERANCE, "domination ratio is 1 at p=2", rel=0.0)

    stage.name = "adversarial"
    adversarial = adversarial_search(f, p, omega, config.adversarial_budget, seed, config.restarts, grid)

    stage.name = "two_summing"
    slack = None
    if config.two_summing_sequences:
        phis = [
            MultiplierSequence.from_values(f.support, row)
            for row in stream.standard_normal((config.two_summing_sequences, len(f)))
        ]
        slack = two_summing_check(f, p, omega, phis, grid).slack

    stage.name = "g_candidate"
    candidate = g_candidate(f, dec)

    stage.name = "interpolation"
    params = InterpolationParams(p, config.theta)
    interpolation = interpolation_check(f, params, dec=dec, resolution=grid)
    gap = None
    if p < 2.0:
        reverse = lower_chain_check(f, dec, params).reverse_holder
        gap = reverse.lhs - reverse.rhs

    factor = None
    if 1.0 < p < 2.0:
        stage.name = "factorize"
        factor = pisier_split(f, p, omega, config.x0_budget, seed, grid)

    stage.name = "fefferman_stein"
    fs = fefferman_stein_check(f, p, atomic_e_family(dec), config.fs_epsilon, grid)

    return FixtureRecord(
        ensemble=ensemble,
        kind=spec.kind.value,
        seed=spec.seed,
        index=index,
        p=p,
        support_size=len(f),
        levels=len(dec.levels),
        hp_norm=dec.norm,
        l2_norm=h2_norm_coeff(f),
        b=dec.b,
        ap_sample=chain.ap_sample,
        weight_total=total,
        random_max_ratio=random_max,
        worst_ratio=max(random_max, adversarial.worst_ratio),
        operator_ratio=adversarial.operator_ratio,
        two_summing_slack=slack,
        level_set_constant=max(level.level_set_constant for level in levels),
        cp_sample=candidate.cp_sample,
        level_mass_ratio=candidate.level_mass_ratio,
        interpolation_margin=interpolation.upper_margin,
        lower_constant=interpolation.lower_constant,
        reverse_holder_gap=gap,
        fs_constant=fs.implied_constant,
        factor_defect=None if factor is None else factor.defect,
        x0_lower=None if factor is None else factor.x_x0_estimate,
        x0_upper=None if factor is None else factor.x_x0_upper,
        implied_c=None if factor is None else factor.implied_c,
        implied_c_rescaled=None if factor is None else factor.implied_c_rescaled,
    )


def aggregate(records: list[FixtureRecord]) -> dict[str, Aggregate]:
    """min / median / max per (p, metric), keyed "p=<p>/<metric>" and sorted."""
    buckets: dict[str, list[float]] = {}
    for record in records:
        for name in AGGREGATED:
            value = getattr(record, name)
            if value is not None and math.isfinite(value):
                buckets.setdefault(f"p={record.p:g}/{name}", []).append(value)
    summary = {}
    for key in sorted(buckets):
        stats = ConstantSummary.of(buckets[key])
        summary[key] = Aggregate(
            count=len(stats.samples),
            minimum=stats.minimum,
            median=stats.median,
            maximum=stats.maximum,
        )
    return summary


def run_suite(
    config: Union[SuiteConfig, Mapping[str, Any]],
    timestamp: bool = True,
    progress: Optional[Callable[[int, int], None]] = None,
) -> RunReport:
    config = load_config(config)
    jobs = [
        (ensemble, spec, index, p)
        for ensemble, spec in enumerate(config.ensembles)
        for index in range(spec.count)
        for p in config.p_values
    ]
    logger.info("suite: %d fixture runs over %d ensembles", len(jobs), len(config.ensembles))

    records, failures = [], []
    fixtures: dict[tuple[int, int], HaarExpansion] = {}
    for done, (ensemble, spec, index, p) in enumerate(jobs, start=1):
        key = (ensemble, index)
        f = fixtures.get(key)
        if f is None:
            try:
                f = fixtures[key] = generate_one(spec, index)
            except BiharpError:
                f = None
        outcome = run_fixture(config, ensemble, spec, index, p, f)
        if outcome.record is not None:
            records.append(outcome.record)
        if outcome.failure is not None:
            failures.append(outcome.failure)
        if progress is not None:
            progress(done, len(jobs))

    records.sort(key=lambda r: (r.ensemble, r.index, r.p))
    failures.sort(key=lambda r: (r.ensemble, r.index, r.p))
    invariant_failures = sum(1 for failure in failures if failure.error == InvariantViolation.__name__)
    logger.info("suite: %d passed, %d failed (%d invariant violations)", len(records), len(failures), invariant_failures)
    return RunReport(
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None,
        config=config,
        fixtures=records,
        failures=failures,
        aggregates=aggregate(records),
    )

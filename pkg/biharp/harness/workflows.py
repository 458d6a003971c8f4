"""
Single-expansion workflows shared by the CLI and the HTTP routers. Each one
runs the library operations for one subcommand and packs the result into the
matching export schema.
"""

import logging
from typing import Optional

import numpy as np

from ..core.atomic import (
    atomic_e_family,
    classify,
    fefferman_stein_check,
    verify_atomic_chain,
    verify_l2_atom_bound,
)
from ..core.errors import DomainError, ensure_le
from ..core.factorize import (
    InterpolationParams,
    endpoint_split,
    g_candidate,
    interpolation_check,
    pisier_split,
    pisier_theta,
    x0_norm_estimate,
)
from ..core.haar import (
    HaarExpansion,
    MultiplierSequence,
    evaluate,
    h2_norm_coeff,
    hp_norm,
    square_function_squared,
)
from ..core.pietsch import (
    ConstantSummary,
    DominationEvaluator,
    Normalization,
    adversarial_search,
    domination_check,
    estimate_ap,
    pietsch_weights,
    two_summing_check,
)
from ..schemas.atomic import (
    ChainOut,
    DecompositionOut,
    FSCheckOut,
    L2LevelOut,
    VerifyAtomicOut,
)
from ..schemas.ensemble import EnsembleSpec
from ..schemas.expansion import NormsOut
from ..schemas.factorize import FactorPairOut, X0Out
from ..schemas.pietsch import (
    AdversarialOut,
    DominationOut,
    TwoSummingOut,
    VerifyDominationOut,
    WeightsOut,
)
from ..schemas.report import ConstantRow
from .ensembles import fixture_stream, generate

logger = logging.getLogger(__name__)


def _grid(f: HaarExpansion, grid: Optional[int]) -> int:
    return f.default_resolution if grid is None else grid


def norms(f: HaarExpansion, p: float, grid: Optional[int] = None) -> NormsOut:
    grid = _grid(f, grid)
    squared = square_function_squared(f, grid)
    values = evaluate(f, max(grid, f.max_level + 1))
    return NormsOut(
        p=p,
        grid=grid,
        hp_norm=hp_norm(f, p, grid),
        l2_norm_coeff=h2_norm_coeff(f),
        l2_norm_grid=values.lp_norm(2.0),
        square_function_max=float(np.sqrt(squared.values.max())),
    )


def decompose(f: HaarExpansion, p: float, grid: Optional[int] = None) -> DecompositionOut:
    return DecompositionOut.from_decomposition(classify(f, p, grid))


def weights(
    f: HaarExpansion,
    p: float,
    grid: Optional[int] = None,
    mode: Normalization = Normalization.B_NORMALIZED,
    a_p: Optional[float] = None,
) -> WeightsOut:
    dec = classify(f, p, grid)
    return WeightsOut.from_weights(pietsch_weights(f, dec, mode, a_p), dec.assignment)


def verify_domination(
    f: HaarExpansion,
    p: float,
    grid: Optional[int] = None,
    phi: Optional[MultiplierSequence] = None,
    trials: int = 100,
    iterations: int = 2000,
    restarts: int = 4,
    sequences: int = 10,
    seed: int = 0,
) -> VerifyDominationOut:
    grid = _grid(f, grid)
    dec = classify(f, p, grid)
    omega = pietsch_weights(f, dec)
    given = domination_check(f, p, omega, phi if phi is not None else MultiplierSequence.constant(1.0), grid)

    stream = fixture_stream(seed, 0)
    size = len(f)
    random_max = 0.0
    if trials:
        ratios, _ = DominationEvaluator(f, omega, grid).ratios(stream.standard_normal((trials, size)))
        random_max = float(ratios.max())
        ensure_le(random_max, 1.0, "domination ratio over random multipliers")

    adversarial = adversarial_search(f, p, omega, iterations, seed, restarts, grid)
    phis = [MultiplierSequence.from_values(f.support, row) for row in stream.standard_normal((sequences, size))]
    summing = two_summing_check(f, p, omega, phis, grid)
    return VerifyDominationOut(
        given=DominationOut.from_report(given),
        random_max_ratio=random_max,
        trials=trials,
        adversarial=AdversarialOut.from_result(adversarial),
        two_summing=TwoSummingOut.from_report(summing),
    )


def verify_atomic(f: HaarExpansion, p: float, grid: Optional[int] = None, epsilon: float = 0.5) -> VerifyAtomicOut:
    dec = classify(f, p, grid)
    chain = verify_atomic_chain(dec, f)
    levels = verify_l2_atom_bound(dec)
    fs = fefferman_stein_check(f, p, atomic_e_family(dec), epsilon, dec.resolution)
    return VerifyAtomicOut(
        decomposition=DecompositionOut.from_decomposition(dec),
        chain=ChainOut.from_report(chain),
        levels=[L2LevelOut.from_report(level) for level in levels],
        fefferman_stein=FSCheckOut.from_report(fs),
    )


def factorize(
    f: HaarExpansion,
    p: float,
    grid: Optional[int] = None,
    budget: int = 200,
    seed: int = 0,
) -> FactorPairOut:
    if p in (1.0, 2.0):
        return FactorPairOut.from_pair(endpoint_split(f, p))
    if not 1.0 < p < 2.0:
        raise DomainError(f"factorization needs p in [1, 2], got {p}")
    dec = classify(f, p, grid)
    return FactorPairOut.from_pair(pisier_split(f, p, pietsch_weights(f, dec), budget, seed, dec.resolution))


def x0(
    f: HaarExpansion,
    target_p: float,
    theta: Optional[float] = None,
    grid: Optional[int] = None,
    budget: int = 200,
    seed: int = 0,
) -> X0Out:
    theta = pisier_theta(target_p) if theta is None else theta
    estimate = x0_norm_estimate(f, theta, target_p, budget, seed, grid)
    return X0Out.from_estimate(estimate, theta, target_p)


def estimate_constants(
    spec: EnsembleSpec,
    p_values: list[float],
    theta: float = 0.5,
    grid: Optional[int] = None,
    epsilon: float = 0.5,
) -> list[ConstantRow]:
    """Implied-constant table over one ensemble: A_p, the lower interpolation constant, c_p and C_p(eps)."""
    fixtures = generate(spec)
    rows = []
    for p in p_values:
        params = InterpolationParams(p, theta)
        lower, cp, fs = [], [], []
        for f in fixtures:
            dec = classify(f, p, grid)
            candidate = g_candidate(f, dec)
            cp.append(candidate.cp_sample)
            report = interpolation_check(f, params, dec=dec, resolution=dec.resolution)
            if report.lower_constant is not None:
                lower.append(report.lower_constant)
            check = fefferman_stein_check(f, p, atomic_e_family(dec), epsilon, dec.resolution)
            if check.implied_constant is not None:
                fs.append(check.implied_constant)
        ap = estimate_ap(fixtures, p, grid)
        lower_summary, cp_summary, fs_summary = (ConstantSummary.of(s) for s in (lower, cp, fs))
        logger.info("constants at p=%g: A_p max %.6g, lower max %.6g", p, ap.maximum, lower_summary.maximum)
        rows.append(
            ConstantRow(
                p=p,
                theta=theta,
                q=params.q,
                count=len(fixtures),
                ap_min=ap.minimum,
                ap_median=ap.median,
                ap_max=ap.maximum,
                lower_min=lower_summary.minimum,
                lower_median=lower_summary.median,
                lower_max=lower_summary.maximum,
                cp_min=cp_summary.minimum,
                cp_median=cp_summary.median,
                cp_max=cp_summary.maximum,
                fs_min=fs_summary.minimum,
                fs_median=fs_summary.median,
                fs_max=fs_summary.maximum,
            )
        )
    return rows

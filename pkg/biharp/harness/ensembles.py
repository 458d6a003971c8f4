"""
Seeded random ensembles of Haar expansions.

Every fixture draws from numpy's PCG64 bit generator seeded with
SeedSequence(spec.seed, spawn_key=(i,)), so fixture i of a spec is fixed by
(spec, i) alone and does not depend on how many fixtures are generated.
"""

import logging
from functools import lru_cache
from typing import Any, Callable, Mapping, Union

import numpy as np
from pydantic import ValidationError

from ..core.dyadic import DyadicInterval, DyadicRectangle, all_rectangles
from ..core.errors import ConfigError
from ..core.haar import HaarExpansion
from ..schemas.ensemble import EnsembleKind, EnsembleSpec

logger = logging.getLogger(__name__)

Generator = Callable[[EnsembleSpec, np.random.Generator], HaarExpansion]


def load_spec(data: Union[EnsembleSpec, Mapping[str, Any]]) -> EnsembleSpec:
    if isinstance(data, EnsembleSpec):
        return data
    try:
        return EnsembleSpec.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid ensemble spec: {exc}") from exc


def fixture_stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


@lru_cache(maxsize=16)
def _rectangles(max_level: int) -> tuple[DyadicRectangle, ...]:
    return tuple(all_rectangles(max_level))


def _single_atom(spec: EnsembleSpec, stream: np.random.Generator) -> HaarExpansion:
    rects = _rectangles(spec.max_level)
    rect = rects[int(stream.integers(len(rects)))]
    return HaarExpansion.single(rect, spec.coefficient_scale, spec.max_level)


def _sparse_random(spec: EnsembleSpec, stream: np.random.Generator) -> HaarExpansion:
    rects = _rectangles(spec.max_level)
    chosen = stream.random(len(rects)) < spec.density
    values = spec.coefficient_scale * stream.standard_normal(len(rects))
    if not chosen.any():
        chosen[int(stream.integers(len(rects)))] = True
    return HaarExpansion(
        {rect: value for rect, value, keep in zip(rects, values, chosen) if keep},
        spec.max_level,
    )


def _dense_gaussian(spec: EnsembleSpec, stream: np.random.Generator) -> HaarExpansion:
    rects = _rectangles(spec.max_level)
    values = spec.coefficient_scale * stream.standard_normal(len(rects))
    return HaarExpansion(dict(zip(rects, values)), spec.max_level)


def _lacunary_diagonal(spec: EnsembleSpec, stream: np.random.Generator) -> HaarExpansion:
    """
    Squares [0, 2^-a) x [0, 2^-a) for a = 0..L with coefficients scale * ratio^a.
    The family is deterministic, so every fixture of the ensemble is the same.
    """
    coeffs = {
        DyadicRectangle.of(level, 0, level, 0): spec.coefficient_scale * spec.ratio ** level
        for level in range(spec.max_level + 1)
    }
    return HaarExpansion(coeffs, spec.max_level)


def _rectangle_comb(spec: EnsembleSpec, stream: np.random.Generator) -> HaarExpansion:
    """All I of level L against one random J: 2^L disjoint thin rectangles."""
    top = spec.max_level
    j_level = int(stream.integers(top + 1))
    jside = DyadicInterval(j_level, int(stream.integers(1 << j_level)))
    values = spec.coefficient_scale * stream.standard_normal(1 << top)
    return HaarExpansion(
        {DyadicRectangle(DyadicInterval(top, k), jside): value for k, value in enumerate(values)},
        top,
    )


GENERATORS: dict[EnsembleKind, Generator] = {
    EnsembleKind.SINGLE_ATOM: _single_atom,
    EnsembleKind.SPARSE_RANDOM: _sparse_random,
    EnsembleKind.DENSE_GAUSSIAN: _dense_gaussian,
    EnsembleKind.LACUNARY_DIAGONAL: _lacunary_diagonal,
    EnsembleKind.RECTANGLE_COMB: _rectangle_comb,
}


def generate_one(spec: EnsembleSpec, index: int) -> HaarExpansion:
    f = GENERATORS[spec.kind](spec, fixture_stream(spec.seed, index))
    if f.is_zero:
        # Only reachable when every drawn Gaussian is exactly zero.
        raise ConfigError(f"fixture {index} of seed {spec.seed} came out zero")
    return f


def generate(spec: Union[EnsembleSpec, Mapping[str, Any]]) -> list[HaarExpansion]:
    spec = load_spec(spec)
    logger.debug("generating %d %s fixtures at L=%d, seed=%d", spec.count, spec.kind.value, spec.max_level, spec.seed)
    return [generate_one(spec, index) for index in range(spec.count)]

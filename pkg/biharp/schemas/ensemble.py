from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from .expansion import HaarExpansionIn


class EnsembleKind(str, Enum):
    SINGLE_ATOM = "singleAtom"
    SPARSE_RANDOM = "sparseRandom"
    DENSE_GAUSSIAN = "denseGaussian"
    LACUNARY_DIAGONAL = "lacunaryDiagonal"
    RECTANGLE_COMB = "rectangleComb"


class EnsembleSpec(BaseModel):
    """
    A seeded family of random expansions. `density` only matters for
    sparseRandom and `ratio` only for lacunaryDiagonal.
    """

    model_config = ConfigDict(populate_by_name=True)

    kind: EnsembleKind = EnsembleKind.SPARSE_RANDOM
    max_level: int = Field(4, ge=0, le=8, alias="maxLevel")
    count: int = Field(1, ge=1, le=100_000)
    seed: int = Field(42, ge=0, lt=2**64)
    coefficient_scale: float = Field(1.0, gt=0, allow_inf_nan=False, alias="coefficientScale")
    density: float = Field(0.2, gt=0, le=1)
    ratio: float = Field(4.0, gt=0, allow_inf_nan=False)


class EnsembleOut(BaseModel):
    spec: EnsembleSpec
    expansions: list[HaarExpansionIn]

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from ..core.dyadic import DyadicRectangle
from ..core.errors import DomainError
from ..core.haar import HaarExpansion


class RectangleRef(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    i_level: int = Field(..., ge=0, alias="iLevel")
    i_index: int = Field(..., ge=0, alias="iIndex")
    j_level: int = Field(..., ge=0, alias="jLevel")
    j_index: int = Field(..., ge=0, alias="jIndex")

    def to_rectangle(self) -> DyadicRectangle:
        return DyadicRectangle.of(self.i_level, self.i_index, self.j_level, self.j_index)

    @classmethod
    def from_rectangle(cls, rect: DyadicRectangle) -> "RectangleRef":
        return cls(
            i_level=rect.iside.level,
            i_index=rect.iside.index,
            j_level=rect.jside.level,
            j_index=rect.jside.index,
        )


class CoefficientIn(RectangleRef):
    value: float = Field(..., allow_inf_nan=False)


class HaarExpansionIn(BaseModel):
    """The HaarExpansion JSON document: {"maxLevel": L, "coeffs": [...]}."""

    model_config = ConfigDict(populate_by_name=True)

    max_level: int = Field(..., ge=0, alias="maxLevel")
    coeffs: list[CoefficientIn] = []

    def to_expansion(self) -> HaarExpansion:
        coeffs: dict[DyadicRectangle, float] = {}
        for entry in self.coeffs:
            rect = entry.to_rectangle()
            if rect in coeffs:
                raise DomainError(f"rectangle {rect} listed twice")
            coeffs[rect] = entry.value
        return HaarExpansion(coeffs, self.max_level)

    @classmethod
    def from_expansion(cls, f: HaarExpansion) -> "HaarExpansionIn":
        return cls(
            max_level=f.max_level,
            coeffs=[
                CoefficientIn(
                    i_level=rect.iside.level,
                    i_index=rect.iside.index,
                    j_level=rect.jside.level,
                    j_index=rect.jside.index,
                    value=value,
                )
                for rect, value in f.coeffs.items()
            ],
        )


class NormRequest(BaseModel):
    expansion: HaarExpansionIn
    p: float = Field(1.0, gt=0, le=2)
    grid: Optional[int] = Field(None, ge=0)


class NormsOut(BaseModel):
    p: float
    grid: int
    hp_norm: float
    l2_norm_coeff: float
    l2_norm_grid: float
    square_function_max: float


class ExpansionSummary(BaseModel):
    filename: Optional[str] = None
    max_level: int
    support_size: int
    h1_norm: float
    h2_norm: float

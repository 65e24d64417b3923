"""Run configuration: one JSON document validated with pydantic."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError, model_validator

from .errors import ConfigError


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class HoneycombSpec(_Strict):
    Mtilde: PositiveFloat
    Ktilde: PositiveFloat
    k1: float = 4.0 * 3.141592653589793 / 3.0
    k2: float = 0.0
    D12: float = 0.0815599
    D22: float = 12.48
    D66: float = 0.0000247357
    N3: float = -1e4
    mass_model: Literal["total", "plate"] = "total"


class GenericSpec(_Strict):
    """M x'' + diag(k) x + (M3 v^3, N3 y^3) = 0."""

    mass: tuple[tuple[float, float], tuple[float, float]]
    stiffness: tuple[PositiveFloat, PositiveFloat]
    M3: float = 0.0
    N3: float = 0.0

    @model_validator(mode="after")
    def _symmetric(self):
        if self.mass[0][1] != self.mass[1][0]:
            raise ValueError("mass matrix must be symmetric")
        return self


class SystemSpec(_Strict):
    honeycomb: HoneycombSpec | None = None
    generic: GenericSpec | None = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.honeycomb is None) == (self.generic is None):
            raise ValueError("give exactly one of 'honeycomb' or 'generic'")
        return self


class Amplitudes(_Strict):
    a_minus: float = Field(ge=0.0)
    a_plus: float = Field(ge=0.0)


class ChartSpec(_Strict):
    """Direct (E, I2) entry, bypassing amplitudes."""

    E: float
    I2: PositiveFloat
    region: str | None = None


class ThresholdSpec(_Strict):
    eps: PositiveFloat = 6.5e-4
    C1: PositiveFloat = 5e-4
    C2: PositiveFloat = 2.5e-3
    tau_zone: PositiveFloat = 1e-9
    tau_E: PositiveFloat = 1e-9
    tau_sigma: PositiveFloat = 1e-12


class PortraitSpec(_Strict):
    a1: float | None = None
    a2: float | None = None
    energies: list[float] = Field(default_factory=list)
    points: PositiveInt = 512

    @model_validator(mode="after")
    def _pair(self):
        if (self.a1 is None) != (self.a2 is None):
            raise ValueError("give both a1 and a2 or neither")
        return self


class SweepSpec(_Strict):
    Mtilde: PositiveFloat
    Ktilde: PositiveFloat
    N3: float = -1e4
    a_minus: float = Field(ge=0.0)
    a_plus: float = Field(ge=0.0)
    points: PositiveInt = 600
    mass_model: Literal["total", "plate"] = "total"


class VerifySpec(_Strict):
    slow_periods: PositiveFloat = 40.0
    steps_per_fast_period: PositiveInt = 40
    scheme: Literal["verlet", "strang", "strang4"] = "strang4"
    rel_tol: PositiveFloat = 1e-3


class RunConfig(_Strict):
    system: SystemSpec | None = None
    amplitudes: Amplitudes | None = None
    chart: ChartSpec | None = None
    thresholds: ThresholdSpec = Field(default_factory=ThresholdSpec)
    portrait: PortraitSpec = Field(default_factory=PortraitSpec)
    sweep: SweepSpec | None = None
    verify: VerifySpec = Field(default_factory=VerifySpec)
    area_term: bool = True
    out: str | None = None


def parse_config(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return parse_config(data)

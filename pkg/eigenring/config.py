"""Configuration for eigenring: environment settings and validated run configs."""
import math
from functools import lru_cache
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

HALF_PI = math.pi / 2


class Settings(BaseSettings):
    """Application settings, overridable through EIGENRING_* variables or a .env file."""
    log_level: str = "INFO"
    output_dir: str = "_output"
    max_workers: int = Field(4, ge=1)

    # polygon iteration
    direction_tol: float = Field(1e-10, gt=0)
    max_steps: int = Field(100_000, ge=1)
    threshold_tol: float = Field(1e-12, gt=0)

    # bound-state search
    grid_points: int = Field(10_000, ge=10)
    refine_factor: int = Field(10, ge=2)
    root_xtol: float = Field(1e-12, gt=0)

    # ring assembly
    quad_epsabs: float = Field(1e-10, gt=0)
    circulant_tol: float = Field(1e-8, gt=0)
    overlap_tol: float = Field(1e-10, gt=0)

    model_config = SettingsConfigDict(env_prefix="EIGENRING_", env_file=".env", env_file_encoding="utf-8")


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings."""
    return Settings()


OutputFormat = Literal["csv", "json", "both"]


class RunConfig(BaseModel):
    """Fields shared by every subcommand."""
    out: str = Field("_output", description="Directory receiving the artifacts")
    format: OutputFormat = Field("both", description="Artifact format")

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.model_validate_json(text)


class PolygonConfig(RunConfig):
    action: Literal["decompose", "eigenvalues", "iterate"] = "decompose"
    vertices: Optional[List[Tuple[float, float]]] = Field(
        None, description="Inline vertices as (re, im) pairs"
    )
    file: Optional[str] = Field(None, description="Polygon file, one 're im' pair per line")
    random: Optional[int] = Field(None, ge=3, description="Vertex count of a seeded random polygon")
    regular: Optional[int] = Field(None, ge=3, description="Vertex count of a regular polygon")
    seed: int = Field(0, ge=0, lt=2**64)
    theta: float = Field(2 * math.pi / 5, gt=0, lt=HALF_PI)
    lam: float = Field(0.5, gt=0, lt=1, alias="lambda")
    tol: float = Field(1e-10, gt=0)
    max_steps: int = Field(100_000, ge=1)
    trace: bool = Field(False, description="Write the per-step residual trace")

    @model_validator(mode="after")
    def check_single_source(self) -> "PolygonConfig":
        sources = [self.vertices is not None, self.file is not None,
                   self.random is not None, self.regular is not None]
        if sum(sources) != 1:
            raise ValueError("exactly one of vertices, file, random, regular is required")
        if self.vertices is not None and len(self.vertices) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        return self


class WellConfig(RunConfig):
    width: float = Field(..., gt=0, alias="L", description="Well width (nm)")
    circumference: float = Field(..., gt=0, alias="l", description="Circle length (nm)")
    V0: float = Field(..., gt=0, description="Well depth (meV)")
    shift: float = Field(0.0, ge=0, description="Potential shift V' (meV)")
    grid_points: int = Field(10_000, ge=10)
    refine_factor: int = Field(10, ge=2)
    xtol: float = Field(1e-12, gt=0)
    count_limit: Optional[int] = Field(None, ge=1)
    sample_points: int = Field(0, ge=0, description="Sampled wavefunction points, 0 for none")

    @model_validator(mode="after")
    def check_width(self) -> "WellConfig":
        if not self.width < self.circumference:
            raise ValueError("well width L must be smaller than the circle length l")
        return self


class RingConfig(RunConfig):
    n: int = Field(..., ge=3)
    width: float = Field(..., gt=0, alias="L", description="Well width (nm)")
    spacing: float = Field(..., gt=0, alias="a", description="Well spacing (nm)")
    V0: float = Field(..., gt=0, description="Well depth (meV)")
    shift: float = Field(0.0, ge=0, description="Potential shift V' (meV)")
    truncate_nn: bool = False
    quad_epsabs: float = Field(1e-10, gt=0)
    circulant_tol: float = Field(1e-8, gt=0)
    overlap_tol: float = Field(1e-10, gt=0)
    grid_points: int = Field(10_000, ge=10)

    @model_validator(mode="after")
    def check_spacing(self) -> "RingConfig":
        if not self.width < self.spacing:
            raise ValueError("well width L must be smaller than the spacing a")
        return self

    @property
    def circumference(self) -> float:
        return self.n * self.spacing


class MapConfig(RunConfig):
    theta: float = Field(..., gt=0, lt=HALF_PI)
    lam: float = Field(0.5, gt=0, lt=1, alias="lambda")
    h11: Optional[float] = None
    h12: Optional[float] = None
    w_only: bool = False
    convention: Literal["halved", "exact"] = "halved"
    ring: Optional[RingConfig] = None

    @model_validator(mode="after")
    def check_inputs(self) -> "MapConfig":
        if self.w_only:
            return self
        has_pair = self.h11 is not None and self.h12 is not None
        if has_pair == (self.ring is not None):
            raise ValueError("give either both --h11 and --h12 or a ring geometry")
        return self


class SweepConfig(RunConfig):
    kind: Literal["dominance", "well"]
    shards: int = Field(4, ge=1)
    samples: int = Field(500, ge=2)
    # dominance sweep
    n: int = Field(6, ge=3)
    lam: float = Field(0.5, gt=0, lt=1, alias="lambda")
    # well sweep
    width: float = Field(1.0, gt=0, alias="L")
    V0: float = Field(800.0, gt=0)
    shift: float = Field(0.0, ge=0)
    l_min: float = Field(2.0, gt=0)
    l_max: float = Field(40.0, gt=0)
    grid_points: int = Field(2_000, ge=10)

    @model_validator(mode="after")
    def check_range(self) -> "SweepConfig":
        if self.kind == "well" and not (self.width < self.l_min < self.l_max):
            raise ValueError("well sweep needs L < l_min < l_max")
        return self


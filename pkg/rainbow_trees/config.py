"""
config.py

Configuration management using Pydantic for the rainbow spanning tree toolkit.
Handles environment variables, search budgets, and solver settings.
"""

from pathlib import Path

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class SearchConfig(BaseModel):
    """Exact search configuration"""
    budget: int = Field(default=5_000_000, description="Node budget for exact backtracking searches")
    pruning: bool = Field(default=True, description="Enable bound pruning in the partition scan")
    threads: int = Field(default=1, description="Worker count for sharded scans")
    prefix_depth: int = Field(default=3, description="Restricted-growth prefix length used to shard work")

    @field_validator('threads', 'prefix_depth')
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError('must be at least 1')
        return v


class SolverConfig(BaseModel):
    """Hill-climbing solver configuration"""
    move_factor: int = Field(default=1, description="Multiplier applied to the hill-climb move bound")
    fallback_tree_search: bool = Field(
        default=True,
        description="Fall back to exact tree search when neither certificate route settles an instance",
    )


class AntiRamseyConfig(BaseModel):
    """Anti-Ramsey pipeline configuration"""
    max_verify_n: int = Field(default=5, description="Largest n accepted by the exhaustive r(n,t) check")
    extremal_attempts: int = Field(default=200, description="Random assignments tried per color-class shape")


class Settings(BaseSettings):
    """Main application settings"""

    model_config = SettingsConfigDict(
        env_prefix="RAINBOW_",
        env_file=".env",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    log_level: str = Field(default="INFO", description="Logging level")
    dump_dir: Path = Field(default=Path("./rainbow-dumps"), description="Directory for internal-failure dumps")

    # Component configurations
    search: SearchConfig = Field(default_factory=SearchConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    anti: AntiRamseyConfig = Field(default_factory=AntiRamseyConfig)


# Global settings instance
settings = Settings()

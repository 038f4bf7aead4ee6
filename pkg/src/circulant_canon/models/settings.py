"""
Settings models for circulant canonization.
"""

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class CirculantSettings(BaseSettings):
    """
    Configuration settings for the library, the command line and the MCP server.

    These settings can be loaded from environment variables prefixed with ``CIRCULANT_``
    or from a .env file.
    """

    model_config = SettingsConfigDict(env_prefix="CIRCULANT_", env_file=".env", extra="ignore")

    aut_oracle_bound: int = Field(
        default=12,
        ge=1,
        description="Largest order accepted by the automorphism-group oracle and the orbital partition.",
    )
    canon_oracle_bound: int = Field(
        default=10,
        ge=1,
        description="Largest order accepted by the brute-force canonical form.",
    )
    sampler_bound_directed: int = Field(
        default=14,
        ge=1,
        description="Largest order for exact unlabeled/labeled sampling of circulant digraphs.",
    )
    sampler_bound_undirected: int = Field(
        default=18,
        ge=1,
        description="Largest order for exact unlabeled/labeled sampling of circulant graphs.",
    )
    subset_sum_bound: int = Field(
        default=20,
        ge=0,
        description="Largest number of roots whose 2^bound subset sums may be enumerated.",
    )
    refinement_engine: Literal["vectorized", "reference"] = Field(
        default="vectorized",
        description="Color refinement engine: numpy rounds or the plain-Python reference rounds.",
    )
    walk_check_every: int = Field(
        default=32,
        ge=1,
        description="Experiments cross-check walk rank against the spectrum on every k-th trial.",
    )
    jobs: int = Field(
        default=1,
        ge=1,
        description="Default number of worker processes for experiments.",
    )
    mcp_transport: Literal["stdio", "sse"] = Field(
        default="stdio",
        description="The transport protocol for the MCP server, e.g., 'stdio', 'sse'.",
    )
    disabled_spectral_tools: list[str] = Field(
        default_factory=list,
        description="List of disabled spectral tools provided by CIRCULANT_DISABLED_SPECTRAL_TOOLS.",
    )
    disabled_canon_tools: list[str] = Field(
        default_factory=list,
        description="List of disabled canonization tools provided by CIRCULANT_DISABLED_CANON_TOOLS.",
    )


_settings: CirculantSettings | None = None


def get_settings() -> CirculantSettings:
    """Return the process-wide settings, reading the environment on first use."""
    global _settings
    if _settings is None:
        _settings = CirculantSettings()
    return _settings


def use_settings(settings: CirculantSettings) -> None:
    """Replace the process-wide settings (command-line overrides, worker initialization)."""
    global _settings
    _settings = settings

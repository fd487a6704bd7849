# config/settings.py
import os
from dotenv import load_dotenv
from dataclasses import dataclass, fields, replace
from typing import Optional

from errors import ConfigurationError

# Load environment variables
load_dotenv()


@dataclass(frozen=True)
class LabConfig:
    """Configuration for the gNLS lab"""
    # Grid and box
    grid_n: int = 128
    box_length: float = 32.0

    # Evolution
    dt: float = 1e-3
    substeps_nl: int = 2
    guard_grad_factor: float = 10.0
    renormalize_density: bool = False

    # Radial profile (shooting)
    shoot_tol: float = 1e-10
    r_max: float = 30.0
    dr: float = 1e-3
    q0_bracket: tuple = (1.05, 10.0)

    # Ground states: largest sqrt(omega) dx
    ground_state_spacing: float = 0.25

    # Sphere optimizer
    restarts: int = 200
    max_iter: int = 10_000
    stationarity_tol: float = 1e-10
    dedup_tol: float = 1e-6

    # Identity checks and classification
    identity_tol: float = 1e-10
    classify_tol: float = 1e-3

    # Diagnostics
    wrap_fraction: float = 0.99
    min_fit_points: int = 4

    # Parallelism (GNLS_THREADS overrides)
    workers: Optional[int] = None

    def __post_init__(self):
        # Load worker cap from environment if not provided
        if self.workers is None:
            env_threads = os.getenv("GNLS_THREADS")
            if env_threads:
                try:
                    object.__setattr__(self, "workers", int(env_threads))
                except ValueError:
                    raise ConfigurationError(f"GNLS_THREADS must be an integer, got {env_threads!r}")

        # Validate required settings
        if self.grid_n < 8 or self.grid_n & (self.grid_n - 1):
            raise ConfigurationError(f"grid_n must be a power of two >= 8, got {self.grid_n}")
        if self.box_length <= 0:
            raise ConfigurationError("box_length must be positive")
        if self.dt == 0:
            raise ConfigurationError("dt must be nonzero")
        if self.substeps_nl < 1:
            raise ConfigurationError("substeps_nl must be >= 1")
        if self.guard_grad_factor <= 1:
            raise ConfigurationError("guard_grad_factor must exceed 1")
        if not 0 < self.dr < self.r_max:
            raise ConfigurationError("dr must lie in (0, r_max)")
        if self.ground_state_spacing <= 0:
            raise ConfigurationError("ground_state_spacing must be positive")
        if self.restarts < 1 or self.max_iter < 1:
            raise ConfigurationError("restarts and max_iter must be >= 1")
        if not 0 < self.wrap_fraction < 1:
            raise ConfigurationError("wrap_fraction must lie in (0, 1)")
        if self.workers is not None and self.workers < 1:
            raise ConfigurationError("workers must be >= 1")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def get_config(**overrides) -> LabConfig:
    """Get default configuration, optionally overriding fields"""
    config = LabConfig()
    return replace(config, **overrides) if overrides else config

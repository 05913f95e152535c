import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

load_dotenv()


@dataclass(frozen=True)
class CountConfig:
    """Stabilisation protocol for nodal counts: double the grid until two successive counts agree."""

    base_resolution: int = 256
    max_resolution: int = 4096
    tau_relative: float = 1e-9
    refinement_factor: int = 2

    def __post_init__(self):
        if self.base_resolution < 4:
            raise ValueError("base_resolution must be at least 4")
        if self.base_resolution > self.max_resolution:
            raise ValueError("base_resolution must not exceed max_resolution")
        if self.tau_relative < 0:
            raise ValueError("tau_relative must be non-negative")
        if self.refinement_factor < 2:
            raise ValueError("refinement_factor must be at least 2")


@dataclass(frozen=True)
class NumericsConfig:
    FD_STEP: float = 1e-3
    SAMPLE_COUNT: int = 1000
    SEED: int = 42
    LAMBDA_MAX_EXHAUSTIVE: int = 10**6
    SAMPLING_TOLERANCE: float = 1e-12
    REFLECTION_TOLERANCE: float = 1e-12
    HYPERBOLA_TOLERANCE: float = 1e-3
    HYPERBOLA_RESOLUTION: int = 2048
    FUNCTIONS_PER_EIGENSPACE: int = 5


@dataclass(frozen=True)
class RenderConfig:
    WIDTH: int = 512
    HEIGHT: int = 512
    PALETTE: str = "sign"


@dataclass
class RuntimeConfig:
    threads: int = field(default_factory=lambda: max(1, int(os.environ.get("NODAL_THREADS", "1") or 1)))
    log_dir: str = field(default_factory=lambda: os.environ.get("NODAL_LOG_DIR", "logs"))
    OUTPUT_FOLDER: str = "output"

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


@dataclass
class Config:
    """Ambient settings (never change a numerical result)"""

    # Logging
    log_level: str

    # Paths
    output_dir: Path

    # Runner
    check_timeout_seconds: int

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables"""
        return cls(
            log_level=os.getenv("CONELAB_LOG_LEVEL", "INFO").upper(),
            output_dir=Path(os.getenv("CONELAB_OUTPUT_DIR", "results")),
            check_timeout_seconds=int(os.getenv("CONELAB_CHECK_TIMEOUT", "600")),
        )


# Global config instance
cfg = Config.from_env()

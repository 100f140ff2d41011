"""Environment configuration for the array design toolkit."""
import os
from typing import Any, Dict
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Process-wide settings read from the environment (or a .env file)."""

    # Logging
    LOG_LEVEL: str = os.getenv('LOG_LEVEL', 'INFO')
    LOG_DIR: str = os.getenv('LOG_DIR', 'logs')
    LOG_TO_FILE: bool = os.getenv('LOG_TO_FILE', 'true').lower() == 'true'

    # Outputs
    OUTPUT_DIR: str = os.getenv('OUTPUT_DIR', 'results')

    # Execution
    THREADS: int = int(os.getenv('THREADS', '1'))
    EXHAUSTIVE_LIMIT: int = int(float(os.getenv('EXHAUSTIVE_LIMIT', '2e6')))

    # Verification suites
    VERIFY_TRIALS: int = int(os.getenv('VERIFY_TRIALS', '1000'))
    VERIFY_INSTANCES: int = int(os.getenv('VERIFY_INSTANCES', '20'))

    @classmethod
    def to_dict(cls) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            key: value for key, value in cls.__dict__.items()
            if key.isupper() and not callable(value)
        }

    @classmethod
    def validate(cls) -> bool:
        """Validate configuration."""
        if cls.LOG_LEVEL.upper() not in ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']:
            raise ValueError(f"LOG_LEVEL must be a logging level name, got {cls.LOG_LEVEL!r}")

        if cls.THREADS < 1:
            raise ValueError("THREADS must be at least 1")

        if cls.EXHAUSTIVE_LIMIT < 1:
            raise ValueError("EXHAUSTIVE_LIMIT must be positive")

        if cls.VERIFY_TRIALS < 1 or cls.VERIFY_INSTANCES < 1:
            raise ValueError("VERIFY_TRIALS and VERIFY_INSTANCES must be positive")

        return True

import os
from typing import Optional

from dotenv import load_dotenv

# a local .env may override ILPSAT_* and OTEL_* defaults
load_dotenv()


# --------------------
# ENV HELPERS
# --------------------
def env_bool(key: str, default: bool) -> bool:
    return os.getenv(key, str(default)).lower() in ("1", "true", "yes", "on")


def env_int(key: str, default: int) -> int:
    value = os.getenv(key)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"environment variable {key} must be an integer, got {value!r}") from None


def env_str(key: str, default: Optional[str]) -> Optional[str]:
    return os.getenv(key, default)

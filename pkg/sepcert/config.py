"""Runtime settings read from the environment (and an optional .env file)."""

import os
from typing import Iterable, Literal
from pydantic import BaseModel, Field

try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass


ENV_PREFIX = "SEPCERT_"


class Settings(BaseModel):
    tol: float = Field(default=1e-9, gt=0.0, le=1e-3)
    seed: int = Field(default=0, ge=0, le=2**63 - 1)
    threads: int = Field(default=1, ge=1, le=256)
    mc_samples: int = Field(default=0, ge=0)
    epsilon: float = Field(default=0.1, gt=0.0, le=0.25)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"


def load_settings(skip: Iterable[str] = ()) -> Settings:
    """
    Build Settings from SEPCERT_* environment variables.

    Unset variables, and the fields named in ``skip``, fall back to the model
    defaults; bad values raise pydantic.ValidationError.
    """
    values = {}
    for name in Settings.model_fields:
        if name in skip:
            continue
        raw = os.environ.get(ENV_PREFIX + name.upper())
        if raw is not None and raw != "":
            values[name] = raw.upper() if name == "log_level" else raw
    return Settings.model_validate(values)

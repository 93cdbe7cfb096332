import logging
import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

# Environment variable -> settings field
ENV_VARS = {
    "HEROIX_MAX_N": "max_n",
    "HEROIX_CANONICAL_MAX_N": "canonical_max_n",
    "HEROIX_CHROMATIC_MAX_N": "chromatic_max_n",
    "HEROIX_EMBED_NODE_LIMIT": "embed_node_limit",
    "HEROIX_FOREST_MAX_N": "forest_max_n",
    "HEROIX_JEWEL_MAX_A": "jewel_max_a",
    "HEROIX_SEARCH_NODE_LIMIT": "search_node_limit",
    "HEROIX_REFUTER_NODE_LIMIT": "refuter_node_limit",
    "HEROIX_VERIFY_BUDGET_SEC": "verify_budget_sec",
    "HEROIX_LOG_LEVEL": "log_level",
    "HEROIX_D_MAX_N": "d_max_n",
    "HEROIX_A_MAX_N": "a_max_n",
}

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class HeroixSettings(BaseModel):
    """Validated configuration knobs."""

    max_n: int = Field(default=8, ge=0)
    canonical_max_n: int = Field(default=12, ge=1)
    chromatic_max_n: int = Field(default=24, ge=1)
    embed_node_limit: int = Field(default=5_000_000, ge=1)
    forest_max_n: int = Field(default=9, ge=1)
    jewel_max_a: int = Field(default=16, ge=1)
    search_node_limit: int = Field(default=2_000_000, ge=1)
    refuter_node_limit: int = Field(default=200_000_000, ge=1)
    verify_budget_sec: float = Field(default=600.0, gt=0)
    log_level: str = "WARNING"
    d_max_n: int = Field(default=12, ge=1)
    a_max_n: int = Field(default=6, ge=1)

    @field_validator("log_level")
    @classmethod
    def check_log_level(cls, value):
        level = value.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}")
        return level


class SettingsManager:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(SettingsManager, cls).__new__(cls)
            cls._instance._initialize()
        return cls._instance

    def _initialize(self):
        """Load settings from the environment (and a .env file if present)."""
        load_dotenv()
        overrides = {}
        for env_name, field in ENV_VARS.items():
            raw = os.getenv(env_name)
            if raw is not None and raw.strip():
                overrides[field] = raw.strip()
        self._settings = HeroixSettings(**overrides)

    def get(self):
        """
        Get the active settings.

        Returns:
            HeroixSettings: Current settings
        """
        return self._settings

    def update(self, **overrides):
        """
        Replace selected settings, re-validating the result.

        Args:
            **overrides: Field names and their new values

        Returns:
            HeroixSettings: The settings that were active before the update
        """
        previous = self._settings
        self._settings = HeroixSettings(**{**previous.model_dump(), **overrides})
        return previous

    def restore(self, settings):
        """
        Reinstate a settings object returned by update().

        Args:
            settings (HeroixSettings): Settings to activate
        """
        self._settings = settings

    def reload(self):
        """Re-read the environment, discarding runtime overrides."""
        self._initialize()
        return self._settings

    def configure_logging(self, verbose=False):
        """
        Configure the root logger once for command-line use.

        Args:
            verbose (bool): Force INFO level regardless of HEROIX_LOG_LEVEL
        """
        level = logging.INFO if verbose else getattr(logging, self._settings.log_level)
        logging.basicConfig(
            level=level,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        logging.getLogger().setLevel(level)


def get_settings():
    """Shortcut for SettingsManager().get()."""
    return SettingsManager().get()

"""Environment settings (PLAP_* variables and an optional .env file)."""
from pathlib import Path
from typing import Literal

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class PlapSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="PLAP_", env_file=".env", extra="ignore")

    output_dir: Path = Path("runs")
    log_level: str = "INFO"
    log_format: Literal["json", "console"] = "json"

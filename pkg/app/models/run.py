"""Command-line run configuration."""
from typing import Optional
from pydantic import BaseModel, Field, model_validator
from enum import Enum

from app.config import settings
from app.geometry.quadform import parse_form


class Command(str, Enum):
    CONSTRUCT = "construct"
    VERIFY = "verify"
    CLASSIFY = "classify"
    DEMO = "demo"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RunConfig(BaseModel):
    """Validated inputs of one CLI invocation."""

    command: Command
    dim: Optional[int] = Field(default=None, ge=2)
    grid_size: Optional[int] = Field(default=None, ge=3)
    prime: Optional[int] = None
    # verify falls back to the form stored in the file
    form_spec: Optional[str] = None
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    report_path: Optional[str] = None
    format: Optional[OutputFormat] = None
    seed: int = Field(default_factory=lambda: settings.default_seed)
    threads: int = Field(default_factory=lambda: settings.verify_threads, ge=1)

    @model_validator(mode="after")
    def check_command(self) -> "RunConfig":
        if self.command == Command.CONSTRUCT:
            if self.dim is None:
                raise ValueError("construct needs --dim")
            if (self.grid_size is None) == (self.prime is None):
                raise ValueError("construct needs exactly one of --n (grid) or --p (field)")
        if self.command == Command.CLASSIFY and (self.dim is None or self.prime is None):
            raise ValueError("classify needs --dim and --p")
        if self.command == Command.VERIFY and self.input_path is None:
            raise ValueError("verify needs an input file")
        if self.command != Command.VERIFY:
            if self.form_spec is None:
                self.form_spec = "sphere"
            if self.dim is not None:
                parse_form(self.form_spec, self.dim)
        return self
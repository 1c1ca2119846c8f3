"""
Run configuration shared by the CLI commands.

Values come from, in increasing priority: field defaults, environment
variables named ``CASCADE_INFLUENCE_<FIELD>``, and explicit CLI flags.
"""
import os
from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, Field, ValidationError

from src.cascade.divergence import DEFAULT_SMOOTHING
from src.cascade.metrics import DEFAULT_BASELINE_REPLICATES, DEFAULT_MIN_COORDINATED, DEFAULT_MIN_NODES
from src.errors import InvalidInputError
from src.models import DistributionKind, OutputFormat
from src.oracle.enumerator import DEFAULT_MAX_COMBINATIONS, DEFAULT_MAX_NODES

ENV_PREFIX = "CASCADE_INFLUENCE_"


class RunConfig(BaseModel):
    """Settings of one CLI run; the seed is echoed into every artifact."""
    seed: int = Field(0, ge=0, lt=2 ** 64, description="Master random seed")
    max_enum_nodes: int = Field(DEFAULT_MAX_NODES, ge=1, description="Largest tree enumerated over all labellings")
    max_combinations: int = Field(DEFAULT_MAX_COMBINATIONS, ge=1, description="Largest C(n, k) enumerated")
    min_nodes: int = Field(DEFAULT_MIN_NODES, ge=1, description="Smallest cascade kept by the filter")
    min_coordinated: int = Field(DEFAULT_MIN_COORDINATED, ge=0, description="Fewest 1-nodes kept by the filter")
    baseline_replicates: int = Field(DEFAULT_BASELINE_REPLICATES, ge=1, description="Random labellings per cascade")
    bins: Optional[int] = Field(None, ge=1, description="Histogram bins; None for unit-width bins")
    smoothing: float = Field(DEFAULT_SMOOTHING, gt=0, description="Mass added to empty baseline bins")
    distribution: DistributionKind = Field(DistributionKind.INFLUENCE, description="Values compared by KL")
    output_format: OutputFormat = Field(OutputFormat.JSON, description="Format of command output")

    @classmethod
    def from_sources(
        cls, overrides: Optional[Mapping[str, Any]] = None, environ: Optional[Mapping[str, str]] = None
    ) -> "RunConfig":
        """
        Merge defaults, environment variables and explicit overrides.

        Args:
            overrides: field values given on the command line; ``None`` values
                are ignored
            environ: environment mapping, ``os.environ`` by default

        Raises:
            InvalidInputError: if a value does not validate
        """
        environ = os.environ if environ is None else environ
        values: Dict[str, Any] = {}
        for name in cls.model_fields:
            key = ENV_PREFIX + name.upper()
            if key in environ:
                values[name] = environ[key]
        for name, value in (overrides or {}).items():
            if value is not None:
                values[name] = value
        try:
            return cls.model_validate(values)
        except ValidationError as exc:
            first = exc.errors()[0]
            where = ".".join(str(part) for part in first["loc"])
            raise InvalidInputError(f"invalid configuration value for '{where}': {first['msg']}") from exc

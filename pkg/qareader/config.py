"""
Pipeline configuration. Values come from the model defaults, optionally
overridden by a YAML file, optionally overridden by command-line flags.
"""
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from qareader.summarizer import PoolingMode


class ConfigError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


class TrainingProvenance(BaseModel):
    """
    Training hyperparameters of the original experiments, kept for the
    record. Nothing in this package trains, so none of them has any effect.
    """

    model_config = ConfigDict(extra="forbid")

    learning_rate: float = 0.001
    gradient_clip_norm: float = 5.0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    dropout: list[float] = Field(default=[0.1, 0.2, 0.3, 0.4, 0.5])


class PipelineConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", protected_namespaces=())

    embedding_dim: int = 300
    doc_cap: int = 500
    question_cap: int = 35
    truncate: bool = False
    hidden_size: int = 200
    pooling: PoolingMode = PoolingMode.MAX
    report_both_modes: bool = True
    budgets: list[int] = Field(default=[100, 150, 200, 300, 400, 500])
    max_span_len: int = 15
    seed: int = 0
    sentinel: bool = False
    model: str = "coattention"
    fusion: bool = True
    summarize: bool = False
    summary_budget: int = 200
    training: TrainingProvenance = Field(default_factory=TrainingProvenance)

    @field_validator(
        "embedding_dim", "doc_cap", "question_cap", "hidden_size", "summary_budget"
    )
    @classmethod
    def positive(cls, value):
        if value <= 0:
            raise ValueError(f"must be positive, got {value}")
        return value

    @field_validator("max_span_len", "seed")
    @classmethod
    def not_negative(cls, value):
        if value < 0:
            raise ValueError(f"must not be negative, got {value}")
        return value

    @field_validator("budgets")
    @classmethod
    def increasing_budgets(cls, value):
        if not value:
            raise ValueError("at least one budget is needed")
        if any(b <= 0 for b in value):
            raise ValueError("budgets must be positive")
        if any(a >= b for a, b in zip(value, value[1:])):
            raise ValueError(f"budgets must be strictly increasing, got {value}")
        return value

    @field_validator("model")
    @classmethod
    def known_model(cls, value):
        if value not in ("coattention", "match_lstm"):
            raise ValueError(f"model must be coattention or match_lstm, got [{value}]")
        return value

    @property
    def pointer_input_dim(self):
        """Width of the rows the answer pointer reads"""

        if self.model == "coattention" and not self.fusion:
            return 3 * self.hidden_size

        return 2 * self.hidden_size

    @property
    def pooling_modes(self):
        if self.report_both_modes:
            return [PoolingMode.MAX, PoolingMode.MEAN]
        return [self.pooling]

    def with_overrides(self, **overrides):
        """New config with the non-None overrides applied and validated"""

        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return build_config(values)


def build_config(values, source="configuration"):
    if values is not None and not isinstance(values, dict):
        raise ConfigError(f"{source} must hold a mapping")

    try:
        return PipelineConfig(**(values or {}))
    except ValidationError as e:
        raise ConfigError(f"Invalid {source}: {e}")


def load_config(value):
    "Builds a config from a YAML string"
    try:
        values = yaml.safe_load(value)
    except yaml.YAMLError as e:
        raise ConfigError(f"Configuration is not valid YAML: {e}")

    return build_config(values)


def open_config(file_name):
    """
    Loads a config from a YAML file
    """

    with open(file_name, "r", encoding="utf8") as yaml_file:
        try:
            values = yaml.safe_load(yaml_file)
        except yaml.YAMLError as e:
            raise ConfigError(f"Config file [{file_name}] is not valid YAML: {e}")

    return build_config(values, f"config file [{file_name}]")

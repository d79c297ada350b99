"""Pydantic model for the Siamese network configuration."""

from typing import List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ModelConfig(BaseModel):
    """Architecture and windowing of the spatio-temporal Siamese encoder."""

    model_config = ConfigDict(extra="forbid")

    window: int = Field(default=50, ge=1, description="k, window length in samples")
    step: int = Field(default=15, ge=1, description="Hop between windows in samples")
    max_length: int = Field(default=500, ge=1, description="L_max, padded length")
    d_model: int = Field(default=256, ge=1)
    heads: int = Field(default=16, ge=1)
    lstm_layers: int = Field(default=2, ge=1)
    dropout: float = Field(default=0.2, ge=0.0, lt=1.0)
    num_classes: int = Field(default=5, ge=2)
    conv_spec: List[Tuple[int, int]] = Field(
        default_factory=lambda: [(32, 5), (64, 5)],
        description="(out_channels, kernel) per conv layer",
    )
    classifier_hidden: int = Field(default=256, ge=1)
    padding: Literal["front", "back"] = "front"
    use_spatial: bool = True
    use_temporal: bool = True
    use_attention: bool = True

    @model_validator(mode="after")
    def _check(self) -> "ModelConfig":
        if self.d_model % self.heads:
            raise ValueError("d_model must be divisible by heads")
        if self.window > self.max_length:
            raise ValueError("window must not exceed max_length")
        if self.use_spatial and self.window >> len(self.conv_spec) < 1:
            raise ValueError("window too short for the pooling stages of conv_spec")
        if any(c < 1 or k < 1 or k % 2 == 0 for c, k in self.conv_spec):
            raise ValueError("conv_spec needs positive channels and odd kernels")
        return self

    @property
    def n_windows(self) -> int:
        return (self.max_length - self.window) // self.step + 1

    @property
    def d_head(self) -> int:
        return self.d_model // self.heads

    @property
    def pooled_size(self) -> int:
        return self.n_windows * self.d_model

from django.db.models import TextChoices
from django.utils.translation import gettext_lazy as _
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SelectionMode(TextChoices):
    SEMANTIC = "semantic", _("Similarity interval")
    SYNTACTIC = "syntactic", _("Occurrence triggering")


class SelectionParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    sim_low: float = Field(default=0.4, ge=-1.0, le=1.0)
    sim_high: float = Field(default=1.0, ge=-1.0, le=1.0)
    expand_threshold: float = Field(default=0.6, ge=-1.0, le=1.0)
    sine_tolerance: float = Field(default=1.5, ge=1.0)
    sine_depth: int = Field(default=2, ge=1)
    max_axioms: int = Field(default=2000, ge=1)
    # unembedded symbols pass the interval test instead of failing it
    oov_pass: bool = False
    # binary (relation) symbols skip the interval test
    exempt_relations: bool = False

    @model_validator(mode="after")
    def _check_interval(self):
        if self.sim_low > self.sim_high:
            raise ValueError(f"sim_low ({self.sim_low}) must not exceed sim_high ({self.sim_high})")
        return self

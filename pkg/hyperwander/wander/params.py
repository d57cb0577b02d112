from django.db.models import TextChoices
from django.utils.translation import gettext_lazy as _
from pydantic import BaseModel, ConfigDict, Field

from ..engine.tableau import Limits
from ..selection.params import SelectionMode, SelectionParams


class ClusterPick(TextChoices):
    MIDDLE = "middle", _("Middle of the ranking")
    NEAREST = "nearest", _("Most similar to the context")
    FARTHEST = "farthest", _("Least similar to the context")
    INDEX = "index", _("Fixed rank")


class ClusterSimilarity(TextChoices):
    MEAN = "mean", _("Mean pairwise cosine")
    CENTROID = "centroid", _("Cosine of centroids")


class WanderParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    selection: SelectionParams = Field(default_factory=SelectionParams)
    selection_mode: SelectionMode = SelectionMode.SEMANTIC
    limits: Limits = Field(default_factory=Limits)
    max_rounds: int = Field(default=10, ge=1)
    cluster_divisor: int = Field(default=4, ge=1)
    cluster_pick: ClusterPick = ClusterPick.MIDDLE
    # rank used by ClusterPick.INDEX, clamped to the number of clusters
    pick_index: int = Field(default=0, ge=0)
    cluster_similarity: ClusterSimilarity = ClusterSimilarity.MEAN
    seed: int = Field(default=42, ge=0)
    accumulate_visited: bool = True

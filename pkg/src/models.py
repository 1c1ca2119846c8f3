"""
Data models for the cascade influence toolkit.
"""
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.tree.directed_tree import DirectedTree
from src.tree.influence import Labelling, cardinality, label_array


class InputFormat(str, Enum):
    """Supported cascade file layouts."""
    JSONL = "jsonl"
    CSV = "csv"


class OutputFormat(str, Enum):
    """Formats for command output."""
    JSON = "json"
    CSV = "csv"


class DistributionKind(str, Enum):
    """What per-cascade value the distribution comparison is built from."""
    INFLUENCE = "influence"
    RHO = "rho"


class SimulationMode(str, Enum):
    """Which growth experiment to run."""
    VS_N = "vs-n"
    VS_HEIGHT = "vs-height"


class InfluenceReport(BaseModel):
    """Optimal influence of a tree with the smallest set of 1-nodes reaching it."""
    id: Optional[str] = Field(None, description="Identifier of the tree, when it came from a file")
    n: int = Field(..., ge=1, description="Number of nodes in the tree")
    influence: int = Field(..., ge=0, description="Influence I of the labelling")
    k: int = Field(..., ge=0, description="Number of 1-nodes")
    one_nodes: List[int] = Field(default_factory=list, description="Ids of the 1-nodes, increasing")

    @model_validator(mode="after")
    def _consistent(self) -> "InfluenceReport":
        if self.influence > max(self.n - 1, 0):
            raise ValueError("influence cannot exceed n - 1")
        if self.k > self.n or len(self.one_nodes) != self.k:
            raise ValueError("one_nodes must contain exactly k of the n nodes")
        return self


class DpAnnotation(BaseModel):
    """Per-node memo of the optimal dynamic program."""
    mi_yes: List[int] = Field(..., description="Best subtree influence when the node is a 1-node")
    mi_no: List[int] = Field(..., description="Best subtree influence when the node is a 0-node")

    def max_influence(self, v: int) -> int:
        """Best influence of the subtree rooted at ``v``."""
        return max(self.mi_yes[v], self.mi_no[v])


class SwitchMove(BaseModel):
    """Label exchange between a 1-node and a 0-node."""
    from_node: int = Field(..., ge=0, description="Node labelled 1 before the move")
    to_node: int = Field(..., ge=0, description="Node labelled 0 before the move")
    delta: int = Field(..., description="Change in influence caused by the move")


class PhaseHistogram(BaseModel):
    """Number of labellings falling in each (m10, m11) cell."""
    n: int = Field(..., ge=1, description="Tree size")
    k: Union[int, Literal["all"]] = Field(..., description="Labelling cardinality, or 'all'")
    cells: Dict[Tuple[int, int], int] = Field(default_factory=dict, description="(m10, m11) -> count")

    @model_validator(mode="after")
    def _cells_fit_tree(self) -> "PhaseHistogram":
        for (m10, m11), count in self.cells.items():
            if m10 < 0 or m11 < 0 or m10 + m11 > self.n - 1 or count < 1:
                raise ValueError(f"cell ({m10}, {m11}) with count {count} is impossible for n={self.n}")
        return self

    def total(self) -> int:
        return sum(self.cells.values())

    def max_m10(self) -> int:
        return max(m10 for m10, _ in self.cells)


class GrowthCurvePoint(BaseModel):
    """Mean and spread of I* and k* over the replicates at one x (n or height)."""
    x: int = Field(..., description="Tree size or height")
    mean_I_star: float
    sd_I_star: float = Field(..., ge=0)
    mean_k_star: float
    sd_k_star: float = Field(..., ge=0)
    replicates: int = Field(..., ge=1)


class FitResult(BaseModel):
    """Ordinary least-squares line through a growth curve."""
    slope: float
    intercept: float
    r_squared: float = Field(..., ge=0, le=1)
    p_value: float
    stderr: float = Field(0.0, description="Standard error of the slope")
    degenerate: bool = Field(False, description="True when the curve had too few points to fit")


class HeightTrend(BaseModel):
    """Shape of the mean I* curve against tree height."""
    spearman_rho: float = Field(..., description="Rank correlation between height and mean I*")
    knee_x: Optional[int] = Field(None, description="Height where the curve bends the most")


class CascadeRecord(BaseModel):
    """An observed cascade: tree, labelling of coordinated nodes, identifier."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    id: str = Field(..., min_length=1)
    tree: DirectedTree
    observed: Labelling

    @field_validator("observed", mode="before")
    @classmethod
    def _as_tuple(cls, value):
        return tuple(int(x) for x in value)

    @model_validator(mode="after")
    def _labels_match_tree(self) -> "CascadeRecord":
        label_array(self.tree, self.observed)
        return self

    @property
    def n(self) -> int:
        return self.tree.node_count

    @property
    def k(self) -> int:
        return cardinality(self.observed)


class CascadeMetrics(BaseModel):
    """Observed influence of one cascade against its optimal and greedy baselines."""
    id: str
    n: int = Field(..., ge=1)
    k_obs: int = Field(..., ge=0)
    I_obs: int = Field(..., ge=0)
    I_star: int = Field(..., ge=0)
    k_star: int = Field(..., ge=0)
    I_k: int = Field(..., ge=0, description="Influence reached by the greedy placement with k_obs nodes")
    rho: float = Field(..., ge=0, le=1)
    rho_k: float = Field(..., ge=0, description="May exceed 1: the greedy placement is not optimal")
    I_random: Optional[float] = Field(None, description="Mean influence of random placements of k_obs nodes")


class FilterReport(BaseModel):
    """How many records a filter pass kept and why the others were dropped."""
    total: int = 0
    kept: int = 0
    removed_too_small: int = 0
    removed_no_coordinated: int = 0
    removed_undefined_ratio: int = Field(0, description="Kept by the thresholds but skipped: rho or rho_k undefined")


class DistributionComparison(BaseModel):
    """KL divergences of the observed distribution from the greedy and random ones."""
    kl_real_vs_greedy: float = Field(..., ge=0)
    kl_real_vs_random: float = Field(..., ge=0)
    bin_edges: List[float] = Field(..., description="Common histogram bin edges")
    kind: DistributionKind = Field(DistributionKind.INFLUENCE, description="Values the histograms are built from")
    smoothing: float = Field(1e-4, gt=0)
    log_base: str = Field("e", description="Logarithm used in the divergence")


class AnalysisResult(BaseModel):
    """Full output of the cascade analysis pipeline."""
    seed: int
    filter: FilterReport
    metrics: List[CascadeMetrics] = Field(default_factory=list)
    comparison: Optional[DistributionComparison] = None


class GreedyReport(BaseModel):
    """Greedy placement of a fixed number of 1-nodes."""
    id: Optional[str] = Field(None, description="Identifier of the tree, when it came from a file")
    n: int = Field(..., ge=1)
    k: int = Field(..., ge=0, description="Budget of 1-nodes")
    influence: int = Field(..., ge=0, description="Influence I_k of the placement")
    one_nodes: List[int] = Field(default_factory=list)


class OptimalResponse(BaseModel):
    """Output of the optimal command."""
    seed: int
    results: List[InfluenceReport] = Field(default_factory=list)


class GreedyResponse(BaseModel):
    """Output of the greedy command."""
    seed: int
    results: List[GreedyReport] = Field(default_factory=list)


class SimulationSummary(BaseModel):
    """Fits and trend statistics of a growth experiment."""
    seed: int
    mode: SimulationMode
    model: str = Field(..., description="Random tree model")
    replicates: int = Field(..., ge=1)
    fit_I_star: Optional[FitResult] = None
    fit_k_star: Optional[FitResult] = None
    trend: Optional[HeightTrend] = None
    points: List[GrowthCurvePoint] = Field(default_factory=list, description="Curve the fits were computed from")


class PhaseResponse(BaseModel):
    """Output of the phase command."""
    seed: int
    id: Optional[str] = None
    n: int = Field(..., ge=1)
    k: int = Field(..., ge=0)
    max_influence: int = Field(..., ge=0, description="Largest m10 over the enumerated labellings")
    cells: List[Tuple[int, int, int]] = Field(default_factory=list, description="Rows (m10, m11, count)")

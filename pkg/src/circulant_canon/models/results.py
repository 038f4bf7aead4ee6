"""
Result and request records shared by the algorithms, the experiment harness, the command
line and the MCP tools.
"""

from enum import Enum
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from circulant_canon.core import Digraph, Labeling, relabel

CanonMode = Literal["digraph", "graph", "full", "naive", "walk"]
SampleKind = Literal["cayley", "unlabeled", "labeled"]
ExperimentName = Literal[
    "simple_spectrum",
    "3p_collision",
    "saturated",
    "canon_pipeline",
    "multiplier_free",
    "ccr",
]


class GiveUpReason(str, Enum):
    """Why a canonization algorithm stopped without a labeling."""

    NOT_DISCRETE = "not-discrete"
    NO_PAIR_CLASS = "no-pair-class"
    LABELS_NOT_DISTINCT = "labels-not-distinct"
    NO_DISCRETE_CANDIDATE = "no-discrete-candidate"
    NO_CYCLE_CLASS = "no-cycle-class"
    NOT_AUTOMORPHISM = "not-automorphism"


class CanonResult(BaseModel):
    """Outcome of one canonization run. On success ``canonical_form == relabel(input, labeling)``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    outcome: Literal["success", "give-up"]
    labeling: Labeling | None = None
    canonical_form: Digraph | None = None
    reason: GiveUpReason | None = None

    @model_validator(mode="after")
    def _check_outcome(self):
        if self.outcome == "success" and (self.labeling is None or self.canonical_form is None):
            raise ValueError("a successful result needs a labeling and a canonical form")
        if self.outcome == "give-up" and self.reason is None:
            raise ValueError("a give-up result needs a reason")
        return self

    @classmethod
    def success(cls, x: Digraph, labeling: Labeling) -> "CanonResult":
        return cls(outcome="success", labeling=labeling, canonical_form=relabel(x, labeling))

    @classmethod
    def give_up(cls, reason: GiveUpReason) -> "CanonResult":
        return cls(outcome="give-up", reason=reason)

    @property
    def succeeded(self) -> bool:
        return self.outcome == "success"


class SampleModel(BaseModel):
    """One of the three random circulant models, with its seed."""

    model_config = ConfigDict(frozen=True)

    kind: SampleKind = "cayley"
    directed: bool = True
    n: int = Field(ge=1)
    seed: int = Field(default=0, ge=0)


class ExperimentSpec(BaseModel):
    """A Monte Carlo (or exhaustive) experiment over a range of orders."""

    model_config = ConfigDict(frozen=True)

    experiment: ExperimentName
    n_values: tuple[int, ...] = Field(min_length=1, description="Orders to run, in output order.")
    trials: int = Field(default=1000, ge=1, description="Random trials per order.")
    directed: bool = Field(default=True, description="Digraph model when true, graph model otherwise.")
    model: SampleKind = Field(default="cayley", description="Sampling model of the trials.")
    seed: int = Field(default=0, ge=0)
    out: Path | None = Field(default=None, description="CSV destination; standard output when unset.")
    exhaustive: bool = Field(default=False, description="Enumerate every connection set instead of sampling.")
    record_timings: bool = Field(default=False, description="Record per-trial timings (breaks byte-identical output).")
    constant: float = Field(default=3.0, gt=0, description="C in the failure bound f(n) <= C n^(-1/2).")
    rel_tol: float = Field(default=0.1, ge=0, description="Relative tolerance of the collision experiment.")
    relabelings: int = Field(default=1, ge=1, description="Random relabelings per instance in canonicity checks.")
    max_slope: float | None = Field(default=None, gt=0, description="Largest accepted log-log runtime slope.")
    jobs: int | None = Field(default=None, ge=1, description="Worker processes; settings default when unset.")

    @field_validator("n_values", mode="before")
    @classmethod
    def _check_orders(cls, value):
        values = tuple(int(n) for n in value)
        if any(n < 1 for n in values):
            raise ValueError("orders must be positive")
        return values


class TrialRecord(BaseModel):
    """The verdicts of one trial; unset fields were not computed."""

    model_config = ConfigDict(frozen=True)

    n: int
    trial: int
    seed: int
    connection_set: str = ""
    simple_spectrum: bool | None = None
    saturated: bool | None = None
    distinct_eigenvalues: int | None = None
    walk_rank: int | None = None
    walk_discrete: bool | None = None
    walk_saturated: bool | None = None
    collision: bool | None = None
    equal_halves: bool | None = None
    canon_success: bool | None = None
    canon_consistent: bool | None = None
    ccr_success: bool | None = None
    ccr_circulant: bool | None = None
    ccr_consistent: bool | None = None
    firm: bool | None = None
    multiplier_free: bool | None = None
    elapsed_us: float | None = None

    def inconsistencies(self) -> list[str]:
        """Relations between the verdicts of this trial that do not hold."""
        problems = []
        if None not in (self.distinct_eigenvalues, self.walk_rank) and self.distinct_eigenvalues != self.walk_rank:
            problems.append(f"distinct_eigenvalues={self.distinct_eigenvalues} but walk_rank={self.walk_rank}")
        # distinct walk rows do not force a simple or saturated spectrum
        if self.simple_spectrum and self.walk_discrete is False:
            problems.append("simple spectrum but walk rows coincide")
        if self.saturated and self.walk_saturated is False:
            problems.append("saturated spectrum but walk rows not saturated")
        if self.equal_halves and self.collision is False:
            problems.append("equal halves without an eigenvalue collision")
        if self.canon_consistent is False:
            problems.append("canonization differs across relabelings")
        if self.canon_success is False and (self.simple_spectrum or self.saturated):
            problems.append("canonization gave up on a circulant with simple or saturated spectrum")
        if self.ccr_circulant is False:
            problems.append("Cayley representation without circulant adjacency")
        if self.ccr_consistent is False:
            problems.append("Cayley representation differs across relabelings")
        if self.firm and self.ccr_success is False:
            problems.append("no Cayley representation of a firm circulant")
        return problems


class CensusReport(BaseModel):
    """Exhaustive counts of the circulants of one order."""

    model_config = ConfigDict(frozen=True)

    n: int
    directed: bool
    connection_sets: int = Field(description="|Q_n|: connection sets, i.e. Cayley circulants.")
    unlabeled: int = Field(description="Isomorphism classes of circulants.")
    labeled: int = Field(description="Graphs on {0..n-1} isomorphic to a circulant.")
    multiplier_free_sets: int
    multiplier_free_classes: int
    firm_classes: int
    firm_labeled: int

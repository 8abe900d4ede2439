"""Reductions over ingested age/gender model outputs and crowd votes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidDistribution, NoVotes

AGES = np.arange(101, dtype=np.float64)
AGE_GROUPS = ("0-3", "4-12", "13-19", "20-30", "31-45", "46-60", "61-")
# left-closed edges in years; a continuous age a falls in group i if edge[i] <= a < edge[i+1]
AGE_GROUP_EDGES = (0.0, 4.0, 13.0, 20.0, 31.0, 46.0, 61.0, np.inf)
# tie-break order for labels: first listed wins
GENDER_LABELS = ("female", "male")
GENDER_CODES = {"female": 0.0, "male": 1.0}
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class Vote:
    annotator_id: str
    gender: Optional[str] = None
    age_group: Optional[str] = None
    age_value: Optional[float] = None
    weight: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"annotator weight {self.weight} outside [0, 1]")
        if self.gender is not None and self.gender not in GENDER_LABELS:
            raise ValueError(f"unknown gender label {self.gender!r}")
        if self.age_group is not None and self.age_group not in AGE_GROUPS:
            raise ValueError(f"unknown age group {self.age_group!r}")


@dataclass
class AuxAnnotations:
    age_softmax: Optional[np.ndarray] = None
    gender_score: Optional[float] = None
    votes: list = field(default_factory=list)


@dataclass(frozen=True)
class VoteResult:
    gender_label: Optional[str]
    age_group: Optional[str]
    age_value: Optional[float]
    gender_tie: bool = False
    age_group_tie: bool = False


def age_group_of(age: float) -> str:
    if not age >= 0:
        raise ValueError(f"age must be non-negative, got {age}")
    i = int(np.searchsorted(AGE_GROUP_EDGES, age, side="right")) - 1
    return AGE_GROUPS[i]


def expected_age(p, tol: float = 1e-3) -> float:
    """Expectation of a softmax over the years 0..100."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (101,):
        raise InvalidDistribution(f"expected 101 probabilities, got shape {p.shape}")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidDistribution("probabilities must be finite and non-negative")
    if abs(p.sum() - 1.0) > tol:
        raise InvalidDistribution(f"probabilities sum to {p.sum():.6f}")
    return float(p @ AGES)


def _weighted_argmax(pairs, order):
    totals = {label: 0.0 for label in order}
    for label, w in pairs:
        totals[label] += w
    best = max(totals.values())
    # totals within rounding of the best count as tied, so 0.3 + 0.3 ties 0.6
    winners = [label for label in order if totals[label] >= best - TIE_RTOL * best]
    return winners[0], len(winners) > 1


def weighted_vote(votes: Sequence[Vote]) -> VoteResult:
    """Aggregate annotator votes, each weighted by its annotator weight.

    Labels are chosen by the largest summed weight; ties go to the first
    label in ``GENDER_LABELS`` / ``AGE_GROUPS`` and are flagged. The age
    value is the weight-weighted mean (plain mean if all weights are zero).
    If no vote carries an age group, it is derived from the age value.
    """
    votes = list(votes)
    if not votes:
        raise NoVotes("no annotator votes")
    g = [(v.gender, v.weight) for v in votes if v.gender is not None]
    gender, gender_tie = _weighted_argmax(g, GENDER_LABELS) if g else (None, False)

    ages = [(v.age_value, v.weight) for v in votes if v.age_value is not None]
    age_value = None
    if ages:
        vals = np.array([a for a, _ in ages], dtype=np.float64)
        w = np.array([w for _, w in ages], dtype=np.float64)
        age_value = float(vals @ w / w.sum()) if w.sum() > 0 else float(vals.mean())

    groups = [(v.age_group, v.weight) for v in votes if v.age_group is not None]
    if groups:
        group, group_tie = _weighted_argmax(groups, AGE_GROUPS)
    elif age_value is not None:
        group, group_tie = age_group_of(age_value), False
    else:
        group, group_tie = None, False
    return VoteResult(gender, group, age_value, gender_tie, group_tie)

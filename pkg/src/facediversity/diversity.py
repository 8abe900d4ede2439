"""Histogram binning and diversity / evenness statistics per feature dimension.

For a binned distribution p_1..p_S:

* Shannon diversity  H = -sum p_i ln p_i   (0 ln 0 taken as 0)
* Shannon evenness   E = H / ln S
* Simpson diversity  D = 1 / sum p_i^2     (empty bins skipped)
* Simpson evenness   E = D / S

S is the nominal number of bins unless ``s_mode="occupied"``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .annotations import AGE_GROUP_EDGES, AGE_GROUPS
from .errors import EmptyInput


@dataclass(frozen=True)
class EqualWidth:
    bins: int = 6

    def __post_init__(self):
        if self.bins < 1:
            raise ValueError("bins must be >= 1")


@dataclass(frozen=True)
class FixedEdges:
    edges: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float)
        if e.ndim != 1 or len(e) < 2 or np.any(np.diff(e) <= 0):
            raise ValueError("edges must be strictly ascending with at least two entries")
        object.__setattr__(self, "edges", tuple(float(x) for x in e))


BinPolicy = Union[EqualWidth, FixedEdges]

# relative spread below which equal-width binning treats the input as constant
CONSTANT_RTOL = 1e-12

AGE_GROUP_POLICY = FixedEdges(AGE_GROUP_EDGES, AGE_GROUPS)
POSE_POLICY = FixedEdges((-1.5, -0.5, 0.5, 1.5), ("tilted left", "frontal", "tilted right"))
BINARY_POLICY = FixedEdges((-0.5, 0.5, 1.5), ("female", "male"))


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=float)
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if len(self.edges) != len(self.counts) + 1:
            raise ValueError("need len(edges) == len(counts) + 1")
        if np.any(np.diff(self.edges) <= 0):
            raise ValueError("edges must be strictly ascending")
        if np.any(self.counts < 0):
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def probabilities(self) -> np.ndarray:
        t = self.total
        if t == 0:
            return np.zeros(len(self.counts))
        return self.counts / t

    def to_dict(self) -> dict:
        return {
            "edges": [float(e) for e in self.edges],
            "counts": [int(c) for c in self.counts],
            "probabilities": [float(p) for p in self.probabilities],
        }


@dataclass(frozen=True)
class DiversityScores:
    shannon_h: float
    shannon_e: float
    simpson_d: float
    simpson_e: float
    mean: float
    variance: float


def bin_values(values, policy: BinPolicy = EqualWidth()) -> Histogram:
    """Bin finite values; equal-width bins span [min, max] with the top edge inclusive."""
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise EmptyInput("no values to bin")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    if isinstance(policy, EqualWidth):
        # constant input: numpy centres a unit-width range on the value, so all
        # samples share one bin; spreads of a few ulps count as constant too
        lo, hi = float(v.min()), float(v.max())
        if hi - lo <= CONSTANT_RTOL * max(1.0, abs(lo), abs(hi)):
            v = np.full_like(v, v.mean())
        counts, edges = np.histogram(v, bins=policy.bins)
        return Histogram(edges, counts)
    edges = np.asarray(policy.edges)
    idx = np.searchsorted(edges, v, side="right") - 1
    top = np.isfinite(edges[-1]) & (v == edges[-1])
    idx = np.where(top, len(edges) - 2, idx)
    if np.any(idx < 0) or np.any(idx >= len(edges) - 1):
        bad = v[(idx < 0) | (idx >= len(edges) - 1)]
        raise ValueError(f"{bad.size} value(s) outside fixed bin edges, e.g. {bad[0]}")
    return Histogram(edges, np.bincount(idx, minlength=len(edges) - 1))


def shannon_h(p) -> float:
    p = np.asarray(p, dtype=np.float64)
    p = p[p > 0]
    # + 0.0 turns the -0.0 of a single occupied bin into 0.0
    return float(-np.sum(p * np.log(p))) + 0.0


def simpson_d(p) -> float:
    p = np.asarray(p, dtype=np.float64)
    p = p[p > 0]
    return float(1.0 / np.sum(p * p))


def diversity_scores(h: Histogram, raw_values=None, s_mode: str = "bins") -> DiversityScores:
    if h.total == 0:
        raise EmptyInput("histogram is empty")
    p = h.probabilities
    if s_mode == "bins":
        s = len(p)
    elif s_mode == "occupied":
        s = int(np.count_nonzero(p))
    else:
        raise ValueError(f"unknown s_mode {s_mode!r}")
    H = shannon_h(p)
    D = simpson_d(p)
    if raw_values is None:
        mean = var = math.nan
    else:
        raw = np.asarray(raw_values, dtype=np.float64)
        mean, var = float(np.mean(raw)), float(np.var(raw))
    return DiversityScores(
        shannon_h=H,
        shannon_e=H / math.log(s) if s > 1 else math.nan,
        simpson_d=D,
        simpson_e=D / s,
        mean=mean,
        variance=var,
    )


@dataclass(frozen=True)
class Dimension:
    name: str
    scheme: str
    label: str
    policy: Optional[BinPolicy] = None


def _dims(scheme, pairs, policy=None):
    return [Dimension(n, scheme, label, policy) for n, label in pairs]


CANONICAL_DIMENSIONS: tuple = tuple(
    _dims("Craniofacial Distance", [
        ("n_sto", "n-sto"), ("ps_pi", "ps-pi"), ("or_pi", "or-pi"), ("sn_cprime", "sn-c'"),
        ("sn_sto", "sn-sto"), ("sto_li", "sto-li"), ("cph_cph", "cph-cph"), ("sbal_ls", "sbal-ls"),
    ])
    + _dims("Craniofacial Area", [
        ("tn_n", "tn-n"), ("tn_gn", "tn-gn"), ("n_gn", "n-gn"), ("sn_gn", "sn-gn"),
        ("zy_zy", "zy-zy"), ("go_go", "go-go"), ("en_en", "en-en"), ("en_ex", "en-ex"),
        ("ex_ex", "ex-ex"), ("n_sn", "n-sn"), ("al_al", "al-al"), ("ch_ch", "ch-ch"),
    ])
    + _dims("Craniofacial Ratio", [
        ("facial_index", "(n-gn)/(zy-zy)"), ("mandibular_index", "(sto-gn)/(go-go)"),
        ("intercanthal_index", "(en-en)/(ex-ex)"), ("orbital_width_index", "(ex-en)/(en-en)"),
        ("eye_fissure_index", "(ps-pi)/(ex-en)"), ("nasal_index", "(al-al)/(n-sn)"),
        ("vermilion_height_index", "(ls-sto)/(sto-li)"), ("mouth_face_width_index", "(ch-ch)/(zy-zy)"),
    ])
    + _dims("Facial Symmetry", [
        ("density_difference", "Density difference"),
        ("edge_orientation_similarity", "Edge or. similarity"),
    ])
    + _dims("Facial Contrast", [
        (f"{part}_{ch}", f"{title} {ch} contrast")
        for part, title in (("lips", "Lips"), ("eyes", "Eyes"), ("eyebrows", "Eb"))
        for ch in ("L", "a", "b")
    ])
    + _dims("Skin Color", [("ita", "ITA")])
    + _dims("Age", [("age_pred", "Age prediction")], AGE_GROUP_POLICY)
    + _dims("Gender", [("gender_pred", "Gender prediction")])
    + _dims("Subjective Annotation", [("gender_label", "Gender labeling")], BINARY_POLICY)
    + _dims("Subjective Annotation", [("age_label", "Age labeling")], AGE_GROUP_POLICY)
    + _dims("Pose & Resolution", [("pose_signed", "Pose")], POSE_POLICY)
    + _dims("Pose & Resolution", [("iod", "IOD"), ("box_size", "Face Region Size")])
)

DIMENSION_NAMES = tuple(d.name for d in CANONICAL_DIMENSIONS)


@dataclass(frozen=True)
class BinConfig:
    default_bins: int = 6
    overrides: dict = field(default_factory=dict)
    s_mode: str = "bins"

    def policy_for(self, dim: Dimension) -> BinPolicy:
        if dim.name in self.overrides:
            return self.overrides[dim.name]
        return dim.policy if dim.policy is not None else EqualWidth(self.default_bins)

    def to_dict(self) -> dict:
        def enc(p):
            if isinstance(p, EqualWidth):
                return {"bins": p.bins}
            return {"edges": list(p.edges), "labels": list(p.labels) if p.labels else None}
        return {"default_bins": self.default_bins, "s_mode": self.s_mode,
                "overrides": {k: enc(v) for k, v in sorted(self.overrides.items())}}

    @classmethod
    def from_dict(cls, d: Mapping) -> "BinConfig":
        overrides = {}
        for name, spec in (d.get("overrides") or {}).items():
            if "edges" in spec:
                edges = [math.inf if e in ("inf", None) else float(e) for e in spec["edges"]]
                labels = spec.get("labels")
                overrides[name] = FixedEdges(tuple(edges), tuple(labels) if labels else None)
            else:
                overrides[name] = EqualWidth(int(spec["bins"]))
        return cls(int(d.get("default_bins", 6)), overrides, d.get("s_mode", "bins"))


@dataclass
class DimensionReport:
    dimension: Dimension
    scores: Optional[DiversityScores]
    histogram: Optional[Histogram]
    n_valid: int
    n_excluded: int
    reason: Optional[str] = None


@dataclass
class DiversityReport:
    rows: list
    config: BinConfig

    def row(self, name: str) -> DimensionReport:
        for r in self.rows:
            if r.dimension.name == name:
                return r
        raise KeyError(name)


def _finite(values: Sequence) -> tuple[np.ndarray, int]:
    arr = np.array([math.nan if v is None else float(v) for v in values], dtype=np.float64)
    ok = np.isfinite(arr)
    return arr[ok], int((~ok).sum())


def report(columns: Mapping[str, Sequence], config: BinConfig = BinConfig(),
           dimensions: Sequence[Dimension] = CANONICAL_DIMENSIONS) -> DiversityReport:
    """Score every canonical dimension of a feature table.

    ``columns`` maps dimension name to per-face values; ``None`` or NaN marks
    an invalid cell, which is excluded and counted. Dimensions with no valid
    value are kept as rows without scores.
    """
    rows = []
    for dim in dimensions:
        if dim.name not in columns:
            rows.append(DimensionReport(dim, None, None, 0, 0, "missing column"))
            continue
        vals, excluded = _finite(columns[dim.name])
        if vals.size == 0:
            rows.append(DimensionReport(dim, None, None, 0, excluded, "no valid values"))
            continue
        try:
            hist = bin_values(vals, config.policy_for(dim))
        except ValueError as exc:
            rows.append(DimensionReport(dim, None, None, int(vals.size), excluded, str(exc)))
            continue
        rows.append(DimensionReport(dim, diversity_scores(hist, vals, config.s_mode), hist,
                                    int(vals.size), excluded))
    return DiversityReport(rows, config)

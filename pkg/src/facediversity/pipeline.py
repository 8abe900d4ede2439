"""Dataset-level orchestration: manifest in, feature table and diversity report out.

File formats
------------
manifest (JSON lines), one object per face::

    {"face_id": str, "image_path": str, "bbox": [x, y, w, h],
     "keypoints": [[x, y] * 68], "pose_class": 0..4,
     "mask_path": str?, "age_softmax": [101 floats] | str?,
     "gender_score": float?, "votes": [{"annotator_id", "gender",
     "age_group", "age_value", "weight"}]?}

Relative paths resolve against the manifest's directory. ``age_softmax``
may name a JSON array file or a ``.npy`` file. ``mask_path`` is a
single-channel image with the same size as the source image; non-zero is skin.

Outputs of :func:`run_extract`: ``features.csv`` (fixed header, 6
significant digits, empty cell = invalid), ``features.json`` (lossless
mirror with per-cell error reasons and the config) and ``rejections.csv``.
Outputs of :func:`run_report`: ``report.csv``, ``report.json`` and
``histograms/<dimension>.json``.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image

from . import annotations as ann
from .contrast import OUTER_SCALE, contrast_vector
from .craniofacial import areas, distances, ratios
from .diversity import DIMENSION_NAMES, BinConfig, DiversityReport, report
from .errors import EmptyTable, FaceMetricError, ImageReadError, ManifestParseError
from .geometry import MAPPING_VERSION, FaceRecord, map_keypoints
from .pose import pose_resolution
from .preprocess import DEFAULT_EYE_ANCHORS, DEFAULT_FRAME, QualityPolicy, apply_affine, quality_filter, rectify, warp_affine
from .skin_color import ITA_BIN_WIDTH, MIN_REGION_PIXELS, SMOOTHING_WINDOW, face_ita
from .symmetry import C1, C2, C3, EDGE_THRESHOLD, density_difference, edge_orientation_similarity, rectify_for_symmetry

log = logging.getLogger(__name__)

CONFIG_VERSION = 1
CRANIO = ("distances", "areas", "ratios")


@dataclass(frozen=True)
class PipelineConfig:
    eye_anchors: tuple = tuple(tuple(p) for p in DEFAULT_EYE_ANCHORS)
    frame_size: tuple = DEFAULT_FRAME
    edge_threshold: float = EDGE_THRESHOLD
    orientation_mode: str = "vector"
    contrast_outer_scale: float = OUTER_SCALE
    contrast_mode: str = "mean"
    ita_smoothing_window: int = SMOOTHING_WINDOW
    ita_bin_width: float = ITA_BIN_WIDTH
    ita_min_region_pixels: int = MIN_REGION_PIXELS

    def to_dict(self) -> dict:
        d = asdict(self)
        d["eye_anchors"] = [list(p) for p in self.eye_anchors]
        d["frame_size"] = list(self.frame_size)
        d.update({
            "config_version": CONFIG_VERSION,
            "keypoint_mapping_version": MAPPING_VERSION,
            "symmetry_anchors": [list(C1), list(C2), list(C3)],
            "lab_encoding": {"L_scale": 2.55, "a_offset": 128.0, "b_offset": 128.0},
            "gender_label_codes": dict(ann.GENDER_CODES),
        })
        return dict(sorted(d.items()))

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        if "eye_anchors" in known:
            known["eye_anchors"] = tuple(tuple(float(c) for c in p) for p in known["eye_anchors"])
        if "frame_size" in known:
            known["frame_size"] = tuple(int(v) for v in known["frame_size"])
        return cls(**known)


def policy_from_dict(d: dict) -> QualityPolicy:
    kw = {}
    if "min_face_side" in d:
        kw["min_face_side"] = float(d["min_face_side"])
    if "min_iod" in d:
        kw["min_iod"] = float(d["min_iod"])
    if "allowed_poses" in d:
        kw["allowed_poses"] = frozenset(int(p) for p in d["allowed_poses"])
    return QualityPolicy(**kw)


# --- manifest -------------------------------------------------------------

def _load_softmax(value, base: Path):
    if value is None:
        return None
    if isinstance(value, str):
        path = base / value
        if path.suffix == ".npy":
            return np.load(path)
        return np.asarray(json.loads(path.read_text()), dtype=float)
    return np.asarray(value, dtype=float)


def parse_record(obj: dict, base: Path) -> FaceRecord:
    for key in ("face_id", "image_path", "bbox", "keypoints", "pose_class"):
        if key not in obj:
            raise ValueError(f"missing field {key!r}")
    bbox = obj["bbox"]
    if not (isinstance(bbox, list) and len(bbox) == 4):
        raise ValueError("bbox must be [x, y, width, height]")
    kp = obj["keypoints"]
    if not (isinstance(kp, list) and len(kp) == 68 and all(isinstance(p, list) and len(p) == 2 for p in kp)):
        raise ValueError("keypoints must be a list of exactly 68 [x, y] pairs")
    pose = obj["pose_class"]
    if isinstance(pose, bool) or not isinstance(pose, int):
        raise ValueError("pose_class must be an integer")
    votes = [ann.Vote(annotator_id=str(v.get("annotator_id", i)), gender=v.get("gender"),
                      age_group=v.get("age_group"), age_value=v.get("age_value"),
                      weight=float(v.get("weight", 1.0)))
             for i, v in enumerate(obj.get("votes") or [])]
    gender_score = obj.get("gender_score")
    if gender_score is not None and not 0.0 <= float(gender_score) <= 1.0:
        raise ValueError("gender_score must lie in [0, 1]")
    aux = ann.AuxAnnotations(
        age_softmax=_load_softmax(obj.get("age_softmax"), base),
        gender_score=None if gender_score is None else float(gender_score),
        votes=votes,
    )
    return FaceRecord(
        face_id=str(obj["face_id"]),
        image_path=str(base / obj["image_path"]),
        bbox=tuple(float(v) for v in bbox),
        keypoints=np.asarray(kp, dtype=float),
        pose_class=pose,
        aux=aux,
        mask_path=None if obj.get("mask_path") is None else str(base / obj["mask_path"]),
    )


def load_manifest(path) -> list[FaceRecord]:
    """Parse a JSON-lines manifest; any defect raises ManifestParseError with its line."""
    path = Path(path)
    base = path.parent
    records, seen = [], set()
    try:
        text = path.read_text()
    except OSError as exc:
        raise ManifestParseError(f"cannot read manifest: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("record must be a JSON object")
            rec = parse_record(obj, base)
        except (ValueError, TypeError, OSError) as exc:
            raise ManifestParseError(str(exc), lineno) from exc
        if rec.face_id in seen:
            raise ManifestParseError(f"duplicate face_id {rec.face_id!r}", lineno)
        seen.add(rec.face_id)
        records.append(rec)
    return records


# --- extraction -----------------------------------------------------------

@dataclass
class FaceRow:
    face_id: str
    values: dict
    invalid: dict = field(default_factory=dict)


@dataclass
class Rejection:
    face_id: str
    reason: str
    detail: str = ""


def load_image(path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"))
    except (OSError, ValueError) as exc:
        raise ImageReadError(f"{path}: {exc}") from exc


def _load_mask(path, transform, shape):
    try:
        with Image.open(path) as im:
            raw = np.asarray(im.convert("L")) > 0
    except (OSError, ValueError) as exc:
        raise ImageReadError(f"{path}: {exc}") from exc
    return warp_affine(raw.astype(float), transform, shape, order=0) > 0.5


class _Row:
    def __init__(self):
        self.values = {name: math.nan for name in DIMENSION_NAMES}
        self.invalid = {}

    def run(self, names, fn):
        """Fill ``names`` from ``fn()`` (a dict); on failure mark them invalid."""
        try:
            out = fn()
        except FaceMetricError as exc:
            for n in names:
                self.invalid[n] = type(exc).__name__
            return
        for n in names:
            v = out.get(n)
            if v is None or not math.isfinite(v):
                self.invalid.setdefault(n, "invalid")
            else:
                self.values[n] = float(v)


def extract_features(record: FaceRecord, image: np.ndarray, config: PipelineConfig = PipelineConfig()) -> FaceRow:
    """All coding-scheme values for one accepted face."""
    row = _Row()
    k = record.keypoints
    rect = rectify(image, k, config.eye_anchors, config.frame_size)
    kr = apply_affine(rect.transform, k)

    from .craniofacial import CranioAreas, CranioDistances, CranioRatios
    cranio_names = (list(CranioDistances.__dataclass_fields__) + list(CranioAreas.__dataclass_fields__)
                    + [f for f in CranioRatios.__dataclass_fields__ if f != "invalid"])

    def cranio():
        lm = map_keypoints(kr, top=0.0)
        r = ratios(lm)
        out = {**distances(lm).as_dict(), **areas(lm).as_dict(), **r.as_dict()}
        for name, why in r.invalid.items():
            row.invalid[name] = why
        return out
    row.run(cranio_names, cranio)

    sym = {}

    def sym_face():
        sym["img"] = rectify_for_symmetry(image, k).image
        return {"density_difference": density_difference(sym["img"])}
    row.run(["density_difference"], sym_face)
    if "img" in sym:
        row.run(["edge_orientation_similarity"], lambda: {
            "edge_orientation_similarity": edge_orientation_similarity(
                sym["img"], config.edge_threshold, config.orientation_mode)})
    else:
        row.invalid["edge_orientation_similarity"] = row.invalid["density_difference"]

    def contrast():
        values, invalid = contrast_vector(rect.image, kr, config.contrast_mode, config.contrast_outer_scale)
        row.invalid.update(invalid)
        return values
    row.run([n for n in DIMENSION_NAMES if n.split("_")[0] in ("lips", "eyes", "eyebrows")], contrast)

    def skin():
        mask = None
        if record.mask_path:
            mask = _load_mask(record.mask_path, rect.transform, config.frame_size)
        x, y, w, _ = record.bbox
        top = float(apply_affine(rect.transform, [[x + w / 2.0, y]])[0, 1])
        res = face_ita(rect.image, kr, mask, top=max(top, 0.0), window=config.ita_smoothing_window,
                       bin_width=config.ita_bin_width, min_pixels=config.ita_min_region_pixels)
        return {"ita": res.face_ita}
    row.run(["ita"], skin)

    def pose():
        pr = pose_resolution(record)
        return {"pose_signed": pr.pose_signed, "iod": pr.iod, "box_size": pr.box_size}
    row.run(["pose_signed", "iod", "box_size"], pose)

    aux = record.aux or ann.AuxAnnotations()
    if aux.age_softmax is not None:
        row.run(["age_pred"], lambda: {"age_pred": ann.expected_age(aux.age_softmax)})
    if aux.gender_score is not None:
        row.values["gender_pred"] = float(aux.gender_score)
    if aux.votes:
        def votes():
            v = ann.weighted_vote(aux.votes)
            return {"gender_label": None if v.gender_label is None else ann.GENDER_CODES[v.gender_label],
                    "age_label": v.age_value}
        row.run(["gender_label", "age_label"], votes)
    for name in DIMENSION_NAMES:
        if not math.isfinite(row.values[name]):
            row.invalid.setdefault(name, "missing")
    return FaceRow(record.face_id, row.values, dict(sorted(row.invalid.items())))


def process_record(record: FaceRecord, policy: QualityPolicy, config: PipelineConfig):
    verdict = quality_filter(record, policy)
    if not verdict.accepted:
        return Rejection(record.face_id, verdict.reason)
    try:
        image = load_image(record.image_path)
    except ImageReadError as exc:
        return Rejection(record.face_id, "image_read", str(exc))
    return extract_features(record, image, config)


def _process(args):
    return process_record(*args)


@dataclass
class ExtractResult:
    rows: list
    rejections: list
    config: PipelineConfig
    policy: QualityPolicy

    @property
    def partial(self) -> bool:
        return bool(self.rejections)


def extract(records, policy: QualityPolicy = QualityPolicy(), config: PipelineConfig = PipelineConfig(),
            workers: int = 1) -> ExtractResult:
    """Run the quality gate and all extractors; output order follows ``records``."""
    jobs = [(r, policy, config) for r in records]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_process, jobs, chunksize=1))
    else:
        results = [_process(j) for j in jobs]
    rows = [r for r in results if isinstance(r, FaceRow)]
    rejections = [r for r in results if isinstance(r, Rejection)]
    for r in rejections:
        log.info("rejected %s: %s %s", r.face_id, r.reason, r.detail)
    return ExtractResult(rows, rejections, config, policy)


def _fmt(v) -> str:
    if v is None or not math.isfinite(v):
        return ""
    return f"{v:.6g}"


def _json_num(v):
    return float(v) if v is not None and math.isfinite(v) else None


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_features(result: ExtractResult, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = ["face_id", *DIMENSION_NAMES]
    (out / "features.csv").write_text(_csv_text(
        header, [[r.face_id, *(_fmt(r.values[n]) for n in DIMENSION_NAMES)] for r in result.rows]))
    doc = {
        "config": result.config.to_dict(),
        "policy": {"min_face_side": result.policy.min_face_side, "min_iod": result.policy.min_iod,
                   "allowed_poses": sorted(result.policy.allowed_poses)},
        "columns": list(DIMENSION_NAMES),
        "rows": [{"face_id": r.face_id,
                  "values": {n: _json_num(r.values[n]) for n in DIMENSION_NAMES},
                  "invalid": r.invalid} for r in result.rows],
        "rejections": [asdict(r) for r in result.rejections],
    }
    (out / "features.json").write_text(json.dumps(doc, indent=1) + "\n")
    (out / "rejections.csv").write_text(_csv_text(
        ["face_id", "reason", "detail"], [[r.face_id, r.reason, r.detail] for r in result.rejections]))
    return {"features_csv": out / "features.csv", "features_json": out / "features.json",
            "rejections_csv": out / "rejections.csv"}


def run_extract(manifest, out_dir, policy: QualityPolicy = QualityPolicy(),
                config: PipelineConfig = PipelineConfig(), workers: int = 1) -> ExtractResult:
    result = extract(load_manifest(manifest), policy, config, workers)
    write_features(result, out_dir)
    return result


# --- report ---------------------------------------------------------------

def load_feature_columns(path) -> tuple[dict, dict]:
    """Read a feature table (JSON mirror or CSV) into ``{dimension: [values]}``."""
    path = Path(path)
    meta = {}
    if path.suffix == ".json":
        doc = json.loads(path.read_text())
        rows = doc["rows"]
        names = doc.get("columns", DIMENSION_NAMES)
        cols = {n: [r["values"].get(n) for r in rows] for n in names}
        meta = {"extract_config": doc.get("config")}
    else:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
            names = [n for n in (reader.fieldnames or []) if n != "face_id"]
        cols = {n: [float(r[n]) if r[n] != "" else None for r in rows] for n in names}
    if not rows:
        raise EmptyTable(f"{path} has no rows")
    return cols, meta


REPORT_HEADER = ["dimension", "Coding Scheme", "Measurement", "Simpson D", "Simpson E",
                 "Shannon H", "Shannon E", "Mean", "Var", "n_valid", "n_excluded", "note"]


def write_report(rep: DiversityReport, out_dir, meta: Optional[dict] = None) -> dict:
    out = Path(out_dir)
    (out / "histograms").mkdir(parents=True, exist_ok=True)
    csv_rows, json_rows = [], []
    for r in rep.rows:
        s = r.scores
        nums = [s.simpson_d, s.simpson_e, s.shannon_h, s.shannon_e, s.mean, s.variance] if s else [None] * 6
        d = r.dimension
        csv_rows.append([d.name, d.scheme, d.label, *(_fmt(v) for v in nums), r.n_valid, r.n_excluded, r.reason or ""])
        json_rows.append({
            "dimension": d.name, "coding_scheme": d.scheme, "measurement": d.label,
            "simpson_d": _json_num(nums[0]), "simpson_e": _json_num(nums[1]),
            "shannon_h": _json_num(nums[2]), "shannon_e": _json_num(nums[3]),
            "mean": _json_num(nums[4]), "variance": _json_num(nums[5]),
            "n_valid": r.n_valid, "n_excluded": r.n_excluded, "note": r.reason,
        })
        if r.histogram is not None:
            hist = {"dimension": d.name, "measurement": d.label, **r.histogram.to_dict()}
            (out / "histograms" / f"{d.name}.json").write_text(json.dumps(hist, indent=1) + "\n")
    (out / "report.csv").write_text(_csv_text(REPORT_HEADER, csv_rows))
    doc = {"bin_config": rep.config.to_dict(), **(meta or {}), "rows": json_rows}
    (out / "report.json").write_text(json.dumps(doc, indent=1) + "\n")
    return {"report_csv": out / "report.csv", "report_json": out / "report.json"}


def run_report(features, out_dir, bin_config: BinConfig = BinConfig()) -> DiversityReport:
    cols, meta = load_feature_columns(features)
    rep = report(cols, bin_config)
    write_report(rep, out_dir, meta)
    return rep

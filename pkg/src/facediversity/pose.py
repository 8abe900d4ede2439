"""Pose class remapping and face resolution measures."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidPose
from .geometry import FaceRecord
from .preprocess import interocular_distance

POSE_NAMES = {
    0: "frontal",
    1: "rotated left",
    2: "rotated right",
    3: "frontal, tilted left",
    4: "frontal, tilted right",
}
POSE_SIGNED = {0: 0, 3: -1, 4: 1}


@dataclass(frozen=True)
class PoseResolution:
    pose_class: int
    pose_signed: int
    iod: float
    box_size: float


def pose_resolution(record: FaceRecord) -> PoseResolution:
    if record.pose_class not in POSE_SIGNED:
        raise InvalidPose(f"pose class {record.pose_class} ({POSE_NAMES.get(record.pose_class)}) is not frontal")
    _, _, w, h = record.bbox
    return PoseResolution(
        pose_class=record.pose_class,
        pose_signed=POSE_SIGNED[record.pose_class],
        iod=interocular_distance(record.keypoints),
        box_size=math.sqrt(w * h),
    )

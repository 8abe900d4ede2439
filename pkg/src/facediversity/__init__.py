"""Facial coding schemes and dataset diversity statistics for face image collections."""

from .annotations import expected_age, weighted_vote
from .contrast import contrast_vector
from .craniofacial import areas, distances, ratios
from .diversity import (CANONICAL_DIMENSIONS, BinConfig, EqualWidth, FixedEdges, Histogram,
                        bin_values, diversity_scores, report)
from .geometry import AnatomicalLandmarks, FaceRecord, Point2, map_keypoints
from .pipeline import PipelineConfig, run_extract, run_report
from .pose import pose_resolution
from .preprocess import QualityPolicy, context_crop, eye_centers, quality_filter, rectify
from .skin_color import face_ita, ita, rgb_to_lab
from .symmetry import density_difference, edge_orientation_similarity, rectify_for_symmetry

__version__ = "0.1.0"

__all__ = [
    "AnatomicalLandmarks", "BinConfig", "CANONICAL_DIMENSIONS", "EqualWidth", "FaceRecord",
    "FixedEdges", "Histogram", "PipelineConfig", "Point2", "QualityPolicy", "areas",
    "bin_values", "context_crop", "contrast_vector", "density_difference", "distances",
    "diversity_scores", "edge_orientation_similarity", "expected_age", "eye_centers",
    "face_ita", "ita", "map_keypoints", "pose_resolution", "quality_filter", "ratios",
    "rectify", "rectify_for_symmetry", "report", "rgb_to_lab", "run_extract", "run_report",
    "weighted_vote",
]

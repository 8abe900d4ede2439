"""
Model outputs, crowd votes, pose and resolution
===============================================
"""
import numpy as np

from facediversity.annotations import Vote, expected_age, weighted_vote
from facediversity.geometry import FaceRecord
from facediversity.pose import pose_resolution
from facediversity.preprocess import QualityPolicy, quality_filter
from facediversity.synthetic import synthetic_keypoints

# Age from a 101-way softmax is its expectation over the years 0..100.
years = np.arange(101)
p = np.exp(-0.5 * ((years - 34) / 6.0) ** 2)
print("expected age: %.2f" % expected_age(p / p.sum()))

# Annotator votes count in proportion to each annotator's weight.
votes = [Vote("a1", "male", "31-45", 38, 0.9), Vote("a2", "female", "20-30", 29, 0.3),
         Vote("a3", "female", "31-45", 33, 0.3)]
print(weighted_vote(votes))

# Equal weight on both labels is a tie: the first label wins and the tie is flagged.
print(weighted_vote([Vote("a1", "male", weight=0.5), Vote("a2", "female", weight=0.5)]))

k = synthetic_keypoints(scale=1.0, offset=(10, 10))
for bbox, pose in (((0, 0, 90, 110), 3), ((0, 0, 45, 60), 0), ((0, 0, 90, 110), 1)):
    rec = FaceRecord("demo", "demo.png", bbox, k, pose)
    verdict = quality_filter(rec, QualityPolicy())
    line = f"bbox {bbox[2]}x{bbox[3]} pose {pose}: {'accepted' if verdict.accepted else 'rejected (' + verdict.reason + ')'}"
    if verdict.accepted:
        line += f" -> {pose_resolution(rec)}"
    print(line)

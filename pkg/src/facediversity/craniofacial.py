"""Craniofacial distances, areas and ratios from anatomical landmarks.

All measures are Euclidean distances between landmark pairs, in the pixel
units of whatever frame the landmarks are expressed in (normally the
eye-rectified 128x128 frame). Bilateral measures are the mean of the left
and right values.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .geometry import AnatomicalLandmarks, distance

RATIO_EPS = 1e-6


@dataclass(frozen=True)
class CranioDistances:
    n_sto: float
    ps_pi: float
    or_pi: float
    sn_cprime: float
    sn_sto: float
    sto_li: float
    cph_cph: float
    sbal_ls: float

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class CranioAreas:
    tn_n: float
    tn_gn: float
    n_gn: float
    sn_gn: float
    zy_zy: float
    go_go: float
    en_en: float
    en_ex: float
    ex_ex: float
    n_sn: float
    al_al: float
    ch_ch: float

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class CranioRatios:
    facial_index: float
    mandibular_index: float
    intercanthal_index: float
    orbital_width_index: float
    eye_fissure_index: float
    nasal_index: float
    vermilion_height_index: float
    mouth_face_width_index: float
    invalid: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        d = asdict(self)
        d.pop("invalid")
        return d


def _bilateral(lm, a, b):
    return (distance(getattr(lm, a + "_l"), getattr(lm, b + "_l"))
            + distance(getattr(lm, a + "_r"), getattr(lm, b + "_r"))) / 2.0


def distances(lm: AnatomicalLandmarks) -> CranioDistances:
    return CranioDistances(
        n_sto=distance(lm.n, lm.sto),
        ps_pi=_bilateral(lm, "ps", "pi"),
        or_pi=_bilateral(lm, "or", "pi"),
        sn_cprime=distance(lm.sn, lm.c_prime),
        sn_sto=distance(lm.sn, lm.sto),
        sto_li=distance(lm.sto, lm.li),
        cph_cph=distance(lm.cph_l, lm.cph_r),
        sbal_ls=(distance(lm.sbal_l, lm.ls) + distance(lm.sbal_r, lm.ls)) / 2.0,
    )


def areas(lm: AnatomicalLandmarks) -> CranioAreas:
    return CranioAreas(
        tn_n=distance(lm.tn, lm.n),
        tn_gn=distance(lm.tn, lm.gn),
        n_gn=distance(lm.n, lm.gn),
        sn_gn=distance(lm.sn, lm.gn),
        zy_zy=distance(lm.zy_l, lm.zy_r),
        go_go=distance(lm.go_l, lm.go_r),
        en_en=distance(lm.en_l, lm.en_r),
        en_ex=_bilateral(lm, "en", "ex"),
        ex_ex=distance(lm.ex_l, lm.ex_r),
        n_sn=distance(lm.n, lm.sn),
        al_al=distance(lm.al_l, lm.al_r),
        ch_ch=distance(lm.ch_l, lm.ch_r),
    )


def ratios(lm: AnatomicalLandmarks) -> CranioRatios:
    """Eight proportion indices.

    A ratio whose denominator is shorter than ``RATIO_EPS`` px is set to NaN
    and listed in ``invalid``; the remaining ratios are still produced.
    """
    invalid = {}

    def q(name, num, den):
        if not den >= RATIO_EPS:
            invalid[name] = "DivisionDegenerate"
            return math.nan
        return num / den

    en_en = distance(lm.en_l, lm.en_r)
    zy_zy = distance(lm.zy_l, lm.zy_r)
    fissure = {s: distance(getattr(lm, "ex_" + s), getattr(lm, "en_" + s)) for s in "lr"}
    lid = {s: distance(getattr(lm, "ps_" + s), getattr(lm, "pi_" + s)) for s in "lr"}

    values = {
        "facial_index": q("facial_index", distance(lm.n, lm.gn), zy_zy),
        "mandibular_index": q("mandibular_index", distance(lm.sto, lm.gn), distance(lm.go_l, lm.go_r)),
        "intercanthal_index": q("intercanthal_index", en_en, distance(lm.ex_l, lm.ex_r)),
        "nasal_index": q("nasal_index", distance(lm.al_l, lm.al_r), distance(lm.n, lm.sn)),
        "vermilion_height_index": q("vermilion_height_index", distance(lm.ls, lm.sto), distance(lm.sto, lm.li)),
        "mouth_face_width_index": q("mouth_face_width_index", distance(lm.ch_l, lm.ch_r), zy_zy),
    }
    if en_en >= RATIO_EPS:
        values["orbital_width_index"] = (fissure["l"] / en_en + fissure["r"] / en_en) / 2.0
    else:
        values["orbital_width_index"] = q("orbital_width_index", 0.0, en_en)
    if min(fissure.values()) >= RATIO_EPS:
        values["eye_fissure_index"] = (lid["l"] / fissure["l"] + lid["r"] / fissure["r"]) / 2.0
    else:
        values["eye_fissure_index"] = q("eye_fissure_index", 0.0, 0.0)
    return CranioRatios(**values, invalid=invalid)

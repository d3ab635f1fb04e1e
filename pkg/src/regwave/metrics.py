"""Distortion and agreement metrics for judging a reduction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LengthError, UndefinedMetricError


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(a, dtype=np.float64).ravel()
    y = np.asarray(b, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise LengthError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.size == 0:
        raise LengthError("metrics need at least one sample")
    return x, y


def rmse(a, b) -> float:
    x, y = _pair(a, b)
    return math.sqrt(float(np.mean((x - y) ** 2)))


def prd(a, b) -> float:
    """Percent root-mean-square difference relative to the first argument."""
    x, y = _pair(a, b)
    ref = float(x @ x)
    if ref == 0.0:
        raise UndefinedMetricError("prd is undefined for an all-zero reference")
    return 100.0 * math.sqrt(float((x - y) @ (x - y)) / ref)


def jaccard(a, b) -> float:
    """Set overlap |A & B| / |A | B|; two empty sets count as full agreement."""
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


@dataclass(frozen=True)
class ComparisonReport:
    """How well detection on the synthesized register tracks the original.

    flags_original plays the role of ground truth: preserved_recall is the
    fraction of originally flagged indices still flagged after reduction,
    preserved_precision the fraction of synthesized flags that were original
    ones.  Empty denominators count as 1.0.
    """

    compression_ratio: float
    rmse: float
    prd: float
    flags_original: tuple[int, ...]
    flags_synthesized: tuple[int, ...]
    jaccard: float
    preserved_precision: float
    preserved_recall: float


def build_report(
    compression: float,
    original,
    synthesized,
    flags_original,
    flags_synthesized,
) -> ComparisonReport:
    a = set(int(i) for i in flags_original)
    b = set(int(i) for i in flags_synthesized)
    hits = len(a & b)
    return ComparisonReport(
        compression_ratio=compression,
        rmse=rmse(original, synthesized),
        prd=prd(original, synthesized),
        flags_original=tuple(sorted(a)),
        flags_synthesized=tuple(sorted(b)),
        jaccard=jaccard(a, b),
        preserved_precision=hits / len(b) if b else 1.0,
        preserved_recall=hits / len(a) if a else 1.0,
    )

"""Composite index: QNIF, QLIF, IFQ2A, and quadrant classification.

QNIF is the cube root of NDOC * NCIT * H (size-dependent); QLIF is the cube
root of %1Q * ACIT * TOPCIT (size-independent); the composite index is their
product. Quadrants split institutions by the field means of both dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import InputError
from .indicators import IndicatorSet

QUADRANTS = ("both_outstanding", "quantitative_only", "qualitative_only", "neither")


@dataclass(frozen=True)
class IndexScore:
    institution_id: str
    qnif: float
    qlif: float
    ifq2a: float


@dataclass(frozen=True)
class QuadrantLabel:
    """Position relative to the field means of both dimensions."""

    label: str
    mean_qnif: float
    mean_qlif: float


def score(ind: IndicatorSet) -> IndexScore:
    """Combine one institution's six indicators into the composite index."""
    qnif = (ind.ndoc * ind.ncit * ind.h) ** (1.0 / 3.0)
    qlif = (ind.pct_q1 * ind.acit * ind.topcit) ** (1.0 / 3.0)
    return IndexScore(
        institution_id=ind.institution_id,
        qnif=qnif,
        qlif=qlif,
        ifq2a=qnif * qlif,
    )


def score_field(indicators: Mapping[str, IndicatorSet]) -> dict[str, IndexScore]:
    """Score every institution of a field; output keyed identically."""
    if not indicators:
        raise InputError("cannot score an empty indicator map")
    return {inst: score(ind) for inst, ind in indicators.items()}


def classify_quadrants(scores: Mapping[str, IndexScore]) -> dict[str, QuadrantLabel]:
    """Label each institution against the unweighted field means.

    At-mean positions count as outstanding on that axis (closed upper
    quadrant).
    """
    if not scores:
        raise InputError("cannot classify an empty score map")
    n = len(scores)
    mean_qnif = sum(s.qnif for s in scores.values()) / n
    mean_qlif = sum(s.qlif for s in scores.values()) / n
    out: dict[str, QuadrantLabel] = {}
    for inst, s in scores.items():
        quant = s.qnif >= mean_qnif
        qual = s.qlif >= mean_qlif
        if quant and qual:
            label = "both_outstanding"
        elif quant:
            label = "quantitative_only"
        elif qual:
            label = "qualitative_only"
        else:
            label = "neither"
        out[inst] = QuadrantLabel(label=label, mean_qnif=mean_qnif, mean_qlif=mean_qlif)
    return out

"""Per-institution primary indicators over a field corpus.

NDOC (paper count), NCIT (citation sum), H (h-index), %1Q (share of papers
in first-quartile journals), ACIT (citations per paper), TOPCIT (share of
papers in the field-wide top 10% by citations, pooled across institutions).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable

from .corpus import Corpus, JournalProfile
from .errors import ConfigError, QuartileLookupError

log = logging.getLogger(__name__)

Q1_POLICIES = ("any-relevant", "best-all")
MISSING_QUARTILE_POLICIES = ("strict", "warn")


@dataclass(frozen=True)
class IndicatorSet:
    institution_id: str
    ndoc: int
    ncit: int
    h: int
    pct_q1: float
    acit: float
    topcit: float


@dataclass(frozen=True)
class FieldCitationThreshold:
    """Citation count at the top-10% boundary of a pooled field corpus."""

    field_name: str
    pool_size: int
    threshold: int


def h_index(citations: Iterable[int]) -> int:
    """Largest h such that at least h papers have >= h citations each."""
    ranked = sorted(citations, reverse=True)
    h = 0
    for i, c in enumerate(ranked, start=1):
        if c >= i:
            h = i
        else:
            break
    return h


def top10_threshold(field_corpus: Corpus, field_name: str = "") -> FieldCitationThreshold:
    """Citation count of the ceil(0.10 * N)-th most cited paper in the pool.

    Papers with citations >= threshold are the field's top papers; boundary
    ties are all included.
    """
    pool = sorted(field_corpus.citations(), reverse=True)
    n = len(pool)
    if n == 0:
        return FieldCitationThreshold(field_name, 0, 0)
    k = math.ceil(0.10 * n)
    return FieldCitationThreshold(field_name, n, pool[k - 1])


def _is_q1(journal: JournalProfile, year: int, field_categories: frozenset[str] | None,
           q1_policy: str, missing_quartile: str) -> tuple[bool, int]:
    """Whether the paper counts as first-quartile; second value tallies lookup misses."""
    if q1_policy == "any-relevant" and field_categories is not None:
        cats = journal.categories & field_categories
    else:
        cats = journal.categories
    misses = 0
    for cat in sorted(cats):
        try:
            if journal.quartile(cat, year) == 1:
                return True, misses
        except QuartileLookupError:
            if missing_quartile == "strict":
                raise
            misses += 1
    return False, misses


def compute_indicators(field_corpus: Corpus, threshold: FieldCitationThreshold,
                       field_categories: frozenset[str] | None = None,
                       q1_policy: str = "any-relevant",
                       missing_quartile: str = "warn") -> dict[str, IndicatorSet]:
    """All six indicators per institution with at least one paper in the field.

    ``threshold`` must come from the same field corpus. Under the
    "any-relevant" policy a paper is Q1 if its journal is first-quartile in
    some category belonging to the field, for the paper's year; "best-all"
    considers every category of the journal.
    """
    if q1_policy not in Q1_POLICIES:
        raise ConfigError(f"q1_policy must be one of {Q1_POLICIES}, got {q1_policy!r}")
    if missing_quartile not in MISSING_QUARTILE_POLICIES:
        raise ConfigError(
            f"missing_quartile must be one of {MISSING_QUARTILE_POLICIES}, "
            f"got {missing_quartile!r}"
        )
    by_inst: dict[str, list] = {}
    for rec in field_corpus.publications:
        by_inst.setdefault(rec.institution_id, []).append(rec)

    out: dict[str, IndicatorSet] = {}
    total_misses = 0
    for inst, records in by_inst.items():
        citations = [r.citations for r in records]
        ndoc = len(records)
        ncit = sum(citations)
        q1_count = 0
        for rec in records:
            is_q1, misses = _is_q1(
                field_corpus.journals[rec.journal_id], rec.year,
                field_categories, q1_policy, missing_quartile,
            )
            total_misses += misses
            if is_q1:
                q1_count += 1
        if threshold.pool_size > 0:
            top_count = sum(1 for c in citations if c >= threshold.threshold)
            topcit = top_count / ndoc
        else:
            topcit = 0.0
        out[inst] = IndicatorSet(
            institution_id=inst,
            ndoc=ndoc,
            ncit=ncit,
            h=h_index(citations),
            pct_q1=q1_count / ndoc,
            acit=ncit / ndoc,
            topcit=topcit,
        )
    if total_misses:
        log.warning(
            "field %s: %d quartile lookup(s) missing, counted as not-Q1",
            threshold.field_name or "<unnamed>", total_misses,
        )
    return out

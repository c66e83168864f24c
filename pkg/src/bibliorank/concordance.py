"""Concordance between ranking systems: tie-corrected Spearman rho and the
agreement level A.

Rho is Pearson correlation over midranks (fractional ranks for ties), which
reduces to 1 - 6*sum(d^2)/(n(n^2-1)) in the tie-free case. Agreement is the
fraction of a system's institutions in an international field table of size
s that also occupy the top-s positions of the national field table; the
fraction is kept exact and never pre-reduced.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import normalize_id
from .errors import ConfigError, ConstantInputError, InputError, InsufficientDataError
from .ranking import RankingTable, restrict_to_system

MISSING_NATIONAL_POLICIES = ("strict", "warn")

DEFAULT_MIN_N = 3


def midranks(values: Sequence[float]) -> list[float]:
    """Average ranks (1-based); tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def _pearson(x: Sequence[float], y: Sequence[float]) -> float:
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = sum((a - mx) ** 2 for a in x)
    vy = sum((b - my) ** 2 for b in y)
    if vx == 0 or vy == 0:
        raise ConstantInputError("correlation undefined for a constant input")
    return cov / math.sqrt(vx * vy)


def spearman_rho(x: Sequence[float], y: Sequence[float],
                 min_n: int = DEFAULT_MIN_N) -> float:
    """Rank correlation of two paired lists, midrank tie handling."""
    if len(x) != len(y):
        raise InputError(f"paired lists differ in length: {len(x)} vs {len(y)}")
    if len(x) < min_n:
        raise InsufficientDataError(
            f"need at least {min_n} pairs to report rho, got {len(x)}"
        )
    return _pearson(midranks(x), midranks(y))


@dataclass(frozen=True)
class AgreementFraction:
    """Exact, unreduced agreement fraction."""

    numerator: int
    denominator: int

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def decimal(self) -> float:
        if self.denominator == 0:
            return 0.0
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def agreement_level(international: RankingTable, national: RankingTable,
                    missing_national: str = "warn") -> AgreementFraction:
    """Share of the international table's institutions in the national top-s.

    s is the international table size; positions use the national table's
    competition ranks, so a tie group straddling s counts members with rank
    value <= s. An institution absent from the national table counts as
    non-coinciding under "warn" and is an error under "strict".
    """
    if missing_national not in MISSING_NATIONAL_POLICIES:
        raise ConfigError(
            f"missing_national must be one of {MISSING_NATIONAL_POLICIES}, "
            f"got {missing_national!r}"
        )
    s = len(international)
    national_ranks = national.competition_ranks()
    numerator = 0
    for entry in international.entries:
        rank = national_ranks.get(entry.institution_id)
        if rank is None:
            if missing_national == "strict":
                raise InputError(
                    f"institution {entry.institution_id!r} missing from national table "
                    f"{national.system_name}/{national.field_name}"
                )
            continue
        if rank <= s:
            numerator += 1
    return AgreementFraction(numerator, s)


@dataclass(frozen=True)
class ConcordancePair:
    source_field: str
    target_field: str
    n: int
    rho: float | None
    agreement: AgreementFraction


@dataclass(frozen=True)
class AggregateAgreement:
    """Both aggregations over a set of pairs, labeled explicitly."""

    pooled: AgreementFraction
    mean_of_fractions: Fraction


def compare_pair(intl: RankingTable, natl: RankingTable, system_set: set[str],
                 min_n: int = DEFAULT_MIN_N,
                 missing_national: str = "warn") -> ConcordancePair:
    """Rho and agreement for one crosswalk-matched field pair.

    The international table is restricted to the system's institutions; rho
    correlates international effective ranks with national competition ranks
    over the institutions present on both sides.
    """
    restricted = restrict_to_system(intl, system_set)
    natl_ranks = natl.competition_ranks()
    joined = [e for e in restricted.entries if e.institution_id in natl_ranks]
    x = [e.rank.effective for e in joined]
    y = [float(natl_ranks[e.institution_id]) for e in joined]
    try:
        rho: float | None = spearman_rho(x, y, min_n=min_n)
    except (InsufficientDataError, ConstantInputError):
        rho = None
    agreement = agreement_level(restricted, natl, missing_national=missing_national)
    return ConcordancePair(
        source_field=intl.field_name,
        target_field=natl.field_name,
        n=len(joined),
        rho=rho,
        agreement=agreement,
    )


def aggregate_agreement(pairs: Sequence[ConcordancePair]) -> AggregateAgreement:
    """Pooled (sum of numerators over sum of denominators) and unweighted
    mean-of-fractions aggregates."""
    if not pairs:
        raise InputError("cannot aggregate zero concordance pairs")
    num = sum(p.agreement.numerator for p in pairs)
    den = sum(p.agreement.denominator for p in pairs)
    if den == 0:
        raise InputError("total agreement denominator is zero")
    nonempty = [p for p in pairs if p.agreement.denominator > 0]
    mean = sum((p.agreement.as_fraction for p in nonempty), Fraction(0)) / len(nonempty)
    return AggregateAgreement(pooled=AgreementFraction(num, den), mean_of_fractions=mean)


@dataclass(frozen=True)
class FieldCrosswalk:
    """Field matching between one source system and one target system."""

    source_system: str
    target_system: str
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(self.pairs) != len(set(self.pairs)):
            raise InputError(
                f"duplicate (source, target) pair in crosswalk "
                f"{self.source_system} -> {self.target_system}"
            )


@dataclass(frozen=True)
class ConcordanceReport:
    source_system: str
    target_system: str
    pairs: tuple[ConcordancePair, ...]
    unresolved: tuple[tuple[str, str], ...]
    aggregate: AggregateAgreement


def load_crosswalk(path: str | Path) -> list[FieldCrosswalk]:
    """Load crosswalks from CSV, grouped by (source_system, target_system)."""
    path = Path(path)
    grouped: dict[tuple[str, str], list[tuple[str, str]]] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"source_system", "source_field", "target_system", "target_field"}
        if reader.fieldnames is None or required - set(reader.fieldnames):
            raise InputError(
                "crosswalk file must have columns "
                "source_system,source_field,target_system,target_field",
                line=1,
            )
        for line, row in enumerate(reader, start=2):
            values = {k: normalize_id(row[k] or "") for k in required}
            if not all(values.values()):
                raise InputError("empty crosswalk cell", line)
            key = (values["source_system"], values["target_system"])
            grouped.setdefault(key, []).append(
                (values["source_field"], values["target_field"])
            )
    return [
        FieldCrosswalk(src, tgt, tuple(pairs))
        for (src, tgt), pairs in grouped.items()
    ]


def run_crosswalk(crosswalk: FieldCrosswalk,
                  intl_tables: Mapping[str, RankingTable],
                  natl_tables: Mapping[str, RankingTable],
                  system_set: set[str],
                  min_n: int = DEFAULT_MIN_N,
                  missing_national: str = "warn") -> ConcordanceReport:
    """One concordance pair per crosswalk row; unresolvable rows are reported."""
    pairs: list[ConcordancePair] = []
    unresolved: list[tuple[str, str]] = []
    for source_field, target_field in crosswalk.pairs:
        intl = intl_tables.get(source_field)
        natl = natl_tables.get(target_field)
        if intl is None or natl is None:
            unresolved.append((source_field, target_field))
            continue
        pairs.append(
            compare_pair(intl, natl, system_set, min_n=min_n,
                         missing_national=missing_national)
        )
    if not pairs:
        raise InputError(
            f"crosswalk {crosswalk.source_system} -> {crosswalk.target_system} "
            "resolves to zero field pairs"
        )
    measurable = [p for p in pairs if p.agreement.denominator > 0]
    if measurable:
        aggregate = aggregate_agreement(measurable)
    else:
        aggregate = AggregateAgreement(AgreementFraction(0, 0), Fraction(0))
    return ConcordanceReport(
        source_system=crosswalk.source_system,
        target_system=crosswalk.target_system,
        pairs=tuple(pairs),
        unresolved=tuple(unresolved),
        aggregate=aggregate,
    )

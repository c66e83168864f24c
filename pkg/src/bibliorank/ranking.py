"""Ranking tables: internally built from index scores, or loaded from
published league tables whose positions may be exact ("89") or interval
("201-300").

Interval ranks resolve to their midpoint for all quantitative use;
institutions sharing an interval become exact ties. Internally built tables
use competition ranking ("1,2,2,4").
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import TimeWindow, normalize_id
from .errors import InputError
from .scoring import IndexScore

_RANK_RE = re.compile(r"^(\d+)(?:-(\d+))?$")


@dataclass(frozen=True)
class ExactRank:
    position: int

    def __post_init__(self):
        if self.position < 1:
            raise InputError(f"rank position must be >= 1, got {self.position}")

    @property
    def effective(self) -> float:
        return float(self.position)

    def __str__(self) -> str:
        return str(self.position)


@dataclass(frozen=True)
class IntervalRank:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 1:
            raise InputError(f"rank interval start must be >= 1, got {self.lo}")
        if self.lo > self.hi:
            raise InputError(f"rank interval {self.lo}-{self.hi} has lo > hi")

    @property
    def effective(self) -> float:
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        return f"{self.lo}-{self.hi}"


RankValue = ExactRank | IntervalRank


def parse_rank(text: str) -> RankValue:
    """Parse "N" into an exact rank or "LO-HI" into an interval rank."""
    m = _RANK_RE.match(text.strip())
    if m is None:
        raise InputError(f"malformed rank {text!r} (expected 'N' or 'LO-HI')")
    if m.group(2) is None:
        return ExactRank(int(m.group(1)))
    return IntervalRank(int(m.group(1)), int(m.group(2)))


@dataclass(frozen=True)
class RankEntry:
    institution_id: str
    rank: RankValue
    score: float | None = None


@dataclass(frozen=True)
class RankingTable:
    system_name: str
    field_name: str
    entries: tuple[RankEntry, ...]
    window: TimeWindow | None = None

    def __post_init__(self):
        ids = [e.institution_id for e in self.entries]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise InputError(
                f"duplicate institution(s) in table {self.system_name}/{self.field_name}: "
                f"{', '.join(dupes)}"
            )
        effectives = [e.rank.effective for e in self.entries]
        if effectives != sorted(effectives):
            raise InputError("table entries must be ordered by effective rank ascending")

    def __len__(self) -> int:
        return len(self.entries)

    def institution_ids(self) -> set[str]:
        return {e.institution_id for e in self.entries}

    def competition_ranks(self) -> dict[str, int]:
        """Local 1..m competition ranks from effective ranks; ties share a rank."""
        ranks: dict[str, int] = {}
        current = 1
        prev_effective: float | None = None
        for position, entry in enumerate(self.entries, start=1):
            if prev_effective is None or entry.rank.effective != prev_effective:
                current = position
                prev_effective = entry.rank.effective
            ranks[entry.institution_id] = current
        return ranks


def build_ranking(scores: Mapping[str, IndexScore], system_name: str,
                  field_name: str, window: TimeWindow | None = None) -> RankingTable:
    """Rank institutions by composite score descending, competition ranking.

    Ties share a rank; the next distinct score is ranked at preceding rank
    plus tie-group size. Display order within a tie is institution id
    lexicographic and never affects rank values.
    """
    if not scores:
        raise InputError("cannot rank an empty score map")
    ordered = sorted(scores.values(), key=lambda s: (-s.ifq2a, s.institution_id))
    entries: list[RankEntry] = []
    rank = 1
    prev_score: float | None = None
    for position, s in enumerate(ordered, start=1):
        if prev_score is None or s.ifq2a != prev_score:
            rank = position
            prev_score = s.ifq2a
        entries.append(RankEntry(s.institution_id, ExactRank(rank), score=s.ifq2a))
    return RankingTable(system_name, field_name, tuple(entries), window=window)


def _table_from_rows(system: str, field: str,
                     rows: Sequence[tuple[str, RankValue]]) -> RankingTable:
    # Stable sort by effective rank keeps file order among exact ties.
    ordered = sorted(rows, key=lambda r: r[1].effective)
    return RankingTable(system, field, tuple(RankEntry(i, r) for i, r in ordered))


def load_external_rankings(path: str | Path) -> dict[tuple[str, str], RankingTable]:
    """Load every (system, field) table from an external-ranking CSV."""
    path = Path(path)
    rows: dict[tuple[str, str], list[tuple[str, RankValue]]] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"system_name", "field_name", "institution_id", "rank"}
        if reader.fieldnames is None or required - set(reader.fieldnames):
            raise InputError(
                "external ranking file must have columns "
                "system_name,field_name,institution_id,rank",
                line=1,
            )
        for line, row in enumerate(reader, start=2):
            system = normalize_id(row["system_name"] or "")
            field = normalize_id(row["field_name"] or "")
            inst = normalize_id(row["institution_id"] or "")
            if not system or not field or not inst:
                raise InputError("empty system_name, field_name or institution_id", line)
            try:
                rank = parse_rank(row["rank"] or "")
            except InputError as exc:
                raise InputError(str(exc), line) from None
            rows.setdefault((system, field), []).append((inst, rank))
    return {key: _table_from_rows(key[0], key[1], r) for key, r in rows.items()}


def load_external_ranking(path: str | Path) -> RankingTable:
    """Load a single-table external-ranking CSV."""
    tables = load_external_rankings(path)
    if len(tables) != 1:
        raise InputError(
            f"expected exactly one (system, field) table in {path}, "
            f"found {len(tables)}"
        )
    return next(iter(tables.values()))


def restrict_to_system(table: RankingTable, system_institutions: set[str]) -> RankingTable:
    """Filter a table to a set of institutions, preserving rank values and order."""
    kept = tuple(e for e in table.entries if e.institution_id in system_institutions)
    return RankingTable(table.system_name, table.field_name, kept, window=table.window)

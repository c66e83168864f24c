"""Publication and journal data: loading, validation, and time-windowing.

All downstream computation reads from an immutable :class:`Corpus`. Input
files are UTF-8; identifiers are compared byte-exactly after trimming
surrounding whitespace.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InputError, QuartileLookupError

YEAR_MIN = 1900
YEAR_MAX = 2100

PUBLICATION_COLUMNS = ("record_id", "institution_id", "year", "journal_id", "citations")
JOURNAL_COLUMNS = ("journal_id", "category", "year", "quartile")


def normalize_id(raw: str) -> str:
    return raw.strip()


def normalize_category(raw: str) -> str:
    return raw.strip().casefold()


@dataclass(frozen=True)
class PublicationRecord:
    """One citable paper with a snapshot citation count."""

    record_id: str
    institution_id: str
    year: int
    journal_id: str
    citations: int


@dataclass(frozen=True)
class JournalProfile:
    """A journal's subject categories and per-(category, year) quartile."""

    journal_id: str
    categories: frozenset[str]
    quartile_by_year: Mapping[tuple[str, int], int]

    def quartile(self, category: str, year: int) -> int:
        """Quartile in {1,2,3,4}; a missing (category, year) is an error."""
        key = (normalize_category(category), year)
        try:
            return self.quartile_by_year[key]
        except KeyError:
            raise QuartileLookupError(
                f"journal {self.journal_id!r} has no quartile for category "
                f"{key[0]!r} in year {year}"
            ) from None


@dataclass(frozen=True, order=True)
class TimeWindow:
    """Inclusive year range, e.g. TimeWindow(2008, 2012) spans five years."""

    start_year: int
    end_year: int

    def __post_init__(self):
        if self.start_year > self.end_year:
            raise InputError(
                f"window start {self.start_year} is after end {self.end_year}"
            )

    def __contains__(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year

    @property
    def length(self) -> int:
        return self.end_year - self.start_year + 1

    @property
    def label(self) -> str:
        return f"w{self.length}"

    def __str__(self) -> str:
        return f"{self.start_year}-{self.end_year}"


@dataclass(frozen=True)
class Corpus:
    """Windowed publications plus the journal set they resolve against."""

    publications: tuple[PublicationRecord, ...]
    journals: Mapping[str, JournalProfile]
    window: TimeWindow
    dropped_outside_window: int = 0

    def __len__(self) -> int:
        return len(self.publications)

    def citations(self) -> list[int]:
        return [p.citations for p in self.publications]

    def institutions(self) -> set[str]:
        return {p.institution_id for p in self.publications}


def _parse_int(raw: str, what: str, line: int) -> int:
    try:
        return int(raw.strip())
    except (TypeError, ValueError, AttributeError):
        raise InputError(f"{what} must be a base-10 integer, got {raw!r}", line)


def _validate_record(row: Mapping[str, str], line: int) -> PublicationRecord:
    missing = [c for c in PUBLICATION_COLUMNS if row.get(c) in (None, "")]
    if missing:
        raise InputError(f"missing required column(s) {', '.join(missing)}", line)
    year = _parse_int(str(row["year"]), "year", line)
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise InputError(f"year {year} outside sanity range [{YEAR_MIN}, {YEAR_MAX}]", line)
    citations = _parse_int(str(row["citations"]), "citations", line)
    if citations < 0:
        raise InputError(f"negative citations ({citations})", line)
    return PublicationRecord(
        record_id=normalize_id(str(row["record_id"])),
        institution_id=normalize_id(str(row["institution_id"])),
        year=year,
        journal_id=normalize_id(str(row["journal_id"])),
        citations=citations,
    )


def load_publications(path: str | Path, format: str = "csv") -> list[PublicationRecord]:
    """Load publication records from a CSV or JSONL file.

    Row order is preserved; duplicate record ids are an error naming both rows.
    """
    path = Path(path)
    if format not in ("csv", "jsonl"):
        raise InputError(f"unknown publications format {format!r}")
    records: list[PublicationRecord] = []
    seen: dict[str, int] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        if format == "csv":
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or set(PUBLICATION_COLUMNS) - set(reader.fieldnames):
                raise InputError(
                    f"publications file must have columns {','.join(PUBLICATION_COLUMNS)}",
                    line=1,
                )
            rows: Iterable[tuple[int, Mapping[str, str]]] = (
                (i, row) for i, row in enumerate(reader, start=2)
            )
        else:
            def _jsonl_rows():
                for i, raw in enumerate(fh, start=1):
                    if not raw.strip():
                        continue
                    try:
                        yield i, json.loads(raw)
                    except json.JSONDecodeError as exc:
                        raise InputError(f"invalid JSON: {exc.msg}", i) from None
            rows = _jsonl_rows()
        for line, row in rows:
            rec = _validate_record(row, line)
            if rec.record_id in seen:
                raise InputError(
                    f"duplicate record_id {rec.record_id!r} "
                    f"(first seen at line {seen[rec.record_id]})",
                    line,
                )
            seen[rec.record_id] = line
            records.append(rec)
    return records


def dump_publications(records: Sequence[PublicationRecord], path: str | Path,
                      format: str = "csv") -> None:
    """Serialize records so that a re-load round-trips exactly."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        if format == "csv":
            writer = csv.writer(fh)
            writer.writerow(PUBLICATION_COLUMNS)
            for r in records:
                writer.writerow([r.record_id, r.institution_id, r.year, r.journal_id, r.citations])
        elif format == "jsonl":
            for r in records:
                fh.write(json.dumps({
                    "record_id": r.record_id,
                    "institution_id": r.institution_id,
                    "year": r.year,
                    "journal_id": r.journal_id,
                    "citations": r.citations,
                }) + "\n")
        else:
            raise InputError(f"unknown publications format {format!r}")


def load_journals(path: str | Path) -> dict[str, JournalProfile]:
    """Load journal profiles from a (journal_id, category, year, quartile) CSV."""
    path = Path(path)
    categories: dict[str, set[str]] = {}
    quartiles: dict[str, dict[tuple[str, int], int]] = {}
    first_seen: dict[tuple[str, str, int], int] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(JOURNAL_COLUMNS) - set(reader.fieldnames):
            raise InputError(
                f"journals file must have columns {','.join(JOURNAL_COLUMNS)}", line=1
            )
        for line, row in enumerate(reader, start=2):
            jid = normalize_id(row["journal_id"] or "")
            cat = normalize_category(row["category"] or "")
            if not jid or not cat:
                raise InputError("empty journal_id or category", line)
            year = _parse_int(row["year"], "year", line)
            quartile = _parse_int(row["quartile"], "quartile", line)
            if quartile not in (1, 2, 3, 4):
                raise InputError(f"quartile {quartile} outside {{1,2,3,4}}", line)
            key = (jid, cat, year)
            if key in first_seen:
                existing = quartiles[jid][(cat, year)]
                if existing != quartile:
                    raise InputError(
                        f"conflicting quartiles for journal {jid!r}, category {cat!r}, "
                        f"year {year}: Q{existing} (line {first_seen[key]}) vs Q{quartile}",
                        line,
                    )
                continue
            first_seen[key] = line
            categories.setdefault(jid, set()).add(cat)
            quartiles.setdefault(jid, {})[(cat, year)] = quartile
    return {
        jid: JournalProfile(jid, frozenset(cats), dict(quartiles[jid]))
        for jid, cats in categories.items()
    }


def build_corpus(publications: Sequence[PublicationRecord],
                 journals: Mapping[str, JournalProfile],
                 window: TimeWindow) -> Corpus:
    """Window the publications and bind them to the journal set.

    Records outside the window are dropped (counted); an unknown journal_id
    is a hard error. Idempotent for a fixed window.
    """
    kept: list[PublicationRecord] = []
    dropped = 0
    for rec in publications:
        if rec.journal_id not in journals:
            raise InputError(
                f"record {rec.record_id!r} references unknown journal {rec.journal_id!r}"
            )
        if rec.year in window:
            kept.append(rec)
        else:
            dropped += 1
    return Corpus(
        publications=tuple(kept),
        journals=dict(journals),
        window=window,
        dropped_outside_window=dropped,
    )

"""Fields as aggregations of journal subject categories.

A record belongs to a field iff its journal's category set intersects the
field's category set. Counting is whole, not fractional: a record matched by
k fields counts fully in each of them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .corpus import Corpus, normalize_category, normalize_id
from .errors import InputError

LEVELS = ("field", "subfield")


@dataclass(frozen=True)
class FieldTaxonomy:
    """Named fields/subfields, each a non-empty set of category codes."""

    categories_by_field: Mapping[str, frozenset[str]]
    level_by_field: Mapping[str, str]

    def field_names(self) -> list[str]:
        return sorted(self.categories_by_field)

    def categories(self, field_name: str) -> frozenset[str]:
        try:
            return self.categories_by_field[field_name]
        except KeyError:
            raise InputError(f"unknown field {field_name!r}") from None


@dataclass(frozen=True)
class FieldAssignment:
    """Per-record field membership, plus the taxonomy's field names."""

    fields_by_record: Mapping[str, frozenset[str]]
    field_names: frozenset[str]

    def unassigned(self) -> list[str]:
        """Record ids that matched no field, for the coverage report."""
        return sorted(rid for rid, fields in self.fields_by_record.items() if not fields)


def load_taxonomy(path: str | Path) -> FieldTaxonomy:
    """Load a (field_name, level, category) CSV into a FieldTaxonomy.

    Categories may appear in several fields; a field's level must be
    consistent across its rows.
    """
    path = Path(path)
    categories: dict[str, set[str]] = {}
    levels: dict[str, str] = {}
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"field_name", "level", "category"}
        if reader.fieldnames is None or required - set(reader.fieldnames):
            raise InputError("taxonomy file must have columns field_name,level,category", line=1)
        for line, row in enumerate(reader, start=2):
            name = normalize_id(row["field_name"] or "")
            level = normalize_id(row["level"] or "")
            cat = normalize_category(row["category"] or "")
            if not name:
                raise InputError("empty field name", line)
            if level not in LEVELS:
                raise InputError(f"level must be one of {LEVELS}, got {level!r}", line)
            if not cat:
                raise InputError(f"field {name!r} has an empty category", line)
            if name in levels and levels[name] != level:
                raise InputError(
                    f"field {name!r} listed with conflicting levels "
                    f"{levels[name]!r} and {level!r}",
                    line,
                )
            levels[name] = level
            categories.setdefault(name, set()).add(cat)
    if not categories:
        raise InputError("taxonomy file defines no fields")
    return FieldTaxonomy(
        categories_by_field={n: frozenset(c) for n, c in categories.items()},
        level_by_field=dict(levels),
    )


def assign_fields(corpus: Corpus, taxonomy: FieldTaxonomy) -> FieldAssignment:
    """Map every record to the fields whose categories its journal intersects."""
    out: dict[str, frozenset[str]] = {}
    for rec in corpus.publications:
        journal_cats = corpus.journals[rec.journal_id].categories
        matched = frozenset(
            name
            for name, cats in taxonomy.categories_by_field.items()
            if journal_cats & cats
        )
        out[rec.record_id] = matched
    return FieldAssignment(
        fields_by_record=out,
        field_names=frozenset(taxonomy.categories_by_field),
    )


def field_corpus(corpus: Corpus, assignment: FieldAssignment, field: str) -> Corpus:
    """Project the corpus onto one field; journals restricted to those referenced."""
    if field not in assignment.field_names:
        raise InputError(f"unknown field {field!r}")
    kept = tuple(
        rec for rec in corpus.publications
        if field in assignment.fields_by_record.get(rec.record_id, frozenset())
    )
    journals = {rec.journal_id: corpus.journals[rec.journal_id] for rec in kept}
    return Corpus(publications=kept, journals=journals, window=corpus.window)

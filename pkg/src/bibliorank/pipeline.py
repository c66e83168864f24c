"""End-to-end runs: validate inputs, build per-field rankings, compare
ranking systems. All file outputs are deterministic: identical inputs and
configuration produce byte-identical files, and every output carries a
comment header with the tool version, config hash, and policy choices.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import __version__
from .concordance import (
    ConcordanceReport,
    load_crosswalk,
    run_crosswalk,
)
from .corpus import TimeWindow, build_corpus, load_journals, load_publications
from .errors import ConfigError, InputError
from .indicators import (
    MISSING_QUARTILE_POLICIES,
    Q1_POLICIES,
    IndicatorSet,
    compute_indicators,
    top10_threshold,
)
from .ranking import RankingTable, build_ranking, load_external_rankings
from .scoring import IndexScore, QuadrantLabel, classify_quadrants, score_field
from .taxonomy import assign_fields, field_corpus, load_taxonomy


@dataclass(frozen=True)
class RunConfig:
    publications: Path
    journals: Path
    taxonomy: Path
    windows: tuple[TimeWindow, ...]
    out_dir: Path
    external_rankings: Path | None = None
    national_rankings: Path | None = None
    crosswalk: Path | None = None
    publications_format: str = "csv"
    q1_policy: str = "any-relevant"
    missing_quartile: str = "warn"
    missing_national: str = "warn"
    min_n: int = 3
    national_system: str = "national"

    def validate(self) -> None:
        if self.q1_policy not in Q1_POLICIES:
            raise ConfigError(f"q1_policy must be one of {Q1_POLICIES}")
        if self.missing_quartile not in MISSING_QUARTILE_POLICIES:
            raise ConfigError(
                f"missing_quartile must be one of {MISSING_QUARTILE_POLICIES}"
            )
        if self.missing_national not in ("strict", "warn"):
            raise ConfigError("missing_national must be 'strict' or 'warn'")
        if self.min_n < 2:
            raise ConfigError("min_n must be >= 2")
        if not self.windows:
            raise ConfigError("at least one window is required")
        for p in (self.publications, self.journals, self.taxonomy):
            if not p.exists():
                raise ConfigError(f"input file does not exist: {p}")
        for p in (self.external_rankings, self.national_rankings, self.crosswalk):
            if p is not None and not p.exists():
                raise ConfigError(f"input file does not exist: {p}")

    def digest(self) -> str:
        payload = {
            "publications": str(self.publications),
            "journals": str(self.journals),
            "taxonomy": str(self.taxonomy),
            "windows": [[w.start_year, w.end_year] for w in self.windows],
            "external_rankings": str(self.external_rankings or ""),
            "national_rankings": str(self.national_rankings or ""),
            "crosswalk": str(self.crosswalk or ""),
            "publications_format": self.publications_format,
            "q1_policy": self.q1_policy,
            "missing_quartile": self.missing_quartile,
            "missing_national": self.missing_national,
            "min_n": self.min_n,
            "national_system": self.national_system,
        }
        blob = json.dumps(payload, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:16]


def parse_window(text: str) -> TimeWindow:
    m = re.match(r"^(\d{4}):(\d{4})$", text.strip())
    if m is None:
        raise ConfigError(f"window must look like START:END, got {text!r}")
    return TimeWindow(int(m.group(1)), int(m.group(2)))


def load_config(path: str | Path) -> RunConfig:
    """Load a JSON run configuration; relative paths resolve against the file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    base = path.parent

    def _path(key: str, required: bool = False) -> Path | None:
        value = raw.get(key)
        if value is None:
            if required:
                raise ConfigError(f"config is missing required key {key!r}")
            return None
        return (base / value).resolve()

    windows = []
    for pair in raw.get("windows", []):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ConfigError(f"each window must be [start, end], got {pair!r}")
        windows.append(TimeWindow(int(pair[0]), int(pair[1])))

    config = RunConfig(
        publications=_path("publications", required=True),
        journals=_path("journals", required=True),
        taxonomy=_path("taxonomy", required=True),
        windows=tuple(windows),
        out_dir=(base / raw.get("out_dir", "out")).resolve(),
        external_rankings=_path("external_rankings"),
        national_rankings=_path("national_rankings"),
        crosswalk=_path("crosswalk"),
        publications_format=raw.get("publications_format", "csv"),
        q1_policy=raw.get("q1_policy", "any-relevant"),
        missing_quartile=raw.get("missing_quartile", "warn"),
        missing_national=raw.get("missing_national", "warn"),
        min_n=int(raw.get("min_n", 3)),
        national_system=raw.get("national_system", "national"),
    )
    return config


def slugify(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", name.casefold()).strip("_")


def _atomic_write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def _header(config: RunConfig, window: TimeWindow | None = None) -> str:
    lines = [
        f"# bibliorank {__version__}",
        f"# config_sha256={config.digest()}",
        f"# q1_policy={config.q1_policy} missing_quartile={config.missing_quartile} "
        f"missing_national={config.missing_national} min_n={config.min_n}",
    ]
    if window is not None:
        lines.append(f"# window={window}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FieldResult:
    """Everything computed for one (field, window)."""

    field_name: str
    window: TimeWindow
    indicators: Mapping[str, IndicatorSet]
    scores: Mapping[str, IndexScore]
    quadrants: Mapping[str, QuadrantLabel]
    table: RankingTable


@dataclass(frozen=True)
class ValidationReport:
    publication_count: int
    journal_count: int
    field_count: int
    retained_by_window: Mapping[str, int]
    dropped_by_window: Mapping[str, int]
    unassigned_by_window: Mapping[str, tuple[str, ...]]


def run_validate(config: RunConfig) -> ValidationReport:
    """Run all loaders and per-window corpus builds; raise on hard errors."""
    config.validate()
    publications = load_publications(config.publications, config.publications_format)
    journals = load_journals(config.journals)
    taxonomy = load_taxonomy(config.taxonomy)
    if config.external_rankings is not None:
        load_external_rankings(config.external_rankings)
    if config.national_rankings is not None:
        load_external_rankings(config.national_rankings)
    if config.crosswalk is not None:
        load_crosswalk(config.crosswalk)
    retained: dict[str, int] = {}
    dropped: dict[str, int] = {}
    unassigned: dict[str, tuple[str, ...]] = {}
    for window in config.windows:
        corpus = build_corpus(publications, journals, window)
        assignment = assign_fields(corpus, taxonomy)
        retained[str(window)] = len(corpus)
        dropped[str(window)] = corpus.dropped_outside_window
        unassigned[str(window)] = tuple(assignment.unassigned())
    return ValidationReport(
        publication_count=len(publications),
        journal_count=len(journals),
        field_count=len(taxonomy.categories_by_field),
        retained_by_window=retained,
        dropped_by_window=dropped,
        unassigned_by_window=unassigned,
    )


def compute_field_results(config: RunConfig, window: TimeWindow,
                          field_order: Sequence[str] | None = None,
                          system_name: str | None = None) -> dict[str, FieldResult]:
    """Indicators, scores, quadrants, and ranking table per non-empty field.

    ``field_order`` controls processing order only; results are keyed by
    field name and independent of the order.
    """
    publications = load_publications(config.publications, config.publications_format)
    journals = load_journals(config.journals)
    taxonomy = load_taxonomy(config.taxonomy)
    corpus = build_corpus(publications, journals, window)
    assignment = assign_fields(corpus, taxonomy)
    order = list(field_order) if field_order is not None else taxonomy.field_names()
    results: dict[str, FieldResult] = {}
    for name in order:
        fc = field_corpus(corpus, assignment, name)
        if len(fc) == 0:
            continue
        threshold = top10_threshold(fc, field_name=name)
        indicators = compute_indicators(
            fc, threshold,
            field_categories=taxonomy.categories(name),
            q1_policy=config.q1_policy,
            missing_quartile=config.missing_quartile,
        )
        scores = score_field(indicators)
        results[name] = FieldResult(
            field_name=name,
            window=window,
            indicators=indicators,
            scores=scores,
            quadrants=classify_quadrants(scores),
            table=build_ranking(scores, system_name or config.national_system,
                                name, window=window),
        )
    return results


def _ranking_csv(result: FieldResult, config: RunConfig) -> str:
    buf = io.StringIO()
    buf.write(_header(config, result.window))
    buf.write("system_name,field_name,institution_id,rank,ifq2a\n")
    for entry in result.table.entries:
        buf.write(
            f"{result.table.system_name},{result.field_name},{entry.institution_id},"
            f"{entry.rank},{entry.score:.6f}\n"
        )
    return buf.getvalue()


def _quadrant_csv(result: FieldResult, config: RunConfig) -> str:
    buf = io.StringIO()
    buf.write(_header(config, result.window))
    buf.write("field_name,institution_id,qnif,qlif,ifq2a,quadrant,mean_qnif,mean_qlif\n")
    for inst in sorted(result.scores):
        s = result.scores[inst]
        q = result.quadrants[inst]
        buf.write(
            f"{result.field_name},{inst},{s.qnif:.6f},{s.qlif:.6f},{s.ifq2a:.6f},"
            f"{q.label},{q.mean_qnif:.6f},{q.mean_qlif:.6f}\n"
        )
    return buf.getvalue()


def _indicator_csv(result: FieldResult, config: RunConfig) -> str:
    buf = io.StringIO()
    buf.write(_header(config, result.window))
    buf.write("field_name,institution_id,ndoc,ncit,h,pct_q1,acit,topcit\n")
    for inst in sorted(result.indicators):
        ind = result.indicators[inst]
        buf.write(
            f"{result.field_name},{inst},{ind.ndoc},{ind.ncit},{ind.h},"
            f"{ind.pct_q1:.6f},{ind.acit:.6f},{ind.topcit:.6f}\n"
        )
    return buf.getvalue()


def run_rank(config: RunConfig, field_order: Sequence[str] | None = None,
             outputs: Iterable[str] = ("ranking", "quadrants", "indicators")) -> list[Path]:
    """Write per-field ranking, quadrant scatter, and indicator files.

    One output set per configured window, suffixed by window length (w5,
    w10, ...). Returns the written paths in deterministic order.
    """
    config.validate()
    outputs = tuple(outputs)
    written: list[Path] = []
    for window in config.windows:
        results = compute_field_results(config, window, field_order=field_order)
        for name in sorted(results):
            result = results[name]
            stem = f"{slugify(name)}_{window.label}"
            if "ranking" in outputs:
                path = config.out_dir / f"{stem}_ranking.csv"
                _atomic_write(path, _ranking_csv(result, config))
                written.append(path)
            if "quadrants" in outputs:
                path = config.out_dir / f"{stem}_quadrants.csv"
                _atomic_write(path, _quadrant_csv(result, config))
                written.append(path)
            if "indicators" in outputs:
                path = config.out_dir / f"{stem}_indicators.csv"
                _atomic_write(path, _indicator_csv(result, config))
                written.append(path)
    return written


def _format_rho(rho: float | None) -> str:
    return "*" if rho is None else f"{rho:.3f}"


def _report_csv(report: ConcordanceReport, config: RunConfig) -> str:
    buf = io.StringIO()
    buf.write(_header(config))
    buf.write(f"# systems={report.source_system}->{report.target_system}\n")
    buf.write("source_field,target_field,n,rho,agreement_num,agreement_den,agreement_decimal\n")
    for pair in report.pairs:
        buf.write(
            f"{pair.source_field},{pair.target_field},{pair.n},{_format_rho(pair.rho)},"
            f"{pair.agreement.numerator},{pair.agreement.denominator},"
            f"{pair.agreement.decimal:.6f}\n"
        )
    agg = report.aggregate
    mean = agg.mean_of_fractions
    buf.write(f"# pooled_agreement={agg.pooled} decimal={agg.pooled.decimal:.6f}\n")
    buf.write(
        f"# mean_of_fractions={mean.numerator}/{mean.denominator} "
        f"decimal={float(mean):.6f}\n"
    )
    for src, tgt in report.unresolved:
        buf.write(f"# unresolved={src}->{tgt}\n")
    return buf.getvalue()


def _national_tables(config: RunConfig) -> dict[str, RankingTable]:
    if config.national_rankings is not None:
        tables = load_external_rankings(config.national_rankings)
        systems = {system for system, _ in tables}
        if config.national_system in systems:
            chosen = config.national_system
        elif len(systems) == 1:
            chosen = next(iter(systems))
        else:
            raise ConfigError(
                f"national rankings file holds systems {sorted(systems)}; "
                f"none match national_system={config.national_system!r}"
            )
        return {f: t for (s, f), t in tables.items() if s == chosen}
    # No supplied national tables: rank internally over the first window.
    results = compute_field_results(config, config.windows[0])
    if not results:
        raise InputError("no non-empty fields to build national tables from")
    return {name: r.table for name, r in results.items()}


def run_compare(config: RunConfig) -> list[Path]:
    """Write one concordance report per crosswalk system pair."""
    config.validate()
    if config.external_rankings is None or config.crosswalk is None:
        raise ConfigError("compare requires external_rankings and crosswalk paths")
    intl_all = load_external_rankings(config.external_rankings)
    natl_tables = _national_tables(config)
    system_set = set()
    for table in natl_tables.values():
        system_set |= table.institution_ids()
    crosswalks = load_crosswalk(config.crosswalk)
    if not crosswalks:
        raise InputError("crosswalk file defines no system pairs")
    written: list[Path] = []
    for cw in sorted(crosswalks, key=lambda c: (c.source_system, c.target_system)):
        intl_tables = {
            f: t for (s, f), t in intl_all.items() if s == cw.source_system
        }
        if not intl_tables:
            raise InputError(
                f"no external tables loaded for system {cw.source_system!r}"
            )
        report = run_crosswalk(
            cw, intl_tables, natl_tables, system_set,
            min_n=config.min_n, missing_national=config.missing_national,
        )
        path = config.out_dir / (
            f"concordance_{slugify(cw.source_system)}_{slugify(cw.target_system)}.csv"
        )
        _atomic_write(path, _report_csv(report, config))
        written.append(path)
    return written

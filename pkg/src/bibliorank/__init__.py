"""Bibliometric ranking engine: composite index scoring over publication
corpora, per-field university ranking tables, and concordance analysis
between ranking systems."""

__version__ = "0.1.0"

"""Output, citation and visibility indicators at five aggregation levels.

The nation scope is computed over the whole corpus (optionally restricted
to a configurable biomedical category list), never through the link set;
every other scope selects the distinct publications attributed to it via
validated links. Quartile and decile flags use the journal's best rank
fraction across its categories for the year, with inclusive thresholds
(rank/size <= 0.25 for Q1, <= 0.10 for D1). Papers whose journal has no
rank data for the year count toward paper and citation totals but are
excluded from the Q1/D1 denominators.

All functions are pure over the immutable corpus and link set; per-scope
computations are independent, so callers may parallelize them freely.
"""

from __future__ import annotations

import enum
from collections.abc import Collection, Mapping
from dataclasses import dataclass

from biblionet.corpus import Corpus, InstitutionalCategory, JournalMetricsTable, PublicationRecord
from biblionet.errors import ScopeError, UndefinedMetricError, UnknownCategoryError
from biblionet.linkage import LinkSet


def share(numerator: float, denominator: float) -> float | None:
    """Percentage numerator/denominator, or None for an empty denominator.
    Absent is deliberately distinct from zero throughout the toolkit."""
    if denominator == 0:
        return None
    return 100.0 * numerator / denominator


def citations_per_paper(citations: int, papers: int) -> float | None:
    if papers == 0:
        return None
    return citations / papers


class ScopeKind(enum.Enum):
    NATION = "nation"
    PROGRAMME = "programme"
    CENTRE = "centre"
    INSTITUTIONAL_CATEGORY = "institutional_category"
    GROUP = "group"


_KEYED_KINDS = {
    ScopeKind.CENTRE,
    ScopeKind.INSTITUTIONAL_CATEGORY,
    ScopeKind.GROUP,
}


@dataclass(frozen=True)
class Scope:
    kind: ScopeKind
    period: tuple[int, int]
    key: str | InstitutionalCategory | None = None

    def __post_init__(self):
        if self.kind in _KEYED_KINDS and self.key is None:
            raise ScopeError(f"scope kind {self.kind.value} requires a key")
        if self.kind not in _KEYED_KINDS and self.key is not None:
            raise ScopeError(f"scope kind {self.kind.value} takes no key")
        if self.period[0] > self.period[1]:
            raise ScopeError(f"inverted scope period {self.period}")


def scope_publications(
    scope: Scope,
    corpus: Corpus,
    links: LinkSet,
    biomedical_categories: Collection[str] | None = None,
) -> tuple[PublicationRecord, ...]:
    """Distinct publications attributed to the scope, in corpus order."""
    start, end = scope.period
    if scope.kind is ScopeKind.NATION:
        cats = set(biomedical_categories) if biomedical_categories else None
        return tuple(
            p
            for p in corpus.publications
            if start <= p.year <= end
            and (cats is None or not cats.isdisjoint(p.categories))
        )

    if scope.kind is ScopeKind.PROGRAMME:
        ids = set(links.all_publication_ids())
    elif scope.kind is ScopeKind.CENTRE:
        ids = set(links.publications_of_centre(scope.key))
    elif scope.kind is ScopeKind.GROUP:
        ids = set(links.publications_of_group(scope.key))
    else:  # institutional category: union over groups of that category
        roster = corpus.roster
        ids = set()
        for gid, group in roster.groups.items():
            if group.institutional_category is scope.key:
                ids.update(links.publications_of_group(gid))
    return tuple(
        p for p in corpus.publications if p.pub_id in ids and start <= p.year <= end
    )


@dataclass(frozen=True)
class JournalPosition:
    best_rank_fraction: float  # min rank/category_size over the year's categories
    is_q1: bool
    is_d1: bool


def journal_position(
    journal_id: str, year: int, metrics: JournalMetricsTable
) -> JournalPosition | None:
    """Best position of a journal for a year, None when unranked.

    With several categories the best (smallest) rank fraction wins; the
    same fraction drives both the quartile and the decile flag.
    """
    fraction = metrics.best_rank_fraction(journal_id, year)
    if fraction is None:
        return None
    return JournalPosition(
        best_rank_fraction=fraction,
        is_q1=fraction <= 0.25,
        is_d1=fraction <= 0.10,
    )


@dataclass(frozen=True)
class OutputIndicators:
    papers: int
    citations: int
    cites_per_paper: float | None  # None when papers == 0
    q1_share: float | None  # None when no paper has rank data
    d1_share: float | None
    ranked_papers: int


def indicators_for_records(
    records: Collection[PublicationRecord], metrics: JournalMetricsTable
) -> OutputIndicators:
    papers = len(records)
    citations = sum(r.citations for r in records)
    ranked = q1 = d1 = 0
    for record in records:
        position = journal_position(record.journal_id, record.year, metrics)
        if position is None:
            continue
        ranked += 1
        q1 += position.is_q1
        d1 += position.is_d1
    return OutputIndicators(
        papers=papers,
        citations=citations,
        cites_per_paper=citations_per_paper(citations, papers),
        q1_share=share(q1, ranked),
        d1_share=share(d1, ranked),
        ranked_papers=ranked,
    )


def output_indicators(
    scope: Scope,
    corpus: Corpus,
    links: LinkSet,
    biomedical_categories: Collection[str] | None = None,
) -> OutputIndicators:
    records = scope_publications(scope, corpus, links, biomedical_categories)
    return indicators_for_records(records, corpus.metrics)


def relative_growth(series: Mapping[int, float]) -> float:
    """Whole-period growth: 100 * (last - first) / first, endpoint based."""
    if len(series) < 2:
        raise ValueError("growth needs a series covering at least two years")
    years = sorted(series)
    first, last = series[years[0]], series[years[-1]]
    if first == 0:
        raise UndefinedMetricError("growth undefined from a zero first-year count")
    return 100.0 * (last - first) / first


@dataclass(frozen=True)
class NationalShare:
    overall: float | None
    by_year: dict[int, float | None]  # None where the national count is zero
    scope_by_year: dict[int, int]
    national_by_year: dict[int, int]


def national_share(
    scope: Scope,
    national_scope: Scope,
    corpus: Corpus,
    links: LinkSet,
    biomedical_categories: Collection[str] | None = None,
) -> NationalShare:
    """Scope share of the national output, overall and per year.

    The numerator counts the scope's publications inside the national set,
    so a scope publishing entirely outside it has a 0% share and no share
    can exceed 100.
    """
    scope_ids = {
        p.pub_id
        for p in scope_publications(scope, corpus, links, biomedical_categories)
    }
    national_pubs = scope_publications(
        national_scope, corpus, links, biomedical_categories
    )
    scope_by_year: dict[int, int] = {}
    national_by_year: dict[int, int] = {}
    start, end = scope.period
    for year in range(start, end + 1):
        scope_by_year[year] = sum(
            1 for p in national_pubs if p.year == year and p.pub_id in scope_ids
        )
        national_by_year[year] = sum(1 for p in national_pubs if p.year == year)
    return NationalShare(
        overall=share(sum(scope_by_year.values()), len(national_pubs)),
        by_year={
            year: share(scope_by_year[year], national_by_year[year])
            for year in range(start, end + 1)
        },
        scope_by_year=scope_by_year,
        national_by_year=national_by_year,
    )


@dataclass(frozen=True)
class CategoryComparison:
    centre_id: str
    category: str
    centre: OutputIndicators
    national: OutputIndicators
    national_share: float


def category_comparison(
    centre_id: str,
    category: str,
    corpus: Corpus,
    links: LinkSet,
    period: tuple[int, int],
) -> CategoryComparison:
    """Centre output in one subject category, side by side with the
    national output of that category."""
    start, end = period
    national_records = tuple(
        p
        for p in corpus.publications
        if category in p.categories and start <= p.year <= end
    )
    if not national_records:
        raise UnknownCategoryError(
            f"category {category!r} has no national output in {start}-{end}"
        )
    centre_ids = set(links.publications_of_centre(centre_id))
    centre_records = tuple(
        p for p in national_records if p.pub_id in centre_ids
    )
    return CategoryComparison(
        centre_id=centre_id,
        category=category,
        centre=indicators_for_records(centre_records, corpus.metrics),
        national=indicators_for_records(national_records, corpus.metrics),
        national_share=100.0 * len(centre_records) / len(national_records),
    )


def main_output_category(
    centre_id: str, corpus: Corpus, links: LinkSet, period: tuple[int, int]
) -> str | None:
    """The centre's most frequent subject category in the window (ties
    broken lexicographically for stable reports); None without output."""
    start, end = period
    centre_ids = set(links.publications_of_centre(centre_id))
    counts: dict[str, int] = {}
    for p in corpus.publications:
        if p.pub_id in centre_ids and start <= p.year <= end:
            for cat in p.categories:
                counts[cat] = counts.get(cat, 0) + 1
    if not counts:
        return None
    return min(counts, key=lambda cat: (-counts[cat], cat))

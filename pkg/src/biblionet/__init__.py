"""Batch toolkit for evaluating a networked research programme from
bibliographic records.

The package links publications to rostered researchers under name,
affiliation and subject constraints, computes output and visibility
indicators at several aggregation levels, measures how the internal
co-authorship network evolves between two periods, and tracks how often
researchers credit the programme in their address lines.
"""

from biblionet.corpus import (
    Centre,
    Corpus,
    DocType,
    InstitutionalCategory,
    JournalMetricsTable,
    PublicationRecord,
    Researcher,
    ResearchGroup,
    Roster,
    filter_period,
    parse_journal_metrics,
    parse_publications,
    parse_roster,
)
from biblionet.indicators import (
    OutputIndicators,
    Scope,
    ScopeKind,
    category_comparison,
    journal_position,
    national_share,
    output_indicators,
    relative_growth,
)
from biblionet.linkage import (
    LinkSet,
    apply_overrides,
    exclude_inactive_groups,
    generate_name_variants,
    match,
    parse_overrides,
)
from biblionet.network import (
    CollaborationNetwork,
    build_group_graph,
    cross_category_share,
    density,
    main_component_share,
    multiplicity_distribution,
    q1_by_collab_class,
)
from biblionet.signing import (
    SigningPattern,
    detect_signed,
    parse_patterns,
    signing_report,
    stabilization_year,
)

__version__ = "0.1.0"

__all__ = [
    "Centre",
    "CollaborationNetwork",
    "Corpus",
    "DocType",
    "InstitutionalCategory",
    "JournalMetricsTable",
    "LinkSet",
    "OutputIndicators",
    "PublicationRecord",
    "Researcher",
    "ResearchGroup",
    "Roster",
    "Scope",
    "ScopeKind",
    "SigningPattern",
    "apply_overrides",
    "build_group_graph",
    "category_comparison",
    "cross_category_share",
    "density",
    "detect_signed",
    "exclude_inactive_groups",
    "filter_period",
    "generate_name_variants",
    "journal_position",
    "main_component_share",
    "match",
    "multiplicity_distribution",
    "national_share",
    "output_indicators",
    "parse_journal_metrics",
    "parse_overrides",
    "parse_patterns",
    "parse_publications",
    "parse_roster",
    "q1_by_collab_class",
    "relative_growth",
    "signing_report",
    "stabilization_year",
]

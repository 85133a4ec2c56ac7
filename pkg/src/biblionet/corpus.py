"""Parsing and validation of the three input datasets.

All input files are UTF-8 and pipe-delimited. List-valued fields use ';'
as the sub-delimiter. The layouts are:

publications   one record per line, no header:
                   pub_id|year|doc_type|authors|addresses|journal_id|categories|citations
centres        header row: centre_id|acronym|launch_year|annual_budget
                   annual_budget is a ';'-separated list of year:amount pairs (may be empty)
groups         header row: group_id|centre_id|institution|institutional_category|region|lead_researcher_id
                   plus an optional institution_aliases column (';'-separated)
researchers    header row: researcher_id|full_name|group_id|subject_areas
journal metrics  header row: journal_id|year|category|rank|category_size

Only four document types are admitted (article, review, letter, editorial
material; matched case-insensitively). Records of any other type are
skipped and counted, never silently dropped, so that
``admitted + skipped == input records`` always holds.

The parsed corpus is immutable and safe to share across concurrent
readers; distinct streams can be parsed concurrently since the parsers
keep no shared state.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from biblionet.errors import (
    DuplicateKeyError,
    IntegrityError,
    MetricsValidationError,
    RecordParseError,
)

FIELD_DELIM = "|"
SUB_DELIM = ";"


class DocType(enum.Enum):
    ARTICLE = "Article"
    REVIEW = "Review"
    LETTER = "Letter"
    EDITORIAL_MATERIAL = "Editorial Material"


def _canon(token: str) -> str:
    return " ".join(token.replace("_", " ").split()).casefold()


_DOC_TYPES = {_canon(dt.value): dt for dt in DocType}


class InstitutionalCategory(enum.Enum):
    UNIVERSITY = "University"
    HOSPITAL = "Hospital"
    PUBLIC_RESEARCH_ORG = "PublicResearchOrg"
    FOUNDATION = "Foundation"
    OTHER = "Other"


_INST_CATEGORIES = {_canon(c.value): c for c in InstitutionalCategory}
_INST_CATEGORIES["public research org"] = InstitutionalCategory.PUBLIC_RESEARCH_ORG
_INST_CATEGORIES["public research organization"] = InstitutionalCategory.PUBLIC_RESEARCH_ORG


@dataclass(frozen=True, slots=True)
class PublicationRecord:
    """One indexed paper, as parsed from the publications file."""

    pub_id: str
    year: int
    doc_type: DocType
    authors: tuple[str, ...]
    addresses: tuple[str, ...]
    journal_id: str
    categories: tuple[str, ...]
    citations: int


@dataclass(frozen=True, slots=True)
class SkippedRecord:
    """A record rejected by the document-type filter."""

    line_no: int
    pub_id: str
    doc_type: str


@dataclass(frozen=True, slots=True)
class PublicationParse:
    """Admitted records plus the counted leftovers of one parse pass."""

    records: tuple[PublicationRecord, ...]
    skipped: tuple[SkippedRecord, ...]

    @property
    def input_count(self) -> int:
        return len(self.records) + len(self.skipped)


@dataclass(frozen=True, slots=True)
class Centre:
    centre_id: str
    acronym: str
    launch_year: int
    annual_budget: Mapping[int, float] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class ResearchGroup:
    group_id: str
    centre_id: str
    institution: str
    institutional_category: InstitutionalCategory
    region: str
    lead_researcher_id: str
    institution_aliases: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class Researcher:
    researcher_id: str
    full_name: str  # "surname(s), given name(s)"
    group_id: str
    subject_areas: tuple[str, ...]


@dataclass(frozen=True)
class Roster:
    """Cross-linked programme structure: centres, groups, researchers.

    Built via :meth:`build`, which validates referential integrity and
    precomputes the per-centre and per-group indexes.
    """

    centres: dict[str, Centre]
    groups: dict[str, ResearchGroup]
    researchers: dict[str, Researcher]
    groups_by_centre: dict[str, tuple[str, ...]]
    researchers_by_group: dict[str, tuple[str, ...]]

    @classmethod
    def build(
        cls,
        centres: Iterable[Centre],
        groups: Iterable[ResearchGroup],
        researchers: Iterable[Researcher],
    ) -> "Roster":
        centre_map: dict[str, Centre] = {}
        acronyms: set[str] = set()
        for centre in centres:
            if centre.centre_id in centre_map:
                raise DuplicateKeyError(f"duplicate centre_id {centre.centre_id!r}")
            if centre.acronym in acronyms:
                raise DuplicateKeyError(f"duplicate centre acronym {centre.acronym!r}")
            centre_map[centre.centre_id] = centre
            acronyms.add(centre.acronym)

        group_map: dict[str, ResearchGroup] = {}
        for group in groups:
            if group.group_id in group_map:
                raise DuplicateKeyError(f"duplicate group_id {group.group_id!r}")
            if group.centre_id not in centre_map:
                raise IntegrityError(
                    f"group {group.group_id!r} references unknown centre_id {group.centre_id!r}"
                )
            group_map[group.group_id] = group

        researcher_map: dict[str, Researcher] = {}
        for researcher in researchers:
            if researcher.researcher_id in researcher_map:
                raise DuplicateKeyError(
                    f"duplicate researcher_id {researcher.researcher_id!r}"
                )
            if researcher.group_id not in group_map:
                raise IntegrityError(
                    f"researcher {researcher.researcher_id!r} references "
                    f"unknown group_id {researcher.group_id!r}"
                )
            researcher_map[researcher.researcher_id] = researcher

        by_centre: dict[str, list[str]] = {cid: [] for cid in centre_map}
        for gid in sorted(group_map):
            by_centre[group_map[gid].centre_id].append(gid)
        by_group: dict[str, list[str]] = {gid: [] for gid in group_map}
        for rid in sorted(researcher_map):
            by_group[researcher_map[rid].group_id].append(rid)

        return cls(
            centres=centre_map,
            groups=group_map,
            researchers=researcher_map,
            groups_by_centre={cid: tuple(gids) for cid, gids in by_centre.items()},
            researchers_by_group={gid: tuple(rids) for gid, rids in by_group.items()},
        )

    def group_count(self, centre_id: str) -> int:
        return len(self.groups_by_centre[centre_id])

    def researcher_count(self, centre_id: str) -> int:
        return sum(
            len(self.researchers_by_group[gid])
            for gid in self.groups_by_centre[centre_id]
        )

    def researchers_of_centre(self, centre_id: str) -> tuple[str, ...]:
        out: list[str] = []
        for gid in self.groups_by_centre[centre_id]:
            out.extend(self.researchers_by_group[gid])
        return tuple(out)

    def summary_rows(self) -> list[tuple[str, str, int, int, int]]:
        """(centre_id, acronym, launch_year, groups, researchers) per centre."""
        rows = []
        for cid in sorted(self.centres):
            centre = self.centres[cid]
            rows.append(
                (cid, centre.acronym, centre.launch_year,
                 self.group_count(cid), self.researcher_count(cid))
            )
        return rows


class JournalMetricsTable:
    """Rank data keyed by (journal_id, year, category).

    A missing lookup returns an empty tuple / None, which is how callers
    distinguish unranked journals from ranked ones.
    """

    def __init__(self, entries: Mapping[tuple[str, int, str], tuple[int, int]]):
        for (journal_id, year, category), (rank, size) in entries.items():
            if rank < 1 or size < 1 or rank > size:
                raise MetricsValidationError(
                    f"invalid rank {rank}/{size} for journal {journal_id!r}, "
                    f"year {year}, category {category!r}"
                )
        self._entries = dict(entries)
        by_jy: dict[tuple[str, int], list[tuple[str, int, int]]] = {}
        for (journal_id, year, category), (rank, size) in self._entries.items():
            by_jy.setdefault((journal_id, year), []).append((category, rank, size))
        self._by_journal_year = {
            key: tuple(sorted(vals)) for key, vals in by_jy.items()
        }
        # precomputed so repeated per-record position lookups stay O(1)
        self._best_fraction = {
            key: min(rank / size for _, rank, size in vals)
            for key, vals in self._by_journal_year.items()
        }

    def get(self, journal_id: str, year: int, category: str) -> tuple[int, int] | None:
        return self._entries.get((journal_id, year, category))

    def entries_for(self, journal_id: str, year: int) -> tuple[tuple[str, int, int], ...]:
        """All (category, rank, category_size) rows for a journal-year."""
        return self._by_journal_year.get((journal_id, year), ())

    def best_rank_fraction(self, journal_id: str, year: int) -> float | None:
        """Smallest rank/category_size across the journal's categories for
        the year; None when the journal-year is unranked."""
        return self._best_fraction.get((journal_id, year))

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JournalMetricsTable):
            return NotImplemented
        return self._entries == other._entries

    def items(self):
        return self._entries.items()


@dataclass(frozen=True)
class Corpus:
    """Immutable bundle of the three parsed datasets plus a pub_id index."""

    publications: tuple[PublicationRecord, ...]
    roster: Roster
    metrics: JournalMetricsTable
    by_id: dict[str, PublicationRecord]

    @classmethod
    def build(
        cls,
        publications: Iterable[PublicationRecord],
        roster: Roster,
        metrics: JournalMetricsTable,
    ) -> "Corpus":
        pubs = tuple(publications)
        return cls(
            publications=pubs,
            roster=roster,
            metrics=metrics,
            by_id={p.pub_id: p for p in pubs},
        )

    def unresolved_journals(self) -> tuple[tuple[str, int], ...]:
        """(journal_id, year) pairs referenced by records but absent from
        the metrics table. Sorted, so the listing is stable."""
        missing = {
            (p.journal_id, p.year)
            for p in self.publications
            if not self.metrics.entries_for(p.journal_id, p.year)
        }
        return tuple(sorted(missing))


# --- publications ------------------------------------------------------------


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise RecordParseError(line_no, f"{what} is not an integer: {token.strip()!r}") from None


def _split_sub(token: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in token.split(SUB_DELIM) if part.strip())


def parse_publications(lines: Iterable[str]) -> PublicationParse:
    """Parse the publications stream, admitting only the four document types.

    Raises RecordParseError (with the offending line number) on malformed
    lines and DuplicateKeyError on repeated pub_ids. Input order is
    preserved in the result.
    """
    records: list[PublicationRecord] = []
    skipped: list[SkippedRecord] = []
    seen: set[str] = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split(FIELD_DELIM)
        if len(parts) != 8:
            raise RecordParseError(line_no, f"expected 8 fields, found {len(parts)}")
        pub_id = parts[0].strip()
        if not pub_id:
            raise RecordParseError(line_no, "empty pub_id")
        if pub_id in seen:
            raise DuplicateKeyError(f"duplicate pub_id {pub_id!r} at line {line_no}")
        seen.add(pub_id)
        year = _parse_int(parts[1], line_no, "year")
        doc_type = _DOC_TYPES.get(_canon(parts[2]))
        if doc_type is None:
            skipped.append(SkippedRecord(line_no, pub_id, parts[2].strip()))
            continue
        authors = _split_sub(parts[3])
        if not authors:
            raise RecordParseError(line_no, f"record {pub_id!r} has no authors")
        citations = _parse_int(parts[7], line_no, "citations")
        if citations < 0:
            raise RecordParseError(line_no, f"negative citation count {citations}")
        records.append(
            PublicationRecord(
                pub_id=pub_id,
                year=year,
                doc_type=doc_type,
                authors=authors,
                addresses=_split_sub(parts[4]),
                journal_id=parts[5].strip(),
                categories=_split_sub(parts[6]),
                citations=citations,
            )
        )
    return PublicationParse(records=tuple(records), skipped=tuple(skipped))


# --- headered tables ----------------------------------------------------------


def _table_rows(lines: Iterable[str], required: tuple[str, ...],
                optional: tuple[str, ...] = ()):
    """Yield (line_no, row_dict) for a pipe-delimited table with a header."""
    header: list[str] | None = None
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = [p.strip() for p in line.split(FIELD_DELIM)]
        if header is None:
            header = parts
            missing = [col for col in required if col not in header]
            if missing:
                raise RecordParseError(line_no, f"header is missing columns {missing}")
            unknown = [col for col in header if col not in required + optional]
            if unknown:
                raise RecordParseError(line_no, f"header has unknown columns {unknown}")
            continue
        if len(parts) != len(header):
            raise RecordParseError(
                line_no, f"expected {len(header)} fields, found {len(parts)}"
            )
        yield line_no, dict(zip(header, parts))


def _parse_budget(token: str, line_no: int) -> dict[int, float]:
    budget: dict[int, float] = {}
    for item in token.split(SUB_DELIM):
        item = item.strip()
        if not item:
            continue
        year_part, _, amount_part = item.partition(":")
        year = _parse_int(year_part, line_no, "budget year")
        try:
            budget[year] = float(amount_part)
        except ValueError:
            raise RecordParseError(
                line_no, f"budget amount is not a number: {amount_part!r}"
            ) from None
    return budget


def parse_roster(
    centres_lines: Iterable[str],
    groups_lines: Iterable[str],
    researchers_lines: Iterable[str],
) -> Roster:
    """Parse the three roster tables into a cross-linked Roster.

    Dangling centre or group references raise IntegrityError naming the key.
    """
    centres = []
    for line_no, row in _table_rows(
        centres_lines, ("centre_id", "acronym", "launch_year"), ("annual_budget",)
    ):
        centres.append(
            Centre(
                centre_id=row["centre_id"],
                acronym=row["acronym"],
                launch_year=_parse_int(row["launch_year"], line_no, "launch_year"),
                annual_budget=_parse_budget(row.get("annual_budget", ""), line_no),
            )
        )

    groups = []
    for line_no, row in _table_rows(
        groups_lines,
        ("group_id", "centre_id", "institution", "institutional_category",
         "region", "lead_researcher_id"),
        ("institution_aliases",),
    ):
        category = _INST_CATEGORIES.get(_canon(row["institutional_category"]))
        if category is None:
            raise RecordParseError(
                line_no,
                f"unknown institutional_category {row['institutional_category']!r}",
            )
        groups.append(
            ResearchGroup(
                group_id=row["group_id"],
                centre_id=row["centre_id"],
                institution=row["institution"],
                institutional_category=category,
                region=row["region"],
                lead_researcher_id=row["lead_researcher_id"],
                institution_aliases=_split_sub(row.get("institution_aliases", "")),
            )
        )

    researchers = []
    for line_no, row in _table_rows(
        researchers_lines, ("researcher_id", "full_name", "group_id", "subject_areas")
    ):
        if not row["full_name"]:
            raise RecordParseError(line_no, "empty full_name")
        researchers.append(
            Researcher(
                researcher_id=row["researcher_id"],
                full_name=row["full_name"],
                group_id=row["group_id"],
                subject_areas=_split_sub(row["subject_areas"]),
            )
        )

    return Roster.build(centres, groups, researchers)


def parse_journal_metrics(lines: Iterable[str]) -> JournalMetricsTable:
    """Parse the journal metrics table.

    rank > category_size raises MetricsValidationError; a journal may carry
    entries in several categories for the same year.
    """
    entries: dict[tuple[str, int, str], tuple[int, int]] = {}
    for line_no, row in _table_rows(
        lines, ("journal_id", "year", "category", "rank", "category_size")
    ):
        key = (
            row["journal_id"],
            _parse_int(row["year"], line_no, "year"),
            row["category"],
        )
        if key in entries:
            raise DuplicateKeyError(
                f"duplicate metrics entry for {key!r} at line {line_no}"
            )
        entries[key] = (
            _parse_int(row["rank"], line_no, "rank"),
            _parse_int(row["category_size"], line_no, "category_size"),
        )
    return JournalMetricsTable(entries)


def filter_period(
    records: Iterable[PublicationRecord], start_year: int, end_year: int
) -> tuple[PublicationRecord, ...]:
    """Records with start_year <= year <= end_year, input order preserved."""
    if start_year > end_year:
        raise ValueError(f"inverted year bounds: {start_year} > {end_year}")
    return tuple(r for r in records if start_year <= r.year <= end_year)


# --- serialization ------------------------------------------------------------
#
# Writers mirror the parsers exactly, so parse -> write -> parse is the
# identity. Reserved delimiter characters inside field values are rejected
# rather than escaped.


def _field_value(value: str) -> str:
    if FIELD_DELIM in value or SUB_DELIM in value or "\n" in value:
        raise ValueError(f"field value contains a reserved delimiter: {value!r}")
    return value


def _join_sub(values: Iterable[str]) -> str:
    return SUB_DELIM.join(_field_value(v) for v in values)


def write_publications(records: Iterable[PublicationRecord], handle) -> int:
    count = 0
    for r in records:
        handle.write(
            FIELD_DELIM.join(
                (
                    _field_value(r.pub_id),
                    str(r.year),
                    r.doc_type.value,
                    _join_sub(r.authors),
                    _join_sub(r.addresses),
                    _field_value(r.journal_id),
                    _join_sub(r.categories),
                    str(r.citations),
                )
            )
            + "\n"
        )
        count += 1
    return count


def write_centres(centres: Iterable[Centre], handle) -> int:
    handle.write("centre_id|acronym|launch_year|annual_budget\n")
    count = 0
    for c in centres:
        budget = SUB_DELIM.join(
            f"{year}:{amount:g}" for year, amount in sorted(c.annual_budget.items())
        )
        handle.write(
            FIELD_DELIM.join(
                (_field_value(c.centre_id), _field_value(c.acronym),
                 str(c.launch_year), budget)
            )
            + "\n"
        )
        count += 1
    return count


def write_groups(groups: Iterable[ResearchGroup], handle) -> int:
    handle.write(
        "group_id|centre_id|institution|institutional_category|region"
        "|lead_researcher_id|institution_aliases\n"
    )
    count = 0
    for g in groups:
        handle.write(
            FIELD_DELIM.join(
                (
                    _field_value(g.group_id),
                    _field_value(g.centre_id),
                    _field_value(g.institution),
                    g.institutional_category.value,
                    _field_value(g.region),
                    _field_value(g.lead_researcher_id),
                    _join_sub(g.institution_aliases),
                )
            )
            + "\n"
        )
        count += 1
    return count


def write_researchers(researchers: Iterable[Researcher], handle) -> int:
    handle.write("researcher_id|full_name|group_id|subject_areas\n")
    count = 0
    for r in researchers:
        handle.write(
            FIELD_DELIM.join(
                (
                    _field_value(r.researcher_id),
                    _field_value(r.full_name),
                    _field_value(r.group_id),
                    _join_sub(r.subject_areas),
                )
            )
            + "\n"
        )
        count += 1
    return count


def write_journal_metrics(metrics: JournalMetricsTable, handle) -> int:
    handle.write("journal_id|year|category|rank|category_size\n")
    count = 0
    for (journal_id, year, category), (rank, size) in sorted(metrics.items()):
        handle.write(
            FIELD_DELIM.join(
                (_field_value(journal_id), str(year), _field_value(category),
                 str(rank), str(size))
            )
            + "\n"
        )
        count += 1
    return count

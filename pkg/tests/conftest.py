"""Shared builders for the test suite."""

from __future__ import annotations

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
)

INST = {
    "uni": InstitutionalCategory.UNIVERSITY,
    "hosp": InstitutionalCategory.HOSPITAL,
    "pro": InstitutionalCategory.PUBLIC_RESEARCH_ORG,
    "fund": InstitutionalCategory.FOUNDATION,
}


def make_record(
    pub_id: str,
    year: int = 2008,
    doc_type: DocType = DocType.ARTICLE,
    authors=("Author, A.",),
    addresses=("Somewhere, Spain",),
    journal_id: str = "J1",
    categories=("CAT",),
    citations: int = 0,
) -> PublicationRecord:
    return PublicationRecord(
        pub_id=pub_id,
        year=year,
        doc_type=doc_type,
        authors=tuple(authors),
        addresses=tuple(addresses),
        journal_id=journal_id,
        categories=tuple(categories),
        citations=citations,
    )


def make_metrics(rows) -> JournalMetricsTable:
    """rows: iterable of (journal_id, year, category, rank, size)."""
    return JournalMetricsTable(
        {(j, y, c): (rank, size) for j, y, c, rank, size in rows}
    )


def make_roster(groups_spec) -> Roster:
    """groups_spec: iterable of (group_id, centre_id, institution, inst_key,
    researchers) where researchers is a list of (rid, full_name, areas)."""
    centres = {}
    groups = []
    researchers = []
    for gid, cid, institution, inst_key, members in groups_spec:
        if cid not in centres:
            centres[cid] = Centre(cid, f"AC-{cid}", 2006, {})
        lead = members[0][0] if members else ""
        groups.append(
            ResearchGroup(
                group_id=gid,
                centre_id=cid,
                institution=institution,
                institutional_category=INST[inst_key],
                region="Region",
                lead_researcher_id=lead,
            )
        )
        for rid, full_name, areas in members:
            researchers.append(Researcher(rid, full_name, gid, tuple(areas)))
    return Roster.build(centres.values(), groups, researchers)


def make_corpus(records, roster=None, metrics=None) -> Corpus:
    if roster is None:
        roster = make_roster([])
    if metrics is None:
        metrics = JournalMetricsTable({})
    return Corpus.build(records, roster, metrics)

import io
import random

import pytest

from biblionet.corpus import (
    DocType,
    JournalMetricsTable,
    filter_period,
    parse_journal_metrics,
    parse_publications,
    parse_roster,
    write_centres,
    write_groups,
    write_journal_metrics,
    write_publications,
    write_researchers,
)
from biblionet.errors import (
    DuplicateKeyError,
    IntegrityError,
    MetricsValidationError,
    RecordParseError,
)

from conftest import make_corpus, make_record


def pub_line(pub_id, year=2008, doc_type="Article", authors="Author, A.",
             addresses="Somewhere, Spain", journal="J1", categories="CAT",
             citations=0):
    return f"{pub_id}|{year}|{doc_type}|{authors}|{addresses}|{journal}|{categories}|{citations}"


# --- publications -----------------------------------------------------------


def test_admitted_doc_types():
    lines = [
        pub_line("P1", doc_type="Article"),
        pub_line("P2", doc_type="review"),
        pub_line("P3", doc_type="LETTER"),
        pub_line("P4", doc_type="Editorial Material"),
        pub_line("P5", doc_type="editorial_material"),
    ]
    parsed = parse_publications(lines)
    assert [r.pub_id for r in parsed.records] == ["P1", "P2", "P3", "P4", "P5"]
    assert parsed.records[0].doc_type is DocType.ARTICLE
    assert parsed.records[4].doc_type is DocType.EDITORIAL_MATERIAL
    assert parsed.skipped == ()


def test_other_doc_types_skipped_and_counted():
    lines = [
        pub_line("P1", doc_type="Article"),
        pub_line("P2", doc_type="Meeting Abstract"),
        pub_line("P3", doc_type="Book Review"),
    ]
    parsed = parse_publications(lines)
    assert [r.pub_id for r in parsed.records] == ["P1"]
    assert [(s.pub_id, s.doc_type) for s in parsed.skipped] == [
        ("P2", "Meeting Abstract"),
        ("P3", "Book Review"),
    ]
    assert parsed.input_count == 3


def test_admitted_plus_skipped_equals_input():
    rng = random.Random(42)
    types = ["Article", "Review", "Meeting Abstract", "Letter", "Note", "Correction"]
    lines = [pub_line(f"P{i}", doc_type=rng.choice(types)) for i in range(200)]
    parsed = parse_publications(lines)
    assert len(parsed.records) + len(parsed.skipped) == 200


def test_malformed_line_reports_line_number():
    lines = [pub_line(f"P{i}") for i in range(1, 7)]
    lines.append("P7|2008|Article|broken record with too few fields")
    lines.extend(pub_line(f"P{i}") for i in range(8, 11))
    assert len(lines) == 10
    with pytest.raises(RecordParseError) as err:
        parse_publications(lines)
    assert err.value.line_no == 7
    assert "line 7" in str(err.value)


def test_duplicate_pub_id_rejected():
    lines = [pub_line("P1"), pub_line("P1")]
    with pytest.raises(DuplicateKeyError, match="P1"):
        parse_publications(lines)


def test_empty_authors_rejected():
    with pytest.raises(RecordParseError):
        parse_publications([pub_line("P1", authors="")])


def test_negative_citations_rejected():
    with pytest.raises(RecordParseError):
        parse_publications([pub_line("P1", citations=-3)])


def test_input_order_preserved():
    lines = [pub_line(f"P{i:03d}", year=2005 + i % 7) for i in range(50)]
    parsed = parse_publications(lines)
    assert [r.pub_id for r in parsed.records] == [f"P{i:03d}" for i in range(50)]


# --- roster -------------------------------------------------------------------


def roster_streams(group_counts, researcher_counts):
    """Build roster streams for 9 centres with the given per-centre sizes."""
    centres = ["centre_id|acronym|launch_year|annual_budget"]
    groups = ["group_id|centre_id|institution|institutional_category|region|lead_researcher_id"]
    researchers = ["researcher_id|full_name|group_id|subject_areas"]
    rid = 0
    for c in range(9):
        launch = 2006 if c < 7 else 2007
        centres.append(f"C{c+1}|AC{c+1}|{launch}|2006:1.0")
        group_ids = []
        for g in range(group_counts[c]):
            gid = f"C{c+1}G{g+1:03d}"
            group_ids.append(gid)
            categories = ["University", "Hospital", "PublicResearchOrg", "Foundation"]
            groups.append(
                f"{gid}|C{c+1}|Institution {gid}|{categories[g % 4]}|Region|R{rid:05d}"
            )
        for r in range(researcher_counts[c]):
            gid = group_ids[r % len(group_ids)]
            researchers.append(f"R{rid:05d}|Surname{rid}, Name|{gid}|AREA{rid % 5}")
            rid += 1
    return centres, groups, researchers


def test_roster_totals_nine_centres():
    group_counts = [47, 47, 27, 49, 60, 32, 59, 29, 26]
    researcher_counts = [647, 474, 484, 555, 808, 464, 848, 376, 354]
    centres, groups, researchers = roster_streams(group_counts, researcher_counts)
    roster = parse_roster(centres, groups, researchers)
    assert len(roster.centres) == 9
    assert len(roster.groups) == sum(group_counts) == 376
    assert len(roster.researchers) == sum(researcher_counts) == 5010
    assert roster.group_count("C1") == 47
    assert roster.researcher_count("C9") == 354


def test_roster_empty_researchers_is_valid():
    centres = ["centre_id|acronym|launch_year|annual_budget", "C1|AC1|2006|"]
    groups = [
        "group_id|centre_id|institution|institutional_category|region|lead_researcher_id",
        "G1|C1|Inst|University|Region|R1",
    ]
    researchers = ["researcher_id|full_name|group_id|subject_areas"]
    roster = parse_roster(centres, groups, researchers)
    assert len(roster.researchers) == 0
    assert roster.researcher_count("C1") == 0


def test_roster_dangling_group_reference():
    centres = ["centre_id|acronym|launch_year|annual_budget", "C1|AC1|2006|"]
    groups = [
        "group_id|centre_id|institution|institutional_category|region|lead_researcher_id",
        "G1|C1|Inst|University|Region|R1",
    ]
    researchers = [
        "researcher_id|full_name|group_id|subject_areas",
        "R1|Surname, Name|G999|AREA",
    ]
    with pytest.raises(IntegrityError, match="G999"):
        parse_roster(centres, groups, researchers)


def test_roster_dangling_centre_reference():
    centres = ["centre_id|acronym|launch_year|annual_budget", "C1|AC1|2006|"]
    groups = [
        "group_id|centre_id|institution|institutional_category|region|lead_researcher_id",
        "G1|C9|Inst|University|Region|R1",
    ]
    with pytest.raises(IntegrityError, match="C9"):
        parse_roster(centres, groups, [
            "researcher_id|full_name|group_id|subject_areas"])


def test_duplicate_acronym_rejected():
    centres = [
        "centre_id|acronym|launch_year|annual_budget",
        "C1|SAME|2006|",
        "C2|SAME|2006|",
    ]
    with pytest.raises(DuplicateKeyError, match="SAME"):
        parse_roster(
            centres,
            ["group_id|centre_id|institution|institutional_category|region|lead_researcher_id"],
            ["researcher_id|full_name|group_id|subject_areas"],
        )


# --- journal metrics ------------------------------------------------------------


def metrics_lines(rows):
    out = ["journal_id|year|category|rank|category_size"]
    out.extend(f"{j}|{y}|{c}|{r}|{s}" for j, y, c, r, s in rows)
    return out


def test_metrics_store_and_retrieve():
    table = parse_journal_metrics(metrics_lines([("J1", 2008, "GASTRO", 3, 60)]))
    assert table.get("J1", 2008, "GASTRO") == (3, 60)
    assert table.get("J1", 2008, "OTHER") is None
    assert table.entries_for("J1", 2008) == (("GASTRO", 3, 60),)
    assert table.entries_for("J1", 2009) == ()


def test_metrics_rank_beyond_size_rejected():
    with pytest.raises(MetricsValidationError):
        parse_journal_metrics(metrics_lines([("J1", 2008, "GASTRO", 70, 60)]))


def test_metrics_multi_category_same_year():
    table = parse_journal_metrics(
        metrics_lines([("J1", 2008, "A", 5, 100), ("J1", 2008, "B", 40, 100)])
    )
    assert table.get("J1", 2008, "A") == (5, 100)
    assert table.get("J1", 2008, "B") == (40, 100)
    assert len(table.entries_for("J1", 2008)) == 2


# --- period filter ----------------------------------------------------------------


def test_filter_period_boundaries_inclusive():
    records = [make_record(f"P{y}", year=y) for y in (2004, 2005, 2011, 2012)]
    kept = filter_period(records, 2005, 2011)
    assert [r.year for r in kept] == [2005, 2011]


def test_filter_period_single_year():
    records = [make_record(f"P{y}", year=y) for y in (2004, 2005, 2006)]
    kept = filter_period(records, 2005, 2005)
    assert [r.year for r in kept] == [2005]


def test_filter_period_inverted_bounds():
    with pytest.raises(ValueError):
        filter_period([], 2011, 2005)


def test_filter_period_matches_per_year_recount():
    rng = random.Random(7)
    records = [make_record(f"P{i}", year=rng.randrange(2000, 2015)) for i in range(300)]
    kept = filter_period(records, 2005, 2011)
    per_year = {
        year: sum(1 for r in records if r.year == year) for year in range(2005, 2012)
    }
    assert len(kept) == sum(per_year.values())


# --- round trip --------------------------------------------------------------------


def test_publication_round_trip():
    lines = [
        pub_line("P1", 2005, "Article", "García, M.;Smith, J.",
                 "Univ Granada, Spain;Hosp Central, Madrid", "J1", "NEUR;ONCO", 12),
        pub_line("P2", 2011, "Review", "Solo, A.", "Inst X, Paris", "J2", "ENDO", 0),
    ]
    parsed = parse_publications(lines)
    buffer = io.StringIO()
    write_publications(parsed.records, buffer)
    reparsed = parse_publications(buffer.getvalue().splitlines())
    assert reparsed.records == parsed.records


def test_roster_and_metrics_round_trip():
    centres, groups, researchers = roster_streams([3, 2, 2, 2, 2, 2, 2, 2, 2],
                                                  [9, 6, 6, 6, 6, 6, 6, 6, 6])
    roster = parse_roster(centres, groups, researchers)
    c_buf, g_buf, r_buf = io.StringIO(), io.StringIO(), io.StringIO()
    write_centres([roster.centres[c] for c in sorted(roster.centres)], c_buf)
    write_groups([roster.groups[g] for g in sorted(roster.groups)], g_buf)
    write_researchers([roster.researchers[r] for r in sorted(roster.researchers)], r_buf)
    reparsed = parse_roster(
        c_buf.getvalue().splitlines(),
        g_buf.getvalue().splitlines(),
        r_buf.getvalue().splitlines(),
    )
    assert reparsed == roster

    table = parse_journal_metrics(
        metrics_lines([("J1", 2008, "A", 5, 100), ("J2", 2009, "B", 40, 100)])
    )
    m_buf = io.StringIO()
    write_journal_metrics(table, m_buf)
    assert parse_journal_metrics(m_buf.getvalue().splitlines()) == table


def test_unresolved_journals_listing():
    records = [
        make_record("P1", year=2008, journal_id="J1"),
        make_record("P2", year=2008, journal_id="JMISSING"),
        make_record("P3", year=2009, journal_id="J1"),  # J1 ranked only in 2008
    ]
    metrics = JournalMetricsTable({("J1", 2008, "CAT"): (5, 100)})
    corpus = make_corpus(records, metrics=metrics)
    assert corpus.unresolved_journals() == (("J1", 2009), ("JMISSING", 2008))

"""Pipeline orchestration and report emission.

Stages mirror the processing order: ingest -> link -> exclude -> analyses.
Each stage can run on its own; the link set can be persisted and reloaded
so the expensive matching step runs once. The full report run emits nine
delimited report tables, a diagnostics set, rendered figures and a
manifest. Every number in a report comes from a toolkit operation; this
module only selects records, formats and rounds.

Everything emitted is deterministic: no randomness anywhere, all
iteration orders fixed by explicit sorting, rounding half-up at the
configured precision, and figure files written without mutable metadata.
Identical inputs yield byte-identical outputs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from biblionet import linkage, network, signing
from biblionet.config import Finding, RunConfig, validate_config
from biblionet.corpus import (
    Corpus,
    PublicationParse,
    filter_period,
    parse_journal_metrics,
    parse_publications,
    parse_roster,
)
from biblionet.errors import BiblionetError, ConfigError
from biblionet.indicators import (
    Scope,
    ScopeKind,
    indicators_for_records,
    main_output_category,
    category_comparison,
    national_share,
    scope_publications,
)

STAGES = ("ingest", "link", "exclude", "indicators", "network", "signing", "report")


# --- rounding ------------------------------------------------------------------


def round_half_up(value: float, decimals: int) -> float:
    """Decimal half-up rounding, the convention used in the emitted tables."""
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def fmt(value: float | int | None, decimals: int) -> str:
    """Rounded string for emission; absent values become empty cells."""
    if value is None:
        return ""
    quantum = Decimal(1).scaleb(-decimals)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


# --- stage state -----------------------------------------------------------------


@dataclass
class PipelineState:
    config: RunConfig
    corpus: Corpus
    parse_result: PublicationParse
    pattern: signing.SigningPattern
    links: linkage.LinkSet  # after overrides, before exclusion
    override_result: linkage.OverrideResult | None
    programme_network: network.CollaborationNetwork
    signed_ids: frozenset[str]
    exclusion: linkage.ExclusionResult

    @property
    def final_links(self) -> linkage.LinkSet:
        return self.exclusion.links


def _open_parsed(path: str, parser, stage: str):
    try:
        with open(path, encoding="utf-8") as handle:
            return parser(handle)
    except BiblionetError as exc:
        raise BiblionetError(f"stage {stage}: {path}: {exc}") from exc
    except OSError as exc:
        raise BiblionetError(f"stage {stage}: cannot read {path}: {exc}") from exc


def _findings_error(findings: list[Finding]) -> ConfigError:
    details = "; ".join(f"{f.field}: {f.message}" for f in findings)
    return ConfigError(f"configuration invalid: {details}")


def build_state(config: RunConfig, links_path: str | Path | None = None) -> PipelineState:
    """Run ingest, link and exclusion, optionally loading a persisted link
    set instead of re-matching."""
    findings = validate_config(config)
    if findings:
        raise _findings_error(findings)

    parse_result = _open_parsed(config.publications, parse_publications, "ingest")
    with open(config.centres, encoding="utf-8") as c_handle, open(
        config.groups, encoding="utf-8"
    ) as g_handle, open(config.researchers, encoding="utf-8") as r_handle:
        try:
            roster = parse_roster(c_handle, g_handle, r_handle)
        except BiblionetError as exc:
            raise BiblionetError(f"stage ingest: roster files: {exc}") from exc
    metrics = _open_parsed(config.journal_metrics, parse_journal_metrics, "ingest")
    records = filter_period(parse_result.records, *config.study_window)
    corpus = Corpus.build(records, roster, metrics)

    roster_findings = validate_config(config, roster)
    if roster_findings:
        raise _findings_error(roster_findings)

    pattern = _open_parsed(config.patterns, signing.parse_patterns, "ingest")

    override_result = None
    if links_path is not None:
        links = load_link_export(links_path, corpus, roster)
    else:
        links = linkage.match(corpus, roster)
        if config.overrides is not None:
            rows = _open_parsed(config.overrides, linkage.parse_overrides, "link")
            try:
                override_result = linkage.apply_overrides(links, rows, corpus, roster)
            except BiblionetError as exc:
                raise BiblionetError(f"stage link: {config.overrides}: {exc}") from exc
            links = override_result.links

    programme_net = network.build_group_graph(
        roster.groups.keys(), config.study_window, links, corpus
    )
    signed_ids = signing.signed_publication_ids(corpus.publications, pattern)
    exclusion = linkage.exclude_inactive_groups(
        links, programme_net, signed_ids, corpus, roster
    )
    return PipelineState(
        config=config,
        corpus=corpus,
        parse_result=parse_result,
        pattern=pattern,
        links=links,
        override_result=override_result,
        programme_network=programme_net,
        signed_ids=signed_ids,
        exclusion=exclusion,
    )


# --- link set persistence ---------------------------------------------------------


def write_link_export(links: linkage.LinkSet, handle) -> int:
    handle.write(
        "researcher_id|pub_id|provenance|variant_text|variant_kind"
        "|affiliation_matched|subject_compatible\n"
    )
    count = 0
    for link in links.links():
        variant_text = link.matched_variant.text if link.matched_variant else ""
        variant_kind = link.matched_variant.kind.value if link.matched_variant else ""
        handle.write(
            "|".join(
                (
                    link.researcher_id,
                    link.pub_id,
                    link.provenance.value,
                    variant_text,
                    variant_kind,
                    "true" if link.affiliation_matched else "false",
                    "true" if link.subject_compatible else "false",
                )
            )
            + "\n"
        )
        count += 1
    return count


def load_link_export(path: str | Path, corpus: Corpus, roster) -> linkage.LinkSet:
    links = []
    with open(path, encoding="utf-8") as handle:
        header = handle.readline()
        if not header.startswith("researcher_id|"):
            raise BiblionetError(f"{path} is not a link export")
        for raw in handle:
            line = raw.rstrip("\n")
            if not line:
                continue
            rid, pid, prov, text, kind, aff, subj = line.split("|")
            variant = (
                linkage.NameVariant(text, rid, linkage.VariantKind(kind))
                if text
                else None
            )
            links.append(
                linkage.Link(
                    researcher_id=rid,
                    pub_id=pid,
                    provenance=linkage.Provenance(prov),
                    matched_variant=variant,
                    affiliation_matched=aff == "true",
                    subject_compatible=subj == "true",
                )
            )
    return linkage.LinkSet(links, roster, corpus)


# --- low-level emission ------------------------------------------------------------


class _Emission:
    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.sections: dict[str, list[dict]] = {
            "reports": [],
            "diagnostics": [],
            "figures": [],
        }

    def table(self, section: str, relpath: str, header: list[str], rows) -> None:
        path = self.out_dir / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            count = 0
            for row in rows:
                writer.writerow(row)
                count += 1
        self.sections[section].append({"path": relpath, "rows": count})

    def raw(self, section: str, relpath: str, write_fn) -> None:
        path = self.out_dir / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            count = write_fn(handle)
        self.sections[section].append({"path": relpath, "rows": count})

    def figure(self, relpath: str, render_fn) -> None:
        path = self.out_dir / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        render_fn(path)
        self.sections["figures"].append({"path": relpath})


# --- per-stage emitters --------------------------------------------------------------


def _emit_ingest(em: _Emission, state: PipelineState) -> None:
    em.table(
        "reports",
        "roster_summary.csv",
        ["centre", "acronym", "launch_year", "groups", "researchers"],
        [
            [cid, acronym, launch, groups, researchers]
            for cid, acronym, launch, groups, researchers
            in state.corpus.roster.summary_rows()
        ],
    )
    em.table(
        "diagnostics",
        "diagnostics/skipped_records.csv",
        ["line_no", "pub_id", "doc_type"],
        [[s.line_no, s.pub_id, s.doc_type] for s in state.parse_result.skipped],
    )
    em.table(
        "diagnostics",
        "diagnostics/unresolved_journals.csv",
        ["journal_id", "year"],
        [[journal, year] for journal, year in state.corpus.unresolved_journals()],
    )


def _emit_link(em: _Emission, state: PipelineState) -> None:
    em.raw(
        "diagnostics",
        "diagnostics/link_set.psv",
        lambda handle: write_link_export(state.links, handle),
    )
    em.table(
        "diagnostics",
        "diagnostics/ambiguous_links.csv",
        ["pub_id", "author", "researcher_ids"],
        [
            [a.pub_id, a.author_norm, ";".join(a.researcher_ids)]
            for a in sorted(
                state.links.ambiguities, key=lambda a: (a.pub_id, a.author_norm)
            )
        ],
    )


def _emit_exclusion(em: _Emission, state: PipelineState) -> None:
    em.table(
        "diagnostics",
        "diagnostics/excluded_groups.csv",
        ["group", "centre", "internal_collab_papers", "signed_papers", "status"],
        [
            [
                row.group_id,
                row.centre_id,
                row.internal_collab_papers,
                row.signed_papers,
                "excluded" if row.excluded else "retained",
            ]
            for row in state.exclusion.rows
        ],
    )


def _emit_indicators(em: _Emission, state: PipelineState) -> dict:
    config = state.config
    corpus = state.corpus
    links = state.final_links
    window = config.study_window
    rnd = config.rounding
    biomed = config.biomedical_categories or None

    nation_scope = Scope(ScopeKind.NATION, window)
    programme_scope = Scope(ScopeKind.PROGRAMME, window)
    nation_records = scope_publications(nation_scope, corpus, links, biomed)
    programme_records = scope_publications(programme_scope, corpus, links)
    programme_ids = {p.pub_id for p in programme_records}
    non_programme_records = tuple(
        p for p in nation_records if p.pub_id not in programme_ids
    )

    def row(label: str, ind) -> list[str]:
        return [
            label,
            str(ind.papers),
            str(ind.citations),
            fmt(ind.cites_per_paper, rnd.cpp_decimals),
            fmt(ind.q1_share, rnd.percent_decimals),
            fmt(ind.d1_share, rnd.percent_decimals),
        ]

    rows = [
        row("nation", indicators_for_records(nation_records, corpus.metrics)),
        row("programme", indicators_for_records(programme_records, corpus.metrics)),
        row("non_programme", indicators_for_records(non_programme_records, corpus.metrics)),
    ]
    for cid in sorted(corpus.roster.centres):
        centre_scope = Scope(ScopeKind.CENTRE, window, cid)
        records = scope_publications(centre_scope, corpus, links)
        rows.append(row(cid, indicators_for_records(records, corpus.metrics)))
    em.table(
        "reports",
        "output_indicators.csv",
        ["scope", "papers", "citations", "cites_per_paper", "q1_pct", "d1_pct"],
        rows,
    )

    comparison_rows = []
    for cid in sorted(corpus.roster.centres):
        category = main_output_category(cid, corpus, links, window)
        if category is None:
            continue
        comp = category_comparison(cid, category, corpus, links, window)
        comparison_rows.append(
            [
                cid,
                category,
                str(comp.centre.papers),
                # category shares print one digit finer than other percentages
                fmt(comp.national_share, rnd.percent_decimals + 1),
                fmt(comp.centre.q1_share, rnd.percent_decimals),
                fmt(comp.national.q1_share, rnd.percent_decimals),
                fmt(comp.centre.d1_share, rnd.percent_decimals),
                fmt(comp.national.d1_share, rnd.percent_decimals),
                fmt(comp.centre.cites_per_paper, rnd.cpp_decimals),
                fmt(comp.national.cites_per_paper, rnd.cpp_decimals),
            ]
        )
    em.table(
        "reports",
        "category_comparison.csv",
        [
            "centre", "category", "papers", "national_share_pct",
            "q1_pct", "national_q1_pct", "d1_pct", "national_d1_pct",
            "cites_per_paper", "national_cites_per_paper",
        ],
        comparison_rows,
    )

    shares = national_share(programme_scope, nation_scope, corpus, links, biomed)
    share_rows = [
        [
            str(year),
            str(shares.scope_by_year[year]),
            str(shares.national_by_year[year]),
            fmt(shares.by_year[year], rnd.percent_decimals),
        ]
        for year in sorted(shares.by_year)
    ]
    em.table(
        "reports",
        "national_share_by_year.csv",
        ["year", "papers", "national_papers", "share_pct"],
        share_rows,
    )
    return {"national_share": shares}


def _centre_periods(state: PipelineState, cid: str) -> tuple[tuple[int, int], tuple[int, int]]:
    centre = state.corpus.roster.centres[cid]
    first = state.config.first_period_for(centre)
    return first, state.config.resolved_second_period()


def _retained_centre_groups(state: PipelineState, cid: str) -> tuple[str, ...]:
    return tuple(
        gid
        for gid in state.corpus.roster.groups_by_centre[cid]
        if gid in state.exclusion.retained
    )


def _emit_network(em: _Emission, state: PipelineState) -> dict:
    corpus = state.corpus
    links = state.final_links
    roster = corpus.roster
    rnd = state.config.rounding

    metric_rows = []
    crosstab_rows = []
    multiplicity_rows = []
    multiplicity_data: dict[str, dict[str, float | None]] = {}
    for cid in sorted(roster.centres):
        groups = _retained_centre_groups(state, cid)
        first, second = _centre_periods(state, cid)
        for period in (first, second):
            net = network.build_group_graph(groups, period, links, corpus)
            density_value = (
                network.density(net) if len(net.nodes) >= 2 else None
            )
            component = (
                network.main_component_share(net) if net.nodes else None
            )
            mix = network.cross_category_share(groups, period, links, corpus, roster)
            metric_rows.append(
                [
                    cid,
                    str(period[0]),
                    str(period[1]),
                    fmt(component, rnd.percent_decimals),
                    fmt(density_value, rnd.density_decimals),
                    fmt(mix, rnd.cross_category_decimals),
                ]
            )

        first_tab, last_tab = network.q1_by_collab_class(
            groups, first, second, links, corpus, roster
        )
        for tab in (first_tab, last_tab):
            for label in ("cross_category", "single_category", "multi_group", "single_group"):
                cell = tab.marginals[label]
                crosstab_rows.append(
                    [
                        cid,
                        str(tab.period[0]),
                        str(tab.period[1]),
                        label,
                        str(cell.papers),
                        str(cell.ranked),
                        str(cell.q1),
                        fmt(cell.q1_share(), rnd.percent_decimals),
                    ]
                )

        dist = network.multiplicity_distribution(
            groups, state.config.study_window, links, corpus
        )
        shares = dist.shares()
        multiplicity_data[cid] = shares
        multiplicity_rows.append(
            [
                cid,
                str(dist.total),
                fmt(shares["1"], rnd.percent_decimals),
                fmt(shares["2"], rnd.percent_decimals),
                fmt(shares["3+"], rnd.percent_decimals),
            ]
        )

    em.table(
        "reports",
        "network_metrics.csv",
        ["centre", "period_start", "period_end", "main_component_pct",
         "density", "cross_category_pct"],
        metric_rows,
    )
    em.table(
        "reports",
        "q1_by_collaboration.csv",
        ["centre", "period_start", "period_end", "collab_class",
         "papers", "ranked_papers", "q1_papers", "q1_pct"],
        crosstab_rows,
    )
    em.table(
        "reports",
        "collaboration_multiplicity.csv",
        ["centre", "papers", "single_group_pct", "two_groups_pct",
         "three_plus_groups_pct"],
        multiplicity_rows,
    )

    full_net = network.build_group_graph(
        state.exclusion.retained, state.config.study_window, links, corpus
    )
    em.table(
        "diagnostics",
        "diagnostics/network_edges.csv",
        ["group_a", "group_b", "weight"],
        [[a, b, weight] for (a, b), weight in sorted(full_net.edges.items())],
    )
    em.table(
        "diagnostics",
        "diagnostics/network_nodes.csv",
        ["group", "centre", "institutional_category"],
        [
            [gid, roster.groups[gid].centre_id,
             roster.groups[gid].institutional_category.value]
            for gid in sorted(full_net.nodes)
        ],
    )
    return {"multiplicity": multiplicity_data}


def _emit_signing(em: _Emission, state: PipelineState) -> dict:
    config = state.config
    corpus = state.corpus
    links = state.final_links
    window = config.study_window
    rnd = config.rounding

    def summary_row(label: str, report: signing.SigningReport) -> list[str]:
        return [
            label,
            str(report.papers),
            str(report.signed),
            fmt(report.signed_share, rnd.percent_decimals),
            str(report.q1_signed),
            fmt(report.q1_share_of_signed, rnd.percent_decimals),
            str(report.d1_signed),
            fmt(report.d1_share_of_signed, rnd.percent_decimals),
        ]

    rows = []
    for cid in sorted(corpus.roster.centres):
        records = scope_publications(Scope(ScopeKind.CENTRE, window, cid), corpus, links)
        rows.append(summary_row(cid, signing.signing_report(records, corpus, state.pattern, window)))
    programme_records = scope_publications(Scope(ScopeKind.PROGRAMME, window), corpus, links)
    total = signing.signing_report(programme_records, corpus, state.pattern, window)
    rows.append(summary_row("TOTAL", total))
    em.table(
        "reports",
        "signing_summary.csv",
        ["scope", "papers", "signed", "signed_pct", "q1_signed",
         "q1_of_signed_pct", "d1_signed", "d1_of_signed_pct"],
        rows,
    )

    year_rows = []
    for year in sorted(total.by_year):
        y = total.by_year[year]
        year_rows.append(
            [
                str(year),
                str(y.papers),
                str(y.signed),
                fmt(y.signed_share, rnd.percent_decimals),
                str(y.q1_papers),
                str(y.q1_signed),
                fmt(y.signed_share_of_q1, rnd.percent_decimals),
                fmt(y.q1_share_of_signed, rnd.percent_decimals),
                str(y.d1_papers),
                str(y.d1_signed),
                fmt(y.signed_share_of_d1, rnd.percent_decimals),
                fmt(y.d1_share_of_signed, rnd.percent_decimals),
            ]
        )
    em.table(
        "reports",
        "signing_by_year.csv",
        ["year", "papers", "signed", "signed_pct", "q1_papers", "q1_signed",
         "signed_of_q1_pct", "q1_of_signed_pct", "d1_papers", "d1_signed",
         "signed_of_d1_pct", "d1_of_signed_pct"],
        year_rows,
    )

    series = {year: y.signed_share for year, y in total.by_year.items()}
    try:
        year = signing.stabilization_year(
            series, config.epsilon, config.stabilization_window
        )
        status = "detected" if year is not None else "none"
    except ValueError:
        year, status = None, "insufficient_series"
    em.table(
        "diagnostics",
        "diagnostics/stabilization.csv",
        ["scope", "epsilon", "window", "status", "stabilization_year"],
        [["programme", fmt(config.epsilon, 2), str(config.stabilization_window),
          status, "" if year is None else str(year)]],
    )
    return {"signing_total": total, "stabilization_year": year}


def _emit_figures(em: _Emission, state: PipelineState, computed: dict) -> None:
    from biblionet import figures

    shares = computed["national_share"]
    em.figure(
        "figures/national_share_by_year.png",
        lambda path: figures.national_share_figure(
            shares.scope_by_year, shares.by_year, path
        ),
    )
    em.figure(
        "figures/collaboration_multiplicity.png",
        lambda path: figures.multiplicity_figure(computed["multiplicity"], path),
    )
    total = computed["signing_total"]
    em.figure(
        "figures/signing_by_year.png",
        lambda path: figures.signing_series_figure(total.by_year, path),
    )
    em.figure(
        "figures/q1_by_collaboration.png",
        lambda path: figures.q1_crosstab_figure(
            _crosstab_series(state), path
        ),
    )


def _crosstab_series(state: PipelineState) -> dict:
    """Per centre: {label: (first_share, last_share)} for the figure."""
    out: dict[str, dict[str, tuple[float | None, float | None]]] = {}
    for cid in sorted(state.corpus.roster.centres):
        groups = _retained_centre_groups(state, cid)
        first, second = _centre_periods(state, cid)
        first_tab, last_tab = network.q1_by_collab_class(
            groups, first, second, state.final_links, state.corpus,
            state.corpus.roster,
        )
        out[cid] = {
            label: (
                first_tab.marginals[label].q1_share(),
                last_tab.marginals[label].q1_share(),
            )
            for label in ("cross_category", "single_category", "multi_group", "single_group")
        }
    return out


# --- public entry points --------------------------------------------------------------


@dataclass
class ReportBundle:
    out_dir: Path
    manifest: dict


def run_stage(
    config: RunConfig,
    stage: str,
    links_path: str | Path | None = None,
    out_dir: str | Path | None = None,
) -> ReportBundle:
    """Run one pipeline stage (or the full ``report``) and emit its files."""
    if stage not in STAGES:
        raise ConfigError(f"unknown stage {stage!r}; expected one of {', '.join(STAGES)}")
    state = build_state(config, links_path=links_path)
    em = _Emission(Path(out_dir) if out_dir is not None else Path(config.output_dir))
    computed: dict = {}
    if stage in ("ingest", "report"):
        _emit_ingest(em, state)
    if stage in ("link", "report"):
        _emit_link(em, state)
    if stage in ("exclude", "report"):
        _emit_exclusion(em, state)
    if stage in ("indicators", "report"):
        computed.update(_emit_indicators(em, state))
    if stage in ("network", "report"):
        computed.update(_emit_network(em, state))
    if stage in ("signing", "report"):
        computed.update(_emit_signing(em, state))

    manifest = {
        "config_fingerprint": config.fingerprint(),
        "notes": [signing.CONDITIONED_SHARE_NOTE],
        "reports": em.sections["reports"],
        "diagnostics": em.sections["diagnostics"],
        "figures": em.sections["figures"],
    }
    if stage == "report":
        _emit_figures(em, state, computed)
        manifest["figures"] = em.sections["figures"]
        manifest_path = em.out_dir / "manifest.json"
        manifest_path.write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return ReportBundle(out_dir=em.out_dir, manifest=manifest)


def run_pipeline(
    config: RunConfig,
    links_path: str | Path | None = None,
    out_dir: str | Path | None = None,
) -> ReportBundle:
    """The full run: ingest through report emission."""
    return run_stage(config, "report", links_path=links_path, out_dir=out_dir)

"""Linking publications to rostered researchers.

Matching runs in three stages per publication:

1. name stage: a normalized author string must equal one of the variants
   generated from a researcher's full name;
2. affiliation stage: some address string of the publication must contain
   the researcher's group institution (or one of its aliases) after
   normalization;
3. subject stage: the publication must share at least one subject category
   with the researcher's declared areas.

A link is created only when all three stages pass, and carries its
provenance so that file-driven manual curation (add/remove overrides,
applied in file order) is distinguishable from automatic matches. When one
author string yields validated links to several researchers on the same
paper, all links are kept and the case is flagged for the override file.

The generated variant kinds are a deliberate superset of the name forms
commonly seen in bibliographic exports; see ``generate_name_variants``.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from biblionet.corpus import Corpus, Researcher, Roster, _table_rows
from biblionet.errors import (
    DuplicateKeyError,
    IntegrityError,
    OverrideError,
    RecordParseError,
    VariantError,
)
from biblionet.network import CollaborationNetwork
from biblionet.textnorm import normalize


class VariantKind(enum.Enum):
    FULL_FORM = "FullForm"
    INITIALED_FORM = "InitialedForm"
    SINGLE_SURNAME_FORM = "SingleSurnameForm"
    HYPHEN_SPLIT_FORM = "HyphenSplitForm"


class Provenance(enum.Enum):
    AUTOMATIC = "Automatic"
    MANUAL_ADD = "ManualAdd"


@dataclass(frozen=True, slots=True)
class NameVariant:
    text: str  # normalized
    researcher_id: str
    kind: VariantKind


@dataclass(frozen=True, slots=True)
class Link:
    researcher_id: str
    pub_id: str
    provenance: Provenance
    matched_variant: NameVariant | None
    affiliation_matched: bool
    subject_compatible: bool


@dataclass(frozen=True, slots=True)
class AmbiguousMatch:
    """One author string that produced validated links to several researchers."""

    pub_id: str
    author_norm: str
    researcher_ids: tuple[str, ...]


def generate_name_variants(researcher: Researcher) -> tuple[NameVariant, ...]:
    """Generate the normalized name variants of a researcher.

    The full name must be formatted "surname(s), given name(s)". Variants
    (deduplicated on text, full form first):

    * full surname part + full given names  (FullForm)
    * full surname part + concatenated given initials  (InitialedForm)
    * each individual surname + given names / initials, for multi-surname
      names  (SingleSurnameForm)
    * each hyphen component of a hyphenated surname + given names /
      initials  (HyphenSplitForm)

    "Serrano-Vega, Lucia" therefore yields: "serrano-vega lucia",
    "serrano-vega l", "serrano lucia", "serrano l", "vega lucia", "vega l".
    Raises VariantError when no surname/given split is possible.
    """
    surname_part, comma, given_part = researcher.full_name.partition(",")
    surname_norm = normalize(surname_part)
    given_norm = normalize(given_part)
    if not comma or not surname_norm or not given_norm:
        raise VariantError(
            f"cannot split full_name {researcher.full_name!r} of researcher "
            f"{researcher.researcher_id!r} into surname and given parts"
        )
    initials = "".join(token[0] for token in given_norm.split())

    surname_forms: list[tuple[str, VariantKind]] = [(surname_norm, VariantKind.FULL_FORM)]
    tokens = surname_norm.split()
    if len(tokens) > 1:
        for token in tokens:
            surname_forms.append((token, VariantKind.SINGLE_SURNAME_FORM))
    for token in tokens:
        if "-" in token:
            for piece in token.split("-"):
                if piece:
                    surname_forms.append((piece, VariantKind.HYPHEN_SPLIT_FORM))

    variants: dict[str, NameVariant] = {}
    for form, base_kind in surname_forms:
        for given, is_initials in ((given_norm, False), (initials, True)):
            if base_kind is VariantKind.FULL_FORM:
                kind = VariantKind.INITIALED_FORM if is_initials else VariantKind.FULL_FORM
            else:
                kind = base_kind
            text = f"{form} {given}"
            variants.setdefault(text, NameVariant(text, researcher.researcher_id, kind))
    return tuple(variants.values())


class LinkSet:
    """Validated researcher-publication links with lookup indexes.

    Immutable once built. Every researcher_id must resolve against the
    roster and every pub_id against the corpus; duplicate pairs are
    rejected. Automatic links must carry affiliation_matched=True (and,
    unless flag checking is relaxed for diagnostics, subject_compatible=True).
    """

    def __init__(
        self,
        links: Iterable[Link],
        roster: Roster,
        corpus: Corpus,
        ambiguities: Iterable[AmbiguousMatch] = (),
        _check_subject_flag: bool = True,
    ):
        self._links: dict[tuple[str, str], Link] = {}
        for link in links:
            if link.researcher_id not in roster.researchers:
                raise IntegrityError(f"link references unknown researcher {link.researcher_id!r}")
            if link.pub_id not in corpus.by_id:
                raise IntegrityError(f"link references unknown publication {link.pub_id!r}")
            key = (link.researcher_id, link.pub_id)
            if key in self._links:
                raise DuplicateKeyError(f"duplicate link {key!r}")
            if link.provenance is Provenance.AUTOMATIC:
                if not link.affiliation_matched:
                    raise IntegrityError(f"automatic link {key!r} without affiliation match")
                if _check_subject_flag and not link.subject_compatible:
                    raise IntegrityError(f"automatic link {key!r} without subject compatibility")
            self._links[key] = link

        self.ambiguities = tuple(ambiguities)
        self._group_of = {rid: r.group_id for rid, r in roster.researchers.items()}
        self._centre_of_group = {gid: g.centre_id for gid, g in roster.groups.items()}

        by_researcher: dict[str, list[str]] = {}
        by_publication: dict[str, list[str]] = {}
        by_group: dict[str, set[str]] = {}
        by_centre: dict[str, set[str]] = {}
        for rid, pid in sorted(self._links):
            by_researcher.setdefault(rid, []).append(pid)
            by_publication.setdefault(pid, []).append(rid)
            gid = self._group_of[rid]
            by_group.setdefault(gid, set()).add(pid)
            by_centre.setdefault(self._centre_of_group[gid], set()).add(pid)
        self._by_researcher = {k: tuple(v) for k, v in by_researcher.items()}
        self._by_publication = {k: tuple(v) for k, v in by_publication.items()}
        self._by_group = {k: tuple(sorted(v)) for k, v in by_group.items()}
        self._by_centre = {k: tuple(sorted(v)) for k, v in by_centre.items()}
        self._groups_of_pub = {
            pid: tuple(sorted({self._group_of[rid] for rid in rids}))
            for pid, rids in self._by_publication.items()
        }

    def __len__(self) -> int:
        return len(self._links)

    def __contains__(self, key: tuple[str, str]) -> bool:
        return key in self._links

    def get(self, researcher_id: str, pub_id: str) -> Link | None:
        return self._links.get((researcher_id, pub_id))

    def links(self) -> tuple[Link, ...]:
        """All links, sorted by (researcher_id, pub_id)."""
        return tuple(self._links[key] for key in sorted(self._links))

    def pairs(self) -> set[tuple[str, str]]:
        return set(self._links)

    def publications_of_researcher(self, researcher_id: str) -> tuple[str, ...]:
        return self._by_researcher.get(researcher_id, ())

    def researchers_of_publication(self, pub_id: str) -> tuple[str, ...]:
        return self._by_publication.get(pub_id, ())

    def groups_of_publication(self, pub_id: str) -> tuple[str, ...]:
        return self._groups_of_pub.get(pub_id, ())

    def publications_of_group(self, group_id: str) -> tuple[str, ...]:
        return self._by_group.get(group_id, ())

    def publications_of_centre(self, centre_id: str) -> tuple[str, ...]:
        return self._by_centre.get(centre_id, ())

    def all_publication_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_publication))


def match(
    corpus: Corpus,
    roster: Roster,
    *,
    variants: Mapping[str, Iterable[NameVariant]] | None = None,
    require_subject_match: bool = True,
) -> LinkSet:
    """Automatic matching of all publications against all researchers.

    ``variants`` may supply precomputed variants per researcher; by default
    they are generated. ``require_subject_match=False`` drops the subject
    stage, which exists to measure how many false positives the subject
    filter removes; links created that way keep subject_compatible=False.
    """
    if variants is None:
        variants = {
            rid: generate_name_variants(r) for rid, r in roster.researchers.items()
        }

    variant_index: dict[str, list[NameVariant]] = {}
    for rid in sorted(variants):
        for variant in variants[rid]:
            variant_index.setdefault(variant.text, []).append(variant)

    # Normalized institution strings (plus aliases) per group.
    group_needles: dict[str, tuple[str, ...]] = {}
    for gid, group in roster.groups.items():
        needles = [normalize(group.institution)]
        needles.extend(normalize(alias) for alias in group.institution_aliases)
        group_needles[gid] = tuple(n for n in needles if n)

    links: list[Link] = []
    ambiguities: list[AmbiguousMatch] = []
    for pub in corpus.publications:
        address_norms = [normalize(a) for a in pub.addresses]
        pub_categories = set(pub.categories)
        linked_pairs: set[tuple[str, str]] = set()
        hits_by_author: dict[str, list[str]] = {}
        for author in pub.authors:
            author_norm = normalize(author)
            for variant in variant_index.get(author_norm, ()):
                rid = variant.researcher_id
                if (rid, pub.pub_id) in linked_pairs:
                    continue
                researcher = roster.researchers[rid]
                needles = group_needles[researcher.group_id]
                affiliation_ok = any(
                    needle in addr for addr in address_norms for needle in needles
                )
                if not affiliation_ok:
                    continue
                subject_ok = bool(pub_categories & set(researcher.subject_areas))
                if require_subject_match and not subject_ok:
                    continue
                links.append(
                    Link(
                        researcher_id=rid,
                        pub_id=pub.pub_id,
                        provenance=Provenance.AUTOMATIC,
                        matched_variant=variant,
                        affiliation_matched=True,
                        subject_compatible=subject_ok,
                    )
                )
                linked_pairs.add((rid, pub.pub_id))
                hits_by_author.setdefault(author_norm, []).append(rid)
        for author_norm, rids in sorted(hits_by_author.items()):
            distinct = tuple(sorted(set(rids)))
            if len(distinct) > 1:
                ambiguities.append(AmbiguousMatch(pub.pub_id, author_norm, distinct))

    return LinkSet(
        links,
        roster,
        corpus,
        ambiguities=ambiguities,
        _check_subject_flag=require_subject_match,
    )


# --- manual overrides ---------------------------------------------------------


class OverrideAction(enum.Enum):
    ADD = "add"
    REMOVE = "remove"


@dataclass(frozen=True, slots=True)
class OverrideRow:
    action: OverrideAction
    researcher_id: str
    pub_id: str
    comment: str = ""


@dataclass(frozen=True)
class OverrideResult:
    links: LinkSet
    added: int
    removed: int
    missing_removes: tuple[tuple[str, str], ...]  # counted warnings, not fatal


def parse_overrides(lines: Iterable[str]) -> tuple[OverrideRow, ...]:
    """Parse the override table: action|researcher_id|pub_id[|comment]."""
    rows = []
    for line_no, row in _table_rows(
        lines, ("action", "researcher_id", "pub_id"), ("comment",)
    ):
        action = row["action"].strip().casefold()
        if action not in ("add", "remove"):
            raise RecordParseError(line_no, f"unknown override action {row['action']!r}")
        rows.append(
            OverrideRow(
                action=OverrideAction(action),
                researcher_id=row["researcher_id"],
                pub_id=row["pub_id"],
                comment=row.get("comment", ""),
            )
        )
    return tuple(rows)


def apply_overrides(
    links: LinkSet,
    overrides: Iterable[OverrideRow],
    corpus: Corpus,
    roster: Roster,
) -> OverrideResult:
    """Apply add/remove override rows in file order.

    Add rows insert ManualAdd links (replacing an automatic link for the
    same pair, since the manual decision supersedes it). Remove rows delete
    the pair; removing a link that does not exist is counted, not fatal.
    Rows referencing unknown researchers or publications raise OverrideError.
    """
    current: dict[tuple[str, str], Link] = {
        (link.researcher_id, link.pub_id): link for link in links.links()
    }
    added = removed = 0
    missing: list[tuple[str, str]] = []
    for row in overrides:
        if row.researcher_id not in roster.researchers:
            raise OverrideError(f"override references unknown researcher {row.researcher_id!r}")
        if row.pub_id not in corpus.by_id:
            raise OverrideError(f"override references unknown publication {row.pub_id!r}")
        key = (row.researcher_id, row.pub_id)
        if row.action is OverrideAction.ADD:
            current[key] = Link(
                researcher_id=row.researcher_id,
                pub_id=row.pub_id,
                provenance=Provenance.MANUAL_ADD,
                matched_variant=None,
                affiliation_matched=False,
                subject_compatible=False,
            )
            added += 1
        else:
            if key in current:
                del current[key]
                removed += 1
            else:
                missing.append(key)
    result = LinkSet(current.values(), roster, corpus, ambiguities=links.ambiguities)
    return OverrideResult(
        links=result, added=added, removed=removed, missing_removes=tuple(missing)
    )


# --- inactive-group exclusion ---------------------------------------------------


@dataclass(frozen=True)
class GroupActivity:
    group_id: str
    centre_id: str
    internal_collab_papers: int
    signed_papers: int
    excluded: bool


@dataclass(frozen=True)
class ExclusionResult:
    retained: frozenset[str]
    excluded: frozenset[str]
    links: LinkSet
    rows: tuple[GroupActivity, ...]


def exclude_inactive_groups(
    links: LinkSet,
    network: CollaborationNetwork,
    signed_pub_ids: frozenset[str] | set[str],
    corpus: Corpus,
    roster: Roster,
) -> ExclusionResult:
    """Drop groups that never co-authored with another group and never
    signed a paper (conjunction of both conditions), over the full window.

    ``network`` must be the group graph over the whole study window and
    ``signed_pub_ids`` the signed-paper index for the same window. All
    links of excluded groups are removed from the returned LinkSet. The
    operation is idempotent: excluded groups have no edges and no signed
    papers, so re-running on the filtered links yields the same partition.
    """
    touched = {g for a_b in network.edges for g in a_b}
    rows: list[GroupActivity] = []
    excluded: set[str] = set()
    for gid in sorted(network.nodes):
        pubs = links.publications_of_group(gid)
        collab = sum(
            1 for pid in pubs if len(links.groups_of_publication(pid)) >= 2
        )
        signed = sum(1 for pid in pubs if pid in signed_pub_ids)
        is_excluded = gid not in touched and signed == 0
        if is_excluded:
            excluded.add(gid)
        rows.append(
            GroupActivity(
                group_id=gid,
                centre_id=roster.groups[gid].centre_id,
                internal_collab_papers=collab,
                signed_papers=signed,
                excluded=is_excluded,
            )
        )

    kept_links = [
        link
        for link in links.links()
        if roster.researchers[link.researcher_id].group_id not in excluded
    ]
    filtered = LinkSet(kept_links, roster, corpus, ambiguities=links.ambiguities)
    return ExclusionResult(
        retained=frozenset(network.nodes - excluded),
        excluded=frozenset(excluded),
        links=filtered,
        rows=tuple(rows),
    )

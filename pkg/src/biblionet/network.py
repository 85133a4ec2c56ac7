"""Group-level co-authorship networks and collaboration metrics.

Nodes are research groups in scope (isolated groups included); an
undirected edge joins two groups when at least one publication in the
window is linked to researchers of both, weighted by the number of such
publications. Density ignores weights. All functions are pure; a built
network is immutable.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations

from biblionet.errors import UndefinedMetricError


@dataclass(frozen=True)
class CollaborationNetwork:
    nodes: frozenset[str]
    edges: dict[tuple[str, str], int]  # keys sorted pairs, values >= 1
    period: tuple[int, int]


@dataclass(frozen=True, slots=True)
class CollabClass:
    """Per-publication collaboration class: how many in-scope groups signed
    it, and whether they span more than one institutional category."""

    multi_group: bool
    cross_category: bool

    @property
    def label(self) -> str:
        groups = "multi_group" if self.multi_group else "single_group"
        mix = "cross_category" if self.cross_category else "single_category"
        return f"{groups}_{mix}"


ALL_CLASSES = (
    CollabClass(multi_group=True, cross_category=True),
    CollabClass(multi_group=True, cross_category=False),
    CollabClass(multi_group=False, cross_category=True),
    CollabClass(multi_group=False, cross_category=False),
)


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:  # path compression
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        self.parent[self.find(b)] = self.find(a)


def _in_period(year: int, period: tuple[int, int]) -> bool:
    return period[0] <= year <= period[1]


def build_group_graph(groups, period, links, corpus) -> CollaborationNetwork:
    """Co-authorship graph over the given in-scope groups and year window."""
    nodes = frozenset(groups)
    weights: dict[tuple[str, str], int] = {}
    for pub in corpus.publications:
        if not _in_period(pub.year, period):
            continue
        in_scope = [g for g in links.groups_of_publication(pub.pub_id) if g in nodes]
        for a, b in combinations(in_scope, 2):
            key = (a, b) if a < b else (b, a)
            weights[key] = weights.get(key, 0) + 1
    return CollaborationNetwork(
        nodes=nodes,
        edges={key: weights[key] for key in sorted(weights)},
        period=(period[0], period[1]),
    )


def density(net: CollaborationNetwork) -> float:
    """Edges present / maximum possible edges; weights ignored."""
    n = len(net.nodes)
    if n < 2:
        raise UndefinedMetricError(f"density undefined for {n} node(s)")
    return len(net.edges) / (n * (n - 1) / 2)


def main_component_share(net: CollaborationNetwork) -> float:
    """Percentage of nodes inside the largest connected component.
    Isolated nodes count as singleton components."""
    n = len(net.nodes)
    if n < 1:
        raise UndefinedMetricError("main component undefined for an empty network")
    uf = _UnionFind(net.nodes)
    for a, b in net.edges:
        uf.union(a, b)
    sizes: dict[str, int] = {}
    for node in net.nodes:
        root = uf.find(node)
        sizes[root] = sizes.get(root, 0) + 1
    return 100.0 * max(sizes.values()) / n


def publications_of_groups(groups, period, links, corpus):
    """Records in the window linked to at least one in-scope group."""
    nodes = frozenset(groups)
    out = []
    for pub in corpus.publications:
        if not _in_period(pub.year, period):
            continue
        if any(g in nodes for g in links.groups_of_publication(pub.pub_id)):
            out.append(pub)
    return tuple(out)


def classify_publication(pub_id, groups, links, roster) -> CollabClass:
    nodes = frozenset(groups)
    in_scope = [g for g in links.groups_of_publication(pub_id) if g in nodes]
    categories = {roster.groups[g].institutional_category for g in in_scope}
    return CollabClass(
        multi_group=len(set(in_scope)) >= 2,
        cross_category=len(categories) >= 2,
    )


def cross_category_share(groups, period, links, corpus, roster) -> float | None:
    """Share of the scope's publications co-authored by in-scope groups of
    at least two institutional categories. None when the scope has no
    publications in the window."""
    pubs = publications_of_groups(groups, period, links, corpus)
    if not pubs:
        return None
    crossing = sum(
        1
        for pub in pubs
        if classify_publication(pub.pub_id, groups, links, roster).cross_category
    )
    return 100.0 * crossing / len(pubs)


@dataclass(frozen=True)
class MultiplicityDistribution:
    """Papers binned by the number of distinct in-scope groups linked to
    them: 1, 2, or 3 and more. Shares sum to 100 when papers exist."""

    one: int
    two: int
    three_plus: int

    @property
    def total(self) -> int:
        return self.one + self.two + self.three_plus

    def shares(self) -> dict[str, float | None]:
        total = self.total
        if total == 0:
            return {"1": None, "2": None, "3+": None}
        return {
            "1": 100.0 * self.one / total,
            "2": 100.0 * self.two / total,
            "3+": 100.0 * self.three_plus / total,
        }


def multiplicity_distribution(groups, period, links, corpus) -> MultiplicityDistribution:
    nodes = frozenset(groups)
    counts = [0, 0, 0]
    for pub in publications_of_groups(groups, period, links, corpus):
        k = len([g for g in links.groups_of_publication(pub.pub_id) if g in nodes])
        counts[min(k, 3) - 1] += 1
    return MultiplicityDistribution(*counts)


@dataclass(frozen=True)
class ClassCell:
    papers: int
    ranked: int  # papers with resolvable journal rank data
    q1: int

    def q1_share(self) -> float | None:
        if self.ranked == 0:
            return None
        return 100.0 * self.q1 / self.ranked


@dataclass(frozen=True)
class PeriodCrossTab:
    period: tuple[int, int]
    cells: dict[CollabClass, ClassCell]
    marginals: dict[str, ClassCell]  # multi_group / single_group / cross_category / single_category


def q1_by_collab_class(
    groups, first_period, last_period, links, corpus, roster
) -> tuple[PeriodCrossTab, PeriodCrossTab]:
    """Q1 shares per collaboration class for two periods.

    Each period is recomputed from scratch over the same node set. The four
    class cells partition the scope's publications of the period; marginal
    cells aggregate the two dichotomies (multi vs single group, cross vs
    single institutional category).
    """
    from biblionet.indicators import journal_position

    tabs = []
    for period in (first_period, last_period):
        counters = {cls: [0, 0, 0] for cls in ALL_CLASSES}
        for pub in publications_of_groups(groups, period, links, corpus):
            cls = classify_publication(pub.pub_id, groups, links, roster)
            position = journal_position(pub.journal_id, pub.year, corpus.metrics)
            bucket = counters[cls]
            bucket[0] += 1
            if position is not None:
                bucket[1] += 1
                bucket[2] += position.is_q1
        cells = {cls: ClassCell(*counts) for cls, counts in counters.items()}

        def merged(selector) -> ClassCell:
            picked = [cell for cls, cell in cells.items() if selector(cls)]
            return ClassCell(
                papers=sum(c.papers for c in picked),
                ranked=sum(c.ranked for c in picked),
                q1=sum(c.q1 for c in picked),
            )

        marginals = {
            "multi_group": merged(lambda c: c.multi_group),
            "single_group": merged(lambda c: not c.multi_group),
            "cross_category": merged(lambda c: c.cross_category),
            "single_category": merged(lambda c: not c.cross_category),
        }
        tabs.append(PeriodCrossTab(period=(period[0], period[1]), cells=cells, marginals=marginals))
    return tabs[0], tabs[1]

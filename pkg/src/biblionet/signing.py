"""Detection of programme credit in address lines and the derived shares.

A publication counts as signed when any of its address strings contains
any pattern from the alias list after normalization. The alias file ships
as configuration (one pattern per line with an owning centre id) because
naming habits differ per centre; detection itself always uses the full
pattern set, the centre id is bookkeeping for maintainers.

Conditioned shares: the Q1/D1 shares in the signing report use the signed
paper count as denominator (share of signed output that sits in Q1/D1
journals). The per-year series additionally reports the reverse reading,
the share of Q1/D1 output that is signed, since both views are useful and
they differ substantially.
"""

from __future__ import annotations

from collections.abc import Collection, Iterable, Mapping
from dataclasses import dataclass

from biblionet.corpus import Corpus, PublicationRecord
from biblionet.errors import RecordParseError
from biblionet.indicators import journal_position, share
from biblionet.textnorm import normalize

CONDITIONED_SHARE_NOTE = (
    "Q1/D1 columns of the signing report are shares of the signed output "
    "(signed papers as denominator). Figures published with a mixed "
    "denominator, such as a share of all papers, will differ from these "
    "values; the per-year series carries both readings."
)


@dataclass(frozen=True)
class SigningPattern:
    """Normalized substrings that identify the programme in an address line."""

    patterns: tuple[str, ...]
    owners: tuple[tuple[str, str], ...] = ()  # (pattern, centre_id) as listed

    def __post_init__(self):
        if not self.patterns:
            raise ValueError("signing pattern list must not be empty")
        for p in self.patterns:
            if normalize(p) != p or not p:
                raise ValueError(f"pattern {p!r} is not in normalized form")


def parse_patterns(lines: Iterable[str]) -> SigningPattern:
    """Parse the alias file: one ``pattern|centre_id`` row per line, no
    header; the centre id may be empty for programme-wide aliases."""
    owners: list[tuple[str, str]] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        pattern_part, _, centre_part = line.partition("|")
        pattern = normalize(pattern_part)
        if not pattern:
            raise RecordParseError(line_no, "empty signing pattern")
        owners.append((pattern, centre_part.strip()))
    if not owners:
        raise RecordParseError(0, "pattern file contains no patterns")
    return SigningPattern(
        patterns=tuple(sorted({p for p, _ in owners})),
        owners=tuple(owners),
    )


def detect_signed(record: PublicationRecord, pattern: SigningPattern) -> bool:
    """True iff any address string contains any pattern after normalization."""
    for address in record.addresses:
        address_norm = normalize(address)
        if any(p in address_norm for p in pattern.patterns):
            return True
    return False


def signed_publication_ids(
    records: Iterable[PublicationRecord], pattern: SigningPattern
) -> frozenset[str]:
    return frozenset(r.pub_id for r in records if detect_signed(r, pattern))


@dataclass(frozen=True)
class YearSigning:
    year: int
    papers: int
    signed: int
    q1_papers: int
    q1_signed: int
    d1_papers: int
    d1_signed: int

    @property
    def signed_share(self) -> float | None:
        return share(self.signed, self.papers)

    @property
    def signed_share_of_q1(self) -> float | None:
        """Of the year's Q1 papers, the share that is signed."""
        return share(self.q1_signed, self.q1_papers)

    @property
    def q1_share_of_signed(self) -> float | None:
        return share(self.q1_signed, self.signed)

    @property
    def signed_share_of_d1(self) -> float | None:
        return share(self.d1_signed, self.d1_papers)

    @property
    def d1_share_of_signed(self) -> float | None:
        return share(self.d1_signed, self.signed)


@dataclass(frozen=True)
class SigningReport:
    papers: int
    signed: int
    q1_signed: int
    d1_signed: int
    by_year: dict[int, YearSigning]

    @property
    def signed_share(self) -> float | None:
        return share(self.signed, self.papers)

    @property
    def q1_share_of_signed(self) -> float | None:
        return share(self.q1_signed, self.signed)

    @property
    def d1_share_of_signed(self) -> float | None:
        return share(self.d1_signed, self.signed)


def signing_report(
    records: Collection[PublicationRecord],
    corpus: Corpus,
    pattern: SigningPattern,
    period: tuple[int, int],
) -> SigningReport:
    """Signed-paper counts and shares for one scope, plus per-year rows
    covering every year of the window (rows with zero papers keep their
    shares absent rather than zero)."""
    start, end = period
    year_counts = {
        year: [0, 0, 0, 0, 0, 0] for year in range(start, end + 1)
    }  # papers, signed, q1_papers, q1_signed, d1_papers, d1_signed
    for record in records:
        if not start <= record.year <= end:
            continue
        counts = year_counts[record.year]
        is_signed = detect_signed(record, pattern)
        position = journal_position(record.journal_id, record.year, corpus.metrics)
        counts[0] += 1
        counts[1] += is_signed
        if position is not None and position.is_q1:
            counts[2] += 1
            counts[3] += is_signed
        if position is not None and position.is_d1:
            counts[4] += 1
            counts[5] += is_signed
    by_year = {
        year: YearSigning(year, *counts) for year, counts in sorted(year_counts.items())
    }
    return SigningReport(
        papers=sum(y.papers for y in by_year.values()),
        signed=sum(y.signed for y in by_year.values()),
        q1_signed=sum(y.q1_signed for y in by_year.values()),
        d1_signed=sum(y.d1_signed for y in by_year.values()),
        by_year=by_year,
    )


def stabilization_year(
    series: Mapping[int, float | None], epsilon: float, window: int
) -> int | None:
    """Earliest year opening a run of ``window`` consecutive years whose
    year-to-year changes all stay within ``epsilon`` percentage points.

    Returns None when no such run exists (a series still moving at its
    end). Years mapped to None are treated as absent and break runs.
    Appending years after a detected window never changes the result,
    since the earliest qualifying year wins.
    """
    if window < 2:
        raise ValueError("stabilization window must span at least two years")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    years = sorted(year for year, value in series.items() if value is not None)
    longest_run = 0
    run = 0
    previous = None
    for year in years:
        run = run + 1 if previous is not None and year == previous + 1 else 1
        longest_run = max(longest_run, run)
        previous = year
    if longest_run < window:
        raise ValueError(
            f"series must cover at least {window} consecutive years"
        )
    for start in years:
        run_years = [start + offset for offset in range(window)]
        if any(series.get(y) is None for y in run_years):
            continue
        if all(
            abs(series[t] - series[t - 1]) <= epsilon for t in run_years[1:]
        ):
            return start
    return None

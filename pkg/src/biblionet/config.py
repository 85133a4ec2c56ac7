"""Run configuration: loading, validation and fingerprinting.

The configuration is a JSON file; relative input paths are resolved
against the directory containing it. Validation returns findings as data
(field name plus message) so the command line can print all of them before
refusing to run.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from biblionet.corpus import Centre, Roster
from biblionet.errors import ConfigError

_PATH_KEYS = ("publications", "centres", "groups", "researchers",
              "journal_metrics", "patterns")

_KNOWN_KEYS = set(_PATH_KEYS) | {
    "overrides", "study_window", "biomedical_categories", "first_periods",
    "derive_first_periods", "second_period", "stabilization", "output_dir",
    "rounding",
}


@dataclass(frozen=True)
class RoundingSpec:
    """Decimals applied at emission only; computation keeps full precision."""

    percent_decimals: int = 1
    cpp_decimals: int = 2
    density_decimals: int = 2
    cross_category_decimals: int = 2


@dataclass
class RunConfig:
    publications: str
    centres: str
    groups: str
    researchers: str
    journal_metrics: str
    patterns: str
    output_dir: str
    study_window: tuple[int, int]
    overrides: str | None = None
    biomedical_categories: tuple[str, ...] = ()
    first_periods: dict[str, tuple[int, int]] = field(default_factory=dict)
    derive_first_periods: bool = True
    second_period: tuple[int, int] | None = None
    epsilon: float = 2.0
    stabilization_window: int = 3
    rounding: RoundingSpec = field(default_factory=RoundingSpec)

    def resolved_second_period(self) -> tuple[int, int]:
        """Defaults to the last two years of the study window."""
        if self.second_period is not None:
            return self.second_period
        return (self.study_window[1] - 1, self.study_window[1])

    def first_period_for(self, centre: Centre) -> tuple[int, int] | None:
        """Explicit per-centre override, else (launch_year - 1, launch_year)."""
        explicit = self.first_periods.get(centre.centre_id)
        if explicit is not None:
            return explicit
        if self.derive_first_periods:
            return (centre.launch_year - 1, centre.launch_year)
        return None

    def fingerprint(self) -> str:
        """Deterministic digest of the analytic configuration. The output
        directory is excluded so reruns into different directories stay
        byte-identical."""
        payload = {
            "publications": self.publications,
            "centres": self.centres,
            "groups": self.groups,
            "researchers": self.researchers,
            "journal_metrics": self.journal_metrics,
            "patterns": self.patterns,
            "overrides": self.overrides,
            "study_window": list(self.study_window),
            "biomedical_categories": sorted(self.biomedical_categories),
            "first_periods": {k: list(v) for k, v in sorted(self.first_periods.items())},
            "derive_first_periods": self.derive_first_periods,
            "second_period": list(self.resolved_second_period()),
            "epsilon": self.epsilon,
            "stabilization_window": self.stabilization_window,
            "rounding": [
                self.rounding.percent_decimals,
                self.rounding.cpp_decimals,
                self.rounding.density_decimals,
                self.rounding.cross_category_decimals,
            ],
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _year_pair(value, what: str) -> tuple[int, int]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) for v in value)
    ):
        raise ConfigError(f"{what} must be a pair of years, got {value!r}")
    return (value[0], value[1])


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    for key in _PATH_KEYS + ("study_window", "output_dir"):
        if key not in data:
            raise ConfigError(f"config is missing required key {key!r}")

    base = path.parent

    def resolve(p) -> str:
        return str((base / p).resolve()) if not Path(p).is_absolute() else str(p)

    stabilization = data.get("stabilization", {})
    if not isinstance(stabilization, dict):
        raise ConfigError("stabilization must be an object")
    rounding_data = data.get("rounding", {})
    if not isinstance(rounding_data, dict):
        raise ConfigError("rounding must be an object")
    rounding = RoundingSpec(
        percent_decimals=int(rounding_data.get("percent_decimals", 1)),
        cpp_decimals=int(rounding_data.get("cpp_decimals", 2)),
        density_decimals=int(rounding_data.get("density_decimals", 2)),
        cross_category_decimals=int(rounding_data.get("cross_category_decimals", 2)),
    )
    first_periods = {
        str(cid): _year_pair(pair, f"first_periods[{cid}]")
        for cid, pair in dict(data.get("first_periods", {})).items()
    }
    return RunConfig(
        publications=resolve(data["publications"]),
        centres=resolve(data["centres"]),
        groups=resolve(data["groups"]),
        researchers=resolve(data["researchers"]),
        journal_metrics=resolve(data["journal_metrics"]),
        patterns=resolve(data["patterns"]),
        overrides=resolve(data["overrides"]) if data.get("overrides") else None,
        output_dir=resolve(data["output_dir"]),
        study_window=_year_pair(data["study_window"], "study_window"),
        biomedical_categories=tuple(data.get("biomedical_categories", ())),
        first_periods=first_periods,
        derive_first_periods=bool(data.get("derive_first_periods", True)),
        second_period=(
            _year_pair(data["second_period"], "second_period")
            if data.get("second_period") is not None
            else None
        ),
        epsilon=float(stabilization.get("epsilon", 2.0)),
        stabilization_window=int(stabilization.get("window", 3)),
        rounding=rounding,
    )


@dataclass(frozen=True)
class Finding:
    field: str
    message: str


def validate_config(config: RunConfig, roster: Roster | None = None) -> list[Finding]:
    """Structural checks; pass the parsed roster to additionally verify
    that every centre ends up with a usable first-period definition."""
    findings: list[Finding] = []
    start, end = config.study_window
    if end < start:
        findings.append(Finding("study_window", f"window end {end} before start {start}"))

    paths = {
        "publications": config.publications,
        "centres": config.centres,
        "groups": config.groups,
        "researchers": config.researchers,
        "journal_metrics": config.journal_metrics,
        "patterns": config.patterns,
    }
    if config.overrides is not None:
        paths["overrides"] = config.overrides
    for fieldname, p in paths.items():
        if not p:
            findings.append(Finding(fieldname, "path is empty"))
        elif not Path(p).is_file():
            findings.append(Finding(fieldname, f"file not found: {p}"))
    seen: dict[str, str] = {}
    for fieldname, p in paths.items():
        if p in seen:
            findings.append(
                Finding(fieldname, f"path duplicates {seen[p]}: {p}")
            )
        else:
            seen[p] = fieldname

    if config.epsilon <= 0:
        findings.append(Finding("stabilization.epsilon", "epsilon must be positive"))
    if config.stabilization_window < 2:
        findings.append(
            Finding("stabilization.window", "window must span at least two years")
        )
    for name, decimals in (
        ("percent_decimals", config.rounding.percent_decimals),
        ("cpp_decimals", config.rounding.cpp_decimals),
        ("density_decimals", config.rounding.density_decimals),
        ("cross_category_decimals", config.rounding.cross_category_decimals),
    ):
        if decimals < 0:
            findings.append(Finding(f"rounding.{name}", "decimals must be >= 0"))

    second = config.resolved_second_period()
    if second[0] > second[1]:
        findings.append(Finding("second_period", f"inverted period {second}"))
    elif end >= start and not (start <= second[0] and second[1] <= end):
        findings.append(
            Finding("second_period", f"period {second} outside study window")
        )

    if roster is not None and end >= start:
        for cid in sorted(roster.centres):
            centre = roster.centres[cid]
            first = config.first_period_for(centre)
            if first is None:
                findings.append(
                    Finding("first_periods", f"centre {cid} has no first-period definition")
                )
            elif not (start <= first[0] <= first[1] <= end):
                findings.append(
                    Finding(
                        "first_periods",
                        f"centre {cid} first period {first} outside study window",
                    )
                )
    return findings

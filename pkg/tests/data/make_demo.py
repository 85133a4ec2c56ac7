#!/usr/bin/env python3
"""Writes the demo dataset in tests/data/demo/.

The corpus is small but exercises every pipeline feature: three centres
with different launch years, an inactive group that the exclusion rule
drops, manual overrides (one add, one remove, one warning), an institution
alias, an unranked journal, rising signed shares, internal collaboration
that densifies between the two comparison periods, and a programme share
of the national biomedical output around one quarter.

Everything is explicit and deterministic; rerunning the script rewrites
identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).parent / "demo"

CENTRES = [
    ("NC1", "NEURONET", 2006, "2006:5.0;2007:5.1;2008:5.2;2009:5.3;2010:5.4;2011:5.5"),
    ("NC2", "ONCONET", 2006, "2006:4.0;2007:4.1;2008:4.2;2009:4.3;2010:4.4;2011:4.5"),
    ("NC3", "METABNET", 2007, "2007:3.5;2008:3.6;2009:3.7;2010:3.8;2011:3.9"),
]

GROUPS = [
    # gid, centre, institution, category, region, lead, aliases
    ("G01", "NC1", "Universidad de Granada", "University", "Andalucia", "R01", ""),
    ("G02", "NC1", "Hospital Clinic de Barcelona", "Hospital", "Cataluna", "R04",
     "Hosp Clinic Barcelona"),
    ("G03", "NC1", "Instituto Cajal CSIC", "PublicResearchOrg", "Madrid", "R07", ""),
    ("G04", "NC2", "Universidad de Valencia", "University", "Com Valenciana", "R10", ""),
    ("G05", "NC2", "Hospital Universitario La Paz", "Hospital", "Madrid", "R13", ""),
    ("G06", "NC2", "Fundacion Oncologica Ibanez", "Foundation", "Madrid", "R16", ""),
    ("G07", "NC3", "Universidad de Sevilla", "University", "Andalucia", "R19", ""),
    ("G08", "NC3", "Hospital del Mar", "Hospital", "Cataluna", "R22", ""),
    ("G09", "NC2", "Universidad de Murcia", "University", "Murcia", "R25", ""),
]

RESEARCHERS = [
    ("R01", "García Soler, María", "G01", "NEUR;BIOENG"),
    ("R02", "Álvarez Pino, Carlos", "G01", "NEUR"),
    ("R03", "Serrano-Vega, Lucía", "G01", "BIOENG;NEUR"),
    ("R04", "Martín Llorente, Ana", "G02", "NEUR"),
    ("R05", "Ortega Ruiz, Pablo", "G02", "NEUR;PSYCH"),
    ("R06", "Núñez-Castro, Elena", "G02", "NEUR"),
    ("R07", "Ibáñez Sola, Jorge", "G03", "BIOENG;NEUR"),
    ("R08", "Vidal Ferrer, Marta", "G03", "NEUR"),
    ("R09", "Cano Delgado, Sergio", "G03", "NEUR;BIOENG"),
    ("R10", "Navarro Gil, Raquel", "G04", "ONCO"),
    ("R11", "Moreno-Prats, David", "G04", "ONCO;ENDO"),
    ("R12", "Salas Oliva, Irene", "G04", "ONCO"),
    ("R13", "Fuentes Cobo, Andrés", "G05", "ONCO;GASTRO"),
    ("R14", "Prieto Lamas, Clara", "G05", "ONCO"),
    ("R15", "Roca Esteve, Hugo", "G05", "ONCO;ENDO"),
    ("R16", "Beltrán Soto, Eva", "G06", "ONCO"),
    ("R17", "Pascual-Neira, Iván", "G06", "ONCO;PUBH"),
    ("R18", "Campos Rey, Silvia", "G06", "ONCO"),
    ("R19", "Marín Solís, Óscar", "G07", "ENDO;GASTRO"),
    ("R20", "Gallardo Peña, Nuria", "G07", "ENDO"),
    ("R21", "Ríos-Calvo, Tomás", "G07", "ENDO;RESP"),
    ("R22", "Domínguez Lara, Paula", "G08", "GASTRO;ENDO"),
    ("R23", "Herrero Sanz, Mario", "G08", "GASTRO"),
    ("R24", "Aguilar Montes, Teresa", "G08", "ENDO"),
    ("R25", "Vargas Leal, Diego", "G09", "ONCO"),
    ("R26", "Peña Iglesias, Rosa", "G09", "ONCO"),
    ("R27", "Suárez Bello, Víctor", "G09", "ONCO;ENDO"),
]

# journal_id -> {category: (rank, size)}; J99 is used by records but unranked
JOURNALS = {
    "J01": {"NEUR": (5, 60), "BIOENG": (12, 40)},
    "J02": {"NEUR": (14, 60)},
    "J03": {"NEUR": (40, 60)},
    "J04": {"BIOENG": (4, 40)},
    "J05": {"ONCO": (20, 80)},
    "J06": {"ONCO": (8, 80), "ENDO": (30, 50)},
    "J07": {"ONCO": (55, 80)},
    "J08": {"ENDO": (12, 50), "GASTRO": (3, 40)},
    "J09": {"GASTRO": (22, 40)},
    "J10": {"RESP": (7, 30), "PSYCH": (10, 50)},
    "J11": {"PUBH": (3, 40)},
    "J12": {"PHYS": (2, 100)},
}

GROUP_OF = {rid: gid for rid, _, gid, _ in RESEARCHERS}
NAME_OF = {rid: name for rid, name, _, _ in RESEARCHERS}
INSTITUTION_OF = {gid: inst for gid, _, inst, _, _, _, _ in GROUPS}
CENTRE_OF = {gid: cid for gid, cid, _, _, _, _, _ in GROUPS}
REDNET_TAG = {"NC1": "RedNet NEURO", "NC2": "RedNet ONCO", "NC3": "RedNet METAB"}

CITY_OF = {
    "G01": "Granada", "G02": "Barcelona", "G03": "Madrid", "G04": "Valencia",
    "G05": "Madrid", "G06": "Madrid", "G07": "Sevilla", "G08": "Barcelona",
    "G09": "Murcia",
}

NOISE_AUTHORS = ["Petersen, K.", "Yamada, H.", "Olsen, M.", "Dubois, C.",
                 "Kovacs, L.", "Svensson, T.", "Rossi, F.", "Nowak, P."]
NOISE_ADDRESSES = ["Univ Oslo, Oslo, Norway", "Kyoto Univ, Kyoto, Japan",
                   "CNRS, Paris, France", "ETH, Zurich, Switzerland",
                   "Univ Milano, Milano, Italy", "Charles Univ, Praha, Czech Republic"]
NOISE_JOURNALS = ["J01", "J02", "J03", "J05", "J06", "J07", "J08", "J09",
                  "J10", "J11"]
PRIMARY_CAT = {j: sorted(cats)[0] for j, cats in JOURNALS.items()}

# year, researchers, signed, journal, categories, citations, doc type
PROGRAMME_PUBS = [
    (2005, ["R01"], False, "J01", "NEUR", 22, "Article"),
    (2005, ["R04"], False, "J02", "NEUR", 15, "Article"),
    (2005, ["R10"], False, "J05", "ONCO", 18, "Article"),
    (2005, ["R13", "R10"], False, "J06", "ONCO", 25, "Article"),
    (2006, ["R01", "R04"], False, "J01", "NEUR", 30, "Article"),
    (2006, ["R07"], False, "J04", "BIOENG", 12, "Article"),
    (2006, ["R11"], True, "J06", "ONCO;ENDO", 20, "Article"),
    (2006, ["R19"], False, "J08", "ENDO", 17, "Article"),
    (2006, ["R22"], False, "J09", "GASTRO", 11, "Article"),
    (2007, ["R19", "R22"], True, "J08", "ENDO;GASTRO", 26, "Article"),
    (2007, ["R02"], True, "J02", "NEUR", 19, "Review"),
    (2007, ["R14"], False, "J07", "ONCO", 8, "Article"),
    (2007, ["R16"], False, "J05", "ONCO", 14, "Article"),
    (2007, ["R05"], False, "J10", "NEUR;PSYCH", 21, "Article"),
    (2008, ["R03"], True, "J04", "BIOENG;NEUR", 16, "Article"),
    (2008, ["R08"], True, "J01", "NEUR", 24, "Article"),
    (2008, ["R17"], True, "J11", "ONCO;PUBH", 13, "Article"),
    (2008, ["R20"], False, "J06", "ENDO", 10, "Article"),
    (2008, ["R11"], False, "J05", "ONCO;ENDO", 12, "Article"),
    (2008, ["R23"], False, "J09", "GASTRO", 6, "Letter"),
    (2009, ["R06"], True, "J02", "NEUR", 18, "Article"),
    (2009, ["R09"], True, "J01", "NEUR;BIOENG", 28, "Article"),
    (2009, ["R12"], True, "J05", "ONCO", 15, "Article"),
    (2009, ["R21"], True, "J10", "RESP", 9, "Article"),
    (2009, ["R04", "R10"], False, "J06", "NEUR;ONCO", 31, "Article"),
    (2009, ["R15"], False, "J07", "ONCO", 7, "Article"),
    (2010, ["R01", "R07"], True, "J01", "NEUR;BIOENG", 35, "Article"),
    (2010, ["R13", "R16"], True, "J06", "ONCO", 22, "Article"),
    (2010, ["R19"], True, "J08", "ENDO", 12, "Article"),
    (2010, ["R05", "R11"], False, "J10", "PSYCH;ONCO", 17, "Article"),
    (2010, ["R24"], True, "J08", "ENDO", 9, "Article"),
    (2010, ["R10"], False, "J05", "ONCO", 11, "Article"),
    (2011, ["R04", "R08"], True, "J02", "NEUR", 20, "Article"),
    (2011, ["R03", "R05"], True, "J01", "NEUR;BIOENG", 27, "Article"),
    (2011, ["R11", "R14"], True, "J05", "ONCO", 24, "Article"),
    (2011, ["R21", "R23"], True, "J08", "GASTRO;RESP", 14, "Article"),
    (2011, ["R18"], True, "J07", "ONCO", 8, "Editorial Material"),
    (2011, ["R09"], False, "J99", "NEUR", 5, "Article"),
    # papers of the group that never collaborated and never signed
    (2006, ["R25"], False, "J05", "ONCO", 9, "Article"),
    (2007, ["R26"], False, "J07", "ONCO", 5, "Article"),
    (2008, ["R27"], False, "J06", "ONCO;ENDO", 7, "Article"),
]

NOISE_PER_YEAR = {2005: 13, 2006: 15, 2007: 15, 2008: 16, 2009: 16, 2010: 17, 2011: 17}
NON_BIOMED_PER_YEAR = {2005: 3, 2006: 3, 2007: 3, 2008: 3, 2009: 3, 2010: 3, 2011: 2}


def author_string(rid: str, full: bool) -> str:
    name = NAME_OF[rid]
    surname, _, given = name.partition(",")
    given = given.strip()
    if full:
        return name
    initials = ".".join(part[0] for part in given.split()) + "."
    return f"{surname}, {initials}"


def programme_lines() -> list[str]:
    lines = []
    for i, (year, rids, signed, journal, cats, cites, doc_type) in enumerate(
        PROGRAMME_PUBS, start=1
    ):
        pid = f"PR{i:03d}"
        authors = [author_string(rid, full=(i % 3 == 0)) for rid in rids]
        authors.append(NOISE_AUTHORS[i % len(NOISE_AUTHORS)])
        addresses = []
        for k, rid in enumerate(rids):
            gid = GROUP_OF[rid]
            institution = INSTITUTION_OF[gid]
            if gid == "G02" and i % 5 == 3:
                institution = "Hosp Clinic Barcelona"  # alias form
            address = f"{institution}, {CITY_OF[gid]}, Spain"
            if signed and k == 0:
                address = f"{REDNET_TAG[CENTRE_OF[gid]]}, {address}"
            addresses.append(address)
        addresses.append(NOISE_ADDRESSES[i % len(NOISE_ADDRESSES)])
        lines.append(
            f"{pid}|{year}|{doc_type}|{';'.join(authors)}|{';'.join(addresses)}"
            f"|{journal}|{cats}|{cites}"
        )
    return lines


def noise_lines() -> list[str]:
    lines = []
    i = 0
    for year in sorted(NOISE_PER_YEAR):
        for _ in range(NOISE_PER_YEAR[year]):
            i += 1
            pid = f"NB{i:03d}"
            journal = "J99" if i in (40, 90) else NOISE_JOURNALS[i % len(NOISE_JOURNALS)]
            category = "NEUR" if journal == "J99" else PRIMARY_CAT[journal]
            doc_type = "Review" if i % 17 == 0 else "Article"
            authors = [
                NOISE_AUTHORS[i % len(NOISE_AUTHORS)],
                NOISE_AUTHORS[(i + 3) % len(NOISE_AUTHORS)],
            ]
            lines.append(
                f"{pid}|{year}|{doc_type}|{';'.join(authors)}"
                f"|{NOISE_ADDRESSES[i % len(NOISE_ADDRESSES)]}"
                f"|{journal}|{category}|{(i * 3) % 40}"
            )
    return lines


def non_biomed_lines() -> list[str]:
    lines = []
    i = 0
    for year in sorted(NON_BIOMED_PER_YEAR):
        for _ in range(NON_BIOMED_PER_YEAR[year]):
            i += 1
            category = "PHYS" if i % 2 == 0 else "CHEM"
            lines.append(
                f"NX{i:03d}|{year}|Article|{NOISE_AUTHORS[i % len(NOISE_AUTHORS)]}"
                f"|{NOISE_ADDRESSES[(i + 1) % len(NOISE_ADDRESSES)]}"
                f"|J12|{category}|{(i * 5) % 25}"
            )
    return lines


def special_lines() -> list[str]:
    skipped = [
        ("SK1", 2006, "Meeting Abstract"),
        ("SK2", 2007, "Proceedings Paper"),
        ("SK3", 2008, "Correction"),
        ("SK4", 2009, "Book Review"),
        ("SK5", 2010, "News Item"),
        ("SK6", 2011, "Note"),
    ]
    out_of_window = [("OW1", 2004), ("OW2", 2004), ("OW3", 2012), ("OW4", 2012)]
    lines = [
        f"{pid}|{year}|{doc_type}|{NOISE_AUTHORS[0]}|{NOISE_ADDRESSES[0]}|J03|NEUR|2"
        for pid, year, doc_type in skipped
    ]
    lines += [
        f"{pid}|{year}|Article|{NOISE_AUTHORS[1]}|{NOISE_ADDRESSES[1]}|J03|NEUR|1"
        for pid, year in out_of_window
    ]
    return lines


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    publications = programme_lines() + noise_lines() + non_biomed_lines() + special_lines()
    (OUT / "publications.psv").write_text("\n".join(publications) + "\n", encoding="utf-8")

    centre_rows = ["centre_id|acronym|launch_year|annual_budget"]
    centre_rows += [f"{cid}|{acr}|{launch}|{budget}" for cid, acr, launch, budget in CENTRES]
    (OUT / "centres.psv").write_text("\n".join(centre_rows) + "\n", encoding="utf-8")

    group_rows = ["group_id|centre_id|institution|institutional_category|region"
                  "|lead_researcher_id|institution_aliases"]
    group_rows += [
        f"{gid}|{cid}|{inst}|{cat}|{region}|{lead}|{aliases}"
        for gid, cid, inst, cat, region, lead, aliases in GROUPS
    ]
    (OUT / "groups.psv").write_text("\n".join(group_rows) + "\n", encoding="utf-8")

    researcher_rows = ["researcher_id|full_name|group_id|subject_areas"]
    researcher_rows += [f"{rid}|{name}|{gid}|{areas}" for rid, name, gid, areas in RESEARCHERS]
    (OUT / "researchers.psv").write_text("\n".join(researcher_rows) + "\n", encoding="utf-8")

    metric_rows = ["journal_id|year|category|rank|category_size"]
    for journal in sorted(JOURNALS):
        for year in range(2005, 2012):
            for category in sorted(JOURNALS[journal]):
                rank, size = JOURNALS[journal][category]
                metric_rows.append(f"{journal}|{year}|{category}|{rank}|{size}")
    (OUT / "journal_metrics.psv").write_text("\n".join(metric_rows) + "\n", encoding="utf-8")

    overrides = [
        "action|researcher_id|pub_id|comment",
        "add|R02|PR001|second group member confirmed by the centre",
        "remove|R26|PR040|group left the programme before launch",
        "remove|R01|NB001|no such link, kept as a curator note",
    ]
    (OUT / "overrides.psv").write_text("\n".join(overrides) + "\n", encoding="utf-8")

    patterns = ["rednet|", "rednet neuro|NC1", "rednet onco|NC2", "rednet metab|NC3"]
    (OUT / "patterns.psv").write_text("\n".join(patterns) + "\n", encoding="utf-8")

    config = {
        "publications": "publications.psv",
        "centres": "centres.psv",
        "groups": "groups.psv",
        "researchers": "researchers.psv",
        "journal_metrics": "journal_metrics.psv",
        "patterns": "patterns.psv",
        "overrides": "overrides.psv",
        "study_window": [2005, 2011],
        "biomedical_categories": ["NEUR", "BIOENG", "ONCO", "ENDO", "GASTRO",
                                   "RESP", "PSYCH", "PUBH"],
        "stabilization": {"epsilon": 2.0, "window": 3},
        "output_dir": "out",
    }
    (OUT / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    print(f"wrote demo dataset with {len(publications)} publication records to {OUT}")


if __name__ == "__main__":
    main()

"""Text normalization shared by name matching, affiliation checks and
address-pattern detection.

Author names, institution names and address lines arrive with inconsistent
casing, diacritics and punctuation depending on who exported them. All
string comparison in the toolkit therefore goes through one normal form:
case-folded, diacritics stripped, punctuation dropped (hyphens kept, since
hyphenated surnames are meaningful), whitespace collapsed. The function is
idempotent, which the matching code relies on.
"""

import unicodedata


def normalize(text: str) -> str:
    """Return the canonical comparison form of ``text``.

    >>> normalize("  García-Soler,   María ")
    'garcia-soler maria'
    """
    decomposed = unicodedata.normalize("NFD", text)
    kept = []
    for ch in decomposed:
        cat = unicodedata.category(ch)
        if cat == "Mn":  # combining marks left over from decomposition
            continue
        if cat.startswith("P"):
            if cat == "Pd":  # dashes of any flavour become plain hyphens
                kept.append("-")
            continue
        kept.append(ch)
    return " ".join("".join(kept).casefold().split())

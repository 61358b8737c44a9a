"""Published 7-level FAID rules for column-weight-three codes (channel value -B).

Rows and columns run over -L3 .. +L3; entries are level numbers.
"""

from __future__ import annotations

from .decoder import Lut

_TABLES = {
    # error-floor optimised rule
    "opt": [
        [-3, -3, -3, -3, -3, -3, -1],
        [-3, -3, -3, -3, -2, -1, 1],
        [-3, -3, -2, -2, -1, -1, 1],
        [-3, -3, -2, -1, 0, 0, 1],
        [-3, -2, -1, 0, 0, 1, 2],
        [-3, -1, -1, 0, 1, 1, 3],
        [-1, 1, 1, 1, 2, 3, 3],
    ],
    # 3-bit offset min-sum
    "offset-ms": [
        [-3, -3, -3, -3, -3, -2, -1],
        [-3, -3, -3, -3, -2, -1, 0],
        [-3, -3, -3, -2, -1, 0, 0],
        [-3, -3, -2, -1, 0, 0, 0],
        [-3, -2, -1, 0, 0, 0, 1],
        [-2, -1, 0, 0, 0, 1, 2],
        [-1, 0, 0, 0, 1, 2, 3],
    ],
    "robust-sp": [
        [-3, -3, -3, -3, -3, -2, 0],
        [-3, -3, -3, -3, -2, -2, 1],
        [-3, -3, -3, -2, -1, -1, 1],
        [-3, -3, -2, -1, -1, 0, 1],
        [-3, -2, -1, -1, 0, 1, 2],
        [-2, -2, -1, 0, 1, 2, 2],
        [0, 1, 1, 1, 2, 2, 3],
    ],
    "nonrobust-sp": [
        [-3, -3, -3, -3, -3, -3, 0],
        [-3, -3, -3, -3, -2, 0, 2],
        [-3, -3, -2, -2, -1, 0, 2],
        [-3, -3, -2, -1, 0, 1, 3],
        [-3, -2, -1, 0, 0, 1, 3],
        [-3, 0, 0, 1, 1, 1, 3],
        [0, 2, 2, 3, 3, 3, 3],
    ],
    "robust-fd": [
        [-3, -3, -3, -3, -3, -1, 0],
        [-3, -3, -3, -3, -1, -1, 2],
        [-3, -3, -2, -2, -1, 0, 2],
        [-3, -3, -2, -1, 0, 0, 3],
        [-3, -1, -1, 0, 0, 1, 3],
        [-1, -1, 0, 0, 1, 1, 3],
        [0, 2, 2, 3, 3, 3, 3],
    ],
    "nonrobust-fd": [
        [-3, -3, -3, -3, -2, -2, 0],
        [-3, -3, -3, -3, -2, -1, 2],
        [-3, -3, -2, -2, -1, 0, 2],
        [-3, -3, -2, -1, 0, 0, 3],
        [-2, -2, -1, 0, 0, 1, 3],
        [-2, -1, 0, 0, 1, 1, 3],
        [0, 2, 2, 3, 3, 3, 3],
    ],
}

# roman-numeral aliases in publication order
ALIASES = {
    "I": "opt",
    "II": "offset-ms",
    "III": "robust-sp",
    "IV": "nonrobust-sp",
    "V": "robust-fd",
    "VI": "nonrobust-fd",
}

NAMES = tuple(_TABLES)


def published_lut(name: str) -> Lut:
    """Return a published rule by name (``"robust-sp"``) or table numeral (``"III"``)."""
    key = ALIASES.get(name, name)
    if key not in _TABLES:
        raise KeyError(f"unknown table {name!r}; choose from {sorted(_TABLES) + sorted(ALIASES)}")
    return Lut.from_rows(_TABLES[key], s=3, name=key)


def all_published() -> dict[str, Lut]:
    return {name: published_lut(name) for name in NAMES}

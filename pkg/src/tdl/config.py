"""Search budgets.

``TDL_BUDGET`` selects a preset (``desk`` or ``large``) and may override
single limits, e.g. ``TDL_BUDGET="desk,census_space=100000000"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "TDL_BUDGET"


@dataclass(frozen=True)
class Budget:
    census_space: int = 3 ** 15        # oriented n <= 6, digraph n <= 5
    extremal_digraph_n: int = 8
    extremal_oriented_n: int = 9
    fas_n: int = 22
    partition_n: int = 16
    distance_n: int = 10
    hypergraph_N: int = 12
    switching_space: int = 3 ** 15


PRESETS = {
    "desk": Budget(),
    "large": Budget(census_space=3 ** 21, extremal_digraph_n=9, extremal_oriented_n=10, hypergraph_N=16,
                    switching_space=3 ** 21),
}


def parse_budget(text: str | None) -> Budget:
    if not text:
        return PRESETS["desk"]
    b = PRESETS["desk"]
    names = {f.name for f in fields(Budget)}
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok in PRESETS:
            b = PRESETS[tok]
            continue
        key, sep, val = tok.partition("=")
        if not sep or key not in names:
            raise ValueError(f"bad budget setting {tok!r}")
        b = replace(b, **{key: int(val)})
    return b


_override: Budget | None = None


def budget() -> Budget:
    if _override is not None:
        return _override
    return parse_budget(os.environ.get(ENV_VAR))


def set_budget(b: Budget | None) -> None:
    global _override
    _override = b

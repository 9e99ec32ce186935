"""Pure-Python transfer-table kernel, the fallback for the compiled extension.

Subsets and receptivity combinations are bitmasks: place i is bit i of a
subset mask, transition t is bit t of a receptivity mask. One row holds the
image of every subset under one receptivity combination, built by doubling:
images of subsets containing place i extend images of subsets without it.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


def backend_name() -> str:
    return "python"


def fill_rows(
    n: int,
    pre_place: Sequence[int],
    post_place: Sequence[int],
    rmasks: Sequence[int],
) -> np.ndarray:
    """rows[k][x] = image mask of subset mask x under receptivity mask rmasks[k].

    Callers must pass conflict-admissible masks only; with at most one true
    output transition per place, each place has a unique successor bit.
    """
    size = 1 << n
    rows = np.empty((len(rmasks), size), dtype=np.uint32)
    for k, rmask in enumerate(rmasks):
        succ = [1 << i for i in range(n)]
        for t, p in enumerate(pre_place):
            if (rmask >> t) & 1:
                succ[p] = 1 << post_place[t]
        row = [0] * size
        span = 1
        for i in range(n):
            bit = succ[i]
            for x in range(span):
                row[span + x] = row[x] | bit
            span <<= 1
        rows[k] = row
    return rows

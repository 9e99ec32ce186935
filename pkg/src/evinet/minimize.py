"""Two-level sum-of-products minimization of boolean on-sets (Quine-McCluskey).

A cube is a tuple with one slot per variable: 1 for the plain literal, 0 for
the negated literal, None for an eliminated variable. Minterm integers use bit
j for variable j. Minimization is exact over the full assignment space: the
cover equals the on-set everywhere, with no don't-care positions, so callers
can rely on semantic equality with the unminimized form.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable

Cube = tuple[int | None, ...]


def cube_matches(cube: Cube, minterm: int) -> bool:
    return all(bit is None or (minterm >> j) & 1 == bit for j, bit in enumerate(cube))


def cube_sort_key(cube: Cube):
    fixed = sum(1 for b in cube if b is not None)
    return (fixed, tuple(2 if b is None else b for b in cube))


def _to_cube(value: int, dashes: int, width: int) -> Cube:
    return tuple(
        None if (dashes >> j) & 1 else (value >> j) & 1 for j in range(width)
    )


def _prime_implicants(on: list[int], width: int) -> list[tuple[int, int]]:
    # cubes as (value, dash-mask); merge pairs differing in exactly one fixed bit
    level = {(v, 0) for v in on}
    primes: set[tuple[int, int]] = set()
    while level:
        groups = defaultdict(list)
        for value, dashes in level:
            groups[(bin(value).count("1"), dashes)].append((value, dashes))
        merged: set[tuple[int, int]] = set()
        next_level: set[tuple[int, int]] = set()
        for (ones, dashes), cubes in groups.items():
            partners = groups.get((ones + 1, dashes), [])
            for value, _ in cubes:
                for other, _ in partners:
                    diff = value ^ other
                    if diff & (diff - 1) == 0:  # single-bit difference
                        next_level.add((value & ~diff, dashes | diff))
                        merged.add((value, dashes))
                        merged.add((other, dashes))
        primes |= level - merged
        level = next_level
    return sorted(primes)


def minimize_minterms(minterms: Iterable[int], width: int) -> tuple[Cube, ...]:
    """A prime-implicant cover of the on-set, exact over all 2**width assignments.

    Essential primes are taken first, the remainder greedily by coverage; the
    cover is correct by construction though not guaranteed minimal.
    """
    on = sorted(set(minterms))
    if not on:
        return ()
    if any(m < 0 or m >> width for m in on):
        raise ValueError(f"minterm out of range for {width} variables")
    primes = _prime_implicants(on, width)
    covers = {
        prime: frozenset(m for m in on if m & ~prime[1] == prime[0]) for prime in primes
    }

    chosen: list[tuple[int, int]] = []
    uncovered = set(on)
    for m in on:
        holders = [p for p in primes if m in covers[p]]
        if len(holders) == 1 and holders[0] not in chosen:
            chosen.append(holders[0])
            uncovered -= covers[holders[0]]
    while uncovered:
        best = max(
            (p for p in primes if p not in chosen),
            key=lambda p: (len(covers[p] & uncovered), -p[0], p[1]),
        )
        chosen.append(best)
        uncovered -= covers[best]

    cubes = [_to_cube(value, dashes, width) for value, dashes in chosen]
    return tuple(sorted(cubes, key=cube_sort_key))

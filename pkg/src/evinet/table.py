"""Precomputed transformation tables and the boolean mass-update equations.

The table maps every (nonempty place set, admissible receptivity combination)
cell to its image set. Inverting it per target yields the sources of each
set's next mass, and grouping the inverse by source gives one boolean
coefficient per (target, source) pair, printable raw (as minterms) or
minimized to a two-level sum of products.

Cell count is (2**n - 1) * 2**m before conflict filtering, so construction is
capped and the inner loop lives in a kernel (compiled when available).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from . import _backend
from .errors import ConflictError, DimensionError, TableCapError
from .engine import PlaceSet, MassVector, _as_mass_vector, _coerce_place_set, place_set_key, place_sets
from .minimize import Cube, cube_matches, cube_sort_key, minimize_minterms
from .net import (
    PetriNet,
    Receptivity,
    _require_valid,
    _structure,
    check_receptivity,
    coerce_receptivity,
)

DEFAULT_SIZE_CAP = 16

EQUATION_FORMAT_VERSION = "evinet equations v1"


def _mask_of(places: Iterable[int]) -> int:
    mask = 0
    for i in places:
        mask |= 1 << i
    return mask


def _set_of(mask: int) -> PlaceSet:
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def _bits_to_mask(bits: Receptivity) -> int:
    return sum(bit << j for j, bit in enumerate(bits))


@dataclass(frozen=True, eq=False)
class TransferTable:
    """Total map (nonempty place set, admissible receptivity) -> image set.

    ``rows[k][x]`` is the image mask of subset mask ``x`` under the k-th
    admissible combination; combinations rejected by the conflict constraint
    carry no cells and are listed in ``rejected``.
    """

    net: PetriNet
    admissible: tuple[Receptivity, ...]
    rejected: tuple[Receptivity, ...]
    rows: np.ndarray = field(repr=False)

    @property
    def defined_cell_count(self) -> int:
        return len(self.admissible) * ((1 << self.net.place_count) - 1)

    def is_admissible(self, r: Sequence[int]) -> bool:
        return coerce_receptivity(self.net, r) in self._row_index()

    def _row_index(self) -> dict[Receptivity, int]:
        index = getattr(self, "_row_index_cache", None)
        if index is None:
            index = {bits: k for k, bits in enumerate(self.admissible)}
            object.__setattr__(self, "_row_index_cache", index)
        return index

    def lookup(self, x: Iterable[int], r: Sequence[int]) -> PlaceSet:
        """The image set of ``x`` under ``r``; raises for rejected combinations."""
        bits = coerce_receptivity(self.net, r)
        members = _coerce_place_set(x, self.net.place_count)
        row = self._row_index().get(bits)
        if row is None:
            raise ConflictError(check_receptivity(self.net, bits))
        return _set_of(int(self.rows[row, _mask_of(members)]))

    def cells(self) -> Iterator[tuple[PlaceSet, Receptivity, PlaceSet]]:
        """All defined cells, subsets in canonical order, combinations in binary order."""
        for x in place_sets(self.net.place_count):
            xmask = _mask_of(x)
            for k, bits in enumerate(self.admissible):
                yield x, bits, _set_of(int(self.rows[k, xmask]))


def build_transfer_table(
    net: PetriNet,
    *,
    max_places: int = DEFAULT_SIZE_CAP,
    max_transitions: int | None = None,
) -> TransferTable:
    """Evaluate the transformation of every subset under every admissible combination.

    Work and memory grow as (2**n - 1) * 2**m; builds beyond the caps raise
    :class:`~evinet.errors.TableCapError` carrying the cell count that would
    be required.
    """
    _require_valid(net)
    if max_transitions is None:
        max_transitions = max_places
    n, m = net.place_count, net.transition_count
    if n > max_places or m > max_transitions:
        required = ((1 << n) - 1) * (1 << m)
        raise TableCapError(
            f"net has {n} places and {m} transitions, over the cap of"
            f" {max_places} places and {max_transitions} transitions;"
            f" the full table would need {required} cells",
            required_cells=required,
        )
    structure = _structure(net)
    admissible: list[Receptivity] = []
    rejected: list[Receptivity] = []
    # ascending order of the bit string r1..rm read as a binary number
    for value in range(1 << m):
        bits = tuple(int(c) for c in format(value, f"0{m}b"))
        (admissible if not check_receptivity(net, bits) else rejected).append(bits)
    rmasks = [_bits_to_mask(bits) for bits in admissible]
    rows = _backend.fill_rows(n, structure.pre_place, structure.post_place, rmasks)
    return TransferTable(
        net=net,
        admissible=tuple(admissible),
        rejected=tuple(rejected),
        rows=rows,
    )


def invert_table(
    table: TransferTable, y: Iterable[int]
) -> tuple[tuple[PlaceSet, Receptivity], ...]:
    """All (source set, combination) cells whose image is ``y``.

    Ordered canonically: source sets by cardinality then indices, and within a
    source by the combination's binary value. Empty when nothing maps to ``y``.
    """
    target = _coerce_place_set(y, table.net.place_count)
    ymask = _mask_of(target)
    row_idx, x_masks = np.nonzero(table.rows == np.uint32(ymask))
    pairs = [
        (_set_of(int(xmask)), table.admissible[int(k)])
        for k, xmask in zip(row_idx, x_masks)
        if xmask  # mask 0 is not a subset cell
    ]
    pairs.sort(key=lambda pair: (place_set_key(pair[0]), pair[1]))
    return tuple(pairs)


def table_step(table: TransferTable, mass, r: Sequence[int]) -> MassVector:
    """Advance a mass distribution by table lookup; equals the direct step."""
    mass = _as_mass_vector(mass)
    bits = coerce_receptivity(table.net, r)
    row = table._row_index().get(bits)
    if row is None:
        raise ConflictError(check_receptivity(table.net, bits))
    n = table.net.place_count
    out: dict[PlaceSet, float] = {}
    for x in mass.focal_sets():
        members = _coerce_place_set(x, n)
        y = _set_of(int(table.rows[row, _mask_of(members)]))
        out[y] = out.get(y, 0.0) + mass[x]
    return MassVector(out)


@dataclass(frozen=True)
class MassEquation:
    """One target set's next mass as a sum of (boolean coefficient, source) terms.

    Terms pair a cube over the receptivity bits with a source set; a source's
    coefficient is the disjunction of its cubes. Raw emission uses full
    minterms, minimized emission a two-level sum of products.
    """

    target: PlaceSet
    transition_count: int
    terms: tuple[tuple[Cube, PlaceSet], ...]

    def sources(self) -> tuple[PlaceSet, ...]:
        return tuple(sorted({src for _, src in self.terms}, key=place_set_key))

    def coefficient(self, source: Iterable[int], r: Sequence[int]) -> bool:
        src = frozenset(source)
        minterm = _bits_to_mask(tuple(int(b) for b in r))
        return any(
            cube_matches(cube, minterm) for cube, s in self.terms if s == src
        )


def emit_equations(table: TransferTable, minimize: bool = False) -> tuple[MassEquation, ...]:
    """One equation per reachable target set, in canonical target order.

    With ``minimize`` each (target, source) coefficient is reduced to an
    equivalent sum of products; equality with the raw form holds on every one
    of the 2**m assignments because rejected combinations stay off in both.
    """
    m = table.net.transition_count
    groups: dict[tuple[int, int], list[int]] = {}
    for k, bits in enumerate(table.admissible):
        rmask = _bits_to_mask(bits)
        row = table.rows[k]
        for xmask, ymask in enumerate(row.tolist()):
            if xmask:
                groups.setdefault((int(ymask), xmask), []).append(rmask)

    by_target: dict[PlaceSet, dict[PlaceSet, list[int]]] = {}
    for (ymask, xmask), minterms in groups.items():
        by_target.setdefault(_set_of(ymask), {})[_set_of(xmask)] = minterms

    equations = []
    for target in sorted(by_target, key=place_set_key):
        terms: list[tuple[Cube, PlaceSet]] = []
        for source in sorted(by_target[target], key=place_set_key):
            minterms = by_target[target][source]
            if minimize:
                cubes = minimize_minterms(minterms, m)
            else:
                cubes = tuple(
                    _to_full_cube(minterm, m) for minterm in sorted(minterms)
                )
            terms.extend((cube, source) for cube in cubes)
        equations.append(
            MassEquation(target=target, transition_count=m, terms=tuple(terms))
        )
    return tuple(equations)


def _to_full_cube(minterm: int, width: int) -> Cube:
    return tuple((minterm >> j) & 1 for j in range(width))


def equations_semantically_equal(a: MassEquation, b: MassEquation) -> bool:
    """True when both equations compute the same coefficients everywhere.

    Compared per source over all 2**m receptivity assignments, so factorized,
    minimized, and raw forms of the same update rule all compare equal.
    Differing targets compare unequal; differing widths are an error.
    """
    if a.transition_count != b.transition_count:
        raise DimensionError(
            f"equations span {a.transition_count} and {b.transition_count} transitions"
        )
    if a.target != b.target:
        return False
    width = a.transition_count
    sources = set(a.sources()) | set(b.sources())
    a_by_src: dict[PlaceSet, list[Cube]] = {}
    b_by_src: dict[PlaceSet, list[Cube]] = {}
    for cube, src in a.terms:
        a_by_src.setdefault(src, []).append(cube)
    for cube, src in b.terms:
        b_by_src.setdefault(src, []).append(cube)
    for minterm in range(1 << width):
        for src in sources:
            hit_a = any(cube_matches(c, minterm) for c in a_by_src.get(src, ()))
            hit_b = any(cube_matches(c, minterm) for c in b_by_src.get(src, ()))
            if hit_a != hit_b:
                return False
    return True


def evaluate_equation(eq: MassEquation, mass, r: Sequence[int]) -> float:
    """The target's next mass under the equation, given the current masses."""
    mass = _as_mass_vector(mass)
    bits = tuple(int(b) for b in r)
    if len(bits) != eq.transition_count:
        raise DimensionError(
            f"receptivity has {len(bits)} bits, equation spans {eq.transition_count}"
        )
    return sum(mass.mass(src) for src in eq.sources() if eq.coefficient(src, bits))


def _set_label(places: PlaceSet) -> str:
    return "{" + ",".join(str(i + 1) for i in sorted(places)) + "}"


def _cube_label(cube: Cube) -> str:
    literals = [
        f"r{j + 1}" if bit else f"!r{j + 1}"
        for j, bit in enumerate(cube)
        if bit is not None
    ]
    return "*".join(literals) if literals else "1"


def render_equation(eq: MassEquation) -> str:
    """One-line text form, e.g. ``M{1}(k+1) = !r1*M{1} + r3*M{3} + !r1*r3*M{1,3}``."""
    parts = []
    for source in eq.sources():
        cubes = sorted(
            (cube for cube, src in eq.terms if src == source), key=cube_sort_key
        )
        coeff = " + ".join(_cube_label(cube) for cube in cubes)
        if len(cubes) > 1:
            coeff = f"({coeff})"
        parts.append(f"{coeff}*M{_set_label(source)}")
    rhs = " + ".join(parts) if parts else "0"
    return f"M{_set_label(eq.target)}(k+1) = {rhs}"


def render_equations(equations: Iterable[MassEquation]) -> str:
    """All equations under the versioned format header, one per line."""
    lines = [f"# {EQUATION_FORMAT_VERSION}"]
    lines.extend(render_equation(eq) for eq in equations)
    return "\n".join(lines) + "\n"


def write_table_csv(table: TransferTable, handle: IO[str]) -> int:
    """Write the defined cells as CSV and return the row count (header excluded)."""
    names = table.net.places

    def bracket(s: PlaceSet) -> str:
        return "{" + ",".join(names[i] for i in sorted(s)) + "}"

    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["subset", "receptivity_bits", "result_subset"])
    count = 0
    for x, bits, y in table.cells():
        writer.writerow([bracket(x), "".join(map(str, bits)), bracket(y)])
        count += 1
    return count

"""Textual formats: net documents, receptivity streams, and mass records.

Net document grammar (one directive per line, ``#`` starts a comment):

    # format: evinet v1
    net fig1
    places: P1, P2, P3
    transitions: t1, t2, t3
    arc: P1 -> t1
    arc: t1 -> P2

Arcs run place-to-transition (filling ``pre``) or transition-to-place
(filling ``post``). A receptivity stream holds one line of 0/1 tokens per
step. A mass record lists focal sets against declared place names, e.g.
``{P1}:0.5 {P2,P3}:0.5``; the dense form is the full canonical-order vector,
``[0,0,0,0,1,0,0]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError
from .engine import MassVector, PlaceSet
from .net import PetriNet, Receptivity, validate_net

FORMAT_HEADER = "# format: evinet v1"

DENSE_PLACE_LIMIT = 10  # 2**10 - 1 columns is the most a dense record may carry

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_ARC = re.compile(r"(\S+)\s*->\s*(\S+)\Z")
_MASS_TOKEN = re.compile(r"\{([^{}]*)\}:(\S+)\Z")


@dataclass(frozen=True)
class NetDocument:
    """Parsed form of a net document: declarations plus arcs in source order."""

    name: str
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _split_names(body: str, line_no: int, what: str) -> tuple[str, ...]:
    names = [t for t in re.split(r"[,\s]+", body.strip()) if t]
    for name in names:
        if not _IDENT.match(name):
            raise ParseError(f"invalid {what} name {name!r}", line_no)
    return tuple(names)


def _parse_lines(text: str):
    name = None
    places: tuple[str, ...] | None = None
    transitions: tuple[str, ...] | None = None
    arcs: list[tuple[str, str]] = []
    arc_lines: dict[tuple[str, str], int] = {}
    decl_line = {"places": 0, "transitions": 0}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if name is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "net" or not _IDENT.match(parts[1]):
                raise ParseError("expected a 'net <name>' header", line_no)
            name = parts[1]
            continue
        directive, sep, body = line.partition(":")
        directive = directive.strip()
        if not sep:
            raise ParseError(f"unrecognized directive {line!r}", line_no)
        if directive == "places":
            if places is not None:
                raise ParseError("places declared twice", line_no)
            places = _split_names(body, line_no, "place")
            decl_line["places"] = line_no
        elif directive == "transitions":
            if transitions is not None:
                raise ParseError("transitions declared twice", line_no)
            transitions = _split_names(body, line_no, "transition")
            decl_line["transitions"] = line_no
        elif directive == "arc":
            if places is None or transitions is None:
                raise ParseError(
                    "arcs must come after the places and transitions declarations",
                    line_no,
                )
            match = _ARC.match(body.strip())
            if not match:
                raise ParseError(f"expected 'arc: A -> B', got {body.strip()!r}", line_no)
            src, dst = match.group(1), match.group(2)
            for endpoint in (src, dst):
                if endpoint not in places and endpoint not in transitions:
                    column = raw.index(endpoint) + 1
                    raise ParseError(
                        f"undeclared identifier {endpoint!r}", line_no, column
                    )
            src_is_place = src in places
            dst_is_place = dst in places
            if src_is_place == dst_is_place:
                raise ParseError(
                    "an arc must link one place and one transition", line_no
                )
            if (src, dst) in arc_lines:
                raise ParseError(f"duplicate arc {src} -> {dst}", line_no)
            arc_lines[(src, dst)] = line_no
            arcs.append((src, dst))
        else:
            raise ParseError(f"unrecognized directive {directive!r}", line_no)

    if name is None:
        raise ParseError("empty document, expected a 'net <name>' header", 1)
    if places is None:
        raise ParseError("missing places declaration", 1)
    if transitions is None:
        raise ParseError("missing transitions declaration", 1)
    doc = NetDocument(name=name, places=places, transitions=transitions, arcs=tuple(arcs))
    return doc, arc_lines, decl_line


def parse_document(text: str) -> NetDocument:
    """Parse a net document without judging its structural soundness."""
    doc, _, _ = _parse_lines(text)
    return doc


def document_to_net(doc: NetDocument) -> PetriNet:
    """Build the incidence matrices; the result may still fail validation."""
    n, m = len(doc.places), len(doc.transitions)
    place_idx = {p: i for i, p in enumerate(doc.places)}
    trans_idx = {t: j for j, t in enumerate(doc.transitions)}
    pre = [[0] * m for _ in range(n)]
    post = [[0] * m for _ in range(n)]
    for src, dst in doc.arcs:
        if src in place_idx:
            pre[place_idx[src]][trans_idx[dst]] = 1
        else:
            post[place_idx[dst]][trans_idx[src]] = 1
    return PetriNet(
        places=doc.places,
        transitions=doc.transitions,
        pre=tuple(map(tuple, pre)),
        post=tuple(map(tuple, post)),
        name=doc.name,
    )


def parse_net(text: str) -> PetriNet:
    """Parse a net document into a structurally valid net.

    Structural violations raise :class:`~evinet.errors.ParseError` pointing at
    the arc or declaration that causes them.
    """
    doc, arc_lines, decl_line = _parse_lines(text)
    net = document_to_net(doc)
    report = validate_net(net)
    if report.ok:
        return net

    def blame(violation) -> int:
        if violation.transition is not None:
            t = doc.transitions[violation.transition]
            lines = [ln for (a, b), ln in arc_lines.items() if t in (a, b)]
            if lines:
                return min(lines)
            return decl_line["transitions"] or 1
        if violation.place is not None:
            p = doc.places[violation.place]
            lines = [ln for (a, b), ln in arc_lines.items() if p in (a, b)]
            if lines:
                return min(lines)
        return decl_line["places"] or 1

    first = report.violations[0]
    rest = len(report.violations) - 1
    suffix = f" (and {rest} more violation{'s' if rest > 1 else ''})" if rest else ""
    raise ParseError(f"invalid net: {first.message}{suffix}", blame(first))


def serialize_net(net: PetriNet) -> str:
    """Canonical document: declarations in order, arcs grouped per transition."""
    lines = [
        FORMAT_HEADER,
        f"net {net.name}",
        "places: " + ", ".join(net.places),
        "transitions: " + ", ".join(net.transitions),
    ]
    for j, t in enumerate(net.transitions):
        for i, p in enumerate(net.places):
            if net.pre[i][j]:
                lines.append(f"arc: {p} -> {t}")
        for i, p in enumerate(net.places):
            if net.post[i][j]:
                lines.append(f"arc: {t} -> {p}")
    return "\n".join(lines) + "\n"


def parse_receptivity_line(
    line: str, transition_count: int, line_no: int = 1
) -> Receptivity | None:
    """One stream line to a receptivity, or None for blank/comment lines."""
    body = _strip_comment(line).strip()
    if not body:
        return None
    tokens = [t for t in re.split(r"[,\s]+", body) if t]
    if len(tokens) != transition_count:
        raise ParseError(
            f"expected {transition_count} receptivity bits, got {len(tokens)}", line_no
        )
    bits = []
    for token in tokens:
        if token not in ("0", "1"):
            raise ParseError(f"non-binary token {token!r}", line_no)
        bits.append(int(token))
    return tuple(bits)


def parse_receptivity_stream(
    lines: Iterable[str] | str, transition_count: int
) -> tuple[Receptivity, ...]:
    """All receptivities of a stream, in order; blanks and comments skipped."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    out = []
    for line_no, line in enumerate(lines, start=1):
        bits = parse_receptivity_line(line, transition_count, line_no)
        if bits is not None:
            out.append(bits)
    return tuple(out)


def _place_names(places: int | Sequence[str]) -> tuple[str, ...]:
    if isinstance(places, int):
        return tuple(f"P{i + 1}" for i in range(places))
    return tuple(places)


def format_place_set(places: PlaceSet, names: int | Sequence[str]) -> str:
    """The set-literal form used by mass records, e.g. ``{P1,P3}``."""
    labels = _place_names(names)
    return "{" + ",".join(labels[i] for i in sorted(places)) + "}"


def _format_number(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def serialize_mass(
    mass: MassVector, places: int | Sequence[str], form: str = "sparse"
) -> str:
    """A one-line mass record.

    ``sparse`` lists focal sets in canonical order (``{P1}:0.5 {P2}:0.5``);
    ``dense`` is the full canonical-order vector, available for up to
    ``DENSE_PLACE_LIMIT`` places.
    """
    names = _place_names(places)
    n = len(names)
    if form == "sparse":
        return " ".join(
            f"{format_place_set(x, names)}:{_format_number(mass[x])}"
            for x in mass.focal_sets()
        )
    if form == "dense":
        if n > DENSE_PLACE_LIMIT:
            raise ValueError(
                f"dense records are limited to {DENSE_PLACE_LIMIT} places, got {n}"
            )
        return "[" + ",".join(_format_number(v) for v in mass.dense(n)) + "]"
    raise ValueError(f"unknown mass record form {form!r}")


def parse_mass(text: str, places: int | Sequence[str], line_no: int = 1) -> MassVector:
    """Parse a sparse mass record against the declared place names."""
    names = _place_names(places)
    index = {p: i for i, p in enumerate(names)}
    masses: list[tuple[PlaceSet, float]] = []
    tokens = text.split()
    if not tokens:
        raise ParseError("empty mass record", line_no)
    for token in tokens:
        match = _MASS_TOKEN.match(token)
        if not match:
            raise ParseError(f"expected '{{P,..}}:mass', got {token!r}", line_no)
        members = [p.strip() for p in match.group(1).split(",") if p.strip()]
        unknown = [p for p in members if p not in index]
        if unknown:
            raise ParseError(f"unknown place {unknown[0]!r}", line_no)
        if not members:
            raise ParseError("a focal set cannot be empty", line_no)
        try:
            value = float(match.group(2))
        except ValueError:
            raise ParseError(f"bad mass value {match.group(2)!r}", line_no) from None
        masses.append((frozenset(index[p] for p in members), value))
    try:
        return MassVector(masses)
    except Exception as exc:
        raise ParseError(f"bad mass record: {exc}", line_no) from exc

"""Evidential state estimation for single-token Petri nets.

Track where a discrete-event system is when its initial place is unknown: a
mass distribution over sets of places evolves from a stream of boolean
receptivity vectors, and the closed-form boolean update equations of a given
net can be emitted symbolically.
"""

from .errors import (
    ConflictError,
    DimensionError,
    EvinetError,
    InvalidNetError,
    MassError,
    ParseError,
    TableCapError,
    TrajectoryError,
)
from .net import (
    ClassicMarking,
    ConflictSet,
    PetriNet,
    Receptivity,
    ReceptivityConflict,
    ValidationReport,
    Violation,
    check_receptivity,
    classic_step,
    detect_conflicts,
    enabled_transitions,
    validate_net,
)
from .engine import (
    NORMALIZATION_TOL,
    MassVector,
    PlaceSet,
    Trajectory,
    ignorance_mass,
    place_set_key,
    place_sets,
    run,
    sequential_step_check,
    step,
    transform,
)
from .table import (
    DEFAULT_SIZE_CAP,
    MassEquation,
    TransferTable,
    build_transfer_table,
    emit_equations,
    equations_semantically_equal,
    evaluate_equation,
    invert_table,
    render_equation,
    render_equations,
    table_step,
    write_table_csv,
)
from .dsl import (
    NetDocument,
    document_to_net,
    format_place_set,
    parse_document,
    parse_mass,
    parse_net,
    parse_receptivity_stream,
    serialize_mass,
    serialize_net,
)
from ._backend import backend_name

__version__ = "0.1.0"

__all__ = [
    "ClassicMarking",
    "ConflictError",
    "ConflictSet",
    "DEFAULT_SIZE_CAP",
    "DimensionError",
    "EvinetError",
    "InvalidNetError",
    "MassEquation",
    "MassError",
    "MassVector",
    "NORMALIZATION_TOL",
    "NetDocument",
    "ParseError",
    "PetriNet",
    "PlaceSet",
    "Receptivity",
    "ReceptivityConflict",
    "TableCapError",
    "Trajectory",
    "TrajectoryError",
    "TransferTable",
    "ValidationReport",
    "Violation",
    "backend_name",
    "build_transfer_table",
    "check_receptivity",
    "classic_step",
    "detect_conflicts",
    "document_to_net",
    "emit_equations",
    "enabled_transitions",
    "equations_semantically_equal",
    "evaluate_equation",
    "format_place_set",
    "ignorance_mass",
    "invert_table",
    "parse_document",
    "parse_mass",
    "parse_net",
    "parse_receptivity_stream",
    "place_set_key",
    "place_sets",
    "render_equation",
    "render_equations",
    "run",
    "sequential_step_check",
    "serialize_mass",
    "serialize_net",
    "step",
    "table_step",
    "transform",
    "validate_net",
    "write_table_csv",
]

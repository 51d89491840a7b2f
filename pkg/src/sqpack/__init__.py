"""Online square-into-square packing with a 3/8 total-area guarantee.

The :class:`Packer` places each arriving square immediately and
permanently; any sequence whose side-squares sum to at most 3/8 fits in
the unit container. The package also ships an independent geometric
verifier, seeded fuzz generators and adversaries, an offline baseline
packer, and a CLI with an interactive session server.
"""

from .generators import (
    SequenceSpec,
    Xorshift64Star,
    adversary_strategies,
    generate,
)
from .geometry import AREA_EPS, EPS, CONTAINER, PlacedSquare, Rect
from .oracle import moon_moser_pack, placements_snapshot
from .packer import Packer, PlacementOutcome, default_shelves
from .sizeclasses import ConstantsError, classify, subclass_params, validate_ratios
from .verifier import (
    AuditReport,
    audit_all,
    audit_closed_shelf_density,
    audit_geometry,
    audit_large_reservation,
    audit_pair_close,
    audit_shelf_discipline,
    simulate_shelf_fill,
)

__version__ = "0.1.0"

__all__ = [
    "AREA_EPS",
    "AuditReport",
    "CONTAINER",
    "ConstantsError",
    "EPS",
    "Packer",
    "PlacedSquare",
    "PlacementOutcome",
    "Rect",
    "SequenceSpec",
    "Xorshift64Star",
    "adversary_strategies",
    "audit_all",
    "audit_closed_shelf_density",
    "audit_geometry",
    "audit_large_reservation",
    "audit_pair_close",
    "audit_shelf_discipline",
    "classify",
    "default_shelves",
    "generate",
    "moon_moser_pack",
    "placements_snapshot",
    "simulate_shelf_fill",
    "subclass_params",
    "validate_ratios",
    "__version__",
]

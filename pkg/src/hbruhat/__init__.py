"""Higher Bruhat orders B(n,d): enumeration, wiring diagrams and interval topology."""

from .core import (
    GroundParams,
    Packet,
    SetFamily,
    SubsetCode,
    closure,
    is_consistent,
    restrict,
    subset_codec,
)
from .poset import (
    PosetStore,
    ascents,
    enumerate_poset,
    interval_elements,
    leq,
    verify_inclusion_equals_singlestep,
    witness_chain,
)
from .topology import (
    asc_complex,
    classify_interval,
    cone_certificate,
    euler_oracle,
    mobius,
    omega_poset,
)
from .wiring import (
    ascent_blocks,
    block_flip_check,
    build_network,
    floor_info,
    inversion_set,
    local_sequences,
    max_height_ascent,
)

__version__ = "0.1.0"

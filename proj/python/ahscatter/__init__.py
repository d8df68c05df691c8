"""Python bindings for the ahscatter core library."""

from ._core import (
    AhsError,
    InitialData,
    __version__,
    bronski_critical_point,
    builtin_family,
    f0_prime,
    forward_f0,
    inverse_map,
    reflection_coefficient,
    roundtrip,
    sech_closed_form_f0_prime,
    w,
)

__all__ = [
    "AhsError",
    "InitialData",
    "__version__",
    "bronski_critical_point",
    "builtin_family",
    "f0_prime",
    "forward_f0",
    "inverse_map",
    "reflection_coefficient",
    "roundtrip",
    "sech_closed_form_f0_prime",
    "w",
]

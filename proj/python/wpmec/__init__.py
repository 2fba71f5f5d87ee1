"""Wireless-powered MEC: joint energy beamforming and offloading allocation."""

try:
    from ._wpmec import (  # noqa: F401
        brute_force,
        dbm_to_watts,
        generate_channels,
        solve,
        sweep,
    )
except ImportError:  # in-tree layout: the module is built next to the package
    from _wpmec import (  # noqa: F401
        brute_force,
        dbm_to_watts,
        generate_channels,
        solve,
        sweep,
    )

__all__ = ["brute_force", "dbm_to_watts", "generate_channels", "solve", "sweep"]

"""
H-stationary Lagrangian immersion lab.

Closed-form immersions into C^n, CP^n and CH^n, the twistor PDEs behind
them, and numerical checks of every geometric property they claim.
"""

from .config import VERSION
from .catalog import get_family, instantiate, list_families
from .verify import RunConfig, emit_report, exit_status, run_verification

__version__ = VERSION

__all__ = [
    "RunConfig",
    "emit_report",
    "exit_status",
    "get_family",
    "instantiate",
    "list_families",
    "run_verification",
    "__version__",
]

"""
Project paths and numeric defaults.
"""

import os
from pathlib import Path

from scripts.errors import UsageError

PROJECT_ROOT = Path(__file__).parent.parent
DATA_DIR = PROJECT_ROOT / 'data'
POTENTIALS_DIR = DATA_DIR / 'potentials'
REFERENCE_DIR = DATA_DIR / 'reference'
REPORTS_DIR = PROJECT_ROOT / 'outputs' / 'reports'

DEFAULT_PRECISION = 50
QUADRATURE_GUARD_DIGITS = 15
DEFAULT_VERTEX_CAP = 4
DEFAULT_GENUS_MAX = 4
PUISEUX_ORDER = 6
OUTPUT_FORMATS = ('table', 'csv', 'json')
JSON_SCHEMA_VERSION = 1


def working_precision(requested: int = None) -> int:
    """
    Resolve the working precision in decimal digits.

    An explicit request wins, then GENUSKIT_PRECISION, then the default.
    """
    if requested is not None:
        digits = requested
    else:
        raw = os.environ.get('GENUSKIT_PRECISION')
        if raw is None or not raw.strip():
            return DEFAULT_PRECISION
        try:
            digits = int(raw)
        except ValueError:
            raise UsageError(f"GENUSKIT_PRECISION must be an integer, got {raw!r}")
    if digits < 15:
        raise UsageError(f"precision must be at least 15 digits, got {digits}")
    return digits

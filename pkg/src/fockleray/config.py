import os
from typing import Final, Optional, Tuple

import psutil


# Pivots below this fraction of the largest entry are treated as zero in float mode
FLOAT_RANK_TOLERANCE: Final = 1e-9


# defaults for the randomized checks. Any seed is recorded in the CheckReport so that a
# failing run can be reproduced exactly
DEFAULT_SEED: Final = 0
DEFAULT_STEIN_TRIALS: Final = 200
DEFAULT_STEIN_DEGREE_CAP: Final = 6
DEFAULT_PROJECTION_TRIALS: Final = 100
# random integer coefficients are drawn from [-bound, bound]
RANDOM_COEFFICIENT_BOUND: Final = 3
# maximum number of terms in a random field used by the projection checks
RANDOM_FIELD_MAX_TERMS: Final = 6


# the ζ-basis is computed in floating point and gets expensive quickly, so the suite caps
# its degree regardless of --max-degree
ZETA_MAX_DEGREE: Final = 4
# radial stream functions (x_1^2 + x_2^2)^m are checked for m = 1..RADIAL_MAX_POWER
RADIAL_MAX_POWER: Final = 3


DIMENSION_COLUMNS: Final[Tuple[str, ...]] = (
    "n",
    "k",
    "ambient",
    "necklaces",
    "dim_cyclic",
    "dim_divfree",
    "dim_vect_leq",
)


# names of environment variables

# Caps the number of worker processes used by the verification suite. 0 or unset means
# use one worker per logical cpu.
FOCK_LERAY_THREADS: Final = "FOCK_LERAY_THREADS"


def get_worker_count(override: Optional[int] = None) -> int:
    """
    Returns the number of worker processes to use. A positive override is used as is
    unless FOCK_LERAY_THREADS caps it lower. Without an override the cap itself is used,
    or the number of logical cpus if the variable is unset or 0.
    """
    cap = _worker_cap()
    if override is not None and override > 0:
        return override if cap is None else min(override, cap)
    if cap is not None:
        return cap
    return psutil.cpu_count(logical=True) or 1


def _worker_cap() -> Optional[int]:
    value_str = os.environ.get(FOCK_LERAY_THREADS, "").strip()
    if value_str:
        try:
            value = int(value_str)
        except ValueError:
            raise ValueError(
                f"The environment variable {FOCK_LERAY_THREADS} is set to "
                f"{value_str!r}, which is not an integer. Please set it to 0 "
                "(automatic) or a positive number of workers."
            )
        if value < 0:
            raise ValueError(
                f"The environment variable {FOCK_LERAY_THREADS} must not be negative, "
                f"got {value}"
            )
        if value > 0:
            return value
    return None

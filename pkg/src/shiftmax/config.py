"""Size caps shared by the modules."""

import os

#: largest level of a dense step function (2**level stored values)
MAX_LEVEL = int(os.environ.get("SHIFTMAX_MAX_LEVEL", "16"))

#: largest n for which all simple cycles of G_n are enumerated
CYCLE_CAP = 6

#: largest n for which the face lattice of R_n is enumerated
FACE_CAP = 4

#: default number of levels summed exactly in tail bounds is 3n + HORIZON_PAD
HORIZON_PAD = 8

#: tail terms this many bits below the leading term go to the majorant
TAIL_PRECISION_BITS = 256


def max_level() -> int:
    """Current level cap, re-read so tests can patch the environment."""
    return int(os.environ.get("SHIFTMAX_MAX_LEVEL", str(MAX_LEVEL)))

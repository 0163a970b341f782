"""Default caps and environment-tunable settings."""

import os

# Brute-force canonicalization works over all n! relabelings.
CANON_CAP = 8

# Assignment enumeration between graphs is capped on the domain size.
ENUM_CAP = 8

# Absorption requirements enumerate candidate domains Y with
# |Y| <= |U_n| + slack, additionally clipped to A_CAP vertices.
A_SLACK = 1
A_CAP = 5

# The cofinality repair searches amalgams up to this many vertices before
# falling back to the disjoint-union construction.
AMALGAM_CAP = 6

# Hard guard on the size of any constructed level.
SIZE_GUARD = 4096

# Back-and-forth rung searches run under a deterministic node budget so an
# unsatisfiable instance at a large level cannot stall the tower; a budgeted
# miss is reported as an unmet obligation, never as a proof of absence.
TOWER_NODE_BUDGET = 2_000_000


def default_depth() -> int:
    return int(os.environ.get("GRAPHLIM_DEPTH", "8"))


def default_size_cap() -> int:
    return int(os.environ.get("GRAPHLIM_SIZE_CAP", "3"))

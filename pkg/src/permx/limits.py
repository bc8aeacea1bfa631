"""Default desk-scale search limits.

Callers override per call; the CLI also honors the PERMX_BUDGET
environment variable for the node budget.
"""

DEFAULT_NODE_BUDGET = 10 ** 8

# length caps that keep worst-case runtimes in minutes, not hours
DEFAULT_COUNT_LENGTH_LIMIT = 12
DEFAULT_MERGE_LENGTH_LIMIT = 14
DEFAULT_MERGE_COUNT_LENGTH_LIMIT = 8

# row-search caps for the row-density searches; width is bitmask-bound
DEFAULT_ROW_CAP = 64
MAX_WIDTH = 64

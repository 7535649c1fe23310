"""Package-wide limits and defaults."""

MAX_RANK = 8
DEFAULT_COSET_BUDGET = 2_000_000
DEFAULT_SEEDS = 25
OUT_DIR_ENV = "RELKIT_OUT_DIR"
BACKEND_ENV = "RELKIT_BACKEND"

SERIES_RANKS = {
    "A": range(1, MAX_RANK + 1),
    "B": range(2, MAX_RANK + 1),
    "C": range(2, MAX_RANK + 1),
    "D": range(4, MAX_RANK + 1),
    "E": range(6, 9),
    "F": range(4, 5),
    "G": range(2, 3),
}

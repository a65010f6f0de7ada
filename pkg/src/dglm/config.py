"""Defaults shared by the library and the CLI."""

DEFAULT_MAX_DEGREE = 10
HARD_MAX_DEGREE = 24

# Dynkin series is refused beyond this nilpotency class.
BCH_CLASS_LIMIT = 6

# Terms of the gauge series before it is declared non-nilpotent.
GAUGE_TERM_LIMIT = 32

# Basis tuples checked per degree combination by the exact suites (None: all).
# A capped suite that runs out of budget reports "?" instead of a pass.
SUITE_SAMPLE_LIMIT: int | None = None

# Basis tuples per degree combination tried when picking the bracket signs of a
# twisted semidirect product. The pick is logged as sampled; check_dg_lie on the
# product with the default limit verifies it in full.
VARIANT_SAMPLE_LIMIT: int | None = 400

# Largest coefficient grid searched for Maurer–Cartan points by `verify gauge`.
GAUGE_CANDIDATE_LIMIT = 729

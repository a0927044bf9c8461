"""
Configuration constants for the toolkit
"""

from pathlib import Path

# Catalog size bounds
MAX_MATRIX_ALGEBRA_SIZE = 4
MAX_TRUNCATED_DEGREE = 6
MAX_TRIANGULAR_SIZE = 3
MAX_RANDOM_DIM = 6

# Random algebra generation
RANDOM_MAX_MATRIX_SIZE = 4
RANDOM_MAX_ATTEMPTS = 200
RANDOM_ENTRY_RANGE = 2  # change-of-basis entries drawn from [-2, 2]

# Pipeline defaults
DEFAULT_SEED_SPEC = "full-der"
DEFAULT_FUZZ_COUNT = 100
FUZZ_MAX_DIM = 5
FUZZ_INNER_EVERY = 3  # every third fuzz seed takes V generated by one inner derivation

# Random polars sampled by the proposition suite
POLAR_SAMPLE_SEED = 2024
POLAR_SAMPLE_COUNT = 3

# Logging
LOG_DIR = Path("logs")
LOG_FILE = LOG_DIR / "toolkit_logs.json"
REPORT_LOG_FILE = LOG_DIR / "reports.json"
CONSOLE_LOG_LEVEL = "INFO"  # DEBUG entries are written to file only

# Service mode
SERVICE_TITLE = "Differential Algebra Reflexivity API"
SERVICE_VERSION = "1.0.0"
SERVICE_HOST = "0.0.0.0"
SERVICE_PORT = 8000

"""Configuration and constants for the hierarchical consensus toolkit."""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Output defaults
DEFAULT_OUTPUT_DIR = os.getenv("HIERCON_OUTPUT_DIR", "output")
DEFAULT_LOG_FILE = os.getenv("HIERCON_LOG_FILE", "output/hiercon.log")
DEFAULT_SEED = int(os.getenv("HIERCON_SEED", "0"))

# Spectral tolerances
ZERO_TOL = float(os.getenv("ZERO_TOL", "1e-8"))
MARGIN_TOL = float(os.getenv("MARGIN_TOL", "1e-9"))

# Simulation settings
SIM_DT = float(os.getenv("SIM_DT", "1e-3"))
SIM_T_MAX = float(os.getenv("SIM_T_MAX", "200"))
SIM_CONV_TOL = float(os.getenv("SIM_CONV_TOL", "1e-6"))
SIM_DIV_TOL = float(os.getenv("SIM_DIV_TOL", "1e6"))
SIM_OVERFLOW_GUARD = float(os.getenv("SIM_OVERFLOW_GUARD", "1e12"))
SIM_SAMPLE_STRIDE = int(os.getenv("SIM_SAMPLE_STRIDE", "100"))

# Cross-validation: records closer than this to the criterion are not scored
CONSISTENCY_MARGIN = float(os.getenv("CONSISTENCY_MARGIN", "0.1"))

# Family generator defaults
DEFAULT_WEIGHT_BOUNDS = (0.1, 2.0)
DEFAULT_DENSITY = 0.3
DEFAULT_ZETA = 3
DEFAULT_XI = 3

# CSV export fields
SWEEP_CSV_FIELDS = [
    "n",
    "span",
    "abs_criterion",
    "rel_criterion",
    "gershgorin_bound",
    "max_imag",
    "has_spanning_tree",
    "absolute_verdict",
    "absolute_margin",
    "relative_verdict",
    "relative_margin",
    "absolute_simulation",
    "relative_simulation",
    "absolute_consistency",
    "relative_consistency",
]

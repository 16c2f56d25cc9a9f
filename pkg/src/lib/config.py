"""Application configuration constants."""

from datetime import date

# Artifact format
SCHEMA_VERSION = 1  # Bumped on any incompatible change to model/summary documents
CSV_FLOAT_FORMAT = "%.10g"  # Fixed float rendering for byte-identical reruns
RNG_ALGORITHM = "numpy.Philox4x64-10/SeedSequence"  # Recorded in model metadata

# Exact enumeration oracle
ORACLE_MAX_N = 20  # 2^20 states is the largest enumeration we allow
ORACLE_RECOMMENDED_N = 10  # Routine tests stay at or below this size

# Gibbs sampler defaults
GIBBS_N_CHAINS = 32
GIBBS_BURN_IN_SWEEPS = 200
GIBBS_SWEEPS_PER_SAMPLE = 2
GIBBS_N_SAMPLES = 500
GIBBS_SWEEP_BLOCK = 64  # Sweeps of uniforms drawn per chain at a time

# Static fit defaults
STATIC_MAX_ITERATIONS = 500
STATIC_STEP_SIZE = 0.1
STATIC_STEP_SCHEDULE = "constant"  # constant | decay (eta / sqrt(iteration))
STATIC_TOLERANCE = 5e-3  # Max-abs moment residual
STATIC_INIT = "mean_field"  # zeros | mean_field
STATIC_RESIDUAL_WINDOW = 5  # Moving-average length for the stopping rule
ATANH_CLIP = 0.999999  # Clamp for mean-field initialization of constant columns

# Kinetic fit defaults
KINETIC_BASIS_COUNT = 30
KINETIC_L2_GAMMA = 1e-4
KINETIC_L2_A = 1e-4
KINETIC_L2_J = 1e-4
KINETIC_SMOOTH_GAMMA = 1e-2
KINETIC_MAX_ITERATIONS = 200
KINETIC_TOLERANCE = 1e-6  # Max-abs penalized gradient per stock
KINETIC_DIRECTION = "newton"  # newton | gradient
KINETIC_STEP_SIZE = 1.0  # Initial trial step for the line search
ARMIJO_C = 1e-4  # Sufficient-increase constant
ARMIJO_MAX_HALVINGS = 30

# Network analysis defaults
FILTER_FRACTION = 0.1  # Top decile of |J_ij|
BACKBONE_EXTRA_FRACTION = 0.1  # Backbone size relative to filtered edge count
PROMINENCE_TOP_FRACTION = 0.02
PROMINENCE_PERCENTILE = 90.0
SECTOR_EDGE_PERCENTILE = 30.0
RANDOM_GRAPH_REALIZATIONS = 300
WATTS_STROGATZ_BETA = 0.53
WATTS_STROGATZ_REALIZATIONS = 300
TOP_K = 5  # Length of the ranked lists in the summary tables

# Report defaults
CALIBRATION_BINS = 100
BREADTH_HISTOGRAM_BINS = 41
PARAMETER_HISTOGRAM_BINS = 50

# Worker pool
DEFAULT_WORKERS = 1

# GICS sectors (name -> abbreviation)
GICS_SECTORS = {
    "Communication Services": "Comm",
    "Consumer Discretionary": "ConsDisc",
    "Consumer Staples": "Staples",
    "Energy": "Energy",
    "Financials": "Fin",
    "Health Care": "Health",
    "Industrials": "Ind",
    "Information Technology": "IT",
    "Materials": "Mat",
    "Real Estate": "RE",
    "Utilities": "Util",
}
UNKNOWN_SECTOR = "unknown"

# Named analysis windows (inclusive date ranges)
FULL_SAMPLE_WINDOW = "Full sample"
DEFAULT_WINDOWS = {
    "Early sample": (date(1996, 1, 1), date(2004, 12, 31)),
    "Dot-com bust": (date(2000, 6, 1), date(2002, 6, 1)),
    "GFC": (date(2007, 10, 1), date(2008, 10, 1)),
    "COVID": (date(2020, 1, 1), date(2021, 1, 1)),
}

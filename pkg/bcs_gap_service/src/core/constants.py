SUCCESS_EXIT_CODE = 0
VERIFICATION_FAILED_EXIT_CODE = 1

# Series switch points for the special functions
TANH_OVER_SERIES_THRESHOLD = 1e-4
HEAT_WEIGHT_SERIES_THRESHOLD = 0.05

MIN_POINTS_PER_PANEL = 2
MAX_POINTS_PER_PANEL = 16

# Root finding
ROOT_XTOL = 1e-300
ROOT_RTOL = 1e-15
ROOT_MAXITER = 400
TAU_BRACKET_FLOOR = 1e-6
GAP_BRACKET_FACTOR = 10.0

# Linearized operator
POWER_ITERATION_MAX = 10_000
POWER_ITERATION_RTOL = 1e-14
CRITICAL_RHO_TOL = 1e-10

# Picard iteration
RATIO_HISTORY = 5
NEAR_CRITICAL_RELAXATION_CAP = 100.0
MONOTONE_SLACK = 1e-13

# Window search
WINDOW_LADDER_LOW = 0.05
WINDOW_LADDER_HIGH = 1.0 - 1e-4

# Critical expansion fit
FIT_CONDITION_LIMIT = 1e8
MIN_FIT_POINTS = 3
MIN_TEMPERATURE_COUNT = 7

CSV_FLOAT_FORMAT = "%.17g"

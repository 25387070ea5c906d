"""
This module contains the constants used throughout the app.
"""

# Strings
MODE_GL = "gl"
MODE_SL = "sl"

BACKEND_EXACT = "exact"
BACKEND_BRUTE = "brute"

LABEL_COSET = "coset"
LABEL_SINGULAR = "singular"

PREP_COSET = "coset"
PREP_JUNK = "junk"

FORMAT_JSON = "json"
FORMAT_CSV = "csv"

# Dictionaries
DISPLAY_NAME = {
    MODE_GL: "General linear group",
    MODE_SL: "Special linear group",
    BACKEND_EXACT: "Closed-form sampler",
    BACKEND_BRUTE: "Character-sum enumeration",
    LABEL_COSET: "Coset",
    LABEL_SINGULAR: "Singular",
}

MODES = (MODE_GL, MODE_SL)
BACKENDS = (BACKEND_EXACT, BACKEND_BRUTE)
FORMATS = (FORMAT_JSON, FORMAT_CSV)

# Caps
FIELD_ORDER_CAP = 2 ** 20
ENUMERATION_CAP = 2 ** 22
DENSE_OUTCOME_CAP = 2 ** 20
BRUTE_FORCE_BUDGET = 2 ** 24
TORUS_ENUMERATION_CAP = 2 ** 16

# Tolerances
PROBABILITY_TOLERANCE = 1e-9
UNITARITY_TOLERANCE = 1e-12

# Rounds allowed per recursion level are this factor times (q/(q-1))^(2n).
ROUND_BUDGET_FACTOR = 50

# Exit codes of the management commands
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2

# CSV schemas
SOLVE_CSV_COLUMNS = ('n', 'p', 'r', 'mode', 'seed', 'rounds_total', 'queries',
                     'prep_failures', 'success')
SWEEP_CSV_COLUMNS = ('n', 'p', 'r', 'q', 'mode', 'trials', 'mean_rounds',
                     'predicted_rounds', 'ratio', 'mean_queries',
                     'success_rate')
EXACT_DIST_CSV_COLUMNS = ('Y', 'prob_num', 'prob_den')

# ============ ARITHMETIC DEFAULTS ============
DEFAULT_PRECISION = 8               # Working precision N (R_N = W_N(F_q))
DEFAULT_RESIDUE_DEGREE = 1          # Residue field degree m (q = p^m)
DEFAULT_SEED = 0                    # Seed for every random trial

# ============ RESOURCE CAPS ============
GROUP_ORDER_CAP = 64                # Largest permutation group we enumerate
ENVELOPING_DIMENSION_CAP = 4096     # Largest (dim Λ)^2 for the enveloping order
ENUMERATION_LIMIT = 2 ** 16         # Point sets up to this size are swept exhaustively

# ============ POINT SEARCH ============
ISOMORPHISM_FAILURE_BITS = 40       # Random isomorphism trials stop below 2^-40 failure
ISOMORPHISM_SWEEP_MAX_RANK = 2      # Hom ranks up to this are swept deterministically
WITNESS_RANDOM_TRIALS = 256         # Random witness candidates per extension degree
MAX_EXTENSION_DEGREE = 12           # Give up on residue extensions beyond this degree

# ============ EXT¹ EXPONENT POLICY ============
EXT_STABILIZATION_START = 1         # First exponent c tried for general orders

# ============ CLI EXIT CODES ============
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PRECISION = 3
EXIT_CAP = 4

# ============ REPORTING ============
REPORT_FORMAT_VERSION = "1"

import os

LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO")

# tests set 1 by default in conftest.py
# it adds more output, for example per-chunk progress of the searches
DEBUG_MODE = bool(int(os.environ.get("DEBUG_MODE", 0)))

# worker pool size when --threads is not given, 1 runs inline
WORKERS = int(os.environ.get("WORKERS", "1"))

##########
# guards #
##########
CA_EXHAUSTIVE_MAX_L = int(os.environ.get("CA_EXHAUSTIVE_MAX_L", "25"))
STABILIZER_ENUMERATION_LIMIT = int(os.environ.get("STABILIZER_ENUMERATION_LIMIT", "26"))
SIERPINSKI_SIMULATION_MAX_P = int(os.environ.get("SIERPINSKI_SIMULATION_MAX_P", "12"))

###########
# kernels #
###########
# 2**CA_CHUNK_BITS messages are evolved together in one vectorised chunk
CA_CHUNK_BITS = int(os.environ.get("CA_CHUNK_BITS", "16"))
# stabilizer span elements precomputed per enumeration chunk
SPAN_TABLE_BITS = int(os.environ.get("SPAN_TABLE_BITS", "14"))

##########
# output #
##########
OUTPUT_FORMAT = os.environ.get("OUTPUT_FORMAT", "csv")
FLOAT_SIGNIFICANT_DIGITS = int(os.environ.get("FLOAT_SIGNIFICANT_DIGITS", "6"))
BOUND_SLOPE_TOLERANCE = float(os.environ.get("BOUND_SLOPE_TOLERANCE", "0.02"))

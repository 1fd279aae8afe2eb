from dotenv import load_dotenv
import os

# Load environment variables
load_dotenv()

# Run defaults
DEFAULT_SEED = int(os.getenv("TWOSIDED_SEED", "1"))
DEFAULT_BLOCK_SIZE = int(os.getenv("TWOSIDED_BLOCK_SIZE", "64"))
DEFAULT_TOLERANCE = float(os.getenv("TWOSIDED_TOLERANCE", "1e-10"))

# Accuracy model: tolerances are ERROR_BOUND_CONSTANT * n * eps * kappa(L)^2
ERROR_BOUND_CONSTANT = 50

# Kernels whose flop count exceeds BIG_KERNEL_FACTOR * n * b^2 are "big"
BIG_KERNEL_FACTOR = 1

# Logging Configuration
LOG_LEVEL = os.getenv("TWOSIDED_LOG_LEVEL", "WARNING").upper()

# API Configuration
API_HOST = os.getenv("TWOSIDED_API_HOST", "127.0.0.1")
API_PORT = int(os.getenv("TWOSIDED_API_PORT", "8000"))
MAX_API_DIMENSION = 512

# Variant names
TRSM_VARIANT_NAMES = ["1", "2", "3", "4", "5"]
TRMM_VARIANT_NAMES = ["m1", "m2"]
DEFAULT_TRSM_VARIANT = "4"
DEFAULT_TRMM_VARIANT = "m1"

"""
This module contains site configuration.
"""

# Seed used by every command when --seed is not given.
DEFAULT_SEED = 20100517

# Directory (relative to BASE_DIR) that commands write into when --out is a
# bare file name.
OUTPUT_DIR = 'runs'

# Number of worker threads for solve trials and sweep cells.
WORKERS = 1

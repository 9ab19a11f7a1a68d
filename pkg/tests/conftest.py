import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# the single-factor grid used throughout the acceptance suite
GRID = ([(1, k) for k in range(1, 17)] + [(2, k) for k in range(1, 9)]
        + [(3, k) for k in range(1, 7)] + [(4, k) for k in range(1, 6)])

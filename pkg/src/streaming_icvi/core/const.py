from __future__ import annotations

import threading
from os import getenv

__all__ = []

DEFAULT_EPSILON = 12.0
"""Exponent of the covariance floor; covariances start at `10**(-epsilon/d) * I`."""
DEFAULT_ALPHA = 1e-3
"""Fuzzy ART choice (tie-breaking) parameter."""
DEFAULT_BETA = 1.0
"""Fuzzy ART learning rate; 1 is fast learning."""
DEFAULT_PBM_EXPONENT = 2.0
"""Exponent of the I index; 2 gives PBM."""
DEFAULT_DB_P = 2.0
"""Minkowski order of the batch Davies-Bouldin separation."""
DEFAULT_DB_Q = 2.0
"""Power of the batch Davies-Bouldin scatter."""
MATCH_TRACKING_EPSILON = 1e-10
"""Amount added to the match value when the A-side vigilance is raised."""

SWEEP_RHO_A_MAXIMA = 0.96
"""Upper bound of the A-side vigilance sweep."""
SWEEP_MIN_POINTS = 8
"""Minimum number of grid points of the A-side vigilance sweep."""
SWEEP_MIN_DEFINED_STEPS = 3
"""Minimum number of paired steps for a correlation to be reported."""
DEFAULT_SPIKE_WINDOW = 3
"""Steps after a cluster creation that still count as the creation's spike."""

D4_CLUSTER_SIZE = 500
"""Samples per cluster of the generated D4 data set."""
D4_CENTERS = ((0.2, 0.2), (0.8, 0.2), (0.2, 0.8), (0.8, 0.8))
"""Raw cluster centers of the generated D4 data set."""
D4_SCALE = 0.05
"""Standard deviation of every generated D4 cluster, per axis."""
D4_TRUNCATION = 3.0
"""Generated D4 samples are truncated at this many standard deviations."""

NETWORK_DOCUMENT_VERSION = 1
"""Version of the serialized network document."""

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_DATA_ERROR = 3

DEFAULT_LOG_THREAD_KEY = "_STREAMING_ICVI_LOG_THREAD"
DEFAULT_LOG_CONTEXT_KEY = "_STREAMING_ICVI_LOG_CONTEXT"
DEFAULT_LOG_LEVEL_KEY = "STREAMING_ICVI_LOG_LEVEL"
DEFAULT_SEED_KEY = "STREAMING_ICVI_SEED"
DEFAULT_LOG_THREAD = (
    int(_x)
    if (_x := getenv(DEFAULT_LOG_THREAD_KEY, "")).isdigit()
    else threading.get_native_id()
)
DEFAULT_LOG_CONTEXT = getenv(DEFAULT_LOG_CONTEXT_KEY, "main")
DEFAULT_LOG_LEVEL = getenv(DEFAULT_LOG_LEVEL_KEY, "info").upper()
DEFAULT_SEED = int(_s) if (_s := getenv(DEFAULT_SEED_KEY, "")).isdigit() else 0

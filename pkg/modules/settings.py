#!/usr/bin/env python
"""
Settings for the two-point expansion toolkit.

Every tunable is read once from the environment (a local .env file is
honoured through python-dotenv) and exposed as a module-level constant.
"""

import os
import logging
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger('settings')


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"Ignoring malformed {name}={raw!r}, using {default}")
        return default
    if value <= 0:
        logger.warning(f"Ignoring non-positive {name}={raw!r}, using {default}")
        return default
    return value


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring malformed {name}={raw!r}, using {default}")
        return default
    if value <= 0:
        logger.warning(f"Ignoring non-positive {name}={raw!r}, using {default}")
        return default
    return value


# Singularity detection
MAX_DENOMINATOR_DEGREE = _env_int('TWOPOINT_MAX_DENOMINATOR_DEGREE', 16)
CLUSTER_TOL = _env_float('TWOPOINT_CLUSTER_TOL', 1e-9)
MULTIPLICITY_TOL = _env_float('TWOPOINT_MULTIPLICITY_TOL', 1e-5)
ROOT_MAX_ITERATIONS = _env_int('TWOPOINT_ROOT_MAX_ITERATIONS', 500)
ROOT_RESTARTS = _env_int('TWOPOINT_ROOT_RESTARTS', 8)

# Expression evaluation
EVAL_POLE_EPS = _env_float('TWOPOINT_EVAL_POLE_EPS', 1e-290)

# Jet arithmetic
JET_MAX_ORDER = _env_int('TWOPOINT_JET_MAX_ORDER', 64)
JET_ZERO_TOL = _env_float('TWOPOINT_JET_ZERO_TOL', 1e-13)
ZERO_DIVISOR_TOL = _env_float('TWOPOINT_ZERO_DIVISOR_TOL', 1e-290)

# Two-point Taylor
CONFLUENCE_REL = _env_float('TWOPOINT_CONFLUENCE_REL', 1e-6)

# Contour quadrature
QUAD_TOL = _env_float('TWOPOINT_QUAD_TOL', 1e-12)
QUAD_MIN_NODES = _env_int('TWOPOINT_QUAD_MIN_NODES', 64)
QUAD_MAX_NODES = _env_int('TWOPOINT_QUAD_MAX_NODES', 65536)
WINDING_TOL = _env_float('TWOPOINT_WINDING_TOL', 1e-6)
REMAINDER_CHECK_TOL = _env_float('TWOPOINT_REMAINDER_CHECK_TOL', 1e-9)

# Verification suite
VERIFY_TOL = _env_float('TWOPOINT_VERIFY_TOL', 1e-10)
VERIFY_ABS_FLOOR = _env_float('TWOPOINT_VERIFY_ABS_FLOOR', 1e-14)

LOG_LEVEL = os.environ.get('TWOPOINT_LOG_LEVEL', 'WARNING').upper()

import os
from pathlib import Path

from dotenv import load_dotenv
from loguru import logger

ENVIRONMENT = os.getenv("ENVIRONMENT", "dev")

root_dir = Path(__file__).parent
env_path = root_dir / "local" / "envs" / f".env.{ENVIRONMENT}"

if env_path.exists():
    logger.info(f"Loaded environment variables from {env_path}")
    load_dotenv(env_path)
else:
    logger.warning(f"Environment file not found at {env_path}")

# environment-specific variables
DOMAIN_CAP = int(os.environ.get("SCHURPOWER_CAP", 2**20))
SEARCH_BUDGET = int(os.environ.get("SCHURPOWER_SEARCH_BUDGET", 10**7))
CLOSURE_TIME_BUDGET = float(os.environ.get("SCHURPOWER_CLOSURE_TIME_BUDGET", 600))
AUT_ORDER_LIMIT = int(os.environ.get("SCHURPOWER_AUT_ORDER_LIMIT", 64))
STABILIZATION_CAP = int(os.environ.get("SCHURPOWER_STABILIZATION_CAP", 2**16))
THREADS = int(os.environ.get("SCHURPOWER_THREADS", 1))
LOG_LEVEL = os.environ.get("SCHURPOWER_LOG_LEVEL", "INFO")

# constants across environments
GROUP_ORDER_LIMIT = 256
SYMMETRIC_DEGREE_LIMIT = 5
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 256

# Pair enumeration processes rows in blocks so one block holds about this many entries
PAIR_BLOCK_ENTRIES = 2**22

# Default theorem grid
DEFAULT_GRID = ["Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3", "D4", "Q8", "Z2xZ2xZ2"]

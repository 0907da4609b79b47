import logging
from pathlib import Path

TEST_OUTPUT_DIR = Path(__file__).parent.parent.joinpath("tmp", "cli")
TEST_OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

# Expected failures log at ERROR through the CLI; keep test output readable.
logging.getLogger("hyperball").setLevel(logging.CRITICAL)

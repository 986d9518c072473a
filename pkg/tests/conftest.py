import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]

# exact integers in this suite can exceed the default str() digit limit
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


@pytest.fixture(scope="session")
def bundled_config() -> Path:
    return REPO_ROOT / "configs" / "golden-vs-tau6.json"

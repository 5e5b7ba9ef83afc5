import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bicyclide.elliptic import Modulus


@pytest.fixture(scope="session")
def mod07() -> Modulus:
    return Modulus.from_k(0.7)


@pytest.fixture(scope="session")
def mod03() -> Modulus:
    return Modulus.from_k(0.3)

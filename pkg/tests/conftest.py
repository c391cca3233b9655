import random

import pytest


@pytest.fixture(autouse=True)
def _reseed_global_random():
    """Tests drawing from the module-level random stream must not depend on
    which other tests ran before them."""
    random.seed(0xC0FFEE)

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from multiplicity import SymbolSpec, example1, example2, example2_scaled, verify_theorem_b

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def unit_disk(rng, n):
    r = np.sqrt(rng.uniform(0, 1, n))
    t = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * t)


def random_spec(seed):
    """Coefficients uniform in the unit disk (area measure)."""
    rng = np.random.default_rng(seed)
    return SymbolSpec(unit_disk(rng, 3), unit_disk(rng, 7), f"random-{seed}")


@pytest.fixture(scope="session")
def ex1_report():
    return verify_theorem_b(example1())


@pytest.fixture(scope="session")
def ex2_report():
    return verify_theorem_b(example2(), require_generic=False)


@pytest.fixture(scope="session")
def ex2s_report():
    return verify_theorem_b(example2_scaled())


@pytest.fixture(scope="session")
def random_reports():
    out = []
    for seed in range(24):
        s = random_spec(seed)
        out.append((s, verify_theorem_b(s, require_generic=False)))
    return out

import numpy as np
import pytest

import solerlab as sl

_PROFILES = {}


@pytest.fixture(scope="session")
def profile_of():
    """Session-memoized profile solver (profiles are immutable)."""

    def get(omega, mass=1.0, **kwargs):
        key = (omega, mass, tuple(sorted(kwargs.items())))
        if key not in _PROFILES:
            opts = sl.SolverOptions(**kwargs) if kwargs else sl.SolverOptions()
            _PROFILES[key] = sl.solve_profile(omega, mass, opts)
        return _PROFILES[key]

    return get


@pytest.fixture(scope="session")
def grid128():
    return sl.build_grid(128, 10.0)


@pytest.fixture(scope="session")
def grid64():
    return sl.build_grid(64, 10.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260823)

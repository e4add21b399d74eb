# tests/conftest.py
"""Root pytest configuration and fixtures for qbsim tests."""

import numpy as np
import pytest

from scripts.qb.dynamics import Trajectory
from scripts.qb.operators import HilbertLayout


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_density():
    """Factory: random full-rank density matrix of dimension d."""
    def _make(d: int, rng: np.random.Generator) -> np.ndarray:
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = g @ g.conj().T
        return rho / np.trace(rho).real
    return _make


@pytest.fixture
def random_hermitian():
    def _make(d: int, rng: np.random.Generator) -> np.ndarray:
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        return 0.5 * (g + g.conj().T)
    return _make


@pytest.fixture
def small_layout():
    """photon(3) ⊗ spin ⊗ spin ⊗ catalyst, D = 24."""
    return HilbertLayout(d_photon=3, n_spins=2)


@pytest.fixture
def make_trajectory():
    """Factory: Trajectory with the given W (and optional E_cat) columns, zeros elsewhere."""
    def _make(t, W, E_cat=None) -> Trajectory:
        t = np.asarray(t, dtype=float)
        zeros = np.zeros_like(t)
        return Trajectory(
            method="test",
            t=t,
            E_B=zeros,
            W=np.asarray(W, dtype=float),
            E_cat=zeros if E_cat is None else np.asarray(E_cat, dtype=float),
            N_exc=zeros,
            trace_err=zeros,
            herm_err=zeros,
            min_eig=zeros,
            state_drift=zeros,
            final_state=np.eye(1, dtype=complex),
        )
    return _make

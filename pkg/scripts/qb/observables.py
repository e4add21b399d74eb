#!/usr/bin/env python3
"""
Observables on density matrices: partial trace, passive state, ergotropy,
energies and excitation number.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np
from scipy.linalg import eigh, eigvalsh

from .errors import LayoutError, StateError
from .operators import HilbertLayout

if TYPE_CHECKING:
    from .operators import SystemOperators

# Ranking a state with eigenvalues below this is refused.
RANK_FLOOR = -1e-4
# Trace tolerance for states handed to passive_state (integrator abort level).
TRACE_TOL = 1e-6
# Ergotropy values in [-ERGO_FLOOR, 0) are reported as 0.
ERGO_FLOOR = 1e-10
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class PassiveDecomposition:
    rho_eigs: np.ndarray  # descending
    energy_eigs: np.ndarray  # ascending
    energy_vecs: np.ndarray  # columns match energy_eigs
    energy: float  # Tr[ρH]
    passive_energy: float

    @property
    def ergotropy(self) -> float:
        return _clamp(self.energy - self.passive_energy)

    @property
    def state(self) -> np.ndarray:
        """The passive density matrix Σ r_k↓ |ε_k⟩⟨ε_k|."""
        v = self.energy_vecs
        return (v * self.rho_eigs) @ v.conj().T


@dataclass(frozen=True)
class EnergyRecord:
    E_B: float
    E_cat: float
    N_exc: float


def _clamp(w: float) -> float:
    if -ERGO_FLOOR <= w < 0:
        return 0.0
    return float(w)


# -----------------------------------------------------------------------------
# Partial trace
# -----------------------------------------------------------------------------


def partial_trace_dims(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """
    Reduced matrix on the factors listed in `keep` (returned in slot order).

    Reshape to (d_0..d_n, d_0..d_n), move kept axes to the front, then trace
    the remaining block.
    """
    keep = sorted(set(keep))
    n = len(dims)
    if not keep:
        raise LayoutError("keep must name at least one slot")
    if keep[0] < 0 or keep[-1] >= n:
        raise LayoutError(f"keep {keep} outside slots 0..{n - 1}")
    D = int(np.prod(dims))
    if rho.shape != (D, D):
        raise LayoutError(f"state is {rho.shape}, layout expects ({D}, {D})")

    drop = [k for k in range(n) if k not in keep]
    dk = int(np.prod([dims[k] for k in keep]))
    dt = int(np.prod([dims[k] for k in drop])) if drop else 1

    t = rho.reshape(tuple(dims) + tuple(dims))
    order = keep + drop
    t = t.transpose(order + [n + k for k in order])
    t = t.reshape(dk, dt, dk, dt)
    return np.trace(t, axis1=1, axis2=3)


def partial_trace(rho: np.ndarray, layout: HilbertLayout, keep: Iterable[int]) -> np.ndarray:
    return partial_trace_dims(rho, layout.dims, keep)


# -----------------------------------------------------------------------------
# Passive state / ergotropy
# -----------------------------------------------------------------------------


def expectation(rho: np.ndarray, op: np.ndarray) -> float:
    """Real Tr[ρ op]; a large imaginary residue means ρ or op is not Hermitian."""
    val = np.einsum("ij,ji->", rho, op)
    if abs(val.imag) > IMAG_TOL * max(1.0, abs(val.real)):
        raise StateError(f"expectation value has imaginary residue {val.imag:.3e}")
    return float(val.real)


def passive_state(rho: np.ndarray, H: np.ndarray, rank_floor: float = RANK_FLOOR) -> PassiveDecomposition:
    """
    Pair the descending spectrum of ρ with the ascending spectrum of H.

    `rank_floor=-np.inf` ranks states of any sign; the trace check still applies.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != H.shape:
        raise StateError(f"state {rho.shape} and Hamiltonian {H.shape} differ in shape")

    r = eigvalsh(rho)[::-1]
    if r[-1] < rank_floor:
        raise StateError(f"state has eigenvalue {r[-1]:.3e}, too negative to rank")
    if abs(r.sum() - 1.0) > TRACE_TOL:
        raise StateError(f"state trace {r.sum():.12f} differs from 1")

    eps, vecs = eigh(H)
    return PassiveDecomposition(
        rho_eigs=r,
        energy_eigs=eps,
        energy_vecs=vecs,
        energy=expectation(rho, H),
        passive_energy=float(np.dot(r, eps)),
    )


def ergotropy(rho: np.ndarray, H: np.ndarray, rank_floor: float = RANK_FLOOR) -> float:
    """W = Tr[ρH] - Tr[ρ_passive H]."""
    return passive_state(rho, H, rank_floor).ergotropy


def battery_state(rho_full: np.ndarray, layout: HilbertLayout) -> np.ndarray:
    return partial_trace(rho_full, layout, layout.spin_slots)


def battery_ergotropy(
    rho_full: np.ndarray, layout: HilbertLayout, H_B_local: np.ndarray, rank_floor: float = RANK_FLOOR
) -> float:
    return ergotropy(battery_state(rho_full, layout), H_B_local, rank_floor)


# -----------------------------------------------------------------------------
# Energies
# -----------------------------------------------------------------------------


def energies(rho_full: np.ndarray, ops: SystemOperators) -> EnergyRecord:
    return EnergyRecord(
        E_B=expectation(rho_full, ops.H_B),
        E_cat=expectation(rho_full, ops.H_cat),
        N_exc=expectation(rho_full, ops.N_exc),
    )


def energy_terms(rho_full: np.ndarray, ops: SystemOperators) -> dict[str, float]:
    """Expectation of every H_tot term; the values sum to ⟨H_tot⟩."""
    return {name: expectation(rho_full, op) for name, op in ops.terms.items()}

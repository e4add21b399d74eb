#!/usr/bin/env python3
"""
Operator algebra for the cavity / spin-chain / catalyst model.

Slot order is fixed for every layout:

    photon ⊗ spin_1 ⊗ ... ⊗ spin_N ⊗ catalyst

Local two-level basis is {|g⟩, |e⟩} = {index 0, index 1}, so
σ⁻ = |g⟩⟨e|, σ⁺σ⁻ = diag(0, 1) and σ_z = diag(-1, 1). The photon factor is
the Fock basis |0⟩ ... |d_photon-1⟩. A basis label (n, s_1, ..., s_N, c) maps
to the flat index by row-major order over `layout.dims`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np
from pydantic import AliasChoices, BaseModel, ConfigDict, Field

from .errors import LayoutError

# -----------------------------------------------------------------------------
# Local (single-slot) operators
# -----------------------------------------------------------------------------

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)


def destroy(d: int) -> np.ndarray:
    """Truncated bosonic annihilation operator, a|n⟩ = √n |n-1⟩."""
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(complex)


# -----------------------------------------------------------------------------
# Types
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertLayout:
    d_photon: int = 6
    n_spins: int = 3
    d_cat: int = 2
    # False drops the catalyst slot altogether (catalyst-free reference model)
    catalyst: bool = True

    def __post_init__(self) -> None:
        if self.d_photon < 2:
            raise LayoutError(f"d_photon must be >= 2, got {self.d_photon}")
        if self.n_spins < 1:
            raise LayoutError(f"n_spins must be >= 1, got {self.n_spins}")
        if self.d_cat != 2:
            raise LayoutError(f"only a qubit catalyst is supported (d_cat=2), got {self.d_cat}")

    @property
    def dims(self) -> tuple[int, ...]:
        tail = (self.d_cat,) if self.catalyst else ()
        return (self.d_photon,) + (2,) * self.n_spins + tail

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def photon_slot(self) -> int:
        return 0

    def spin_slot(self, i: int) -> int:
        """Slot of spin i (0-based)."""
        if not 0 <= i < self.n_spins:
            raise LayoutError(f"spin index {i} outside 0..{self.n_spins - 1}")
        return 1 + i

    @property
    def spin_slots(self) -> tuple[int, ...]:
        return tuple(range(1, 1 + self.n_spins))

    @property
    def cat_slot(self) -> int:
        if not self.catalyst:
            raise LayoutError("layout has no catalyst slot")
        return 1 + self.n_spins

    def index(self, label: Sequence[int]) -> int:
        """Flat basis index of a product label (n, s_1, ..., s_N[, c])."""
        if len(label) != len(self.dims):
            raise LayoutError(f"label {tuple(label)} does not match dims {self.dims}")
        return int(np.ravel_multi_index(tuple(label), self.dims))


class PhysicalParams(BaseModel):
    """Model couplings in units ħ = 1. Defaults are the base preset values."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    omega_c: float = Field(2.5, gt=0, description="cavity frequency")
    omega_a: float = Field(2.5, gt=0, description="spin excitation energy")
    J: float = Field(1.5, description="nearest-neighbour exchange")
    g: float = Field(0.2, ge=0, description="cavity-spin coupling")
    omega_cat: float = Field(0.25, gt=0, description="catalyst energy")
    lam: float = Field(
        0.0,
        ge=0,
        validation_alias=AliasChoices("lam", "lambda"),
        description="catalyst-spin coupling",
    )


@dataclass(frozen=True)
class SystemOperators:
    layout: HilbertLayout
    params: PhysicalParams
    a: np.ndarray
    a_dag: np.ndarray
    sigma_minus: tuple[np.ndarray, ...]
    sigma_plus: tuple[np.ndarray, ...]
    c: np.ndarray
    c_dag: np.ndarray
    H_tot: np.ndarray
    H_B: np.ndarray
    H_B_local: np.ndarray
    H_cat: np.ndarray
    N_exc: np.ndarray
    jump: np.ndarray
    terms: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.layout.dim


# -----------------------------------------------------------------------------
# Embedding
# -----------------------------------------------------------------------------


def kron_embed(op: np.ndarray, slot: int, dims: Sequence[int]) -> np.ndarray:
    """I ⊗ ... ⊗ op ⊗ ... ⊗ I over an arbitrary list of local dimensions."""
    op = np.asarray(op, dtype=complex)
    if not 0 <= slot < len(dims):
        raise LayoutError(f"slot {slot} outside 0..{len(dims) - 1}")
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise LayoutError(f"local operator must be square, got shape {op.shape}")
    if op.shape[0] != dims[slot]:
        raise LayoutError(
            f"local operator is {op.shape[0]}x{op.shape[0]} but slot {slot} has dimension {dims[slot]}"
        )
    factors = [op if k == slot else np.eye(d, dtype=complex) for k, d in enumerate(dims)]
    return reduce(np.kron, factors)


def embed_local(op: np.ndarray, slot: int, layout: HilbertLayout) -> np.ndarray:
    return kron_embed(op, slot, layout.dims)


# -----------------------------------------------------------------------------
# Hamiltonians
# -----------------------------------------------------------------------------


def _chain_terms(omega_a: float, J: float, dims: Sequence[int], slots: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """(H_spin, H_J) for an open chain living on `slots` of `dims`."""
    sm = [kron_embed(SIGMA_MINUS, s, dims) for s in slots]
    sp = [m.conj().T for m in sm]
    dim = int(np.prod(dims))

    h_spin = np.zeros((dim, dim), dtype=complex)
    for p, m in zip(sp, sm):
        h_spin += p @ m
    h_spin *= omega_a

    h_j = np.zeros((dim, dim), dtype=complex)
    for i in range(len(slots) - 1):
        hop = sp[i] @ sm[i + 1]
        h_j += hop + hop.conj().T
    h_j *= J
    return h_spin, h_j


def build_battery_hamiltonian(params: PhysicalParams, layout: HilbertLayout) -> tuple[np.ndarray, np.ndarray]:
    """
    Battery Hamiltonian H_B = H_spin + H_J.

    Returns (embedded, local): the full-space operator and its 2^N x 2^N
    counterpart on the spin chain alone.
    """
    full = sum(_chain_terms(params.omega_a, params.J, layout.dims, layout.spin_slots))
    local_dims = (2,) * layout.n_spins
    local = sum(_chain_terms(params.omega_a, params.J, local_dims, range(layout.n_spins)))
    return full, local


def _hamiltonian_terms(params: PhysicalParams, layout: HilbertLayout) -> dict[str, np.ndarray]:
    if not layout.catalyst and params.lam != 0:
        raise LayoutError(f"lam={params.lam} needs a catalyst slot")

    D = layout.dim
    a = embed_local(destroy(layout.d_photon), layout.photon_slot, layout)
    a_dag = a.conj().T
    sm = [embed_local(SIGMA_MINUS, s, layout) for s in layout.spin_slots]
    sp = [m.conj().T for m in sm]
    sm_sum = sum(sm)
    sp_sum = sum(sp)

    h_spin, h_j = _chain_terms(params.omega_a, params.J, layout.dims, layout.spin_slots)

    terms = {
        "photon": params.omega_c * (a_dag @ a),
        "spin": h_spin,
        "exchange": h_j,
        "int_cavity": params.g * (a_dag @ sm_sum + sp_sum @ a),
    }
    if layout.catalyst:
        c = embed_local(SIGMA_MINUS, layout.cat_slot, layout)
        terms["catalyst"] = 0.5 * params.omega_cat * embed_local(SIGMA_Z, layout.cat_slot, layout)
        terms["int_catalyst"] = params.lam * (c.conj().T @ sm_sum + sp_sum @ c)
    else:
        terms["catalyst"] = np.zeros((D, D), dtype=complex)
        terms["int_catalyst"] = np.zeros((D, D), dtype=complex)
    return terms


def build_hamiltonian(params: PhysicalParams, layout: HilbertLayout) -> np.ndarray:
    """H_tot = photon + spin + exchange + catalyst + cavity and catalyst couplings."""
    return sum(_hamiltonian_terms(params, layout).values())


def build_system_operators(params: PhysicalParams, layout: HilbertLayout) -> SystemOperators:
    terms = _hamiltonian_terms(params, layout)
    D = layout.dim

    a = embed_local(destroy(layout.d_photon), layout.photon_slot, layout)
    sm = tuple(embed_local(SIGMA_MINUS, s, layout) for s in layout.spin_slots)
    sp = tuple(m.conj().T for m in sm)
    if layout.catalyst:
        c = embed_local(SIGMA_MINUS, layout.cat_slot, layout)
    else:
        c = np.zeros((D, D), dtype=complex)

    n_exc = a.conj().T @ a + sum(p @ m for p, m in zip(sp, sm)) + c.conj().T @ c
    h_b, h_b_local = build_battery_hamiltonian(params, layout)

    return SystemOperators(
        layout=layout,
        params=params,
        a=a,
        a_dag=a.conj().T,
        sigma_minus=sm,
        sigma_plus=sp,
        c=c,
        c_dag=c.conj().T,
        H_tot=sum(terms.values()),
        H_B=h_b,
        H_B_local=h_b_local,
        H_cat=terms["catalyst"],
        N_exc=n_exc,
        jump=a,
        terms=terms,
    )

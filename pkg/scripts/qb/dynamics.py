#!/usr/bin/env python3
"""
Time evolution of the composite density matrix.

Three integrators share one uniform grid t_k = k·h and one diagnostics record:

  integrate_nz        dρ/dt = -i[H, ρ] + ∫₀ᵗ Γ(t-s) D[ρ(s)] ds   (memory kernel)
  integrate_lindblad  dρ/dt = -i[H, ρ] + γ D[ρ]                   (Markovian reference)
  integrate_unitary   ρ(t)  = e^{-iHt} ρ₀ e^{iHt}                 (closed-system oracle)

The two dissipative ones use a Heun predictor-corrector in the interaction
frame of H (Lawson form): with P = e^{-iHh},

  ρ̃      = P (ρₙ + h Fₙ) P†
  ρₙ₊₁   = P (ρₙ + h/2 Fₙ) P† + h/2 F̃ₙ₊₁

where F is the dissipative forcing. For the memory kernel F is a trapezoid
sum over cached D[ρ(s_k)] snapshots inside [t - τ_cut, t].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.linalg import eigh, eigvalsh

from .errors import IntegrationError, StateError
from .observables import RANK_FLOOR, TRACE_TOL, battery_state, energies, passive_state
from .operators import SystemOperators

# Dropped kernel tail relative to κ₁.
KERNEL_NEGLIGIBLE = 1e-12
STATE_HERM_TOL = 1e-10
STATE_TRACE_TOL = 1e-8

# -----------------------------------------------------------------------------
# Types
# -----------------------------------------------------------------------------


class KernelSpec(BaseModel):
    """Memory kernel. Gaussian: Γ(τ) = κ₁ exp(-κ₂ τ²); delta: Markovian rate γ."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    kind: Literal["gaussian", "delta"] = "gaussian"
    kappa1: float = Field(1.8, ge=0)
    kappa2: float = Field(1.8, gt=0)
    gamma: float = Field(0.0, ge=0)

    def tau_cut(self) -> float:
        """Window length beyond which the kernel is below 1e-12·κ₁."""
        return math.sqrt(math.log(1.0 / KERNEL_NEGLIGIBLE) / self.kappa2)

    def rate(self) -> float:
        """Markovian-equivalent rate ∫₀^∞ Γ(τ) dτ."""
        if self.kind == "delta":
            return self.gamma
        return self.kappa1 * math.sqrt(math.pi) / (2.0 * math.sqrt(self.kappa2))

    @classmethod
    def markov_equivalent(cls, gamma: float, kappa2: float) -> "KernelSpec":
        """Gaussian kernel whose time integral equals gamma."""
        return cls(kappa1=2.0 * gamma * math.sqrt(kappa2 / math.pi), kappa2=kappa2)


class IntegratorConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    h: float = Field(0.01, gt=0)
    t_max: float = Field(20.0, gt=0)
    tau_cut: Optional[float] = Field(None, gt=0)
    trace_tol: float = Field(TRACE_TOL, gt=0, le=TRACE_TOL, description="abort when |Tr ρ - 1| exceeds this")
    herm_tol: float = Field(1e-6, gt=0, description="abort when one step breaks Hermiticity by more")
    positivity_warn: float = Field(-1e-6, le=0)
    keep_states: bool = False

    @model_validator(mode="after")
    def _grid(self) -> "IntegratorConfig":
        if self.h > self.t_max:
            raise ValueError(f"step h={self.h} exceeds t_max={self.t_max}")
        return self

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.h))

    def times(self) -> np.ndarray:
        return self.h * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class Trajectory:
    method: str
    t: np.ndarray
    E_B: np.ndarray
    W: np.ndarray
    E_cat: np.ndarray
    N_exc: np.ndarray
    trace_err: np.ndarray
    herm_err: np.ndarray
    min_eig: np.ndarray
    state_drift: np.ndarray
    final_state: np.ndarray
    states: Optional[np.ndarray] = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    CSV_COLUMNS = ("t", "E_B", "W", "E_cat", "N_exc", "trace_err", "herm_err", "min_eig")

    def __len__(self) -> int:
        return len(self.t)

    def rows(self) -> np.ndarray:
        return np.column_stack([getattr(self, c) for c in self.CSV_COLUMNS])


# -----------------------------------------------------------------------------
# Kernel / dissipator
# -----------------------------------------------------------------------------


def kernel_eval(spec: KernelSpec, t: float, s: float) -> float:
    if s > t:
        raise ValueError(f"kernel needs s <= t, got s={s} > t={t}")
    if spec.kind == "delta":
        raise ValueError("delta kernel has no pointwise value; it acts as a local rate inside the integrator")
    return spec.kappa1 * math.exp(-spec.kappa2 * (t - s) ** 2)


def dissipator(rho: np.ndarray, L: np.ndarray) -> np.ndarray:
    """D[ρ] = LρL† - ½{L†L, ρ}."""
    Ld = L.conj().T
    LdL = Ld @ L
    return L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL)


def validate_density_matrix(rho: np.ndarray, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise StateError(f"initial state is {rho.shape}, expected ({dim}, {dim})")
    herm = np.linalg.norm(rho - rho.conj().T)
    if herm > STATE_HERM_TOL:
        raise StateError(f"initial state not Hermitian (‖ρ-ρ†‖={herm:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > STATE_TRACE_TOL:
        raise StateError(f"initial state trace {tr:.12f} differs from 1")
    return rho


# -----------------------------------------------------------------------------
# Diagnostics
# -----------------------------------------------------------------------------


class _Recorder:
    """Per-step observables and sanity columns."""

    def __init__(self, ops: SystemOperators, rho0: np.ndarray, cfg: IntegratorConfig, method: str):
        self.ops = ops
        self.cfg = cfg
        self.method = method
        self.rho0 = rho0
        n = cfg.n_steps + 1
        self.t = cfg.times()
        self.cols = {name: np.zeros(n) for name in Trajectory.CSV_COLUMNS if name != "t"}
        self.drift = np.zeros(n)
        self.states = np.zeros((n,) + rho0.shape, dtype=complex) if cfg.keep_states else None
        self.warnings: list[str] = []
        self._warned = False
        self._rank_warned = False

    def record(self, k: int, rho: np.ndarray, herm_err: float) -> None:
        cfg = self.cfg
        trace_err = abs(np.trace(rho).real - 1.0)
        if trace_err > cfg.trace_tol or herm_err > cfg.herm_tol:
            raise IntegrationError(
                f"{self.method}: drift at t={self.t[k]:.4f} (trace {trace_err:.3e}, hermiticity {herm_err:.3e}); "
                "step size too large or kernel misconfigured",
                t=float(self.t[k]),
                step=k,
                trace_err=trace_err,
                herm_err=herm_err,
            )

        min_eig = float(eigvalsh(rho)[0])
        if min_eig < cfg.positivity_warn and not self._warned:
            self._warned = True
            self.warnings.append(
                f"{self.method}: min eigenvalue {min_eig:.3e} below {cfg.positivity_warn:g} at t={self.t[k]:.4f}"
            )

        e = energies(rho, self.ops)
        c = self.cols
        c["E_B"][k] = e.E_B
        c["E_cat"][k] = e.E_cat
        c["N_exc"][k] = e.N_exc
        c["W"][k] = self._ergotropy(k, rho)
        c["trace_err"][k] = trace_err
        c["herm_err"][k] = herm_err
        c["min_eig"][k] = min_eig
        self.drift[k] = np.linalg.norm(rho - self.rho0)
        if self.states is not None:
            self.states[k] = rho

    def _ergotropy(self, k: int, rho: np.ndarray) -> float:
        """W of the reduced spin state; a non-positive reduced state is ranked as is and flagged once."""
        dec = passive_state(battery_state(rho, self.ops.layout), self.ops.H_B_local, rank_floor=-np.inf)
        r_min = float(dec.rho_eigs[-1])
        if r_min < RANK_FLOOR and not self._rank_warned:
            self._rank_warned = True
            self.warnings.append(
                f"{self.method}: battery state eigenvalue {r_min:.3e} at t={self.t[k]:.4f}; W ranks it unclipped"
            )
        return dec.ergotropy

    def finish(self, rho: np.ndarray) -> Trajectory:
        return Trajectory(
            method=self.method,
            t=self.t,
            state_drift=self.drift,
            final_state=rho,
            states=self.states,
            warnings=tuple(self.warnings),
            **self.cols,
        )


# -----------------------------------------------------------------------------
# Dissipative forcing
# -----------------------------------------------------------------------------


class _LocalForcing:
    """F(t) = γ D[ρ(t)]."""

    def __init__(self, L: np.ndarray, gamma: float):
        self.L = L
        self.gamma = gamma

    def _f(self, rho: np.ndarray) -> np.ndarray:
        if self.gamma == 0.0:
            return np.zeros_like(rho)
        return self.gamma * dissipator(rho, self.L)

    def start(self, rho0: np.ndarray) -> np.ndarray:
        return self._f(rho0)

    def history(self, m: int) -> None:
        return None

    def trial(self, hist: None, rho: np.ndarray) -> np.ndarray:
        return self._f(rho)

    def commit(self, m: int, hist: None, rho: np.ndarray) -> np.ndarray:
        return self._f(rho)


class _MemoryForcing:
    """
    F(t_m) = ∫ Γ(t_m - s) D[ρ(s)] ds over [max(0, t_m - τ_cut), t_m], trapezoid rule.

    Snapshots D[ρ(t_k)] live in a ring buffer of `cap` slots; slot k % cap.
    The lower window edge always gets half weight.
    """

    def __init__(self, L: np.ndarray, spec: KernelSpec, h: float, n_steps: int, tau_cut: float):
        self.L = L
        self.h = h
        self.window = max(1, math.ceil(tau_cut / h))
        self.cap = min(self.window, n_steps) + 1
        lags = h * np.arange(self.cap + 1)
        self.gam = spec.kappa1 * np.exp(-spec.kappa2 * lags**2)
        self.half0 = 0.5 * h * self.gam[0]
        D = L.shape[0]
        self.buf = np.zeros((self.cap, D, D), dtype=complex)

    def start(self, rho0: np.ndarray) -> np.ndarray:
        self.buf[0] = dissipator(rho0, self.L)
        return np.zeros_like(rho0)

    def history(self, m: int) -> np.ndarray:
        """Σ_k w_k D_k for k in [k0, m-1]; the k = m endpoint is added by trial/commit."""
        k0 = max(0, m - self.window)
        ks = np.arange(k0, m)
        w = np.zeros(self.cap)
        w[ks % self.cap] = self.h * self.gam[m - ks]
        w[k0 % self.cap] *= 0.5
        return np.tensordot(w, self.buf, axes=1)

    def trial(self, hist: np.ndarray, rho: np.ndarray) -> np.ndarray:
        return hist + self.half0 * dissipator(rho, self.L)

    def commit(self, m: int, hist: np.ndarray, rho: np.ndarray) -> np.ndarray:
        d = dissipator(rho, self.L)
        self.buf[m % self.cap] = d
        return hist + self.half0 * d


def _propagator(H: np.ndarray, h: float) -> np.ndarray:
    """e^{-iHh} from one Hermitian eigendecomposition."""
    E, V = eigh(H)
    return (V * np.exp(-1j * E * h)) @ V.conj().T


def _lawson_heun(ops: SystemOperators, rho0: np.ndarray, cfg: IntegratorConfig, forcing, method: str) -> Trajectory:
    rho = validate_density_matrix(rho0, ops.dim)
    h = cfg.h
    P = _propagator(ops.H_tot, h)
    Pd = P.conj().T

    rec = _Recorder(ops, rho, cfg, method)
    rec.record(0, rho, 0.0)
    F = forcing.start(rho)

    for m in range(1, cfg.n_steps + 1):
        hist = forcing.history(m)
        pred = P @ (rho + h * F) @ Pd
        F_pred = forcing.trial(hist, pred)
        new = P @ (rho + 0.5 * h * F) @ Pd + 0.5 * h * F_pred

        herm_err = float(np.linalg.norm(new - new.conj().T))
        new = 0.5 * (new + new.conj().T)
        rec.record(m, new, herm_err)

        F = forcing.commit(m, hist, new)
        rho = new

    return rec.finish(rho)


# -----------------------------------------------------------------------------
# Integrators
# -----------------------------------------------------------------------------


def resolve_tau_cut(spec: KernelSpec, cfg: IntegratorConfig) -> float:
    needed = spec.tau_cut()
    if cfg.tau_cut is None:
        return needed
    if cfg.tau_cut < needed:
        raise ValueError(
            f"tau_cut={cfg.tau_cut:g} leaves kernel tail above {KERNEL_NEGLIGIBLE:g}·κ₁ (need >= {needed:.4f})"
        )
    return cfg.tau_cut


def integrate_nz(ops: SystemOperators, spec: KernelSpec, rho0: np.ndarray, cfg: IntegratorConfig) -> Trajectory:
    if spec.kind == "delta":
        return _lawson_heun(ops, rho0, cfg, _LocalForcing(ops.jump, spec.gamma), "nz-delta")
    if spec.kappa1 == 0.0:
        return _lawson_heun(ops, rho0, cfg, _LocalForcing(ops.jump, 0.0), "nz")

    tau = resolve_tau_cut(spec, cfg)
    forcing = _MemoryForcing(ops.jump, spec, cfg.h, cfg.n_steps, tau)
    return _lawson_heun(ops, rho0, cfg, forcing, "nz")


def integrate_lindblad(ops: SystemOperators, gamma: float, rho0: np.ndarray, cfg: IntegratorConfig) -> Trajectory:
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return _lawson_heun(ops, rho0, cfg, _LocalForcing(ops.jump, gamma), "lindblad")


def integrate_unitary(ops: SystemOperators, rho0: np.ndarray, cfg: IntegratorConfig) -> Trajectory:
    rho0 = validate_density_matrix(rho0, ops.dim)
    E, V = eigh(ops.H_tot)
    Vd = V.conj().T
    r0 = Vd @ rho0 @ V
    gap = E[:, None] - E[None, :]

    rec = _Recorder(ops, rho0, cfg, "unitary")
    rho = rho0
    for k, t in enumerate(rec.t):
        rho = V @ (r0 * np.exp(-1j * gap * t)) @ Vd
        herm_err = float(np.linalg.norm(rho - rho.conj().T))
        rho = 0.5 * (rho + rho.conj().T)
        rec.record(k, rho, herm_err)
    return rec.finish(rho)

#!/usr/bin/env python3
"""
Named parameter sweeps behind the ergotropy figures, and the summaries
computed over their trajectories.

Every preset starts from the shared defaults (N=3, d_photon=6, qubit
catalyst, κ₁=κ₂=1.8, h=0.01, t_max=20) and the base couplings
(ω_c=2.5, ω_a=2.5, g=0.2, J=1.5, ω_cat=0.25), overrides a few of them and
sweeps one parameter.
"""
from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .dynamics import IntegratorConfig, KernelSpec, Trajectory, integrate_nz, resolve_tau_cut
from .errors import IntegrationError, StateError, SweepPointError, UnknownPresetError
from .operators import HilbertLayout, PhysicalParams, build_system_operators

SweepParam = Literal["lam", "omega_c", "omega_a", "omega_cat", "g", "J"]

# Name used in file names and CSV columns.
SWEEP_LABELS: dict[str, str] = {
    "lam": "lambda",
    "omega_c": "omega_c",
    "omega_a": "omega_a",
    "omega_cat": "omega_cat",
    "g": "g",
    "J": "J",
}

TAIL_FRACTION = 0.25

# -----------------------------------------------------------------------------
# Types
# -----------------------------------------------------------------------------


class LayoutSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    d_photon: int = Field(6, ge=2)
    n_spins: int = Field(3, ge=1)
    d_cat: Literal[2] = 2

    def build(self) -> HilbertLayout:
        return HilbertLayout(d_photon=self.d_photon, n_spins=self.n_spins, d_cat=self.d_cat)


_FOCK_RE = re.compile(r"^fock:(\d+)$")


class InitialState(BaseModel):
    """
    Product initial state.

    paper-vacuum: |0⟩ ⊗ |g...g⟩ ⊗ |g⟩ (exact fixed point of the dynamics)
    fock:         |n0⟩ ⊗ |g...g⟩ ⊗ |g⟩
    product:      |n0⟩ ⊗ |s_1...s_N⟩ ⊗ |cat⟩ with spins given as 0/1
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["paper-vacuum", "fock", "product"] = "fock"
    n0: int = Field(3, ge=0)
    spins: Optional[tuple[int, ...]] = None
    cat: Literal[0, 1] = 0

    @field_validator("spins")
    @classmethod
    def _bits(cls, v: Optional[tuple[int, ...]]) -> Optional[tuple[int, ...]]:
        if v is not None and any(b not in (0, 1) for b in v):
            raise ValueError("spins must be 0 (ground) or 1 (excited)")
        return v

    @classmethod
    def parse(cls, text: str) -> "InitialState":
        """'paper-vacuum' or 'fock:<n>'."""
        text = text.strip()
        if text == "paper-vacuum":
            return cls(kind="paper-vacuum", n0=0)
        m = _FOCK_RE.match(text)
        if not m:
            raise ValueError(f"initial state must be 'paper-vacuum' or 'fock:<n>', got '{text}'")
        return cls(kind="fock", n0=int(m.group(1)))

    def label(self, layout: HilbertLayout) -> tuple[int, ...]:
        n = 0 if self.kind == "paper-vacuum" else self.n0
        if n >= layout.d_photon:
            raise ValueError(f"photon number n0={n} needs d_photon > {n} (cutoff is {layout.d_photon})")
        spins = self.spins if self.kind == "product" and self.spins is not None else (0,) * layout.n_spins
        if len(spins) != layout.n_spins:
            raise ValueError(f"{len(spins)} spin bits given for {layout.n_spins} spins")
        cat = (self.cat if self.kind == "product" else 0,) if layout.catalyst else ()
        return (n,) + tuple(spins) + cat

    def build(self, layout: HilbertLayout) -> np.ndarray:
        rho = np.zeros((layout.dim, layout.dim), dtype=complex)
        i = layout.index(self.label(layout))
        rho[i, i] = 1.0
        return rho


class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(min_length=1)
    physics: PhysicalParams = Field(default_factory=PhysicalParams)
    kernel: KernelSpec = Field(default_factory=KernelSpec)
    grid: IntegratorConfig = Field(default_factory=IntegratorConfig)
    layout: LayoutSpec = Field(default_factory=LayoutSpec)
    initial: InitialState = Field(default_factory=InitialState)
    sweep_param: SweepParam = "lam"
    sweep_values: tuple[float, ...] = (0.0,)
    tail_fraction: float = Field(TAIL_FRACTION, gt=0, le=1)

    @field_validator("sweep_values")
    @classmethod
    def _ordered(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v:
            raise ValueError("sweep_values must not be empty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("sweep_values must be strictly increasing")
        return v

    @model_validator(mode="after")
    def _consistent(self) -> "Scenario":
        self.initial.label(self.layout.build())
        if self.kernel.kind == "gaussian" and self.kernel.kappa1 > 0:
            resolve_tau_cut(self.kernel, self.grid)
        for v in self.sweep_values:
            self.params_at(v)
        return self

    @property
    def sweep_label(self) -> str:
        return SWEEP_LABELS[self.sweep_param]

    def params_at(self, value: float) -> PhysicalParams:
        data = self.physics.model_dump()
        data[self.sweep_param] = value
        return PhysicalParams.model_validate(data)

    def with_overrides(
        self,
        *,
        h: Optional[float] = None,
        t_max: Optional[float] = None,
        initial: Optional[InitialState] = None,
    ) -> "Scenario":
        """Copy with grid / initial-state overrides, validated again."""
        data = self.model_dump()
        if h is not None:
            data["grid"]["h"] = h
        if t_max is not None:
            data["grid"]["t_max"] = t_max
        if initial is not None:
            data["initial"] = initial.model_dump()
        return Scenario.model_validate(data)


@dataclass(frozen=True)
class SweepMetrics:
    tail_mean_W: float
    tail_amplitude: float
    catalyst_drift: float
    min_eig_global: float


@dataclass(frozen=True)
class SweepPoint:
    value: float
    trajectory: Trajectory
    metrics: SweepMetrics


@dataclass(frozen=True)
class SweepResult:
    scenario: Scenario
    points: tuple[SweepPoint, ...]

    @property
    def trajectories(self) -> list[Trajectory]:
        return [p.trajectory for p in self.points]

    def amplitudes(self) -> list[float]:
        return [p.metrics.tail_amplitude for p in self.points]


# -----------------------------------------------------------------------------
# Presets
# -----------------------------------------------------------------------------


def _fig(name: str, sweep_param: str, values: tuple[float, ...], **physics) -> Scenario:
    return Scenario(
        name=name,
        physics=PhysicalParams(**physics),
        sweep_param=sweep_param,
        sweep_values=values,
    )


_FIG5_BC = dict(omega_cat=1.35, omega_a=2.45, omega_c=2.25, J=2.5)

PRESETS: dict[str, Scenario] = {
    # battery-cavity alone
    "fig2a": _fig("fig2a", "lam", (0.0,)),
    # increasing catalyst coupling, weak-energy catalyst ω_cat = 0.25
    "fig2b": _fig("fig2b", "lam", (0.8, 1.8, 2.8)),
    "fig3a": _fig("fig3a", "omega_c", (1.5, 2.5, 3.5), lam=0.0),
    "fig3b": _fig("fig3b", "omega_c", (1.5, 2.5, 3.5), lam=1.8),
    "fig4a": _fig("fig4a", "omega_a", (1.5, 2.5, 3.5), lam=0.0, omega_c=0.85),
    "fig4b": _fig("fig4b", "omega_a", (1.5, 2.5, 3.5), lam=0.8, omega_c=0.85),
    "fig5a": _fig("fig5a", "omega_cat", (1.05, 1.15, 1.35), lam=1.5, omega_c=0.75),
    "fig5b": _fig("fig5b", "g", (0.2, 0.5, 0.8), lam=0.85, **_FIG5_BC),
    "fig5c": _fig("fig5c", "g", (0.2, 0.5, 0.8), lam=0.0, **_FIG5_BC),
}


def preset(name: str) -> Scenario:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPresetError(name, sorted(PRESETS)) from None


# -----------------------------------------------------------------------------
# Summaries
# -----------------------------------------------------------------------------


def default_window(traj: Trajectory, fraction: float = TAIL_FRACTION) -> tuple[float, float]:
    t_end = float(traj.t[-1])
    return (1.0 - fraction) * t_end, t_end


def _window_mask(traj: Trajectory, window: tuple[float, float]) -> np.ndarray:
    t0, t1 = window
    eps = 1e-9 * max(1.0, abs(float(traj.t[-1])))
    if t0 > t1 or t0 < traj.t[0] - eps or t1 > traj.t[-1] + eps:
        raise ValueError(f"window [{t0:g}, {t1:g}] outside trajectory span [{traj.t[0]:g}, {traj.t[-1]:g}]")
    mask = (traj.t >= t0 - eps) & (traj.t <= t1 + eps)
    if not mask.any():
        raise ValueError(f"window [{t0:g}, {t1:g}] holds no samples")
    return mask


def tail_amplitude(traj: Trajectory, window: Optional[tuple[float, float]] = None) -> float:
    """max W - min W over the window (default: last quarter of the run)."""
    w = traj.W[_window_mask(traj, window or default_window(traj))]
    return float(w.max() - w.min())


def tail_mean(traj: Trajectory, window: Optional[tuple[float, float]] = None) -> float:
    return float(traj.W[_window_mask(traj, window or default_window(traj))].mean())


def catalyst_drift(traj: Trajectory) -> float:
    """max_t |E_cat(t) - E_cat(0)|."""
    return float(np.max(np.abs(traj.E_cat - traj.E_cat[0])))


def summarize(traj: Trajectory, fraction: float = TAIL_FRACTION) -> SweepMetrics:
    window = default_window(traj, fraction)
    return SweepMetrics(
        tail_mean_W=tail_mean(traj, window),
        tail_amplitude=tail_amplitude(traj, window),
        catalyst_drift=catalyst_drift(traj),
        min_eig_global=float(traj.min_eig.min()),
    )


# -----------------------------------------------------------------------------
# Execution
# -----------------------------------------------------------------------------


def run_point(s: Scenario, value: float, *, layout: Optional[HilbertLayout] = None,
              grid: Optional[IntegratorConfig] = None) -> Trajectory:
    layout = layout or s.layout.build()
    ops = build_system_operators(s.params_at(value), layout)
    rho0 = s.initial.build(layout)
    try:
        return integrate_nz(ops, s.kernel, rho0, grid or s.grid)
    except (IntegrationError, StateError) as e:
        raise SweepPointError(s.sweep_label, value, e) from e


def run_scenario(s: Scenario, workers: int = 1) -> SweepResult:
    """One NZ trajectory per sweep value; order follows sweep_values."""
    values = list(s.sweep_values)
    if workers <= 1 or len(values) == 1:
        trajs = [run_point(s, v) for v in values]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, len(values))) as pool:
            trajs = list(pool.map(lambda v: run_point(s, v), values))

    points = tuple(
        SweepPoint(value=v, trajectory=tr, metrics=summarize(tr, s.tail_fraction))
        for v, tr in zip(values, trajs)
    )
    return SweepResult(scenario=s, points=points)


@dataclass(frozen=True)
class ConvergenceReport:
    value: float
    d_photon: int
    d_photon_ref: int
    h: float
    h_ref: float
    cutoff_max_dW: float
    step_max_dW: float


def convergence_check(
    s: Scenario,
    value: Optional[float] = None,
    *,
    d_photon_ref: Optional[int] = None,
    h_ref: Optional[float] = None,
) -> ConvergenceReport:
    """
    Rerun one sweep point with a larger photon cutoff and with a finer step
    and report max_t |ΔW| against the base run.
    """
    value = s.sweep_values[-1] if value is None else value
    base_layout = s.layout.build()
    d_ref = d_photon_ref or base_layout.d_photon + 2
    h_fine = h_ref or s.grid.h / 2

    stride = int(round(s.grid.h / h_fine))
    if stride < 1 or not np.isclose(stride * h_fine, s.grid.h):
        raise ValueError(f"h_ref={h_fine:g} must divide h={s.grid.h:g}")

    base = run_point(s, value)

    big = HilbertLayout(d_photon=d_ref, n_spins=base_layout.n_spins, d_cat=base_layout.d_cat)
    cutoff = run_point(s, value, layout=big)

    fine_grid = s.grid.model_copy(update={"h": h_fine})
    fine = run_point(s, value, grid=fine_grid)

    return ConvergenceReport(
        value=value,
        d_photon=base_layout.d_photon,
        d_photon_ref=d_ref,
        h=s.grid.h,
        h_ref=h_fine,
        cutoff_max_dW=float(np.max(np.abs(base.W - cutoff.W))),
        step_max_dW=float(np.max(np.abs(base.W - fine.W[::stride][: len(base.W)]))),
    )

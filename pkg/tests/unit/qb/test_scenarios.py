# tests/unit/qb/test_scenarios.py
"""Unit tests for qb/scenarios.py."""

from unittest.mock import patch

import numpy as np
import pytest
from pydantic import ValidationError

from scripts.qb.dynamics import IntegratorConfig, KernelSpec, integrate_nz
from scripts.qb.errors import SweepPointError, UnknownPresetError
from scripts.qb.operators import HilbertLayout, build_system_operators
from scripts.qb.scenarios import (
    PRESETS,
    InitialState,
    LayoutSpec,
    Scenario,
    catalyst_drift,
    convergence_check,
    preset,
    run_point,
    run_scenario,
    summarize,
    tail_amplitude,
    tail_mean,
)


def _small(name="small", sweep_param="lam", values=(0.0, 0.8), t_max=1.0, h=0.02, **physics) -> Scenario:
    return Scenario(
        name=name,
        physics=physics,
        layout=LayoutSpec(d_photon=3, n_spins=2),
        grid=IntegratorConfig(h=h, t_max=t_max),
        initial=InitialState.parse("fock:2"),
        sweep_param=sweep_param,
        sweep_values=values,
    )


class TestPresets:
    def test_all_names(self):
        assert sorted(PRESETS) == [
            "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig5c",
        ]

    def test_shared_defaults(self):
        for s in PRESETS.values():
            assert s.layout.build().dim == 96
            assert s.kernel.kappa1 == 1.8
            assert s.kernel.kappa2 == 1.8
            assert s.grid.h == 0.01
            assert s.grid.t_max == 20.0
            assert s.initial.label(s.layout.build())[0] == 3

    def test_fig2b(self):
        s = preset("fig2b")
        assert s.sweep_param == "lam"
        assert s.sweep_values == (0.8, 1.8, 2.8)
        p = s.params_at(1.8)
        assert (p.omega_c, p.omega_a, p.g, p.J, p.omega_cat, p.lam) == (2.5, 2.5, 0.2, 1.5, 0.25, 1.8)

    def test_fig5a(self):
        s = preset("fig5a")
        assert s.sweep_param == "omega_cat"
        assert s.sweep_values == (1.05, 1.15, 1.35)
        assert s.physics.lam == 1.5
        assert s.physics.omega_c == 0.75

    def test_fig5_shared_couplings(self):
        for name, lam in (("fig5b", 0.85), ("fig5c", 0.0)):
            p = preset(name).physics
            assert (p.omega_cat, p.omega_a, p.omega_c, p.J, p.lam) == (1.35, 2.45, 2.25, 2.5, lam)

    def test_unknown_preset(self):
        with pytest.raises(UnknownPresetError) as exc:
            preset("fig2x")
        assert "fig2b" in str(exc.value)
        assert exc.value.valid == sorted(PRESETS)


class TestScenarioValidation:
    def test_fock_above_cutoff_rejected(self):
        with pytest.raises(ValidationError, match="d_photon"):
            Scenario(name="x", initial=InitialState.parse("fock:6"))

    def test_fock_below_cutoff_accepted(self):
        assert Scenario(name="x", initial=InitialState.parse("fock:5")).initial.n0 == 5

    @pytest.mark.parametrize("values", [(), (1.0, 1.0), (2.0, 1.0)])
    def test_sweep_values_must_increase(self, values):
        with pytest.raises(ValidationError):
            Scenario(name="x", sweep_values=values)

    def test_negative_coupling_rejected(self):
        with pytest.raises(ValidationError):
            Scenario(name="x", sweep_param="g", sweep_values=(-0.1, 0.2))

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError):
            Scenario.model_validate({"name": "x", "kapa1": 1.0})

    def test_bad_initial_text(self):
        with pytest.raises(ValueError, match="paper-vacuum"):
            InitialState.parse("coherent:2")

    def test_overrides_revalidate(self):
        s = preset("fig2b")
        t = s.with_overrides(h=0.05, t_max=1.0, initial=InitialState.parse("paper-vacuum"))
        assert (t.grid.h, t.grid.t_max, t.initial.kind) == (0.05, 1.0, "paper-vacuum")
        assert s.grid.h == 0.01
        with pytest.raises(ValidationError):
            s.with_overrides(h=5.0, t_max=1.0)

    def test_short_tau_cut_rejected(self):
        """A memory window that truncates the kernel tail fails at validation time."""
        with pytest.raises(ValidationError, match="tau_cut"):
            Scenario(name="x", grid=IntegratorConfig(tau_cut=1.0))

    def test_tau_cut_ignored_without_memory(self):
        s = Scenario(name="x", kernel=KernelSpec(kappa1=0.0), grid=IntegratorConfig(tau_cut=1.0))
        assert s.grid.tau_cut == 1.0
        Scenario(name="y", kernel=KernelSpec(kind="delta", gamma=0.1), grid=IntegratorConfig(tau_cut=1.0))

    def test_product_state_label(self):
        layout = HilbertLayout(d_photon=3, n_spins=2)
        init = InitialState(kind="product", n0=1, spins=(1, 0), cat=1)
        assert init.label(layout) == (1, 1, 0, 1)
        assert np.trace(init.build(layout)).real == 1.0


class TestSummaries:
    def test_constant_has_no_amplitude(self, make_trajectory):
        t = np.linspace(0.0, 20.0, 2001)
        traj = make_trajectory(t, np.full_like(t, 0.7))
        assert tail_amplitude(traj) == 0.0
        assert tail_mean(traj) == pytest.approx(0.7)

    def test_sine_amplitude(self, make_trajectory):
        t = np.linspace(0.0, 20.0, 2001)
        traj = make_trajectory(t, np.sin(t))
        assert tail_amplitude(traj, (10.0, 20.0)) == pytest.approx(2.0, abs=1e-3)

    def test_default_window_is_last_quarter(self, make_trajectory):
        t = np.linspace(0.0, 20.0, 2001)
        traj = make_trajectory(t, np.where(t < 14.0, 5.0, 1.0))
        assert tail_amplitude(traj) == 0.0

    @pytest.mark.parametrize("window", [(-1.0, 5.0), (10.0, 25.0), (6.0, 5.0)])
    def test_window_outside_span(self, make_trajectory, window):
        t = np.linspace(0.0, 20.0, 2001)
        with pytest.raises(ValueError, match="outside"):
            tail_amplitude(make_trajectory(t, t), window)

    def test_empty_window(self, make_trajectory):
        t = np.linspace(0.0, 20.0, 2001)
        with pytest.raises(ValueError, match="no samples"):
            tail_amplitude(make_trajectory(t, t), (0.005, 0.006))

    def test_catalyst_drift(self, make_trajectory):
        t = np.linspace(0.0, 1.0, 11)
        traj = make_trajectory(t, t, E_cat=-0.125 + 0.01 * np.sin(np.pi * t))
        assert catalyst_drift(traj) == pytest.approx(0.01)

    def test_summarize(self, make_trajectory):
        t = np.linspace(0.0, 20.0, 2001)
        m = summarize(make_trajectory(t, np.full_like(t, 0.2)))
        assert m.tail_mean_W == pytest.approx(0.2)
        assert m.tail_amplitude == 0.0
        assert m.catalyst_drift == 0.0


class TestRunScenario:
    def test_single_value(self):
        result = run_scenario(_small(values=(0.0,)))
        assert len(result.points) == 1
        assert len(result.trajectories[0]) == 51

    def test_order_and_concurrency(self):
        """Concurrent runs give the same numbers, in sweep order."""
        s = _small(values=(0.0, 0.8, 1.8))
        serial = run_scenario(s, workers=1)
        parallel = run_scenario(s, workers=3)
        assert [p.value for p in parallel.points] == [0.0, 0.8, 1.8]
        for a, b in zip(serial.points, parallel.points):
            np.testing.assert_array_equal(a.trajectory.W, b.trajectory.W)
            assert a.metrics == b.metrics

    def test_catalyst_decoupled_without_lambda(self):
        result = run_scenario(_small(values=(0.0,), t_max=2.0))
        assert result.points[0].metrics.catalyst_drift < 1e-10

    def test_catalyst_slot_is_inert_without_lambda(self):
        """λ = 0 reproduces the battery-cavity model with no catalyst slot."""
        s = _small(values=(0.0,), t_max=2.0)
        params = s.params_at(0.0)
        with_cat = HilbertLayout(d_photon=3, n_spins=2)
        no_cat = HilbertLayout(d_photon=3, n_spins=2, catalyst=False)

        a = integrate_nz(build_system_operators(params, with_cat), s.kernel, s.initial.build(with_cat), s.grid)
        b = integrate_nz(build_system_operators(params, no_cat), s.kernel, s.initial.build(no_cat), s.grid)
        assert np.max(np.abs(a.W - b.W)) < 1e-10
        assert np.max(np.abs(a.E_B - b.E_B)) < 1e-10
        assert np.max(np.abs(a.N_exc - b.N_exc)) < 1e-10

    def test_vacuum_stays_empty(self):
        s = preset("fig2a").with_overrides(t_max=1.0, initial=InitialState.parse("paper-vacuum"))
        result = run_scenario(s)
        assert np.max(np.abs(result.points[0].trajectory.W)) <= 1e-12

    def test_integrator_abort_names_point(self, small_layout):
        s = _small(values=(0.8,))
        with patch("scripts.qb.dynamics.dissipator", side_effect=lambda rho, L: np.eye(rho.shape[0], dtype=complex)):
            with pytest.raises(SweepPointError) as exc:
                run_point(s, 0.8)
        assert exc.value.param == "lambda"
        assert exc.value.value == 0.8
        assert str(exc.value).startswith("lambda=0.8:")


class TestConvergenceCheck:
    def test_report(self):
        s = _small(values=(1.8,), t_max=1.0, h=0.02)
        rep = convergence_check(s)
        assert rep.value == 1.8
        assert (rep.d_photon, rep.d_photon_ref) == (3, 5)
        assert (rep.h, rep.h_ref) == (0.02, 0.01)
        assert 0.0 <= rep.step_max_dW < 1e-2
        assert rep.cutoff_max_dW >= 0.0

    def test_step_must_divide(self):
        s = _small(values=(1.8,), h=0.02)
        with pytest.raises(ValueError, match="divide"):
            convergence_check(s, h_ref=0.015)

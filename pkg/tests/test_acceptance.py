"""
Acceptance Test Suite

End-to-end checks of the simulator against known answers: hydrostatic
pressure, a resting free surface, mass conservation, the discrete sphere
volume, free advection in a channel, floating cubes and the stability
curve of a heeled box.

Everything except the voxel volume sweep runs for minutes to hours and is
marked slow; the default run deselects it.

To run tests:
    pytest tests/test_acceptance.py -v -m slow
"""

import numpy as np
import pytest

from floatforge.coupling.simulation import ALLOWED_TRANSITIONS
from floatforge.scenarios import (
    build_simulation,
    parse_config,
    run_equilibrium_box,
    run_free_advection,
    run_stability_sweep,
    sweep_voxel_volume,
)
from floatforge.scenarios.base import OK


def basin(size, level, gravity, tau, kind="below", walls="xyz", extra=""):
    """Configuration text of a box with no-slip walls on the given axes."""
    lines = [
        "[domain]",
        "size = {} {} {}".format(*size),
        "[lattice]",
        f"tau = {tau!r}",
        f"gravity = {gravity!r}",
        "[boundary]",
    ]
    for axis in walls:
        lines += [f"{axis}_min = noslip", f"{axis}_max = noslip"]
    lines += ["[fill]", f"kind = {kind}", f"level = {level!r}"]
    return "\n".join(lines) + "\n" + extra


def channel(tau, velocity, stage, steps, level=19.5, gravity=1e-5):
    """The 60 x 40 x 30 channel with a floating sphere of diameter 12."""
    extra = (
        "[body.sphere]\nradius = 6\ndensity = 0.5\nposition = 30 20 {}\n"
        "[run]\nscenario = advection\nsteps = {}\nsample_every = 10\n"
        "[advection]\nstage = {}\nchannel_velocity = {!r}\n"
    ).format(level, steps, stage, velocity)
    return parse_config(basin((60, 40, 30), level, gravity, tau, walls="yz", extra=extra))


# GEOMETRY TESTS

class TestVoxelVolume:
    """Tests for the discrete volume of a travelling sphere."""

    def test_mean_and_period(self):
        """The covered-cell count averages to 4/3 pi r^3 and repeats every cell."""
        counts = sweep_voxel_volume(radius=5.0, speed=1e-4, steps=10001)
        assert counts.mean() == pytest.approx(523.6, rel=0.01)
        assert counts[0] == counts[10000]
        assert counts.min() < counts.max()


# FLUID TESTS

@pytest.mark.slow
class TestRestingFluid:
    """Tests for fluid at rest under gravity."""

    def test_hydrostatic_column(self):
        """The vertical pressure gradient balances rho g."""
        g = 7.5e-4
        config = parse_config(basin((40, 40, 40), 40.0, g, 1.0, kind="all", walls="z"))
        sim = build_simulation(config)
        try:
            sim.run(20000)
            p = sim.pressure().mean(axis=(0, 1))
            gradient = (p[15] - p[25]) / 10.0
            rho = sim.rho[:, :, 15:26].mean()
        finally:
            sim.close()
        assert gradient == pytest.approx(rho * g, rel=0.02)

    @pytest.mark.parametrize("tau", [0.8, 1.1, 1.7])
    def test_resting_surface(self, tau):
        """Interface velocities of a resting basin stay below 1e-5."""
        config = parse_config(basin((60, 40, 30), 15.0, 1e-5, tau))
        sim = build_simulation(config, audit=True)
        try:
            sim.run(10000)
            speed = sim.max_interface_speed_deviation((0.0, 0.0, 0.0))
            clean = sim.auditor.clean
        finally:
            sim.close()
        assert speed < 1e-5
        assert clean

    def test_sloshing_mass(self):
        """A tilted surface sloshes without losing mass."""
        text = basin((60, 40, 30), 15.0, 1e-4, 0.8).replace(
            "level = 15.0", "level = 15.0\nslope = 0.1 0\nhydrostatic = false"
        )
        sim = build_simulation(parse_config(text))
        try:
            sim.run(10000)
            report = sim.mass_report()
        finally:
            sim.close()
        assert abs(report["balance"] - report["initial"]) < 1e-9 * report["initial"]


# ADVECTION TESTS

@pytest.mark.slow
@pytest.mark.integration
class TestFreeAdvection:
    """Tests for a sphere carried by a channel flow."""

    def test_all_liquid(self):
        """Without gravity the sphere reaches the liquid velocity."""
        result = run_free_advection(channel(1.1, 1e-4, stage=1, steps=20000))
        assert result.status == OK
        assert abs(result.summary["terminal_vx"] - 1e-4) < 1e-10

    def test_buoyancy_oscillation_damping(self):
        """Vertical velocity oscillations stay within g and shrink with viscosity."""
        amplitudes = {}
        for tau in (0.62, 1.7):
            result = run_free_advection(channel(tau, 1e-4, stage=2, steps=10000))
            amplitudes[tau] = max(abs(result.summary["vz_min"]), abs(result.summary["vz_max"]))
        assert amplitudes[0.62] <= 1e-5
        assert 5.0 <= amplitudes[0.62] / amplitudes[1.7] <= 20.0

    @pytest.mark.parametrize(
        "tau, velocity, expected",
        [(1.7, 1e-4, 1.0e-4), (1.1, 1e-4, 1.01e-4), (0.8, 1e-4, 1.05e-4), (1.7, 5e-5, 5.05e-5)],
    )
    def test_free_surface(self, tau, velocity, expected):
        """The floating sphere travels at the tabulated terminal velocity."""
        result = run_free_advection(channel(tau, velocity, stage=4, steps=20000))
        assert result.status == OK
        assert result.summary["terminal_vx"] == pytest.approx(expected, rel=0.1)


# FLOATING BODY TESTS

def floating_cube(density):
    side = 16.0
    z = 20.0 - density * side + 0.5 * side
    extra = (
        "[body.cube]\nshape = cuboid\nsize = 32 16 16\ndensity = {!r}\n"
        "position = 65 20 {!r}\nrotation = 2.86 0 0\nfix_rotation = yz\n"
        "[run]\nscenario = equilibrium\nsample_every = 100\n"
        "[equilibrium]\nmax_steps = 100000\nstall_energy = 1e-12\nstall_steps = 2000\n"
    ).format(density, z)
    return parse_config(basin((130, 40, 40), 20.0, 7.5e-4, 1.0 / 1.9, extra=extra))


@pytest.mark.slow
@pytest.mark.integration
class TestFloatingEquilibrium:
    """Tests for cubes released in a basin."""

    @pytest.mark.parametrize("density, expected", [(0.5, 45.0), (0.25, 26.565), (0.75, 26.565)])
    def test_cube_heel(self, density, expected):
        """A floating cube settles at its stable heel angle."""
        result = run_equilibrium_box(floating_cube(density), audit=True)
        assert result.summary["converged"]
        assert result.summary["cube_heel_folded_deg"] == pytest.approx(expected, abs=3.0)
        allowed = {f"{a.name}->{b.name}" for a, b in ALLOWED_TRANSITIONS}
        assert set(result.summary["transitions"]) <= allowed
        assert result.summary["audit_clean"]


def sweep(width, height, alphas="5 10 15 20 25 30"):
    length = 2 * int(height)
    extra = (
        "[run]\nscenario = stability\n"
        "[stability]\nwidth = {w}\nheight = {h}\nlength = {l}\ndensity = 0.5\n"
        "alphas = {a}\nwarmup = 5000\naverage = 5000\n"
    ).format(w=width, h=height, l=length, a=alphas)
    size = (length, 3 * int(width), 3 * int(height))
    return parse_config(basin(size, 1.5 * height, 1e-4, 1.0, walls="yz", extra=extra))


@pytest.mark.slow
@pytest.mark.integration
class TestStabilityCurve:
    """Tests for measured righting moments against the analytic curve."""

    def test_resolution_and_aspect(self):
        """Errors shrink with resolution and grow for the narrower box."""
        errors = {}
        for key, (width, height) in {"6:4@24": (24, 16), "6:4@48": (48, 32), "5:4@20": (20, 16)}.items():
            result = run_stability_sweep(sweep(width, height))
            assert np.isfinite(result.tables["stability_curve"]["m_s"]).all()
            errors[key] = result.summary["rms_relative_error"]
        assert errors["6:4@48"] < errors["6:4@24"]
        assert errors["5:4@20"] > errors["6:4@24"]

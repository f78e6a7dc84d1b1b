"""
Coupling Test Suite

Tests for obstacle mapping, momentum exchange and the coupled time step.
Simulations here are a few steps on small grids; the long validation runs
live in test_scenarios.py behind the ``slow`` marker.

To run tests:
    pytest tests/test_coupling.py -v
"""

import numpy as np
import pytest

from floatforge.bodies import BodyState, Constraints, Cuboid, RigidBody, Sphere
from floatforge.coupling import (
    ALLOWED_TRANSITIONS,
    LinkForceAccumulator,
    ObstacleMap,
    Simulation,
    TransitionAuditor,
    map_body_to_grid,
    momentum_exchange_interface,
    momentum_exchange_link,
    net_force_torque,
    refill_uncovered_cell,
    step_coupled,
)
from floatforge.errors import ConfigError, ConsistencyError, DivergenceError
from floatforge.freesurface import CellState, CellStateField, FillSpec, initialize_cells
from floatforge.lattice import DomainBoundaries, DomainTopology, SimParams, equilibrium
from floatforge.lattice.stencil import W


# FIXTURES

def make_simulation(
    shape, fill, gravity=(0.0, 0.0, 0.0), boundaries=None, bodies=(), tau=0.8, **kwargs
):
    """Build a simulation from a fill description."""
    topology = DomainTopology(shape, boundaries)
    params = SimParams(tau=tau, gravity=gravity, size=shape)
    cells, rho, u = initialize_cells(topology, fill, gravity, params.rho_gas)
    return Simulation(params, topology, cells, rho, u, bodies=bodies, **kwargs)


@pytest.fixture
def pool():
    """Closed 4 x 4 x 8 box, half full, under weak gravity."""
    return make_simulation(
        (4, 4, 8),
        FillSpec("below", level=4.5),
        gravity=(0.0, 0.0, -1e-5),
        boundaries=DomainBoundaries.closed_box(),
        audit=True,
    )


@pytest.fixture
def liquid_topology():
    """Periodic 12^3 domain."""
    return DomainTopology((12, 12, 12))


# OBSTACLE MAPPING TESTS

class TestMapping:
    """Tests for voxelization and re-mapping."""

    def test_sphere_cell_count(self, liquid_topology):
        """A sphere of radius 2.5 centered on a cell corner covers 56 cells."""
        ball = RigidBody("ball", Sphere(2.5), 1.0, BodyState([6.0, 6.0, 6.0]))
        mask = map_body_to_grid(ball, liquid_topology)
        assert mask.sum() == 56
        assert mask[5, 5, 5] and mask[6, 6, 6]
        assert not mask[8, 6, 6]

    def test_body_outside_domain(self, liquid_topology):
        """Bodies must stay inside the domain."""
        ball = RigidBody("ball", Sphere(2.5), 1.0, BodyState([1.0, 6.0, 6.0]))
        with pytest.raises(ConfigError, match="overlaps the domain boundary"):
            map_body_to_grid(ball, liquid_topology)

    def test_update_reports_changes(self, liquid_topology):
        """Moving one cell covers as many cells as it uncovers."""
        ball = RigidBody("ball", Sphere(2.5), 1.0, BodyState([6.0, 6.0, 6.0]))
        obstacles = ObstacleMap(liquid_topology)
        obstacles.update([ball])
        assert obstacles.covered_count(0) == 56
        ball.state.position = np.array([7.0, 6.0, 6.0])
        delta = obstacles.update([ball])
        assert len(delta.covered) == len(delta.uncovered) > 0
        assert delta.previous_owner == [0] * len(delta.uncovered)
        assert delta.covered == sorted(delta.covered)


class TestRefill:
    """Tests for cells a body leaves behind."""

    @pytest.fixture
    def setting(self, liquid_topology):
        cells = CellStateField(liquid_topology.shape)
        rho = np.full(liquid_topology.shape, 1.02)
        u = np.zeros((3,) + liquid_topology.shape)
        f = equilibrium(rho, u)
        body = RigidBody(
            "ball", Sphere(1.0), 1.0, BodyState([2.0, 2.0, 2.0], velocity=[0.01, 0.0, 0.0])
        )
        return cells, f, rho, u, body

    def test_surrounded_by_liquid(self, liquid_topology, setting):
        """Liquid all around gives a liquid cell moving with the body."""
        cells, f, rho, u, body = setting
        cells.state[...] = CellState.LIQUID
        state, mass = refill_uncovered_cell((6, 6, 6), cells, f, rho, u, body, liquid_topology, 1.0)
        assert state == CellState.LIQUID
        assert mass == pytest.approx(1.02)
        np.testing.assert_allclose(u[:, 6, 6, 6], [0.01, 0.0, 0.0])
        np.testing.assert_allclose(f[:, 6, 6, 6], equilibrium(1.02, (0.01, 0.0, 0.0)))

    def test_surrounded_by_gas(self, liquid_topology, setting):
        """Gas all around gives a gas cell."""
        cells, f, rho, u, body = setting
        state, mass = refill_uncovered_cell((6, 6, 6), cells, f, rho, u, body, liquid_topology, 1.0)
        assert state == CellState.GAS
        assert mass == 0.0
        assert rho[6, 6, 6] == 1.0

    def test_mixed_neighbourhood(self, liquid_topology, setting):
        """Liquid below and gas above gives a half-full interface cell."""
        cells, f, rho, u, body = setting
        cells.state[:, :, :7] = CellState.LIQUID
        state, mass = refill_uncovered_cell((6, 6, 6), cells, f, rho, u, body, liquid_topology, 1.0)
        assert state == CellState.INTERFACE
        assert cells.phi[6, 6, 6] == 0.5
        assert mass == pytest.approx(0.51)

    def test_interface_fill_average(self, liquid_topology, setting):
        """Interface neighbours pass on their mean fill level."""
        cells, f, rho, u, body = setting
        cells.state[:, :, :6] = CellState.LIQUID
        cells.state[:, :, 6] = CellState.INTERFACE
        cells.phi[:, :, 6] = 0.3
        cells.state[6, 6, 6] = CellState.OBSTACLE
        state, _ = refill_uncovered_cell((6, 6, 6), cells, f, rho, u, body, liquid_topology, 1.0)
        assert state == CellState.INTERFACE
        assert cells.phi[6, 6, 6] == pytest.approx(0.3)

    def test_enclosed_by_obstacles(self, liquid_topology, setting):
        """A cell with only obstacle neighbours is deferred."""
        cells, f, rho, u, body = setting
        cells.state[...] = CellState.OBSTACLE
        assert refill_uncovered_cell((6, 6, 6), cells, f, rho, u, body, liquid_topology, 1.0) is None


# MOMENTUM EXCHANGE TESTS

class TestMomentumExchange:
    """Tests for force and torque on bodies."""

    def test_link_at_rest(self):
        """A resting wall receives twice the incoming population."""
        np.testing.assert_allclose(momentum_exchange_link(0.06, 5, (0.0, 0.0, 0.0), 1.0), [0.0, 0.0, 0.12])

    def test_moving_wall_reduces_transfer(self):
        """A wall moving along the link takes less momentum."""
        dj = momentum_exchange_link(W[1], 1, (0.01, 0.0, 0.0), 1.0)
        assert dj[0] == pytest.approx(2.0 * W[1] * (1.0 - 0.03))

    def test_interface_blending(self):
        """Full cells act like liquid, empty cells transmit the gas pressure."""
        full = momentum_exchange_interface(1.0, 0.06, 5, 1.0, (0.0, 0.0, 0.0))
        np.testing.assert_allclose(full, momentum_exchange_link(0.06, 5, (0.0, 0.0, 0.0), 1.0))
        empty = momentum_exchange_interface(0.0, 0.06, 5, 1.2, (0.0, 0.0, 0.0))
        np.testing.assert_allclose(empty, [0.0, 0.0, 2.0 * W[5] * 1.2])

    def test_accumulator(self):
        """Forces sum, torques use the lever arms."""
        acc = LinkForceAccumulator()
        assert not acc.force().any()
        acc.add([[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
        acc.add([[0.0, 2.0, 0.0]], [[1.0, 0.0, 0.0]])
        force, torque = acc.result()
        np.testing.assert_allclose(force, [1.0, 2.0, 0.0])
        np.testing.assert_allclose(torque, [0.0, 0.0, 1.0])
        assert acc.n_links == 2

    def test_uniform_pressure_is_balanced(self, liquid_topology):
        """A symmetric body in fluid at rest feels no net force or torque."""
        ball = RigidBody("ball", Sphere(3.0), 1.0, BodyState([6.0, 6.0, 6.0]))
        obstacles = ObstacleMap(liquid_topology)
        body_id = obstacles.voxelize([ball])
        state = np.where(body_id >= 0, CellState.OBSTACLE, CellState.LIQUID).astype(np.int8)
        rho = np.ones(liquid_topology.shape)
        f = equilibrium(rho, np.zeros((3,) + liquid_topology.shape))
        force, torque, n = net_force_torque(
            0, ball, state, np.ones_like(rho), f, rho, body_id, liquid_topology, 1.0
        )
        assert n > 0
        np.testing.assert_allclose(force, 0.0, atol=1e-12)
        np.testing.assert_allclose(torque, 0.0, atol=1e-12)


# COUPLED TIME STEP TESTS

class TestSimulation:
    """Tests for the coupled simulation."""

    def test_size_mismatch(self):
        """params.size must match the domain."""
        topology = DomainTopology((4, 4, 4))
        cells, rho, u = initialize_cells(topology, FillSpec("all"), (0.0, 0.0, 0.0), 1.0)
        with pytest.raises(ValueError, match="does not match"):
            Simulation(SimParams(size=(4, 4, 5)), topology, cells, rho, u)
        with pytest.raises(ValueError, match="check_interval"):
            Simulation(SimParams(size=(4, 4, 4)), topology, cells, rho, u, check_interval=0)

    def test_uniform_flow_is_preserved(self):
        """A periodic liquid moving uniformly keeps its momentum."""
        sim = make_simulation((4, 4, 4), FillSpec("all", velocity=(0.01, 0.0, 0.0)))
        start = sim.fluid_momentum()
        sim.run(10)
        assert sim.time == 10
        np.testing.assert_allclose(sim.fluid_momentum(), start, rtol=1e-12)
        np.testing.assert_allclose(sim.u[0], 0.01, rtol=1e-12)
        assert sim.max_interface_speed_deviation((0.01, 0.0, 0.0)) == 0.0

    def test_pool_conserves_mass(self, pool):
        """Mass plus residue stays at its initial value in a closed box."""
        assert pool.cells.counts()["interface"] == 16
        for _ in range(20):
            step_coupled(pool)
        report = pool.mass_report()
        assert report["balance"] == pytest.approx(report["initial"], rel=1e-12)
        assert report["injected"] == 0.0
        assert pool.auditor.clean
        pool.auditor.assert_clean()

    def test_pool_stays_at_rest(self, pool):
        """A hydrostatic pool develops only small velocities."""
        pool.run(20)
        fluid = pool.cells.fluid
        assert np.abs(pool.u[:, fluid]).max() < 1e-4
        np.testing.assert_allclose(pool.pressure(), pool.rho / 3.0)

    def test_divergence_detected(self, pool):
        """Non-finite populations in the fluid raise DivergenceError."""
        pool.field.f[:, 1, 1, 1] = np.nan
        with pytest.raises(DivergenceError, match="non-finite"):
            pool.check_health()

    def test_run_callback_stops(self, pool):
        """Returning True from the callback ends the run."""
        pool.run(50, callback=lambda sim: sim.time >= 3)
        assert pool.time == 3

    def test_body_moving_through_liquid(self):
        """A sphere pushed through liquid is re-mapped every cell it travels."""
        ball = RigidBody(
            "ball", Sphere(3.0), 2.0, BodyState([6.0, 6.0, 6.0], velocity=[0.05, 0.0, 0.0])
        )
        sim = make_simulation((16, 12, 12), FillSpec("all"), bodies=[ball], audit=True)
        covered = sim.covered_cells(0)
        sim.run(40)
        assert ball.state.position[0] > 6.5
        assert ball.state.velocity[0] > 0.0
        assert abs(sim.covered_cells(0) - covered) <= 0.2 * covered
        assert sim.auditor.clean
        assert "LIQUID->OBSTACLE" in sim.auditor.observed()
        assert "OBSTACLE->LIQUID" in sim.auditor.observed()
        assert sim.field.is_finite(sim.cells.fluid)
        assert sim.mass_report()["injected"] > 0.0

    def test_floating_sphere_feels_buoyancy(self):
        """Half a sphere below the surface is pushed up."""
        ball = RigidBody(
            "ball", Sphere(3.0), 0.5, BodyState([6.0, 6.0, 7.5]), Constraints.fixed()
        )
        sim = make_simulation(
            (12, 12, 14),
            FillSpec("below", level=7.5),
            gravity=(0.0, 0.0, -1e-4),
            boundaries=DomainBoundaries.closed_box(),
            bodies=[ball],
            audit=True,
        )
        assert sim.cells.counts()["obstacle"] == sim.covered_cells(0) > 0
        sim.run(5)
        force, torque = sim.forces[0]
        assert 1.5e-3 < force[2] < 1.2e-2
        assert abs(force[0]) < 0.1 * force[2]
        assert sim.auditor.clean

    def test_closed_layer_checked_every_step(self, pool, monkeypatch):
        """A conversion that opens the interface layer fails the same step."""
        def faulty_convert():
            pool.cells.state[1, 1, 4] = CellState.GAS

        monkeypatch.setattr(pool, "_convert", faulty_convert)
        with pytest.raises(ConsistencyError, match="interface layer has a hole") as info:
            pool.step()
        assert info.value.step == 1
        assert info.value.exit_code == 3


class TestMovingBodies:
    """Tests for free bodies and moving walls in the coupled step."""

    @staticmethod
    def heavy_ball(position, velocity):
        return RigidBody("ball", Sphere(2.0), 100.0, BodyState(position, velocity=velocity))

    def test_body_leaving_domain_diverges(self):
        """A body crossing the domain edge mid-run is a divergence, not a config error."""
        ball = self.heavy_ball([9.9, 6.0, 6.0], [0.3, 0.0, 0.0])
        sim = make_simulation((12, 12, 12), FillSpec("all"), bodies=[ball])
        with pytest.raises(DivergenceError, match="left the domain") as info:
            sim.step()
        assert info.value.step == 1
        assert info.value.exit_code == 2

    def test_supersonic_surface_diverges(self):
        """A surface speed at or above the speed of sound stops the run."""
        ball = self.heavy_ball([6.0, 6.0, 6.0], [0.65, 0.0, 0.0])
        sim = make_simulation((12, 12, 12), FillSpec("all"), bodies=[ball])
        with pytest.raises(DivergenceError, match="speed of sound") as info:
            sim.step()
        assert info.value.step == 1

    def test_moving_wall_mass_is_booked(self):
        """Mass a moving wall pushes into liquid cells is kept in the balance."""
        ball = RigidBody(
            "ball",
            Sphere(3.0),
            0.5,
            BodyState([6.0, 6.0, 7.5], velocity=[0.0, 0.0, -0.01]),
            Constraints.fixed(),
        )
        sim = make_simulation(
            (12, 12, 14),
            FillSpec("below", level=7.5),
            gravity=(0.0, 0.0, -1e-4),
            boundaries=DomainBoundaries.closed_box(),
            bodies=[ball],
        )
        sim.run(10)
        report = sim.mass_report()
        assert report["moving_wall"] != 0.0
        assert report["injected"] == 0.0
        assert report["balance"] == pytest.approx(report["initial"], rel=1e-10)

    def test_free_cube_at_low_viscosity(self):
        """A free floating cube at tau = 1/1.9 keeps a bounded load."""
        gravity = 7.5e-4
        cube = RigidBody(
            "cube",
            Cuboid(6.0, 6.0, 6.0),
            0.5,
            BodyState([8.0, 8.0, 10.0]),
            Constraints.from_axes("xy", "xyz"),
        )
        sim = make_simulation(
            (16, 16, 20),
            FillSpec("below", level=10.0),
            gravity=(0.0, 0.0, -gravity),
            boundaries=DomainBoundaries.closed_box(),
            bodies=[cube],
            tau=1.0 / 1.9,
        )
        weight = cube.mass_props.mass * gravity
        ratios = []
        for _ in range(240):
            sim.step()
            ratios.append(abs(sim.forces[0][0][2]) / weight)
        assert np.all(np.isfinite(ratios))
        assert max(ratios[40:]) < 5.0
        assert abs(cube.state.position[2] - 10.0) < 3.0
        assert cube.max_surface_speed() < 0.1 * np.sqrt(1.0 / 3.0)
        assert sim.field.is_finite(sim.cells.fluid)


# TRANSITION AUDIT TESTS

class TestTransitionAuditor:
    """Tests for the state transition audit."""

    def test_allowed_set(self):
        """Ten transitions are admissible; gas never becomes liquid directly."""
        assert len(ALLOWED_TRANSITIONS) == 10
        assert (CellState.GAS, CellState.LIQUID) not in ALLOWED_TRANSITIONS

    def test_violation(self):
        """A gas cell turning liquid is reported."""
        auditor = TransitionAuditor()
        before = np.array([[[CellState.GAS, CellState.LIQUID]]], dtype=np.int8)
        after = np.array([[[CellState.LIQUID, CellState.INTERFACE]]], dtype=np.int8)
        auditor.record(before, after, step=4)
        assert not auditor.clean
        assert auditor.observed() == {"GAS->LIQUID": 1, "LIQUID->INTERFACE": 1}
        with pytest.raises(ConsistencyError, match="inadmissible transition GAS->LIQUID") as info:
            auditor.assert_clean()
        assert info.value.step == 4
        assert info.value.cells == [(0, 0, 0)]

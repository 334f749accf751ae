import cmath
import math

import pytest

import trajthermo as tt


def three_path():
    return tt.PathLattice(n_slices=2, dt=1.0, levels=3, dx=1.0)


def test_ensemble_three_path():
    dist = tt.boltzmann_distribution(three_path(), tt.free_particle(), 1.0)
    assert dist.weights == pytest.approx([0.21194, 0.57611, 0.21194], abs=1e-5)
    assert dist.mean_action == pytest.approx(2 / (math.e + 2), abs=1e-15)
    assert dist.most_probable_index() == 1
    assert dist.entropy == pytest.approx(dist.beta * dist.mean_action + dist.log_partition)
    beta = tt.solve_beta(three_path(), tt.free_particle(), dist.mean_action, 1e-14)
    assert beta == pytest.approx(1.0, abs=1e-8)


def test_beta_must_be_positive():
    with pytest.raises(ValueError, match="beta must be positive"):
        tt.boltzmann_distribution(three_path(), tt.free_particle(), -1.0)


def test_integrate_and_action():
    traj = tt.integrate_characteristic(tt.harmonic_oscillator(), 0.0, [0.0], [1.0],
                                       scheme="leapfrog", dt=1e-3, span=math.pi / 2)
    assert traj.nodes[-1][0] == pytest.approx(1.0, abs=1e-6)
    line = tt.Trajectory.straight_line(0.0, 1.0, [0.0], [1.0], 4)
    assert tt.action_of_path(tt.free_particle(), line) == pytest.approx(0.5)


def test_minimize_and_sample():
    init = tt.Trajectory.straight_line(0.0, math.pi / 2, [0.0], [1.0], 32)
    opt = tt.minimize_action(tt.harmonic_oscillator(), init)
    times = init.times()
    assert max(abs(q[0] - math.sin(t)) for q, t in zip(opt["path"].nodes, times)) < 2e-3
    chain = tt.metropolis_chain(tt.harmonic_oscillator(), init, beta=50.0, n_steps=2000, seed=3)
    assert 0.0 <= chain["acceptance_rate"] <= 1.0
    assert all(s >= 0.0 for s in chain["std_error"])


def test_free_propagator():
    xs, k = tt.propagator_time_sliced(tt.free_particle(), 0.0, 1.0, 10, -20.0, 20.0, 2001)
    i = xs.index(0.0) if 0.0 in xs else min(range(len(xs)), key=lambda j: abs(xs[j]))
    exact = tt.analytic_propagator("free", x1=0.0, x2=0.0, t=1.0)
    assert abs(k[i]) == pytest.approx(abs(exact), rel=1e-3)
    assert cmath.phase(k[i]) == pytest.approx(-math.pi / 4, abs=2e-2)


def test_thermo():
    assert tt.td_characteristic(2.0, 3.0, 1.0, 4.0) == 2.0
    r1, r2, r3 = tt.maxwell_residual("adiabatic")
    assert max(r1, r2) <= 1e-6 and r3 <= 1e-8
    a = tt.gibbs_form_integral(1.0, 1.5, [(1, 1), (2, 3)])
    b = tt.gibbs_form_integral(1.0, 1.5, [(1, 1), (2, 1), (2, 3)])
    assert a == pytest.approx(b, abs=1e-6)
    rows = tt.analogy_table()
    assert len(rows) == 5 and rows[0][0] == "Order parameter"

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dhradius.exceptions import NonDifferentiablePoint
from dhradius.sd import nepv_matrix, scf_solve, sd_bounds, sd_inner, sd_objective, sd_radius
from dhradius.si import si_radius
from dhradius.system import DHSystem, PerturbationClass, brake_squeal, random_dh
from oracles import sd_inner_oracle

# frozen library values, matched against the polished sampling oracle when recorded
FROZEN_RADIUS = {(3, 0): 0.44852011275939313}
FROZEN_BOUNDS = {(3, 0): (0.005505959964818153, 1.2437212735713064)}


def unit(rng, n):
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return y / np.linalg.norm(y)


def test_identity_radius_and_certificate():
    r = sd_radius(DHSystem(np.zeros((3, 3)), np.eye(3)))
    assert r.value == pytest.approx(1.0, abs=1e-10) and abs(r.omega_star) < 1e-8
    chk = r.diagnostics["certificate_check"]
    assert chk["class"] == "sd" and chk["eig_distance"] < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6), st.floats(-3, 3))
def test_nepv_matrix_is_gradient(n, seed, w):
    s = random_dh(n, seed)
    obj = sd_objective(s, w)
    rng = np.random.default_rng(seed)
    y = unit(rng, n)
    H = nepv_matrix(y, obj)
    assert np.vdot(y, H @ y).real == pytest.approx(obj.forms(y)[2], rel=1e-10, abs=1e-12)
    d = unit(rng, n)
    d = d - np.vdot(y, d) * y  # tangent direction
    h = 1e-6
    fd = (obj.value((y + h * d) / np.linalg.norm(y + h * d)) - obj.value((y - h * d) / np.linalg.norm(y - h * d))) / (2 * h)
    grad = 2 * np.vdot(H @ y, d).real
    assert fd == pytest.approx(grad, rel=1e-5, abs=1e-7)


def test_nepv_undefined_on_nullspace():
    s = DHSystem(np.zeros((2, 2)), np.diag([1.0, 0.0]))
    with pytest.raises(NonDifferentiablePoint):
        nepv_matrix(np.array([0, 1.0]), sd_objective(s, 0.0))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10**6), st.floats(-2, 2))
def test_scf_contract(n, seed, w):
    s = random_dh(n, seed)
    obj = sd_objective(s, w)
    st_ = scf_solve(obj, unit(np.random.default_rng(seed), n))
    assert st_.status == "converged" and st_.residual <= 1e-10 and st_.iteration <= 500
    assert all(d < 0 for d in st_.decrements)
    assert all(b <= a + 1e-14 * (1 + abs(a)) for a, b in zip(st_.history, st_.history[1:]))


def test_inner_matches_sampling_oracle():
    for seed in range(3):
        s = random_dh(2, seed)
        J, R, Q = (np.asarray(m) for m in (s.J, s.R, s.Q))
        for w in (-0.5, 0.0, 0.7):
            lib = sd_inner(s, w).value
            ref, raw = sd_inner_oracle(J, R, Q, w, count=20000)
            assert lib <= raw + 1e-12
            assert lib == pytest.approx(ref, abs=1e-8)


def test_nullspace_branch_wins():
    s = DHSystem(np.zeros((2, 2)), np.diag([1.0, 0.0]))
    inner = sd_inner(s, 0.5)
    assert inner.branch == "nullspace"
    assert inner.value == pytest.approx(0.25)
    assert inner.nullspace_value == pytest.approx(0.25)


@pytest.mark.parametrize("key", sorted(FROZEN_RADIUS))
def test_frozen_radius_and_bounds(key):
    s = random_dh(*key)
    r = sd_radius(s)
    assert r.value == pytest.approx(FROZEN_RADIUS[key], rel=1e-8)
    chk = r.diagnostics["certificate_check"]
    assert chk["member"] and chk["joint_norm"] == pytest.approx(r.value, rel=1e-6)
    assert chk["eig_distance"] <= 1e-6
    b = sd_bounds(s)
    lo, up = FROZEN_BOUNDS[key]
    assert b.lower == pytest.approx(lo, rel=1e-8) and b.upper == pytest.approx(up, rel=1e-8)
    assert b.lower - 1e-6 <= r.value**2 <= b.upper + 1e-6
    assert si_radius(s).value ** 2 >= b.lower - 1e-6


def test_brake_certificate_and_branch():
    s = brake_squeal(2, seed=0)
    r = sd_radius(s)
    assert r.diagnostics["branch"] in ("nepv", "nullspace")
    chk = r.diagnostics["certificate_check"]
    assert chk["member"] and chk["eig_distance"] <= 1e-6
    assert chk["joint_norm"] == pytest.approx(r.value, rel=1e-6)


def test_scaling_homogeneity():
    s = random_dh(2, 5)
    a = sd_radius(s).value
    assert sd_radius(s.scaled(0.5)).value == pytest.approx(0.5 * a, rel=1e-7)


def test_unstable_gives_zero():
    r = sd_radius(DHSystem(np.zeros((2, 2)), np.zeros((2, 2))))
    assert r.value == 0 and r.diagnostics["stable"] is False

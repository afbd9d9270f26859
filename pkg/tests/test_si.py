import numpy as np
import pytest

from dhradius.sd import sd_radius
from dhradius.si import r_is_definite, si_inner, si_radius, stacked_pencil
from dhradius.system import DHSystem, PerturbationClass, brake_squeal, random_dh
from dhradius.unstructured import unstructured_radius
from oracles import dense_min, si_sigma

FROZEN = {(3, 0): 0.4302919852361606, (4, 0): 0.46623222201406263}


def test_identity():
    r = si_radius(DHSystem(np.zeros((3, 3)), np.eye(3)))
    assert r.value == pytest.approx(1.0, abs=1e-12) and abs(r.omega_star) < 1e-8
    assert r.is_exact and r.diagnostics["branch"] == "exact"


def test_stacked_pencil_shape():
    s = random_dh(3, 0)
    G = stacked_pencil(s, 0.4)
    assert G.shape == (6, 3)
    # sigma_min of G Q^{-1} equals the inner value
    Qi = np.linalg.inv(s.Q)
    assert np.linalg.svd(G @ Qi, compute_uv=False)[-1] == pytest.approx(si_inner(s, 0.4)[0], rel=1e-12)


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_oracle_and_certificate(key):
    s = random_dh(*key)
    r = si_radius(s)
    assert r.value == pytest.approx(FROZEN[key], rel=1e-9)
    J, R, Q = (np.asarray(m) for m in (s.J, s.R, s.Q))
    v, _ = dense_min(lambda w: si_sigma(J, R, Q, w), -4, 4, 4001)
    assert r.value <= v + 1e-12
    chk = r.diagnostics["certificate_check"]
    assert chk["member"]
    assert chk["joint_norm"] == pytest.approx(r.value, rel=1e-6)
    assert chk["eig_distance"] <= 1e-6


def test_singular_r_lower_bound():
    s = brake_squeal(2, seed=0)
    r = si_radius(s)
    assert not r.is_exact and r.certificate is None and r.diagnostics["branch"] == "lower-bound"
    assert r.value <= sd_radius(s).value + 1e-6


def test_r_is_definite():
    assert r_is_definite(np.eye(2))
    assert not r_is_definite(np.diag([1.0, 0.0]))


def test_dominates_unstructured():
    for seed in range(3):
        s = random_dh(3, seed)
        assert si_radius(s).value >= unstructured_radius(s).value - 1e-9

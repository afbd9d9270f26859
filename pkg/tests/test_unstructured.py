import math

import numpy as np
import pytest

from dhradius.system import DHSystem, random_dh
from dhradius.unstructured import transfer_norm, unstructured_radius
from oracles import dense_min, transfer_inv_norm

# frozen from a 20001-point frequency sweep (see oracles.dense_min) plus refinement
FROZEN = {(3, 0): 0.2661264606110112, (4, 0): 0.2109200481660081}


def test_identity():
    r = unstructured_radius(DHSystem(np.zeros((3, 3)), np.eye(3)))
    assert r.value == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert abs(r.omega_star) < 1e-8


def test_scalar_closed_form():
    s = DHSystem(np.array([[2j]]), np.array([[0.5]]), np.array([[2.0]]))
    # A = -1 + 4i, so |Q / (iw - A)| = 2 / |1 + i(w - 4)| peaks at w = 4 with value 2
    r = unstructured_radius(s)
    assert r.value == pytest.approx(1.0 / (2 * math.sqrt(2)), rel=1e-10)
    assert r.omega_star == pytest.approx(4.0, abs=1e-6)


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_and_oracle(key):
    s = random_dh(*key)
    r = unstructured_radius(s)
    assert r.value == pytest.approx(FROZEN[key], rel=1e-9)
    J, R, Q = (np.asarray(m) for m in (s.J, s.R, s.Q))
    v, _ = dense_min(lambda w: transfer_inv_norm(J, R, Q, w), -4, 4, 4001)
    assert r.value <= v / math.sqrt(2) + 1e-12
    assert 1 / transfer_norm(s, r.omega_star) / math.sqrt(2) == pytest.approx(r.value, rel=1e-14)


def test_unstable_gives_zero():
    r = unstructured_radius(DHSystem(np.zeros((2, 2)), np.zeros((2, 2))))
    assert r.value == 0 and r.diagnostics["stable"] is False


def test_scaling_homogeneity():
    s = random_dh(3, 4)
    a = unstructured_radius(s).value
    b = unstructured_radius(s.scaled(3.0)).value
    assert b == pytest.approx(3 * a, rel=1e-8)

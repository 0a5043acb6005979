"""Full-space walk engine versus definitions and dense references."""

import math

import numpy as np
import pytest

from barrierwalk.phases import corrected_eta
from barrierwalk.walk import (
    WalkParams,
    apply_coin,
    apply_lazy_shift,
    apply_oracle,
    coin_index,
    evolve,
    initial_state,
    neighbor_vertex,
    step,
    success_probability,
    vertex_count,
)

from oracles import (
    dense_coin,
    dense_oracle,
    dense_shift,
    dense_step,
    pair_index,
    random_state,
)


def test_params_validation():
    with pytest.raises(ValueError):
        WalkParams(2)
    with pytest.raises(ValueError):
        WalkParams(8, phi=-0.1)
    with pytest.raises(ValueError):
        WalkParams(8, phi=math.pi / 2 + 0.01)
    with pytest.raises(ValueError):
        WalkParams(8, marked=8)
    params = WalkParams(8, phi=0.3)
    assert params.alpha == math.cos(0.3)
    assert params.beta == 1j * math.sin(0.3)
    assert params.dim == 56


def test_index_mapping_round_trip():
    n = 7
    for v in range(n):
        for w in range(n):
            if v == w:
                continue
            c = coin_index(n, v, w)
            assert 0 <= c < n - 1
            assert neighbor_vertex(n, v, c) == w
    with pytest.raises(ValueError):
        coin_index(n, 3, 3)


def test_vertex_count():
    assert vertex_count(6) == 3
    assert vertex_count(1024 * 1023) == 1024
    for bad in (0, 5, 7, 100):
        with pytest.raises(ValueError):
            vertex_count(bad)


def test_initial_state_uniform():
    state = initial_state(WalkParams(3))
    assert state.shape == (6,)
    np.testing.assert_allclose(state, 1.0 / math.sqrt(6.0), rtol=0, atol=1e-15)
    assert initial_state(WalkParams(1024)).shape == (1024 * 1023,)


@pytest.mark.parametrize("n", [3, 10, 100])
def test_initial_success_probability(n):
    state = initial_state(WalkParams(n))
    assert success_probability(state, 0) == pytest.approx(1.0 / n, abs=1e-15)


def test_lazy_shift_phi0_is_flip_flop():
    n = 5
    state = random_state(n * (n - 1), seed=11)
    shifted = apply_lazy_shift(state, 0.0)
    for v in range(n):
        for w in range(n):
            if v != w:
                assert shifted[pair_index(n, v, w)] == state[pair_index(n, w, v)]


def test_lazy_shift_phi0_involution():
    state = random_state(30, seed=12)
    twice = apply_lazy_shift(apply_lazy_shift(state, 0.0), 0.0)
    assert np.abs(twice - state).max() < 1e-14


def test_lazy_shift_blocked_multiplies_by_i():
    # cos(pi/2) only underflows to ~6e-17, hence the tolerance
    state = random_state(30, seed=13)
    shifted = apply_lazy_shift(state, math.pi / 2)
    np.testing.assert_allclose(shifted, 1j * state, rtol=0, atol=1e-15)


def test_lazy_shift_preserves_norm():
    state = random_state(8 * 7, seed=14)
    assert abs(np.linalg.norm(apply_lazy_shift(state, 0.3)) - 1.0) < 1e-12


@pytest.mark.parametrize("eta", [0.0, 0.7, -1.8555291827073437])
def test_coin_matches_dense(eta):
    n = 6
    state = random_state(n * (n - 1), seed=21)
    expected = dense_coin(n, eta) @ state
    np.testing.assert_allclose(apply_coin(state, eta), expected, rtol=0, atol=1e-14)


def test_coin_eigenblocks():
    n, eta = 6, 0.9
    dim = n * (n - 1)
    # all-equal coin block is an e^{i eta} eigenvector of the coin
    uniform = np.zeros(dim, dtype=complex)
    uniform[0 : n - 1] = 1.0 / math.sqrt(n - 1.0)
    out = apply_coin(uniform, eta)
    np.testing.assert_allclose(out, np.exp(1j * eta) * uniform, rtol=0, atol=1e-14)
    # zero-mean block gets negated
    skew = np.zeros(dim, dtype=complex)
    skew[0], skew[1] = 1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)
    np.testing.assert_allclose(apply_coin(skew, eta), -skew, rtol=0, atol=1e-14)


def test_oracle_eta0_sign_flip():
    n, marked = 6, 2
    state = random_state(n * (n - 1), seed=31)
    flipped = apply_oracle(state, marked, 0.0)
    lo, hi = marked * (n - 1), (marked + 1) * (n - 1)
    np.testing.assert_allclose(flipped[lo:hi], -state[lo:hi], rtol=0, atol=1e-15)
    assert np.array_equal(np.delete(flipped, range(lo, hi)), np.delete(state, range(lo, hi)))


def test_oracle_eta_pi_is_identity():
    state = random_state(30, seed=32)
    np.testing.assert_allclose(
        apply_oracle(state, 1, math.pi), state, rtol=0, atol=1e-15
    )


def test_oracle_matches_dense_and_preserves_block_norm():
    n, marked, eta = 8, 3, 0.5
    state = random_state(n * (n - 1), seed=33)
    out = apply_oracle(state, marked, eta)
    np.testing.assert_allclose(
        out, dense_oracle(n, marked, eta) @ state, rtol=0, atol=1e-14
    )
    lo, hi = marked * (n - 1), (marked + 1) * (n - 1)
    assert np.linalg.norm(out[lo:hi]) == pytest.approx(
        np.linalg.norm(state[lo:hi]), abs=1e-14
    )
    assert np.array_equal(np.delete(out, range(lo, hi)), np.delete(state, range(lo, hi)))
    with pytest.raises(ValueError):
        apply_oracle(state, n, eta)


@pytest.mark.parametrize("n", [5, 6])
@pytest.mark.parametrize("phi", [0.0, 0.3])
@pytest.mark.parametrize("marked", [0, 2])
def test_step_matches_dense_operator(n, phi, marked):
    # the load-bearing test: structural update == explicit matrix product,
    # including the oracle -> coin -> shift application order
    eta = corrected_eta(phi, n)
    params = WalkParams(n, phi=phi, eta=eta, marked=marked)
    state = random_state(n * (n - 1), seed=41 + n + marked)
    expected = dense_step(n, phi, eta, marked) @ state
    np.testing.assert_allclose(step(state, params), expected, rtol=0, atol=1e-13)


def test_step_rejects_mismatched_state():
    with pytest.raises(ValueError):
        step(initial_state(WalkParams(5)), WalkParams(6))


def test_step_norm_drift_200():
    params = WalkParams(64, phi=0.3, eta=corrected_eta(0.3, 64))
    state = initial_state(params)
    worst = 0.0
    for _ in range(200):
        state = step(state, params)
        worst = max(worst, abs(np.linalg.norm(state) - 1.0))
    assert worst < 1e-10


def test_success_probability_concentrated():
    n = 6
    state = np.zeros(n * (n - 1), dtype=complex)
    state[0 : n - 1] = 1.0 / math.sqrt(n - 1.0)
    assert success_probability(state, 0) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        success_probability(state, n)


def test_evolve_basics():
    probs = evolve(WalkParams(16), 0)
    assert probs.shape == (1,)
    assert probs[0] == pytest.approx(1.0 / 16.0, abs=1e-15)
    probs = evolve(WalkParams(16, phi=0.2), 25)
    assert probs.shape == (26,)
    assert probs.min() >= 0.0 and probs.max() <= 1.0 + 1e-12
    with pytest.raises(ValueError):
        evolve(WalkParams(16), -1)


def test_symmetry_classes_stay_flat():
    # premise of the 3D reduction: amplitudes stay equal within each class
    n, phi = 16, 0.3
    params = WalkParams(n, phi=phi, eta=corrected_eta(phi, n))
    v = np.repeat(np.arange(n), n - 1)
    c = np.tile(np.arange(n - 1), n)
    w = c + (c >= v)
    classes = [
        np.flatnonzero(v == 0),
        np.flatnonzero((v != 0) & (w == 0)),
        np.flatnonzero((v != 0) & (w != 0)),
    ]
    state = initial_state(params)
    for _ in range(100):
        state = step(state, params)
        for idx in classes:
            block = state[idx]
            assert np.abs(block - block.mean()).max() < 1e-10


def test_blocked_uncorrected_walk_stays_flat():
    # with beta = 1 nothing hops, so the marked vertex never accumulates mass
    probs = evolve(WalkParams(16, phi=math.pi / 2), 10)
    np.testing.assert_allclose(probs, 1.0 / 16.0, rtol=0, atol=1e-14)


def test_barrier_free_anchor_half_probability():
    # N=1024 error-free walk crosses 1/2 around step 36
    probs = evolve(WalkParams(1024), 36)
    assert 0.45 <= probs[36] <= 0.55

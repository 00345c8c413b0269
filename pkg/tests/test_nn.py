import math

import numpy as np
import pytest

from sparsefactor.errors import InvalidDimensionError
from sparsefactor.nn import AdamState, Mlp, adam_step, mlp_backward, mlp_forward


def fixed_net():
    return Mlp([2, 2, 1], params={
        "w0": np.array([[0.5, -1.0], [0.25, 2.0]]),
        "b0": np.array([0.1, 0.0]),
        "w1": np.array([[1.0], [-0.5]]),
        "b1": np.array([0.2]),
    })


def test_identity_layer_passes_input_through(rng):
    m = Mlp([3, 3], params={"w0": np.eye(3), "b0": np.zeros(3)})
    x = rng.standard_normal((4, 3))
    np.testing.assert_array_equal(mlp_forward(m, x), x)


def test_fixed_tanh_net_matches_hand_trace():
    out = mlp_forward(fixed_net(), np.ones((1, 2)))
    expected = math.tanh(0.85) - 0.5 * math.tanh(1.0) + 0.2
    assert out.shape == (1, 1)
    assert out[0, 0] == pytest.approx(expected, abs=1e-15)


def test_zero_weights_give_last_bias(rng):
    m = Mlp([4, 5, 3], seed=1)
    for k in m.params:
        m.params[k][...] = 0.0
    m.params["b1"][:] = [1.0, -2.0, 0.5]
    out = mlp_forward(m, rng.standard_normal((6, 4)))
    np.testing.assert_array_equal(out, np.tile([1.0, -2.0, 0.5], (6, 1)))


def test_identity_net_passes_gradient(rng):
    m = Mlp([3, 3], params={"w0": np.eye(3), "b0": np.zeros(3)})
    g = rng.standard_normal((5, 3))
    _, input_grads = mlp_backward(m, rng.standard_normal((5, 3)), g)
    np.testing.assert_array_equal(input_grads, g)


def test_zero_upstream_gives_zero_gradients(rng):
    m = Mlp([3, 4, 2], seed=2)
    grads, input_grads = mlp_backward(m, rng.standard_normal((5, 3)), np.zeros((5, 2)))
    assert not np.any(input_grads)
    assert all(not np.any(g) for g in grads.values())


@pytest.mark.parametrize("activation", ["tanh", "relu"])
def test_gradients_match_finite_differences(activation, rng):
    m = Mlp([3, 6, 2], activation=activation, seed=5)
    x = rng.standard_normal((4, 3))
    target = rng.standard_normal((4, 2))

    def loss():
        return 0.5 * np.sum((m.forward(x) - target) ** 2)

    grads, input_grads = mlp_backward(m, x, m.forward(x) - target)
    h = 1e-6
    for name, p in m.params.items():
        fd = np.empty_like(p)
        for idx in np.ndindex(p.shape):
            saved = p[idx]
            p[idx] = saved + h
            up = loss()
            p[idx] = saved - h
            down = loss()
            p[idx] = saved
            fd[idx] = (up - down) / (2 * h)
        np.testing.assert_allclose(grads[name], fd, rtol=1e-6, atol=1e-8)

    fd_x = np.empty_like(x)
    for idx in np.ndindex(x.shape):
        saved = x[idx]
        x[idx] = saved + h
        up = loss()
        x[idx] = saved - h
        down = loss()
        x[idx] = saved
        fd_x[idx] = (up - down) / (2 * h)
    np.testing.assert_allclose(input_grads, fd_x, rtol=1e-6, atol=1e-8)


def test_initialisation_is_seeded_glorot():
    a, b = Mlp([10, 20, 5], seed=3), Mlp([10, 20, 5], seed=3)
    np.testing.assert_array_equal(a.params["w1"], b.params["w1"])
    assert np.abs(a.params["w0"]).max() <= math.sqrt(6.0 / 30)
    assert not np.any(a.params["b0"])


def test_bad_widths_and_input():
    with pytest.raises(InvalidDimensionError):
        Mlp([3])
    with pytest.raises(InvalidDimensionError):
        Mlp([3, 2]).forward(np.ones((2, 4)))
    with pytest.raises(InvalidDimensionError):
        Mlp([3, 2], activation="sigmoid")


def test_adam_first_step_is_about_lr():
    params = {"p": np.zeros(3)}
    state = AdamState(lr=1e-3)
    adam_step(params, {"p": np.array([3.0, -0.5, 1e-2])}, state)
    np.testing.assert_allclose(params["p"], [-1e-3, 1e-3, -1e-3], rtol=1e-5)


def test_adam_zero_gradient_keeps_params():
    params = {"p": np.array([1.0, -2.0])}
    adam_step(params, {"p": np.zeros(2)}, AdamState())
    np.testing.assert_array_equal(params["p"], [1.0, -2.0])


def test_adam_two_steps_follow_recurrences():
    lr, b1, b2, eps, g, p = 0.01, 0.9, 0.999, 1e-8, 0.3, 1.0
    params = {"p": np.array([p])}
    state = AdamState(lr=lr)
    m = v = 0.0
    for t in (1, 2):
        adam_step(params, {"p": np.array([g])}, state)
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        p -= lr * (m / (1 - b1 ** t)) / (math.sqrt(v / (1 - b2 ** t)) + eps)
    assert state.t == 2
    assert params["p"][0] == pytest.approx(p, rel=1e-12)


def test_adam_shape_mismatch():
    with pytest.raises(InvalidDimensionError):
        adam_step({"p": np.zeros(2)}, {"p": np.zeros(3)}, AdamState())

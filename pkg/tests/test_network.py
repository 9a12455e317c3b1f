import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netrules import network as nw
from netrules.errors import DimensionMismatch, InvalidConfig

from conftest import make_view


def small_net(w_ih, w_ho, b_h=None, b_o=None, mask_ih=None, mask_ho=None):
    w_ih = np.atleast_2d(np.asarray(w_ih, dtype=float))
    w_ho = np.atleast_2d(np.asarray(w_ho, dtype=float))
    d, h = w_ih.shape
    _, k = w_ho.shape
    return nw.Network(
        w_ih, np.ones((d, h), bool) if mask_ih is None else mask_ih,
        w_ho, np.ones((h, k), bool) if mask_ho is None else mask_ho,
        np.zeros(h) if b_h is None else np.asarray(b_h, dtype=float),
        np.zeros(k) if b_o is None else np.asarray(b_o, dtype=float),
    )


# ---- init ----

def test_init_connection_count():
    cfg = nw.TrainConfig(seed=7)
    net = nw.init(9, 1, 2, cfg)
    assert net.active_connections() == 11  # 9*1 + 1*2
    assert net.node_count() == 12


def test_init_deterministic():
    cfg = nw.TrainConfig(seed=7)
    a, b = nw.init(9, 1, 2, cfg), nw.init(9, 1, 2, cfg)
    assert np.array_equal(a.w_ih, b.w_ih)
    assert np.array_equal(a.w_ho, b.w_ho)
    assert np.array_equal(a.b_h, b.b_h)
    assert np.array_equal(a.b_o, b.b_o)


def test_init_rejects_zero_hidden():
    with pytest.raises(InvalidConfig):
        nw.init(9, 0, 2, nw.TrainConfig())


def test_init_range_respected():
    cfg = nw.TrainConfig(init_low=-0.1, init_high=0.1, seed=1)
    net = nw.init(5, 3, 2, cfg)
    for arr in (net.w_ih, net.w_ho, net.b_h, net.b_o):
        assert (np.abs(arr) <= 0.1).all()


def test_config_validation():
    with pytest.raises(InvalidConfig):
        nw.TrainConfig(learning_rate=0.05).validate()
    with pytest.raises(InvalidConfig):
        nw.TrainConfig(learning_rate=1.5).validate()
    with pytest.raises(InvalidConfig):
        nw.TrainConfig(init_low=-2.0).validate()


# ---- forward ----

def test_forward_all_zero_weights():
    net = small_net(np.zeros((3, 2)), np.zeros((2, 2)))
    h, o = net.forward([0.3, 0.7, 0.1])
    assert np.array_equal(h, np.zeros(2))
    assert np.array_equal(o, 0.5 * np.ones(2))


def test_forward_1_1_1_reference_values():
    # independent evaluation: tanh(1) = 0.7615942, 1/(1+e^-tanh(1)) = 0.6816997
    net = small_net([[1.0]], [[1.0]])
    h, o = net.forward([1.0])
    assert h[0] == pytest.approx(0.76159, abs=1e-5)
    assert o[0] == pytest.approx(0.68170, abs=1e-5)
    assert h[0] == pytest.approx(math.tanh(1.0), rel=1e-12)
    assert o[0] == pytest.approx(1.0 / (1.0 + math.exp(-math.tanh(1.0))), rel=1e-12)


def test_forward_sign_selects_class():
    # symmetric output weights: positive hidden activation favours output 0
    net = small_net([[1.0]], [[3.0354, -3.0354]])
    x = np.array([[math.atanh(0.987)]])
    assert net.predict(x)[0] == 0
    h, o = net.forward(x[0])
    assert h[0] == pytest.approx(0.987, abs=1e-9)
    assert o[0] > o[1]


def test_forward_dimension_mismatch():
    net = small_net(np.zeros((3, 1)), np.zeros((1, 2)))
    with pytest.raises(DimensionMismatch):
        net.forward([1.0, 2.0])


# ---- activations stay in range ----

@given(st.floats(min_value=-30, max_value=30))
def test_activation_ranges_strict(y):
    assert -1.0 <= nw.tanh_act(y) <= 1.0
    assert 0.0 < nw.sigmoid(y) < 1.0


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_activation_ranges_closed_everywhere(y):
    assert -1.0 <= nw.tanh_act(y) <= 1.0
    assert 0.0 <= nw.sigmoid(y) <= 1.0


# ---- training ----

def test_train_two_pattern_toy(toy_two_pattern):
    # oracle: a perfect 1-hidden-node solution exists by direct construction
    oracle = small_net([[4.0]], [[-4.0, 4.0]], b_h=[-2.0])
    assert nw.accuracy(oracle, toy_two_pattern) == 1.0

    cfg = nw.TrainConfig(learning_rate=0.5, max_epochs=500, seed=11)
    net = nw.init(1, 1, 2, cfg)
    trained, trace = nw.train(net, toy_two_pattern, cfg)
    assert nw.accuracy(trained, toy_two_pattern) == 1.0
    assert trace.epochs_run <= 500


def test_train_zero_epochs_keeps_network(toy_two_pattern):
    cfg = nw.TrainConfig(seed=2, max_epochs=0)
    net = nw.init(1, 1, 2, cfg)
    trained, trace = nw.train(net, toy_two_pattern, cfg)
    assert trace.epochs_run == 0 and trace.epoch_errors == []
    assert np.array_equal(trained.w_ih, net.w_ih)
    assert np.array_equal(trained.w_ho, net.w_ho)


def test_train_errors_non_increasing_within_tolerance(toy_two_pattern):
    cfg = nw.TrainConfig(learning_rate=0.5, max_epochs=200, seed=5)
    net = nw.init(1, 1, 2, cfg)
    _, trace = nw.train(net, toy_two_pattern, cfg)
    e = trace.epoch_errors
    assert all(e[i + 1] <= e[i] * 1.05 for i in range(len(e) - 1))


def test_train_does_not_mutate_input(toy_two_pattern):
    cfg = nw.TrainConfig(seed=2, max_epochs=10)
    net = nw.init(1, 1, 2, cfg)
    before = net.w_ih.copy()
    nw.train(net, toy_two_pattern, cfg)
    assert np.array_equal(net.w_ih, before)


def test_train_seed_determinism(toy_two_pattern):
    cfg = nw.TrainConfig(learning_rate=0.5, max_epochs=50, seed=9)
    a, ta = nw.train(nw.init(1, 2, 2, cfg), toy_two_pattern, cfg)
    b, tb = nw.train(nw.init(1, 2, 2, cfg), toy_two_pattern, cfg)
    assert np.array_equal(a.w_ih, b.w_ih) and np.array_equal(a.w_ho, b.w_ho)
    assert ta.epoch_errors == tb.epoch_errors


def test_train_respects_masks():
    rng = np.random.default_rng(3)
    X = rng.uniform(0, 1, size=(40, 3))
    y = (X[:, 0] > 0.5).astype(np.int64)
    view = make_view(X, y)
    cfg = nw.TrainConfig(learning_rate=0.5, max_epochs=30, seed=4)
    net = nw.init(3, 2, 2, cfg)
    net.mask_ih[1, 0] = False
    net.mask_ho[1, 1] = False
    net._enforce_masks()
    trained, _ = nw.train(net, view, cfg)
    assert trained.w_ih[1, 0] == 0.0
    assert trained.w_ho[1, 1] == 0.0


def test_target_error_stops_early(toy_two_pattern):
    cfg = nw.TrainConfig(learning_rate=1.0, max_epochs=5000, target_error=0.05, seed=11)
    net = nw.init(1, 1, 2, cfg)
    _, trace = nw.train(net, toy_two_pattern, cfg)
    assert trace.epochs_run < 5000
    assert trace.epoch_errors[-1] <= 0.05


# ---- gradients ----

def test_gradient_zero_at_exact_target():
    net = small_net(np.zeros((2, 2)), np.zeros((2, 2)))
    g = nw.loss_gradient(net, [0.2, 0.4], [0.5, 0.5])  # outputs are exactly 0.5
    assert np.allclose(g.w_ih, 0) and np.allclose(g.w_ho, 0)
    assert np.allclose(g.b_h, 0) and np.allclose(g.b_o, 0)


def test_gradient_masked_weight_is_zero():
    rng = np.random.default_rng(0)
    mask_ih = np.ones((3, 2), bool)
    mask_ih[2, 1] = False
    net = small_net(rng.normal(size=(3, 2)), rng.normal(size=(2, 2)), mask_ih=mask_ih)
    g = nw.loss_gradient(net, rng.uniform(size=3), [1.0, 0.0])
    assert g.w_ih[2, 1] == 0.0


def _fd_gradient(net, x, t, step=1e-5):
    """Central finite differences through the mask-aware forward pass."""
    out = nw.Gradients(
        w_ih=np.zeros_like(net.w_ih), w_ho=np.zeros_like(net.w_ho),
        b_h=np.zeros_like(net.b_h), b_o=np.zeros_like(net.b_o),
    )
    for arr, g in ((net.w_ih, out.w_ih), (net.w_ho, out.w_ho),
                   (net.b_h, out.b_h), (net.b_o, out.b_o)):
        flat, gflat = arr.ravel(), g.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            up = nw.example_loss(net, x, t)
            flat[i] = orig - step
            down = nw.example_loss(net, x, t)
            flat[i] = orig
            gflat[i] = (up - down) / (2 * step)
    return out


def test_gradient_matches_finite_differences_100_cases():
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 5))
        h = int(rng.integers(1, 4))
        k = int(rng.integers(2, 4))
        net = small_net(
            rng.normal(scale=0.8, size=(d, h)), rng.normal(scale=0.8, size=(h, k)),
            b_h=rng.normal(scale=0.5, size=h), b_o=rng.normal(scale=0.5, size=k),
            mask_ih=rng.uniform(size=(d, h)) > 0.2,
            mask_ho=rng.uniform(size=(h, k)) > 0.2,
        )
        x = rng.uniform(size=d)
        t = np.zeros(k)
        t[rng.integers(k)] = 1.0
        ga = nw.loss_gradient(net, x, t)
        gf = _fd_gradient(net, x, t)
        for a, f in ((ga.w_ih, gf.w_ih), (ga.w_ho, gf.w_ho),
                     (ga.b_h, gf.b_h), (ga.b_o, gf.b_o)):
            denom = np.maximum(np.maximum(np.abs(a), np.abs(f)), 1e-8)
            rel = np.abs(a - f) / denom
            significant = np.maximum(np.abs(a), np.abs(f)) > 1e-7
            if significant.any():
                worst = max(worst, float(rel[significant].max()))
    assert worst <= 1e-4


# ---- accuracy ----

def test_accuracy_constant_output_ties_to_class0():
    net = small_net(np.zeros((2, 1)), np.zeros((1, 2)))
    view = make_view([[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]], [0, 1, 0])
    assert nw.accuracy(net, view) == pytest.approx(2 / 3)


def test_accuracy_single_correct_example():
    net = small_net([[2.0]], [[-3.0, 3.0]])
    view = make_view([[1.0]], [1])
    assert nw.accuracy(net, view) == 1.0


# ---- snapshots ----

def test_snapshot_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(8)
    net = small_net(
        rng.normal(size=(4, 3)), rng.normal(size=(3, 2)),
        b_h=rng.normal(size=3), b_o=rng.normal(size=2),
        mask_ih=rng.uniform(size=(4, 3)) > 0.3,
        mask_ho=rng.uniform(size=(3, 2)) > 0.3,
    )
    p = tmp_path / "network.txt"
    nw.save(net, p)
    loaded = nw.load(p)
    assert np.array_equal(net.w_ih, loaded.w_ih)
    assert np.array_equal(net.w_ho, loaded.w_ho)
    assert np.array_equal(net.mask_ih, loaded.mask_ih)
    assert np.array_equal(net.mask_ho, loaded.mask_ho)
    assert np.array_equal(net.b_h, loaded.b_h)
    assert np.array_equal(net.b_o, loaded.b_o)

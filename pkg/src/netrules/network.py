"""Three-layer feedforward classifier with masked weights.

Hidden activation is tanh, output activation is the logistic sigmoid, and
both layers carry a bias fed by a fixed input of 1. Training is per-pattern
gradient descent in file order on the summed squared error against one-hot
targets; the gradient convention includes the factor 2 from d/do (o - t)^2.
Masked-off weights are stored as exactly 0 and never receive updates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import DimensionMismatch, InvalidConfig


def tanh_act(y):
    """Hidden node activation, (e^y - e^-y) / (e^y + e^-y), range [-1, 1]."""
    return np.tanh(y)


def sigmoid(y):
    """Output node activation, 1 / (1 + e^-y), computed overflow-free."""
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y1 = np.atleast_1d(y)
    out = np.empty_like(y1)
    pos = y1 >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-y1[pos]))
    ey = np.exp(y1[~pos])
    out[~pos] = ey / (1.0 + ey)
    return out[0] if scalar else out


def _sigmoid_fast(y):
    # hot-loop variant: exact for |y| < 709, saturates cleanly without warnings
    return 1.0 / (1.0 + np.exp(np.minimum(-y, 709.0)))


@dataclass
class TrainConfig:
    learning_rate: float = 0.5
    max_epochs: int = 200
    target_error: float = 0.0
    init_low: float = -1.0
    init_high: float = 1.0
    seed: int = 0

    def validate(self):
        if not 0.1 <= self.learning_rate <= 1.0:
            raise InvalidConfig(f"learning_rate {self.learning_rate} outside [0.1, 1.0]")
        if self.max_epochs < 0:
            raise InvalidConfig("max_epochs must be >= 0")
        if self.target_error < 0:
            raise InvalidConfig("target_error must be >= 0")
        if not -1.0 <= self.init_low < self.init_high <= 1.0:
            raise InvalidConfig(
                f"init range [{self.init_low}, {self.init_high}] must be inside [-1, 1]"
            )


@dataclass
class TrainTrace:
    """Per-epoch summed squared error, as accumulated during the updates."""

    epoch_errors: list[float] = field(default_factory=list)

    @property
    def epochs_run(self) -> int:
        return len(self.epoch_errors)


class Network:
    """Weight matrices, boolean masks, and biases for one classifier."""

    def __init__(self, w_ih, mask_ih, w_ho, mask_ho, b_h, b_o):
        self.w_ih = np.asarray(w_ih, dtype=float)
        self.mask_ih = np.asarray(mask_ih, dtype=bool)
        self.w_ho = np.asarray(w_ho, dtype=float)
        self.mask_ho = np.asarray(mask_ho, dtype=bool)
        self.b_h = np.asarray(b_h, dtype=float)
        self.b_o = np.asarray(b_o, dtype=float)
        d, h = self.w_ih.shape
        h2, k = self.w_ho.shape
        if h2 != h or self.mask_ih.shape != (d, h) or self.mask_ho.shape != (h, k):
            raise DimensionMismatch("inconsistent weight/mask shapes")
        if self.b_h.shape != (h,) or self.b_o.shape != (k,):
            raise DimensionMismatch("inconsistent bias shapes")
        self._enforce_masks()

    def _enforce_masks(self):
        self.w_ih[~self.mask_ih] = 0.0
        self.w_ho[~self.mask_ho] = 0.0

    @property
    def n_in(self) -> int:
        return self.w_ih.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.w_ih.shape[1]

    @property
    def n_out(self) -> int:
        return self.w_ho.shape[1]

    def copy(self) -> "Network":
        return Network(
            self.w_ih.copy(), self.mask_ih.copy(),
            self.w_ho.copy(), self.mask_ho.copy(),
            self.b_h.copy(), self.b_o.copy(),
        )

    # -- structure accounting (biases excluded throughout) --

    def active_connections(self) -> int:
        return int(self.mask_ih.sum() + self.mask_ho.sum())

    def live_hidden(self) -> np.ndarray:
        """Hidden nodes with at least one active incoming and outgoing weight."""
        return self.mask_ih.any(axis=0) & self.mask_ho.any(axis=1)

    def live_inputs(self) -> np.ndarray:
        """Input nodes with at least one active outgoing weight."""
        return self.mask_ih.any(axis=1)

    def node_count(self) -> int:
        return int(self.live_inputs().sum() + self.live_hidden().sum() + self.n_out)

    # -- forward passes --

    def forward(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Hidden and output activations for a single feature vector."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_in,):
            raise DimensionMismatch(f"expected {self.n_in} features, got {x.shape}")
        h = tanh_act(x @ (self.w_ih * self.mask_ih) + self.b_h)
        o = sigmoid(h @ (self.w_ho * self.mask_ho) + self.b_o)
        return h, o

    def forward_batch(self, X) -> tuple[np.ndarray, np.ndarray]:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_in:
            raise DimensionMismatch(f"expected (n, {self.n_in}) features, got {X.shape}")
        H = tanh_act(X @ (self.w_ih * self.mask_ih) + self.b_h)
        O = sigmoid(H @ (self.w_ho * self.mask_ho) + self.b_o)
        return H, O

    def hidden_activations(self, X) -> np.ndarray:
        return self.forward_batch(X)[0]

    def predict(self, X) -> np.ndarray:
        """Predicted class indices; argmax ties break to the lowest index."""
        _, O = self.forward_batch(X)
        return np.argmax(O, axis=1)


def init(n_in: int, n_hidden: int, n_out: int, cfg: TrainConfig,
         rng: np.random.Generator | None = None) -> Network:
    """Fresh all-active network with uniform weights from cfg's init range.

    Draw order is fixed (w_ih, b_h, w_ho, b_o) so equal seeds give
    bit-identical networks.
    """
    cfg.validate()
    if n_in < 1 or n_hidden < 1 or n_out < 1:
        raise InvalidConfig("node counts must be >= 1")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.init_low, cfg.init_high
    w_ih = rng.uniform(lo, hi, size=(n_in, n_hidden))
    b_h = rng.uniform(lo, hi, size=n_hidden)
    w_ho = rng.uniform(lo, hi, size=(n_hidden, n_out))
    b_o = rng.uniform(lo, hi, size=n_out)
    return Network(w_ih, np.ones((n_in, n_hidden), bool), w_ho,
                   np.ones((n_hidden, n_out), bool), b_h, b_o)


def add_hidden_node(net: Network, cfg: TrainConfig, rng: np.random.Generator) -> Network:
    """Copy of net with one freshly initialized, fully connected hidden node."""
    lo, hi = cfg.init_low, cfg.init_high
    new_in = rng.uniform(lo, hi, size=(net.n_in, 1))
    new_bh = rng.uniform(lo, hi, size=1)
    new_out = rng.uniform(lo, hi, size=(1, net.n_out))
    return Network(
        np.hstack([net.w_ih, new_in]),
        np.hstack([net.mask_ih, np.ones((net.n_in, 1), bool)]),
        np.vstack([net.w_ho, new_out]),
        np.vstack([net.mask_ho, np.ones((1, net.n_out), bool)]),
        np.concatenate([net.b_h, new_bh]),
        net.b_o.copy(),
    )


def _check_view(net: Network, data: Dataset):
    if data.X is None:
        raise DimensionMismatch("dataset is not normalized (X is None)")
    if data.X.shape[1] != net.n_in:
        raise DimensionMismatch(
            f"network expects {net.n_in} inputs, dataset has {data.X.shape[1]}"
        )


def one_hot(y: np.ndarray, n_classes: int) -> np.ndarray:
    T = np.zeros((len(y), n_classes))
    T[np.arange(len(y)), y] = 1.0
    return T


def sum_squared_error(net: Network, data: Dataset) -> float:
    _check_view(net, data)
    _, O = net.forward_batch(data.X)
    T = one_hot(data.y, net.n_out)
    return float(((O - T) ** 2).sum())


def accuracy(net: Network, data: Dataset) -> float:
    """Fraction of examples whose argmax output matches the label."""
    _check_view(net, data)
    if data.n_examples == 0:
        raise DimensionMismatch("empty dataset view")
    return float((net.predict(data.X) == data.y).mean())


def train(net: Network, data: Dataset, cfg: TrainConfig,
          max_epochs: int | None = None) -> tuple[Network, TrainTrace]:
    """Per-pattern gradient descent in file order; returns a trained copy.

    Stops once an epoch's summed squared error falls to cfg.target_error or
    the epoch budget (cfg.max_epochs unless overridden) is spent. The input
    network is not modified.
    """
    cfg.validate()
    _check_view(net, data)
    if data.n_examples == 0:
        raise InvalidConfig("cannot train on an empty dataset view")
    epochs = cfg.max_epochs if max_epochs is None else max_epochs

    net = net.copy()
    w_ih, w_ho = net.w_ih, net.w_ho
    b_h, b_o = net.b_h, net.b_o
    m_ih = net.mask_ih.astype(float)
    m_ho = net.mask_ho.astype(float)
    all_active = bool(net.mask_ih.all() and net.mask_ho.all())
    X = np.ascontiguousarray(data.X)
    T = one_hot(data.y, net.n_out)
    # the factor 2 from d/do (o-t)^2 is folded into the step size
    lr2 = 2.0 * cfg.learning_rate
    trace = TrainTrace()

    for _ in range(epochs):
        sse = 0.0
        for p in range(X.shape[0]):
            x = X[p]
            h = np.tanh(x @ w_ih + b_h)
            o = _sigmoid_fast(h @ w_ho + b_o)
            e = o - T[p]
            sse += float(e @ e)
            do = e * (o - o * o)
            dh = (w_ho @ do) * (1.0 - h * h)
            g_ho = np.outer(h, do)
            g_ih = np.outer(x, dh)
            if not all_active:
                g_ho *= m_ho
                g_ih *= m_ih
            w_ho -= lr2 * g_ho
            b_o -= lr2 * do
            w_ih -= lr2 * g_ih
            b_h -= lr2 * dh
        trace.epoch_errors.append(sse)
        if sse <= cfg.target_error:
            break
    net._enforce_masks()
    return net, trace


@dataclass
class Gradients:
    w_ih: np.ndarray
    w_ho: np.ndarray
    b_h: np.ndarray
    b_o: np.ndarray


def loss_gradient(net: Network, x, target: np.ndarray) -> Gradients:
    """Analytic gradient of sum_k (o_k - t_k)^2 for one example.

    Gradients of masked weights are reported as exactly 0.
    """
    target = np.asarray(target, dtype=float)
    if target.shape != (net.n_out,):
        raise DimensionMismatch(f"expected {net.n_out} targets, got {target.shape}")
    h, o = net.forward(x)
    do = 2.0 * (o - target) * o * (1.0 - o)
    dh = ((net.w_ho * net.mask_ho) @ do) * (1.0 - h * h)
    return Gradients(
        w_ih=np.outer(np.asarray(x, dtype=float), dh) * net.mask_ih,
        w_ho=np.outer(h, do) * net.mask_ho,
        b_h=dh,
        b_o=do,
    )


def example_loss(net: Network, x, target) -> float:
    _, o = net.forward(x)
    e = o - np.asarray(target, dtype=float)
    return float(e @ e)


def save(net: Network, path):
    """Flat text snapshot, one line per weight or bias, 17 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(net.n_in):
            for j in range(net.n_hidden):
                fh.write(f"w_ih {i} {j} {net.w_ih[i, j]:.17g} {int(net.mask_ih[i, j])}\n")
        for j in range(net.n_hidden):
            for k in range(net.n_out):
                fh.write(f"w_ho {j} {k} {net.w_ho[j, k]:.17g} {int(net.mask_ho[j, k])}\n")
        for j in range(net.n_hidden):
            fh.write(f"b_h {j} {net.b_h[j]:.17g}\n")
        for k in range(net.n_out):
            fh.write(f"b_o {k} {net.b_o[k]:.17g}\n")


def load(path) -> Network:
    """Inverse of :func:`save`; round-trips bit-exactly."""
    entries = {"w_ih": [], "w_ho": [], "b_h": [], "b_o": []}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            kind = parts[0]
            if kind in ("w_ih", "w_ho"):
                i, j, v, a = int(parts[1]), int(parts[2]), float(parts[3]), int(parts[4])
                entries[kind].append((i, j, v, a))
            elif kind in ("b_h", "b_o"):
                entries[kind].append((int(parts[1]), float(parts[2])))
            else:
                raise DimensionMismatch(f"unknown snapshot line kind {kind!r}")
    n_in = 1 + max(i for i, _, _, _ in entries["w_ih"])
    n_hidden = 1 + max(j for _, j, _, _ in entries["w_ih"])
    n_out = 1 + max(k for _, k, _, _ in entries["w_ho"])
    w_ih = np.zeros((n_in, n_hidden))
    mask_ih = np.zeros((n_in, n_hidden), bool)
    w_ho = np.zeros((n_hidden, n_out))
    mask_ho = np.zeros((n_hidden, n_out), bool)
    b_h = np.zeros(n_hidden)
    b_o = np.zeros(n_out)
    for i, j, v, a in entries["w_ih"]:
        w_ih[i, j], mask_ih[i, j] = v, bool(a)
    for j, k, v, a in entries["w_ho"]:
        w_ho[j, k], mask_ho[j, k] = v, bool(a)
    for j, v in entries["b_h"]:
        b_h[j] = v
    for k, v in entries["b_o"]:
        b_o[k] = v
    return Network(w_ih, mask_ih, w_ho, mask_ho, b_h, b_o)

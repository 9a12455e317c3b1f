"""Automatic hidden-layer sizing by constructive growth.

Start with a single hidden node, train, then repeatedly add one freshly
initialized node (keeping the existing weights trainable) and retrain. A new
node is kept only if it improves training error by a relative margin tau;
the first unhelpful node is removed and growth stops.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import InvalidConfig
from .network import (
    Network, TrainConfig, TrainTrace, add_hidden_node, init, sum_squared_error, train,
)


@dataclass
class GrowthConfig:
    tau: float = 0.01            # relative SSE improvement required per added node
    patience_epochs: int = 100   # training budget at each candidate size
    max_hidden: int = 8

    def validate(self):
        if self.tau <= 0:
            raise InvalidConfig("tau must be > 0")
        if self.max_hidden < 1:
            raise InvalidConfig("max_hidden must be >= 1")
        if self.patience_epochs < 0:
            raise InvalidConfig("patience_epochs must be >= 0")


@dataclass
class GrowthEntry:
    hidden: int
    train_error: float
    accepted: bool


@dataclass
class GrowthLog:
    entries: list[GrowthEntry] = field(default_factory=list)
    trace: TrainTrace = field(default_factory=TrainTrace)


def grow(data: Dataset, tcfg: TrainConfig, gcfg: GrowthConfig) -> tuple[Network, GrowthLog]:
    """Grow the hidden layer from one node; returns the best network by error.

    All randomness (initial weights and each new node's weights) flows from a
    single generator seeded with tcfg.seed, so growth is reproducible.
    """
    gcfg.validate()
    tcfg.validate()
    if data.n_examples == 0:
        raise InvalidConfig("cannot grow on an empty dataset view")

    rng = np.random.default_rng(tcfg.seed)
    log = GrowthLog()

    net = init(data.X.shape[1], 1, data.n_classes, tcfg, rng)
    net, trace = train(net, data, tcfg, max_epochs=gcfg.patience_epochs)
    log.trace.epoch_errors.extend(trace.epoch_errors)
    err = sum_squared_error(net, data)
    log.entries.append(GrowthEntry(hidden=1, train_error=err, accepted=True))
    best_net, best_err = net, err

    prev_err = err
    while net.n_hidden < gcfg.max_hidden and prev_err > tcfg.target_error:
        candidate = add_hidden_node(net, tcfg, rng)
        candidate, trace = train(candidate, data, tcfg, max_epochs=gcfg.patience_epochs)
        log.trace.epoch_errors.extend(trace.epoch_errors)
        cand_err = sum_squared_error(candidate, data)
        improvement = (prev_err - cand_err) / prev_err
        accepted = improvement >= gcfg.tau
        log.entries.append(
            GrowthEntry(hidden=candidate.n_hidden, train_error=cand_err, accepted=accepted)
        )
        if not accepted:
            break
        net, prev_err = candidate, cand_err
        if cand_err < best_err:
            best_net, best_err = candidate, cand_err
    return best_net, log

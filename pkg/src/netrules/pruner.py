"""Magnitude-based greedy pruning with retraining and rollback.

Repeatedly mask the smallest-magnitude active weight, retrain briefly, and
keep the removal only while training accuracy stays above the configured
floor; otherwise the weight is restored and exempted. Biases are never
pruned. Inputs left with no active outgoing weight, and hidden nodes left
with no active incoming or outgoing weight, count as removed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import InvalidConfig
from .network import Network, TrainConfig, TrainTrace, accuracy, train


@dataclass
class PruneConfig:
    mode: str = "relative"       # 'relative': floor = pre-prune accuracy - eta
    eta: float = 0.01            # allowed accuracy drop (relative mode)
    min_accuracy: float = 0.0    # floor (absolute mode)
    retrain_epochs: int = 40     # budget after each removal and once at the end

    def validate(self):
        if self.mode not in ("relative", "absolute"):
            raise InvalidConfig(f"unknown prune mode {self.mode!r}")
        if self.mode == "relative" and not 0.0 <= self.eta <= 0.05:
            raise InvalidConfig("eta must be in [0, 0.05]")
        if self.retrain_epochs < 0:
            raise InvalidConfig("retrain_epochs must be >= 0")


@dataclass
class PruneEntry:
    layer: str          # 'ih' or 'ho'
    i: int
    j: int
    magnitude: float
    committed: bool
    accuracy_after: float


@dataclass
class PruneLog:
    floor: float = 0.0
    entries: list[PruneEntry] = field(default_factory=list)
    removed_inputs: tuple[int, ...] = ()
    removed_hidden: tuple[int, ...] = ()
    trace: TrainTrace = field(default_factory=TrainTrace)


def _candidates(net: Network, exempt: set) -> list[tuple[float, int, str, int, int]]:
    cands = []
    for (i, j) in zip(*np.nonzero(net.mask_ih)):
        key = ("ih", int(i), int(j))
        if key not in exempt:
            cands.append((abs(net.w_ih[i, j]), 0, "ih", int(i), int(j)))
    for (j, k) in zip(*np.nonzero(net.mask_ho)):
        key = ("ho", int(j), int(k))
        if key not in exempt:
            cands.append((abs(net.w_ho[j, k]), 1, "ho", int(j), int(k)))
    return cands


def prune(net: Network, data: Dataset, tcfg: TrainConfig,
          pcfg: PruneConfig) -> tuple[Network, PruneLog]:
    """Greedy magnitude pruning; returns the pruned copy and an ordered log."""
    pcfg.validate()
    tcfg.validate()
    net = net.copy()
    acc0 = accuracy(net, data)
    floor = acc0 - pcfg.eta if pcfg.mode == "relative" else pcfg.min_accuracy
    if acc0 < floor:
        raise InvalidConfig(
            f"accuracy floor {floor:.4f} not satisfiable by the input network ({acc0:.4f})"
        )
    log = PruneLog(floor=floor)
    exempt: set = set()

    live_in0, live_h0 = net.live_inputs(), net.live_hidden()

    while True:
        cands = _candidates(net, exempt)
        if not cands:
            break
        _, _, layer, i, j = min(cands)
        snapshot = net.copy()
        if layer == "ih":
            net.mask_ih[i, j] = False
        else:
            net.mask_ho[i, j] = False
        net._enforce_masks()
        if pcfg.retrain_epochs > 0:
            net, trace = train(net, data, tcfg, max_epochs=pcfg.retrain_epochs)
            log.trace.epoch_errors.extend(trace.epoch_errors)
        acc = accuracy(net, data)
        committed = acc >= floor
        magnitude = abs(snapshot.w_ih[i, j] if layer == "ih" else snapshot.w_ho[i, j])
        log.entries.append(PruneEntry(layer, i, j, magnitude, committed, acc))
        if not committed:
            net = snapshot
            exempt.add((layer, i, j))

    # retrain once after pruning settles; revert if it would break the floor
    if pcfg.retrain_epochs > 0:
        snapshot = net.copy()
        retrained, trace = train(net, data, tcfg, max_epochs=pcfg.retrain_epochs)
        log.trace.epoch_errors.extend(trace.epoch_errors)
        net = retrained if accuracy(retrained, data) >= floor else snapshot

    live_in, live_h = net.live_inputs(), net.live_hidden()
    log.removed_inputs = tuple(int(i) for i in np.nonzero(live_in0 & ~live_in)[0])
    log.removed_hidden = tuple(int(j) for j in np.nonzero(live_h0 & ~live_h)[0])
    return net, log

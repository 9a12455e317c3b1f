"""Discretize hidden-node activations into a few representative values.

For each live hidden node, training activations are visited in descending
order (equal values as one weighted group). A group joins the first existing
cluster whose running-mean representative is within epsilon, provided the
join also keeps the cluster's largest member within epsilon of the updated
mean; otherwise it founds a new cluster. Representatives are the final
running means, sorted ascending, and every training activation is then
assigned to its nearest representative (ties to the lower index), which is
also how unseen activations are snapped during a discretized forward pass.

Epsilon is chosen by grid search: the largest value in the grid whose
discretized network still meets the accuracy floor on the training data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DimensionMismatch, InvalidConfig, NoFeasibleEpsilon
from .network import Network, sigmoid

DEFAULT_EPSILON_GRID = (1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625)


@dataclass
class ActivationClustering:
    """Per-node representatives plus the training-pattern assignment table."""

    node_ids: tuple[int, ...]                 # original hidden indices (live nodes)
    epsilon: float
    representatives: tuple[np.ndarray, ...]   # sorted ascending, one array per node
    assignment: np.ndarray                    # (n_train, n_live) representative indices
    counts: tuple[np.ndarray, ...]            # patterns per representative

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)


def greedy_cluster(values: np.ndarray, epsilon: float) -> np.ndarray:
    """One-pass clustering of a 1-d activation sample; returns representatives.

    Containment guarantee: every input value lies within epsilon of the final
    running mean of its cluster, because a join requires both the joining
    value and the cluster's maximum to stay within epsilon of the new mean.
    """
    uniq, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    order = np.argsort(-uniq)  # descending
    sums: list[float] = []
    sizes: list[int] = []
    maxes: list[float] = []
    for v, c in zip(uniq[order], counts[order]):
        placed = False
        for ci in range(len(sums)):
            mean = sums[ci] / sizes[ci]
            if abs(v - mean) <= epsilon:
                new_mean = (sums[ci] + v * c) / (sizes[ci] + c)
                if maxes[ci] - new_mean <= epsilon:
                    sums[ci] += v * c
                    sizes[ci] += c
                    placed = True
                    break
        if not placed:
            sums.append(v * c)
            sizes.append(int(c))
            maxes.append(float(v))
    reps = np.array(sorted(s / n for s, n in zip(sums, sizes)))
    return np.unique(reps)  # defensive: collapse exactly coincident means


def nearest_representative(reps: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Index of the nearest representative; equidistant ties take the lower index."""
    reps = np.asarray(reps, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(reps) == 1:
        return np.zeros(np.shape(values), dtype=np.int64)
    pos = np.clip(np.searchsorted(reps, values), 1, len(reps) - 1)
    left, right = reps[pos - 1], reps[pos]
    choose_right = (values - left) > (right - values)  # tie -> left (lower index)
    return (pos - 1 + choose_right).astype(np.int64)


def _snapped_hidden(net: Network, H: np.ndarray, node_ids, reps) -> np.ndarray:
    Hs = H.copy()
    for pos, j in enumerate(node_ids):
        idx = nearest_representative(reps[pos], H[:, j])
        Hs[:, j] = reps[pos][idx]
    return Hs


def _discretized_outputs(net: Network, Hs: np.ndarray) -> np.ndarray:
    return sigmoid(Hs @ (net.w_ho * net.mask_ho) + net.b_o)


def cluster(net: Network, data: Dataset, epsilon_grid=DEFAULT_EPSILON_GRID,
            floor: float = 0.0) -> ActivationClustering:
    """Cluster each live hidden node's training activations.

    Tries epsilons largest-first and returns the first clustering whose
    discretized training accuracy is >= floor. Raises NoFeasibleEpsilon when
    even the smallest epsilon fails (the caller should re-prune or abort).
    """
    grid = sorted(set(float(e) for e in epsilon_grid), reverse=True)
    if not grid:
        raise InvalidConfig("epsilon grid is empty")
    if grid[0] > 2.0 or grid[-1] <= 0.0:
        raise InvalidConfig("epsilon grid values must lie in (0, 2]")
    if data.n_examples == 0:
        raise DimensionMismatch("empty dataset view")

    node_ids = tuple(int(j) for j in np.nonzero(net.live_hidden())[0])
    H = net.hidden_activations(data.X)

    for eps in grid:
        reps = tuple(greedy_cluster(H[:, j], eps) for j in node_ids)
        Hs = _snapped_hidden(net, H, node_ids, reps)
        preds = np.argmax(_discretized_outputs(net, Hs), axis=1)
        if float((preds == data.y).mean()) >= floor:
            assignment = np.column_stack(
                [nearest_representative(reps[p], H[:, j]) for p, j in enumerate(node_ids)]
            ) if node_ids else np.zeros((data.n_examples, 0), dtype=np.int64)
            counts = tuple(
                np.bincount(assignment[:, p], minlength=len(reps[p]))
                for p in range(len(node_ids))
            )
            return ActivationClustering(
                node_ids=node_ids, epsilon=eps, representatives=reps,
                assignment=assignment, counts=counts,
            )
    raise NoFeasibleEpsilon(
        f"no epsilon in {grid} keeps discretized training accuracy >= {floor:.4f}"
    )


def discretized_predictions(net: Network, clustering: ActivationClustering,
                            X: np.ndarray) -> np.ndarray:
    """Class predictions with hidden activations snapped to representatives."""
    H = net.hidden_activations(X)
    Hs = _snapped_hidden(net, H, clustering.node_ids, clustering.representatives)
    return np.argmax(_discretized_outputs(net, Hs), axis=1)


def discretized_accuracy(net: Network, clustering: ActivationClustering,
                         data: Dataset) -> float:
    """Accuracy of the representative-snapped forward pass on a dataset view."""
    if data.n_examples == 0:
        raise DimensionMismatch("empty dataset view")
    preds = discretized_predictions(net, clustering, data.X)
    return float((preds == data.y).mean())

import numpy as np
import pytest

from netrules import data_path
from netrules.dataset import (
    AttributeSpec, Dataset, SplitSpec, load, load_schema, normalize, split,
)


def make_view(X, y, kinds="continuous", names=None):
    """Build a normalized in-memory dataset view from encoded arrays."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    d = X.shape[1]
    if isinstance(kinds, str):
        kinds = [kinds] * d
    attrs = []
    for i, kind in enumerate(kinds):
        name = names[i] if names else f"attr{i + 1}"
        domain = (0.0, 1.0) if kind != "categorical" else ("a", "b")
        attrs.append(AttributeSpec(name, kind, domain))
    n_classes = int(y.max()) + 1 if len(y) else 2
    classes = tuple(f"class{c}" for c in range(max(n_classes, 2)))
    return Dataset(
        attributes=tuple(attrs), classes=classes, raw=X.copy(), y=y,
        missing=np.zeros_like(X, dtype=bool), X=X,
    )


@pytest.fixture(scope="session")
def cancer():
    ds = load(data_path("breast-cancer-wisconsin.data"),
              load_schema(data_path("breast-cancer-wisconsin.schema")))
    return normalize(ds, train_range=(0, 350))


@pytest.fixture(scope="session")
def cancer_split(cancer):
    return split(cancer, SplitSpec(train=(0, 350), test=(350, 699)))


@pytest.fixture(scope="session")
def diabetes():
    ds = load(data_path("pima-indians-diabetes.data"),
              load_schema(data_path("pima-indians-diabetes.schema")))
    return normalize(ds, train_range=(0, 384))


@pytest.fixture(scope="session")
def lenses():
    ds = load(data_path("lenses.data"), load_schema(data_path("lenses.schema")))
    return normalize(ds)


@pytest.fixture(scope="session")
def toy_two_pattern():
    """Single input: 0.0 -> class 0, 1.0 -> class 1. Linearly separable."""
    return make_view([[0.0], [1.0]], [0, 1])

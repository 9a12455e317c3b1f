"""Train a small feedforward classifier constructively, prune it, discretize
its hidden activations, and extract a compact, order-insensitive rule set."""

from importlib import resources

__version__ = "0.1.0"


def data_path(name: str):
    """Filesystem path of a bundled data, schema, or config file."""
    return resources.files("netrules").joinpath("data", name)

"""Tabular dataset loading, [0,1] encoding, and contiguous train/test splits.

Input files are plain comma-separated text, one example per line, attributes
in schema order, the class label in the declared column, ``?`` for a missing
value, and an optional leading id column that the schema flags for skipping.
The schema itself is a ``key = value`` sidecar, e.g.::

    id_column = yes
    class_column = last
    class.1.label = 2
    class.1.name = benign
    attribute.1.name = Clump thickness
    attribute.1.kind = ordinal
    attribute.1.domain = 1 .. 10

Encoding is min-max over the *declared* domain (never over observed data, so
thresholds stay stable across splits); categorical attributes map to equally
spaced values in [0,1] in declared category order. Missing values are imputed
with the mean encoded value over the non-missing rows of the training range.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .config import parse_float_range, parse_list, read_kv_file
from .errors import DegenerateAttributeWarning, MalformedInput, RangeError

KINDS = ("continuous", "ordinal", "categorical")


@dataclass(frozen=True)
class AttributeSpec:
    """Name, kind, and raw domain of one input attribute."""

    name: str
    kind: str
    domain: tuple  # (lo, hi) for continuous/ordinal, category names for categorical

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedInput(f"attribute {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == "categorical":
            if len(self.domain) == 0:
                raise MalformedInput(f"attribute {self.name!r}: empty category list")
            if len(set(self.domain)) != len(self.domain):
                raise MalformedInput(f"attribute {self.name!r}: duplicate categories")
        else:
            lo, hi = self.domain
            if not lo < hi:
                raise MalformedInput(
                    f"attribute {self.name!r}: domain must satisfy min < max, got {lo} .. {hi}"
                )

    @property
    def degenerate(self) -> bool:
        return self.kind == "categorical" and len(self.domain) == 1

    def encode(self, raw: float) -> float:
        """Map one raw value (category index for categoricals) into [0,1]."""
        if self.kind == "categorical":
            k = len(self.domain)
            return 0.0 if k == 1 else float(raw) / (k - 1)
        lo, hi = self.domain
        return (float(raw) - lo) / (hi - lo)

    def category_of_encoded(self, value: float) -> str:
        """Inverse of encode for categorical attributes (exact grid values)."""
        k = len(self.domain)
        idx = 0 if k == 1 else int(round(value * (k - 1)))
        return self.domain[idx]


@dataclass(frozen=True)
class SplitSpec:
    """Half-open train/test index intervals in file order (no shuffling)."""

    train: tuple[int, int]
    test: tuple[int, int]


@dataclass(frozen=True)
class DatasetSchema:
    attributes: tuple[AttributeSpec, ...]
    class_names: tuple[str, ...]
    class_labels: tuple[str, ...]  # raw file tokens, parallel to class_names
    id_column: bool = False
    class_column: int | None = None  # raw column index; None means last column


@dataclass
class Dataset:
    """Encoded examples plus the metadata needed to interpret them.

    ``raw`` holds pre-encoding values (category index for categoricals, NaN
    where missing); ``X`` is the [0,1]-encoded matrix and is None until
    :func:`normalize` has run. Instances are treated as immutable after
    construction and are safe to share across concurrent runs.
    """

    attributes: tuple[AttributeSpec, ...]
    classes: tuple[str, ...]
    raw: np.ndarray
    y: np.ndarray
    missing: np.ndarray
    X: np.ndarray | None = None
    degenerate_attributes: tuple[int, ...] = field(default_factory=tuple)

    @property
    def n_examples(self) -> int:
        return self.raw.shape[0]

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def n_classes(self) -> int:
        return len(self.classes)


def load_schema(path) -> DatasetSchema:
    """Read a schema sidecar file."""
    kv = read_kv_file(path)
    attrs = []
    i = 1
    while f"attribute.{i}.name" in kv:
        name = kv[f"attribute.{i}.name"]
        kind = kv.get(f"attribute.{i}.kind", "")
        domain_text = kv.get(f"attribute.{i}.domain", "")
        if kind == "categorical":
            domain = tuple(parse_list(domain_text))
        else:
            domain = parse_float_range(domain_text, f"attribute.{i}.domain")
        attrs.append(AttributeSpec(name=name, kind=kind, domain=domain))
        i += 1
    if not attrs:
        raise MalformedInput(f"{path}: no attribute.N.name entries")

    names, labels = [], []
    j = 1
    while f"class.{j}.name" in kv or f"class.{j}.label" in kv:
        try:
            names.append(kv[f"class.{j}.name"])
            labels.append(kv[f"class.{j}.label"])
        except KeyError as exc:
            raise MalformedInput(f"{path}: class.{j} needs both .name and .label") from exc
        j += 1
    if len(names) < 2:
        raise MalformedInput(f"{path}: need at least two class.N entries")
    if len(set(labels)) != len(labels) or len(set(names)) != len(names):
        raise MalformedInput(f"{path}: duplicate class names or labels")

    id_column = kv.get("id_column", "no").lower() in ("yes", "true", "1")
    cc_text = kv.get("class_column", "last")
    class_column = None if cc_text == "last" else int(cc_text)
    return DatasetSchema(
        attributes=tuple(attrs),
        class_names=tuple(names),
        class_labels=tuple(labels),
        id_column=id_column,
        class_column=class_column,
    )


def load(path, schema: DatasetSchema) -> Dataset:
    """Load a CSV data file against a schema.

    Returns a dataset with raw values only (``X is None``); call
    :func:`normalize` to encode. Raises MalformedInput for an unreadable or
    empty file, a wrong column count, an unknown category or class label, or
    a numeric value outside the declared domain.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    rows = [ln for ln in lines if ln]
    if not rows:
        raise MalformedInput(f"{path}: file is empty")

    d = len(schema.attributes)
    n_cols = d + 1 + (1 if schema.id_column else 0)
    class_col = n_cols - 1 if schema.class_column is None else schema.class_column
    if not 0 <= class_col < n_cols:
        raise MalformedInput(f"{path}: class_column {class_col} outside 0..{n_cols - 1}")
    label_to_index = {lab: i for i, lab in enumerate(schema.class_labels)}
    cat_index = [
        {c: i for i, c in enumerate(a.domain)} if a.kind == "categorical" else None
        for a in schema.attributes
    ]

    n = len(rows)
    raw = np.zeros((n, d))
    missing = np.zeros((n, d), dtype=bool)
    y = np.zeros(n, dtype=np.int64)
    for r, line in enumerate(rows):
        tokens = [t.strip() for t in line.split(",")]
        if len(tokens) != n_cols:
            raise MalformedInput(
                f"{path}: line {r + 1}: expected {n_cols} columns, got {len(tokens)}"
            )
        label = tokens[class_col]
        if label not in label_to_index:
            raise MalformedInput(f"{path}: line {r + 1}: unknown class label {label!r}")
        y[r] = label_to_index[label]
        feature_tokens = [
            t for c, t in enumerate(tokens)
            if c != class_col and not (schema.id_column and c == 0)
        ]
        for a, tok in enumerate(feature_tokens):
            spec = schema.attributes[a]
            if tok == "?":
                missing[r, a] = True
                raw[r, a] = np.nan
            elif spec.kind == "categorical":
                if tok not in cat_index[a]:
                    raise MalformedInput(
                        f"{path}: line {r + 1}: unknown category {tok!r} for {spec.name}"
                    )
                raw[r, a] = cat_index[a][tok]
            else:
                try:
                    v = float(tok)
                except ValueError as exc:
                    raise MalformedInput(
                        f"{path}: line {r + 1}: bad numeric value {tok!r} for {spec.name}"
                    ) from exc
                lo, hi = spec.domain
                if not lo <= v <= hi:
                    raise MalformedInput(
                        f"{path}: line {r + 1}: {spec.name} value {v} outside {lo} .. {hi}"
                    )
                raw[r, a] = v

    return Dataset(
        attributes=schema.attributes,
        classes=schema.class_names,
        raw=raw,
        y=y,
        missing=missing,
    )


def normalize(d: Dataset, train_range: tuple[int, int] | None = None) -> Dataset:
    """Encode all features into [0,1] and impute missing values.

    Imputation statistics come only from ``train_range`` rows (defaults to the
    whole dataset); test-range encoding never reads test statistics. A
    degenerate attribute (zero-width domain) encodes to 0 everywhere and is
    flagged on the result.
    """
    lo_r, hi_r = train_range if train_range is not None else (0, d.n_examples)
    if not 0 <= lo_r <= hi_r <= d.n_examples:
        raise RangeError(f"train range {lo_r} .. {hi_r} outside 0 .. {d.n_examples}")

    X = np.zeros_like(d.raw)
    degenerate = []
    for a, spec in enumerate(d.attributes):
        col = d.raw[:, a]
        miss = d.missing[:, a]
        if spec.degenerate:
            degenerate.append(a)
            warnings.warn(
                f"attribute {spec.name!r} has a zero-width domain; encoded as 0",
                DegenerateAttributeWarning,
            )
            continue
        if spec.kind == "categorical":
            k = len(spec.domain)
            enc = col / (k - 1)
        else:
            lo, hi = spec.domain
            enc = (col - lo) / (hi - lo)
        observed = enc[lo_r:hi_r][~miss[lo_r:hi_r]]
        fill = float(observed.mean()) if observed.size else 0.5
        enc = np.where(miss, fill, enc)
        X[:, a] = enc
    return replace(d, X=X, degenerate_attributes=tuple(degenerate))


def split(d: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Cut deterministic contiguous views; no copying, no shuffling."""
    views = []
    for lo, hi in (spec.train, spec.test):
        if not 0 <= lo <= hi <= d.n_examples:
            raise RangeError(f"split {lo} .. {hi} outside 0 .. {d.n_examples}")
        views.append(
            replace(
                d,
                raw=d.raw[lo:hi],
                y=d.y[lo:hi],
                missing=d.missing[lo:hi],
                X=None if d.X is None else d.X[lo:hi],
            )
        )
    return views[0], views[1]


def raw_lines(d: Dataset) -> list[str]:
    """Decode a dataset back to CSV lines (no id column), '?' for missing.

    Categorical values render as their category names, ordinal values as
    integers, continuous values with 17 significant digits so that a
    reload + normalize round-trips the encoded matrix bit-exactly.
    """
    class_labels = d.classes  # names double as labels when writing decoded data
    out = []
    for r in range(d.n_examples):
        tokens = []
        for a, spec in enumerate(d.attributes):
            if d.missing[r, a]:
                tokens.append("?")
            elif spec.kind == "categorical":
                tokens.append(spec.domain[int(d.raw[r, a])])
            elif spec.kind == "ordinal":
                tokens.append(str(int(d.raw[r, a])))
            else:
                tokens.append(f"{d.raw[r, a]:.17g}")
        tokens.append(class_labels[int(d.y[r])])
        out.append(",".join(tokens))
    return out

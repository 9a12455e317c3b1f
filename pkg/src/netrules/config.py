"""Flat ``key = value`` text parsing used by run configs and schema sidecars.

One key per line, nested keys dotted (``train.learning_rate = 0.5``),
``#`` starts a comment line, blank lines are ignored. A key that appears
twice keeps the later value.
"""

from __future__ import annotations

from .errors import MalformedInput


def parse_kv_text(text: str, source: str = "<string>") -> dict[str, str]:
    """Parse key = value lines into an ordered dict of stripped strings."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MalformedInput(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise MalformedInput(f"{source}:{lineno}: empty key")
        out[key] = value.strip()
    return out


def read_kv_file(path) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    return parse_kv_text(text, source=str(path))


def parse_int_range(value: str, key: str) -> tuple[int, int]:
    """Parse an index interval like ``0 .. 350`` into a half-open (lo, hi)."""
    parts = value.split("..")
    if len(parts) != 2:
        raise MalformedInput(f"{key}: expected 'lo .. hi', got {value!r}")
    try:
        lo, hi = int(parts[0].strip()), int(parts[1].strip())
    except ValueError as exc:
        raise MalformedInput(f"{key}: non-integer bound in {value!r}") from exc
    return lo, hi


def parse_float_range(value: str, key: str) -> tuple[float, float]:
    parts = value.split("..")
    if len(parts) != 2:
        raise MalformedInput(f"{key}: expected 'lo .. hi', got {value!r}")
    try:
        lo, hi = float(parts[0].strip()), float(parts[1].strip())
    except ValueError as exc:
        raise MalformedInput(f"{key}: non-numeric bound in {value!r}") from exc
    return lo, hi


def parse_list(value: str) -> list[str]:
    """Split a comma-separated value into stripped, non-empty items."""
    return [item.strip() for item in value.split(",") if item.strip()]


def get_float(kv: dict[str, str], key: str, default: float) -> float:
    if key not in kv:
        return default
    try:
        return float(kv[key])
    except ValueError as exc:
        raise MalformedInput(f"{key}: not a number: {kv[key]!r}") from exc


def get_int(kv: dict[str, str], key: str, default: int) -> int:
    if key not in kv:
        return default
    try:
        return int(kv[key])
    except ValueError as exc:
        raise MalformedInput(f"{key}: not an integer: {kv[key]!r}") from exc

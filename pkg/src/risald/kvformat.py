"""Reader/writer for the flat ``key = value`` text format used by scenes and configs.

Rules: UTF-8, one pair per line, ``#`` starts a comment, blank lines ignored,
keys are case-insensitive and order-insensitive, repeated keys accumulate.
"""

from __future__ import annotations

from .errors import ConfigError


def read_kv_file(path) -> list[tuple[int, str, str]]:
    """Parse a flat key-value file into (line_number, key, value) triples.

    Raises:
        ConfigError: unreadable file or a non-comment line without '='.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read file: {exc}", path=path) from exc
    except UnicodeDecodeError as exc:
        raise ConfigError(f"not valid UTF-8: {exc}", path=path) from exc

    out = []
    for i, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", path=path, line=i)
        key, value = line.split("=", 1)
        key = key.strip().lower()
        value = value.strip()
        if not key:
            raise ConfigError("empty key", path=path, line=i)
        out.append((i, key, value))
    return out


def kv_to_dict(pairs) -> dict[str, list[tuple[int, str]]]:
    """Group parsed pairs by key, preserving (line, value) order of appearance."""
    grouped: dict[str, list[tuple[int, str]]] = {}
    for line, key, value in pairs:
        grouped.setdefault(key, []).append((line, value))
    return grouped


def take_scalar(grouped, key, convert, default=None, *, path=None):
    """Pop a single-valued key with type conversion and located error messages."""
    if key not in grouped:
        return default
    entries = grouped.pop(key)
    line, value = entries[-1]
    if len(entries) > 1:
        raise ConfigError(f"key {key!r} given {len(entries)} times", path=path, line=line)
    try:
        return convert(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})", path=path, line=line)


def parse_floats(value: str, n: int | None = None) -> tuple[float, ...]:
    parts = [p.strip() for p in value.split(",") if p.strip()]
    out = tuple(float(p) for p in parts)
    if n is not None and len(out) != n:
        raise ValueError(f"expected {n} comma-separated numbers, got {len(out)}")
    return out


def write_kv_file(path, pairs, header: str | None = None) -> None:
    """Write (key, value) pairs back out; inverse of :func:`read_kv_file`."""
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for key, value in pairs:
            fh.write(f"{key} = {value}\n")

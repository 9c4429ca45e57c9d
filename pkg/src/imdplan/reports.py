"""Report serialization: delimited tables, JSON reports, atomic file writes."""
from __future__ import annotations

import json
import os
import tempfile
import time
from pathlib import Path

FORMATS = ("csv", "json-lines")


def format_real(x: float) -> str:
    """Render a real with 17 significant digits so it parses back losslessly."""
    return f"{float(x):.17g}"


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write-temp-then-rename so readers never observe a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_table(path: str | Path, header: list[str], rows, fmt: str = "csv") -> None:
    """Write a table of mixed str/int/float cells as CSV or JSON lines."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r}")

    def cell(value) -> str:
        if isinstance(value, float):
            return format_real(value)
        return str(value)

    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(cell(v) for v in row) for row in rows]
        atomic_write_text(path, "\n".join(lines) + "\n")
    else:
        out = []
        for row in rows:
            out.append(json.dumps(dict(zip(header, row)), sort_keys=True))
        atomic_write_text(path, "\n".join(out) + "\n")


class ReportTimer:
    def __init__(self) -> None:
        self.start = time.monotonic()

    def elapsed_s(self) -> float:
        return time.monotonic() - self.start


def write_report(
    path: str | Path,
    command: str,
    config_raw: dict,
    seed: int | None,
    results: dict,
    wall_clock_s: float,
    version: str,
) -> None:
    """JSON report embedding config, seed and version for reproducibility."""
    payload = {
        "tool": "imdplan",
        "version": version,
        "command": command,
        "config": config_raw,
        "seed": seed,
        "results": results,
        "wall_clock_s": wall_clock_s,
    }
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())

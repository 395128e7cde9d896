"""Collects one pass/fail line per acceptance criterion for the session summary."""

from __future__ import annotations

LINES: list[str] = []


def record(number: int, ok: bool, seconds: float, detail: str) -> str:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {detail}"
    LINES.append(line)
    return line

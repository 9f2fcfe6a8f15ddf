"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

LINES: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> str:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    LINES[number] = line
    print(line)
    return line

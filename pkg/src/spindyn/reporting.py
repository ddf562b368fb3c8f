"""Check reports and deterministic CSV / JSON-lines emission.

All floats are written with Python's shortest round-trip repr so that a
fixed seed reproduces byte-identical output files across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckItem:
    """One named residual with its tolerance and verdict."""

    name: str
    residual: float
    tol: float
    passed: bool | None = None
    expected: float | None = None
    measured: float | None = None

    def resolved(self):
        if self.passed is not None:
            return self
        return CheckItem(self.name, self.residual, self.tol,
                         passed=bool(self.residual < self.tol),
                         expected=self.expected, measured=self.measured)


@dataclass
class CheckReport:
    """Ordered collection of uniquely named checks."""

    items: list = field(default_factory=list)

    def add(self, name, residual, tol, passed=None, expected=None, measured=None):
        if any(it.name == name for it in self.items):
            raise ValueError(f"duplicate check name {name!r}")
        item = CheckItem(name, float(residual), float(tol), passed,
                         expected, measured).resolved()
        self.items.append(item)
        return item

    def extend(self, other):
        for it in other.items:
            self.add(it.name, it.residual, it.tol, it.passed, it.expected, it.measured)

    @property
    def all_pass(self):
        return all(it.passed for it in self.items)

    def failures(self):
        return [it for it in self.items if not it.passed]

    def json_lines(self):
        lines = []
        for it in self.items:
            rec = {"name": it.name, "residual": it.residual,
                   "tol": it.tol, "pass": it.passed}
            if it.expected is not None:
                rec["expected"] = it.expected
            if it.measured is not None:
                rec["measured"] = it.measured
            lines.append(json.dumps(rec))
        return "\n".join(lines) + "\n"

    def table(self):
        width = max((len(it.name) for it in self.items), default=4)
        rows = [f"{'check'.ljust(width)}  {'residual':>13}  {'tol':>10}  result"]
        for it in self.items:
            verdict = "pass" if it.passed else "FAIL"
            rows.append(f"{it.name.ljust(width)}  {it.residual:13.6e}  "
                        f"{it.tol:10.1e}  {verdict}")
        return "\n".join(rows) + "\n"


def fmt(x):
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def write_csv(path, header, rows):
    """Write rows of floats under a mandatory header line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def csv_text(header, rows):
    out = [header]
    out.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(out) + "\n"


def write_json_lines(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")

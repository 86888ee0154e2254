"""Uniform pass/fail reporting for the verification suites.

Checks never raise on a failed comparison; they accumulate named entries so
a caller (or the CLI) can print one line per identity and name the first
violation.  ``require`` converts a failed report into an exception for
contexts where continuing makes no sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckEntry:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        mark = "ok  " if self.ok else "FAIL"
        return f"{mark} {self.name}" + (f" ({self.detail})" if self.detail else "")


@dataclass(frozen=True)
class CheckReport:
    entries: tuple[CheckEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def first_failure(self) -> CheckEntry | None:
        for e in self.entries:
            if not e.ok:
                return e
        return None

    def require(self) -> "CheckReport":
        bad = self.first_failure
        if bad is not None:
            raise RuntimeError(f"invariant violated: {bad.name}"
                               + (f" ({bad.detail})" if bad.detail else ""))
        return self

    def lines(self) -> list[str]:
        return [e.line() for e in self.entries]


@dataclass
class Checker:
    """Accumulates CheckEntry rows; ``report()`` freezes them."""

    entries: list[CheckEntry] = field(default_factory=list)

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.entries.append(CheckEntry(name, bool(ok), detail))
        return bool(ok)

    def merge(self, other: CheckReport, prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(CheckEntry(prefix + e.name, e.ok, e.detail))

    def report(self) -> CheckReport:
        return CheckReport(tuple(self.entries))

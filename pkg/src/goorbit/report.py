"""Check reports and their deterministic text rendering.

Report grammar (one entry per line, two-space indentation per level)::

    report   := "[" title "]" NEWLINE entry*
    entry    := key ": " value            plain value
              | "check " name ": " status [" -- " detail]
              | key ":" NEWLINE entry*    nested report, indented
    status   := "pass" | "FAIL" | "n/a"

Rationals print as ``p/q``; vectors as ``(a, b, ...)``; floats (simulator
sections only) with ``repr``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .linalg import Subspace, format_scalar, format_vector


@dataclass
class Check:
    name: str
    ok: bool | None  # None: not applicable
    detail: str = ""

    @property
    def status(self) -> str:
        return {True: "pass", False: "FAIL", None: "n/a"}[self.ok]


@dataclass
class Report:
    title: str
    entries: list[tuple[str, Any]] = field(default_factory=list)

    def check(self, name: str, ok: bool | None, detail: str = "") -> Check:
        c = Check(name, ok, detail)
        self.entries.append((name, c))
        return c

    def value(self, key: str, value: Any) -> None:
        self.entries.append((key, value))

    def add(self, key: str, sub: "Report") -> "Report":
        self.entries.append((key, sub))
        return sub

    @property
    def checks(self) -> list[Check]:
        out = []
        for _, v in self.entries:
            if isinstance(v, Check):
                out.append(v)
            elif isinstance(v, Report):
                out.extend(v.checks)
        return out

    @property
    def ok(self) -> bool:
        return all(c.ok is not False for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.ok is False]

    def __getitem__(self, key: str) -> Any:
        for k, v in self.entries:
            if k == key:
                return v
        raise KeyError(key)

    def __contains__(self, key: str) -> bool:
        return any(k == key for k, _ in self.entries)

    def get(self, key: str, default: Any = None) -> Any:
        try:
            return self[key]
        except KeyError:
            return default

    def render(self, indent: int = 0) -> str:
        lines = [] if indent else [f"[{self.title}]"]
        pad = "  " * indent
        for key, v in self.entries:
            if isinstance(v, Check):
                line = f"{pad}check {v.name}: {v.status}"
                if v.detail:
                    line += f" -- {v.detail}"
                lines.append(line)
            elif isinstance(v, Report):
                lines.append(f"{pad}{key}:")
                body = v.render(indent + 1)
                if body:
                    lines.append(body)
            else:
                lines.append(f"{pad}{key}: {format_value(v)}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()


def format_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_scalar(v)
    if isinstance(v, Subspace):
        if v.is_zero():
            return f"dim 0"
        return f"dim {v.dim} span " + " ".join(format_vector(b) for b in v.basis)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list)):
        if v and all(isinstance(x, Fraction) for x in v):
            return format_vector(v)
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    if v is None:
        return "none"
    return str(v)

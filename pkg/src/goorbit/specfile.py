"""Text format for homogeneous space data.

Grammar (``#`` starts a comment; tokens are separated by whitespace; indices are
1-based; scalars are rationals ``p``, ``p/q`` or finite decimals)::

    file       := "name" TEXT
                  algebra isotropy complement metric [flags]
    algebra    := "algebra" NL "dim" N NL "basis" LABEL^N NL ("bracket" i j coeff k NL)* "end"
    isotropy   := "isotropy" NL ("row" scalar^N NL)* "end"
    complement := "complement killing" NL
                | "complement explicit" NL ("row" scalar^N NL)* "end"
    metric     := "metric" NL ("row" scalar^M NL)^M "end"
    flags      := "flags" NL (FLAG NL)* "end"

``bracket i j c k`` sets ``c[i][j][k] = c`` and, unless stated separately,
``c[j][i][k] = -c``.  The metric is the Gram matrix in the complement rows (for
``killing``, in the reduced echelon basis of the Killing complement).  Flags are
claims such as ``go`` (the space is claimed G.O.) or ``go_theorem``.

:func:`emit` writes the canonical form: explicit echelon rows, brackets with
``i < j`` sorted by ``(i, j, k)``, sorted flags.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .lie import AxiomViolation, LieAlgebra, LieAlgebraError, PreconditionError
from .space import HomogeneousSpaceSpec, SpecError

KNOWN_FLAGS = ("go", "go_theorem")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    kind: str  # syntax | antisymmetry | jacobi | metric | space
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.kind}: {self.message}"


class SpecFileError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("\n".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _lines(text: str) -> list[list[_Tok]]:
    out = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = []
        i = 0
        while i < len(body):
            if body[i].isspace():
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace():
                j += 1
            toks.append(_Tok(body[i:j], ln, i + 1))
            i = j
        if toks:
            out.append(toks)
    return out


class _Parser:
    def __init__(self, text: str):
        self.rows = _lines(text)
        self.pos = 0
        self.diags: list[Diagnostic] = []

    def fail(self, tok: _Tok, kind: str, msg: str):
        self.diags.append(Diagnostic(tok.line, tok.col, kind, msg))
        raise SpecFileError(self.diags)

    def peek(self) -> list[_Tok] | None:
        return self.rows[self.pos] if self.pos < len(self.rows) else None

    def next_line(self, what: str) -> list[_Tok]:
        row = self.peek()
        if row is None:
            last = self.rows[-1][-1] if self.rows else _Tok("", 1, 1)
            self.fail(last, "syntax", f"unexpected end of file, expected {what}")
        self.pos += 1
        return row

    def expect(self, keyword: str) -> list[_Tok]:
        row = self.next_line(keyword)
        if row[0].text != keyword:
            self.fail(row[0], "syntax", f"expected '{keyword}', found '{row[0].text}'")
        return row

    def arity(self, row: list[_Tok], n: int):
        if len(row) != n:
            tok = row[n] if len(row) > n else row[-1]
            self.fail(tok, "syntax", f"'{row[0].text}' takes {n - 1} argument(s), got {len(row) - 1}")

    def scalar(self, tok: _Tok) -> Fraction:
        try:
            return la.frac(tok.text)
        except (ValueError, ZeroDivisionError):
            self.fail(tok, "syntax", f"not a rational number: '{tok.text}'")

    def integer(self, tok: _Tok, lo: int, hi: int) -> int:
        try:
            v = int(tok.text)
        except ValueError:
            self.fail(tok, "syntax", f"not an integer: '{tok.text}'")
        if not lo <= v <= hi:
            self.fail(tok, "syntax", f"index {v} out of range {lo}..{hi}")
        return v

    def rows_until_end(self, width: int) -> list[tuple[list[Fraction], _Tok]]:
        out = []
        while True:
            row = self.next_line("'row' or 'end'")
            if row[0].text == "end":
                self.arity(row, 1)
                return out
            if row[0].text != "row":
                self.fail(row[0], "syntax", f"expected 'row' or 'end', found '{row[0].text}'")
            self.arity(row, width + 1)
            out.append(([self.scalar(t) for t in row[1:]], row[0]))

    # -- sections ----------------------------------------------------------

    def parse(self) -> HomogeneousSpaceSpec:
        head = self.next_line("'name'")
        if head[0].text != "name":
            self.fail(head[0], "syntax", f"expected 'name', found '{head[0].text}'")
        name = " ".join(t.text for t in head[1:])
        g = self.algebra()
        n = g.dim
        iso_row = self.expect("isotropy")
        self.arity(iso_row, 1)
        h_rows = self.rows_until_end(n)
        comp = self.expect("complement")
        self.arity(comp, 2)
        if comp[1].text == "killing":
            m_rows = None
        elif comp[1].text == "explicit":
            m_rows = self.rows_until_end(n)
        else:
            self.fail(comp[1], "syntax", "complement must be 'killing' or 'explicit'")
        met = self.expect("metric")
        self.arity(met, 1)
        width = len(m_rows) if m_rows is not None else n - len(h_rows)
        ip_rows = self.rows_until_end(width)
        if len(ip_rows) != width:
            self.fail(met[0], "metric", f"metric needs {width} rows, got {len(ip_rows)}")
        ip = [r for r, _ in ip_rows]
        for i in range(width):
            for j in range(i + 1, width):
                if ip[i][j] != ip[j][i]:
                    tok = ip_rows[j][1]
                    self.fail(tok, "metric", f"metric not symmetric: entry ({j + 1},{i + 1}) differs from ({i + 1},{j + 1})")
        if not la.is_positive_definite(ip):
            self.fail(met[0], "metric", "metric is not positive definite")
        flags = {}
        row = self.peek()
        if row is not None and row[0].text == "flags":
            self.pos += 1
            self.arity(row, 1)
            while True:
                fr = self.next_line("flag or 'end'")
                if fr[0].text == "end":
                    self.arity(fr, 1)
                    break
                self.arity(fr, 1)
                if fr[0].text not in KNOWN_FLAGS:
                    self.fail(fr[0], "syntax", f"unknown flag '{fr[0].text}' (known: {', '.join(KNOWN_FLAGS)})")
                flags[fr[0].text] = True
        extra = self.peek()
        if extra is not None:
            self.fail(extra[0], "syntax", f"unexpected '{extra[0].text}' after the last section")
        try:
            return HomogeneousSpaceSpec.create(
                g, [r for r, _ in h_rows], None if m_rows is None else [r for r, _ in m_rows],
                ip, name=name, flags=flags,
            )
        except (SpecError, PreconditionError, ArithmeticError) as exc:
            detail = str(exc)
            rep = getattr(exc, "report", None)
            if rep is not None:
                detail += "; " + "; ".join(f"{c.name}: {c.detail}" if c.detail else c.name for c in rep.failures())
            self.fail(iso_row[0], "space", detail)

    def algebra(self) -> LieAlgebra:
        head = self.expect("algebra")
        self.arity(head, 1)
        drow = self.expect("dim")
        self.arity(drow, 2)
        n = self.integer(drow[1], 1, 10_000)
        brow = self.expect("basis")
        self.arity(brow, n + 1)
        labels = tuple(t.text for t in brow[1:])
        if len(set(labels)) != n:
            self.fail(brow[1], "syntax", "basis labels must be distinct")
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        stated: dict[tuple[int, int, int], _Tok] = {}
        while True:
            row = self.next_line("'bracket' or 'end'")
            if row[0].text == "end":
                self.arity(row, 1)
                break
            if row[0].text != "bracket":
                self.fail(row[0], "syntax", f"expected 'bracket' or 'end', found '{row[0].text}'")
            self.arity(row, 5)
            i = self.integer(row[1], 1, n) - 1
            j = self.integer(row[2], 1, n) - 1
            coeff = self.scalar(row[3])
            k = self.integer(row[4], 1, n) - 1
            if (i, j, k) in stated:
                self.fail(row[0], "syntax", f"c[{i + 1}][{j + 1}][{k + 1}] already given")
            if i == j and coeff:
                self.fail(row[0], "antisymmetry", f"c[{i + 1}][{i + 1}][{k + 1}] = {la.format_scalar(coeff)} must vanish")
            if (j, i, k) in stated and c[j][i][k] != -coeff:
                self.fail(
                    row[0], "antisymmetry",
                    f"c[{i + 1}][{j + 1}][{k + 1}] = {la.format_scalar(coeff)} but "
                    f"c[{j + 1}][{i + 1}][{k + 1}] = {la.format_scalar(c[j][i][k])}",
                )
            stated[i, j, k] = row[0]
            c[i][j][k] = coeff
            if (j, i, k) not in stated:
                c[j][i][k] = -coeff
        try:
            return LieAlgebra(tuple(tuple(tuple(r) for r in plane) for plane in c), labels)
        except AxiomViolation as exc:
            self.fail(head[0], exc.axiom, str(exc))
        except LieAlgebraError as exc:
            self.fail(head[0], "syntax", str(exc))


def parse_text(text: str) -> HomogeneousSpaceSpec:
    return _Parser(text).parse()


def parse(path: str) -> HomogeneousSpaceSpec:
    with open(path) as fh:
        return parse_text(fh.read())


def _row(v) -> str:
    return "  row " + " ".join(la.format_scalar(Fraction(x)) for x in v)


def emit(spec: HomogeneousSpaceSpec) -> str:
    """Canonical text form of ``spec``."""
    g = spec.g
    n = g.dim
    lines = [f"name {spec.name}" if spec.name else "name unnamed", "algebra", f"  dim {n}",
             "  basis " + " ".join(g.labels)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                x = g.c[i][j][k]
                if x:
                    lines.append(f"  bracket {i + 1} {j + 1} {la.format_scalar(x)} {k + 1}")
    lines.append("end")
    lines.append("isotropy")
    lines += [_row(r) for r in spec.h.basis]
    lines.append("end")
    lines.append("complement explicit")
    lines += [_row(r) for r in spec.m.basis]
    lines.append("end")
    lines.append("metric")
    lines += [_row(r) for r in spec.ip]
    lines.append("end")
    flags = sorted(k for k, v in spec.flags.items() if v and k in KNOWN_FLAGS)
    if flags:
        lines.append("flags")
        lines += [f"  {f}" for f in flags]
        lines.append("end")
    return "\n".join(lines) + "\n"

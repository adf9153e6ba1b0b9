"""Text formats: matrices and vector sets ("rows cols" header, then rows)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .core import IntMatrix, ToricError


class FormatError(ToricError, ValueError):
    pass


def _tokens(text: str):
    """(line, column, token) for every whitespace-separated token."""
    for lineno, line in enumerate(text.splitlines(), 1):
        col = 0
        for tok in line.split():
            col = line.index(tok, col) + 1
            yield lineno, col, tok
            col += len(tok) - 1


def _int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {line}, column {col}: non-integer token {tok!r}") from None


def parse_rows(text: str, allow_empty: bool = False) -> list[list[int]]:
    lines = [(k, ln) for k, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise FormatError("line 1: missing header 'rows cols'")
    k, head = lines[0]
    parts = head.split()
    if len(parts) != 2:
        raise FormatError(f"line {k}: malformed header, expected 'rows cols', found {head.strip()!r}")
    col = 1
    dims = []
    for tok in parts:
        col = head.index(tok, col - 1) + 1
        value = _int(tok, k, col)
        if value < 0:
            raise FormatError(f"line {k}, column {col}: negative dimension")
        dims.append(value)
    m, n = dims
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"expected {m} rows after the header, found {len(body)}")
    rows = []
    for r, (k, line) in enumerate(body, 1):
        toks = list(_tokens(line))
        if len(toks) != n:
            raise FormatError(f"row {r}: expected {n} entries, found {len(toks)} (line {k})")
        rows.append([_int(t, k, c) for _, c, t in toks])
    if not allow_empty and (m == 0 or n == 0):
        raise FormatError("matrix must have at least one row and one column")
    return rows


def parse_matrix(text: str) -> IntMatrix:
    return IntMatrix.from_rows(parse_rows(text))


def parse_matrix_file(path) -> IntMatrix:
    return parse_matrix(Path(path).read_text())


def format_rows(rows: Sequence[Sequence[int]], width: int | None = None) -> str:
    rows = [list(r) for r in rows]
    n = len(rows[0]) if rows else (width or 0)
    out = [f"{len(rows)} {n}"]
    out += [" ".join(map(str, r)) for r in rows]
    return "\n".join(out) + "\n"


def format_matrix(A: IntMatrix) -> str:
    return format_rows(A.data)


def parse_vector_set(text: str) -> list[tuple[int, ...]]:
    return [tuple(r) for r in parse_rows(text, allow_empty=True)]


def parse_vector(text: str) -> tuple[int, ...]:
    """A comma- or space-separated integer vector, e.g. '1,-2,1'."""
    toks = text.replace(",", " ").split()
    if not toks:
        raise FormatError("empty vector")
    return tuple(_int(t, 1, i + 1) for i, t in enumerate(toks))

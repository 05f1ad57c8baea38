"""Monotone boolean formulas to LSSS matrices, and share reconstruction.

Uses the standard Lewko-Waters conversion: the root is labeled (1), an
AND node splits its label across two children with a fresh coordinate,
an OR node copies it.  A set of attributes satisfies the structure iff
the rows it selects span the target vector (1, 0, ..., 0).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .backend import PRIME


class UnsupportedFormula(ValueError):
    pass


@dataclass(frozen=True)
class AccessStructure:
    """LSSS matrix with one row per share and a row -> attribute map."""

    matrix: tuple[tuple[int, ...], ...]
    row_attrs: tuple[str, ...]

    @property
    def num_rows(self) -> int:
        return len(self.matrix)

    @property
    def num_cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def attributes(self) -> set[str]:
        return set(self.row_attrs)


_TOKEN = re.compile(r"\s*(\(|\)|AND\b|OR\b|[A-Za-z_][A-Za-z0-9_:-]*)\s*")


def _tokenize(formula: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(formula):
        m = _TOKEN.match(formula, pos)
        if not m or m.end() == pos:
            raise UnsupportedFormula(f"cannot tokenize near {formula[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _parse(tokens: list[str]):
    """Recursive-descent parse into ('attr', name) / (op, left, right)."""

    def expr(i):
        node, i = term(i)
        while i < len(tokens) and tokens[i] == "OR":
            rhs, i = term(i + 1)
            node = ("OR", node, rhs)
        return node, i

    def term(i):
        node, i = atom(i)
        while i < len(tokens) and tokens[i] == "AND":
            rhs, i = atom(i + 1)
            node = ("AND", node, rhs)
        return node, i

    def atom(i):
        if i >= len(tokens):
            raise UnsupportedFormula("unexpected end of formula")
        tok = tokens[i]
        if tok == "(":
            node, i = expr(i + 1)
            if i >= len(tokens) or tokens[i] != ")":
                raise UnsupportedFormula("unbalanced parentheses")
            return node, i + 1
        if tok in (")", "AND", "OR"):
            raise UnsupportedFormula(f"unexpected token {tok!r}")
        return ("attr", tok), i + 1

    node, i = expr(0)
    if i != len(tokens):
        raise UnsupportedFormula(f"trailing tokens {tokens[i:]!r}")
    return node


def formula_to_lsss(formula: str) -> AccessStructure:
    """Convert an AND/OR formula over attribute names to an LSSS."""
    tree = _parse(_tokenize(formula))
    rows: list[tuple[list[int], str]] = []
    counter = 1

    def walk(node, vector: list[int]):
        nonlocal counter
        kind = node[0]
        if kind == "attr":
            rows.append((vector, node[1]))
        elif kind == "OR":
            walk(node[1], list(vector))
            walk(node[2], list(vector))
        else:  # AND
            left = vector + [0] * (counter - len(vector)) + [1]
            right = [0] * counter + [-1]
            counter += 1
            walk(node[1], left)
            walk(node[2], right)

    walk(tree, [1])
    width = counter
    matrix = tuple(tuple(v + [0] * (width - len(v))) for v, _ in rows)
    attrs = tuple(a for _, a in rows)
    return AccessStructure(matrix, attrs)


def _solve_mod(matrix: list[list[int]], target: list[int]) -> list[int] | None:
    """Solve A x = b over Z_p by Gaussian elimination; None if inconsistent."""
    p = PRIME
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if matrix else 0
    aug = [[matrix[r][c] % p for c in range(n_cols)] + [target[r] % p]
           for r in range(n_rows)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n_cols):
        sel = next((r for r in range(row, n_rows) if aug[r][col]), None)
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        inv_pivot = pow(aug[row][col], -1, p)
        aug[row] = [(x * inv_pivot) % p for x in aug[row]]
        for r in range(n_rows):
            if r != row and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [(a - factor * b) % p for a, b in zip(aug[r], aug[row])]
        pivots.append((row, col))
        row += 1
        if row == n_rows:
            break
    for r in range(row, n_rows):
        if aug[r][n_cols]:
            return None
    x = [0] * n_cols
    for r, c in pivots:
        x[c] = aug[r][n_cols]
    return x


def lsss_satisfy(structure: AccessStructure, attrs: set[str]) -> dict[int, int] | None:
    """Reconstruction coefficients {row: omega} or None.

    Coefficients satisfy sum_i omega_i * M_i = (1, 0, ..., 0) over rows
    whose attribute is in ``attrs``.
    """
    rows = [i for i, a in enumerate(structure.row_attrs) if a in attrs]
    if not rows:
        return None
    # transpose: unknowns are per-row coefficients
    system = [[structure.matrix[i][c] for i in rows] for c in range(structure.num_cols)]
    target = [1] + [0] * (structure.num_cols - 1)
    solution = _solve_mod(system, target)
    if solution is None:
        return None
    return {row: omega for row, omega in zip(rows, solution)}

"""Integral simplicial homology via Smith normal form.

Chain complexes are built from explicit cell lists and a face rule; the
constructor checks that the boundary of a boundary vanishes.  Homology
groups come out as a free rank plus invariant-factor torsion, computed by
exact integer pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InvariantBroken, OutOfRange


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _snf(matrix, transforms: bool):
    a = [list(row) for row in matrix]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = _identity(nr) if transforms else None
    v = _identity(nc) if transforms else None

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def row_add(i, j, q):
        # row i -= q * row j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        if u is not None:
            u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_add(i, j, q):
        # col i -= q * col j
        for row in a:
            row[i] -= q * row[j]
        if v is not None:
            for row in v:
                row[i] -= q * row[j]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                val = abs(a[i][j])
                if val and (best is None or val < best):
                    best = val
                    pivot = (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])

        while True:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_add(i, t, q)
                    if a[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_add(j, t, q)
                    if a[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the submatrix
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, -1)  # fold the offending row into the pivot row

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
        t += 1

    return a, u, v


def smith_normal_form(matrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Diagonalise an integer matrix: returns (d, u, v) with u m v = d,
    u and v unimodular, and each diagonal entry dividing the next."""
    d, u, v = _snf(matrix, transforms=True)
    return d, u, v


def invariant_factors(matrix) -> tuple[int, ...]:
    """Non-zero diagonal of the Smith normal form."""
    d, _, _ = _snf(matrix, transforms=False)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(d[i][i])
    return tuple(out)


def matrix_rank(matrix) -> int:
    return len(invariant_factors(matrix))


@dataclass(frozen=True)
class ChainComplex:
    """Finite chain complex of free abelian groups with chosen cell bases."""

    cells: tuple[tuple, ...]
    boundaries: tuple  # boundaries[d]: matrix of shape (#cells[d-1], #cells[d])

    @classmethod
    def from_cells(cls, cells: Sequence[Sequence], face_list: Callable) -> "ChainComplex":
        cells = tuple(tuple(layer) for layer in cells)
        while cells and not cells[-1]:
            cells = cells[:-1]
        index = [
            {cell: i for i, cell in enumerate(layer)} for layer in cells
        ]
        boundaries = [None]
        for d in range(1, len(cells)):
            rows = len(cells[d - 1])
            mat = [[0] * len(cells[d]) for _ in range(rows)]
            for j, cell in enumerate(cells[d]):
                for coeff, face in face_list(d, cell):
                    if face not in index[d - 1]:
                        raise InvariantBroken(
                            "face of a cell is missing from the complex", dim=d
                        )
                    mat[index[d - 1][face]][j] += coeff
            boundaries.append(mat)
        for d in range(2, len(cells)):
            _assert_zero_product(boundaries[d - 1], boundaries[d], d)
        return cls(cells, tuple(boundaries))

    def size(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d < len(self.cells) else 0

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(layer) for d, layer in enumerate(self.cells))


def _assert_zero_product(outer, inner, d):
    # outer: C_{d-1} -> C_{d-2}, inner: C_d -> C_{d-1}
    for j in range(len(inner[0]) if inner else 0):
        col = [inner[i][j] for i in range(len(inner))]
        for r in range(len(outer)):
            s = sum(outer[r][i] * col[i] for i in range(len(col)) if col[i])
            if s != 0:
                raise InvariantBroken(
                    "boundary of a boundary does not vanish", dim=d, row=r, col=j
                )


@dataclass(frozen=True)
class HomologyResult:
    groups: tuple[tuple[int, tuple[int, ...]], ...]  # (rank, torsion) per degree

    def to_json(self) -> dict:
        return {
            "H": [
                {"rank": rank, "torsion": list(torsion)} for rank, torsion in self.groups
            ]
        }

    def __str__(self) -> str:
        parts = []
        for rank, torsion in self.groups:
            terms = ["Z"] * rank + [f"Z/{t}" for t in torsion]
            parts.append(" + ".join(terms) if terms else "0")
        return ", ".join(f"H{d} = {g}" for d, g in enumerate(parts))


def homology(complex_: ChainComplex, up_to: int | None = None) -> HomologyResult:
    """Integral homology of the complex, degree by degree.

    Cross-checks the alternating sums: the Euler characteristic from cell
    counts must match the one from Betti numbers.
    """
    top = complex_.dimension
    if up_to is None:
        up_to = top
    if up_to < 0:
        raise OutOfRange("homology degree must be non-negative", up_to=up_to)

    factors = {}
    for d in range(1, top + 1):
        factors[d] = invariant_factors(complex_.boundaries[d])

    groups = []
    for d in range(0, up_to + 1):
        rank_d = len(factors.get(d, ()))
        rank_up = len(factors.get(d + 1, ()))
        free = complex_.size(d) - rank_d - rank_up
        torsion = tuple(f for f in factors.get(d + 1, ()) if f > 1)
        groups.append((free, torsion))

    if up_to >= top:
        betti = sum((-1) ** d * g[0] for d, g in enumerate(groups))
        if betti != complex_.euler_characteristic():
            raise InvariantBroken(
                "Betti numbers disagree with the Euler characteristic",
                betti_sum=betti,
                euler=complex_.euler_characteristic(),
            )
    return HomologyResult(tuple(groups))


def connected_components(complex_: ChainComplex) -> int:
    """Number of path components, read off the 1-skeleton."""
    n = complex_.size(0)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if complex_.dimension >= 1:
        mat = complex_.boundaries[1]
        for j in range(complex_.size(1)):
            ends = [i for i in range(n) if mat[i][j]]
            for a, b in zip(ends, ends[1:]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
    return len({find(x) for x in range(n)})

"""Exact integer linear algebra: Smith normal form, ranks, chain complexes.

Matrices are stored densely as tuples of Python ints.  Everything in this
package stays at desk scale (a few hundred rows at most), where dense storage
beats any sparse bookkeeping; :meth:`IntMatrix.from_triplets` accepts sparse
input and :meth:`IntMatrix.to_json` writes the sparse triplet dump.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from sympy import isprime

from .abelian import FgAbGroup

__all__ = [
    "IntMatrix",
    "SmithForm",
    "smith_normal_form",
    "rank_Q",
    "rank_mod_p",
    "integer_kernel",
    "solve_integer",
    "Cokernel",
    "cokernel",
    "ChainComplex",
    "homology",
    "betti",
]


class IntMatrix:
    """Immutable ``rows x cols`` integer matrix."""

    __slots__ = ("_rows", "_cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows: Optional[int] = None,
                 cols: Optional[int] = None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        for row in data:
            if len(row) != cols:
                raise ValueError(f"row of length {len(row)} in a matrix with {cols} columns")
        self._rows, self._cols, self._data = rows, cols, data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: Optional[int] = None,
                 cols: Optional[int] = None) -> "IntMatrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            m[i][i] = d
        return cls(m, rows, cols)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[Sequence[int]]) -> "IntMatrix":
        m = [[0] * cols for _ in range(rows)]
        for i, j, v in triplets:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            m[i][j] += int(v)
        return cls(m, rows, cols)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return self._rows, self._cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self._rows and 0 <= j < self._cols):
            raise IndexError(f"index ({i}, {j}) outside a {self._rows}x{self._cols} matrix")
        return self._data[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self._data), self._cols, self._rows) if self._rows else \
            IntMatrix.zeros(self._cols, 0)

    T = property(transpose)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self._cols != other._rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = list(zip(*other._data)) if other._rows else [()] * other._cols
        data = [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data]
        return IntMatrix(data, self._rows, other._cols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self._cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         self._rows, self._cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._data], self._rows, self._cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix([[c * a for a in r] for r in self._data], self._rows, self._cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[self._data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self._rows != other._rows:
            raise ValueError("row count mismatch")
        return IntMatrix([a + b for a, b in zip(self._data, other._data)],
                         self._rows, self._cols + other._cols)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.shape, self._data))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, rows={self._rows}, cols={self._cols})"

    def to_json(self) -> dict:
        return {
            "rows": self._rows,
            "cols": self._cols,
            "entries": [[i, j, v] for i, r in enumerate(self._data) for j, v in enumerate(r) if v],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IntMatrix":
        return cls.from_triplets(int(data["rows"]), int(data["cols"]), data.get("entries", []))


MatrixLike = Union[IntMatrix, Sequence[Sequence[int]]]


def as_matrix(m: MatrixLike) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


@dataclass(frozen=True)
class SmithForm:
    """``left @ m @ right == diag(invariant_factors)`` padded with zeros.

    ``left_inverse`` is the inverse of ``left``; its columns are the
    generators of ``coker(m)`` in the new basis.
    """

    invariant_factors: tuple[int, ...]
    rank: int
    left: IntMatrix
    right: IntMatrix
    left_inverse: IntMatrix


def smith_normal_form(m: MatrixLike) -> SmithForm:
    """Smith normal form by pivot elimination with smallest-entry pivots.

    >>> smith_normal_form([[2, 4], [6, 8]]).invariant_factors
    (2, 4)
    """
    m = as_matrix(m)
    r, c = m.shape
    A = m.tolist()
    L = [[int(i == j) for j in range(r)] for i in range(r)]
    Li = [[int(i == j) for j in range(r)] for i in range(r)]
    R = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]
        for row in Li:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        L[dst] = [a + q * b for a, b in zip(L[dst], L[src])]
        for row in Li:
            row[src] -= q * row[dst]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in R:
            row[dst] += q * row[src]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            clean = True
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    clean = clean and A[t][j] == 0
            if not clean:
                # move the smallest leftover of row/column t onto the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t + 1, r) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t + 1, c) if A[t][j]]
                _, i, j = min(cands)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            L[t] = [-a for a in L[t]]
            for row in Li:
                row[t] = -row[t]
        t += 1

    factors = tuple(A[i][i] for i in range(t))
    return SmithForm(factors, t, IntMatrix(L, r, r), IntMatrix(R, c, c), IntMatrix(Li, r, r))


def _fraction_free_rank(rows: list[list[int]], ncols: int) -> int:
    # Bareiss elimination; all intermediate values are exact minors.
    A = [list(r) for r in rows]
    rank, prev = 0, 1
    nrows = len(A)
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                A[i][j] = (A[rank][col] * A[i][j] - A[i][col] * A[rank][j]) // prev
            A[i][col] = 0
        prev = A[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_Q(m: MatrixLike) -> int:
    """Rank over ``Q`` via fraction-free Gaussian elimination (independent of SNF)."""
    m = as_matrix(m)
    return _fraction_free_rank(m.tolist(), m.cols)


def rank_mod_p(m: MatrixLike, p: int) -> int:
    """Rank over ``F_p``."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    m = as_matrix(m)
    A = [[x % p for x in row] for row in m.tolist()]
    rank = 0
    for col in range(m.cols):
        piv = next((i for i in range(rank, m.rows) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], -1, p)
        A[rank] = [x * inv % p for x in A[rank]]
        for i in range(m.rows):
            if i != rank and A[i][col]:
                f = A[i][col]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def rank_fraction(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix (clears denominators, then :func:`rank_Q`)."""
    from math import lcm

    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    out = []
    for r in rows:
        den = lcm(*(Fraction(x).denominator for x in r))
        out.append([int(Fraction(x) * den) for x in r])
    return _fraction_free_rank(out, len(out[0]))


def integer_kernel(m: MatrixLike) -> IntMatrix:
    """Columns form a ``Z``-basis of ``{x : m x = 0}``."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    cols = list(range(snf.rank, m.cols))
    return snf.right.submatrix(range(m.cols), cols)


def solve_integer(m: MatrixLike, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some integer ``x`` with ``m x = b``, or ``None`` if there is none."""
    m = as_matrix(m)
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    snf = smith_normal_form(m)
    lb = snf.left.apply(b)
    y = [0] * m.cols
    for i, d in enumerate(snf.invariant_factors):
        if lb[i] % d:
            return None
        y[i] = lb[i] // d
    if any(lb[snf.rank:]):
        return None
    return snf.right.apply(y)


@dataclass(frozen=True)
class Cokernel:
    """``Z^rows / im(m)`` with explicit coordinates.

    ``to_gens`` maps ``Z^rows`` to coordinates in the canonical generators of
    ``group`` (torsion coordinates still to be reduced), ``from_gens`` maps a
    canonical generator back to a representative in ``Z^rows``.
    """

    group: FgAbGroup
    to_gens: IntMatrix
    from_gens: IntMatrix

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        return reduce_coords(self.group, coords)


def reduce_coords(group: FgAbGroup, coords: Sequence[int]) -> tuple[int, ...]:
    return tuple(x if n == 0 else x % n for x, n in zip(coords, group.generator_orders))


def cokernel(m: MatrixLike) -> Cokernel:
    m = as_matrix(m)
    snf = smith_normal_form(m)
    free_idx = list(range(snf.rank, m.rows))
    tors_idx = [i for i, d in enumerate(snf.invariant_factors) if d > 1]
    idx = free_idx + tors_idx
    group = FgAbGroup(len(free_idx), tuple(snf.invariant_factors[i] for i in tors_idx))
    to_gens = snf.left.submatrix(idx, range(m.rows))
    from_gens = snf.left_inverse.submatrix(range(m.rows), idx)
    return Cokernel(group, to_gens, from_gens)


class ChainComplex:
    """Free chain complex ``C_top -> ... -> C_1 -> C_0`` of finite rank.

    ``boundaries[n-1]`` is ``d_n : C_n -> C_{n-1}``, a ``ranks[n-1] x ranks[n]``
    matrix.  Construction fails if shapes disagree or ``d d != 0``.
    """

    def __init__(self, ranks: Sequence[int], boundaries: Sequence[MatrixLike] = ()):
        self.ranks = tuple(int(r) for r in ranks)
        if any(r < 0 for r in self.ranks):
            raise ValueError("chain ranks must be non-negative")
        bds = [as_matrix(b) for b in boundaries]
        if not self.ranks and bds:
            raise ValueError("boundaries given for an empty complex")
        if self.ranks and len(bds) != len(self.ranks) - 1:
            raise ValueError(f"expected {len(self.ranks) - 1} boundary matrices, got {len(bds)}")
        for n, d in enumerate(bds, start=1):
            want = (self.ranks[n - 1], self.ranks[n])
            if d.shape != want:
                # a 0 x k or k x 0 matrix has no entries, any declared shape is fine
                if d.rows * d.cols == 0 and want[0] * want[1] == 0:
                    d = IntMatrix.zeros(*want)
                else:
                    raise ValueError(f"d_{n} has shape {d.shape}, expected {want}")
            bds[n - 1] = d
        for n in range(2, len(bds) + 1):
            if not (bds[n - 2] @ bds[n - 1]).is_zero():
                raise ValueError(f"d_{n - 1} d_{n} != 0")
        self.boundaries = tuple(bds)

    @property
    def top_dim(self) -> int:
        return len(self.ranks) - 1

    def d(self, n: int) -> IntMatrix:
        """``d_n``, with zero maps outside ``1..top_dim``."""
        if 1 <= n <= self.top_dim:
            return self.boundaries[n - 1]
        rows = self.ranks[n - 1] if 0 <= n - 1 <= self.top_dim else 0
        cols = self.ranks[n] if 0 <= n <= self.top_dim else 0
        return IntMatrix.zeros(rows, cols)

    def is_empty(self) -> bool:
        return not any(self.ranks)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * r for n, r in enumerate(self.ranks))

    def change_basis(self, bases: Sequence[MatrixLike]) -> "ChainComplex":
        """Complex with ``d_n' = P_{n-1}^{-1} d_n P_n`` for unimodular ``P_n``.

        ``bases[n]`` must be unimodular; its inverse is computed exactly.
        """
        P = [as_matrix(b) for b in bases]
        Pinv = [unimodular_inverse(b) for b in P]
        return ChainComplex(self.ranks, [Pinv[n - 1] @ self.d(n) @ P[n]
                                         for n in range(1, self.top_dim + 1)])

    def to_json(self) -> dict:
        return {"ranks": list(self.ranks), "boundaries": [d.to_json() for d in self.boundaries]}

    @classmethod
    def from_json(cls, data: dict) -> "ChainComplex":
        ranks = [int(r) for r in data["ranks"]]
        bds = []
        for n, b in enumerate(data.get("boundaries", []), start=1):
            if isinstance(b, dict):
                rows, cols = int(b.get("rows", ranks[n - 1])), int(b.get("cols", ranks[n]))
                bds.append(IntMatrix.from_triplets(rows, cols, b.get("entries", [])))
            elif ranks[n - 1] == 0 or ranks[n] == 0:
                if any(len(r) for r in b):
                    raise ValueError(f"d_{n} must be empty for ranks {ranks[n - 1]} x {ranks[n]}")
                bds.append(IntMatrix.zeros(ranks[n - 1], ranks[n]))
            else:
                bds.append(IntMatrix(b, ranks[n - 1], ranks[n]))
        return cls(ranks, bds)

    def __eq__(self, other):
        return isinstance(other, ChainComplex) and self.ranks == other.ranks and \
            self.boundaries == other.boundaries

    def __hash__(self):
        return hash((self.ranks, self.boundaries))

    def __repr__(self):
        return f"ChainComplex(ranks={list(self.ranks)})"


def unimodular_inverse(m: MatrixLike) -> IntMatrix:
    """Exact inverse of a unimodular matrix (Gauss-Jordan over ``Q``)."""
    m = as_matrix(m)
    n = m.rows
    if m.cols != n:
        raise ValueError("matrix must be square")
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m.tolist())]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for i in range(n):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    out = [row[n:] for row in A]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return IntMatrix([[int(x) for x in row] for row in out], n, n)


def homology(c: ChainComplex) -> list[FgAbGroup]:
    """``[H_0, ..., H_top]`` as finitely generated abelian groups."""
    forms = {n: smith_normal_form(c.d(n)) for n in range(1, c.top_dim + 1)}
    out = []
    for n, rank in enumerate(c.ranks):
        rk_out = forms[n].rank if n in forms else 0
        incoming = forms.get(n + 1)
        rk_in = incoming.rank if incoming else 0
        tors = tuple(d for d in incoming.invariant_factors if d > 1) if incoming else ()
        out.append(FgAbGroup(rank - rk_out - rk_in, tors))
    return out


def betti(c: ChainComplex, coeff: Union[str, int] = "Q") -> list[int]:
    """Betti numbers over ``Q`` (``coeff="Q"``) or over ``F_p`` (``coeff=p``)."""
    if coeff in ("Q", 0):
        rk = lambda m: rank_Q(m)  # noqa: E731
    else:
        p = int(coeff)
        if not isprime(p):
            raise ValueError(f"{coeff!r} is not a prime")
        rk = lambda m: rank_mod_p(m, p)  # noqa: E731
    ranks = [rk(c.d(n)) for n in range(c.top_dim + 2)]
    return [r - ranks[n] - ranks[n + 1] for n, r in enumerate(c.ranks)]


def lattice_basis(vectors: Iterable[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """A ``Z``-basis (row Hermite form) of the span of ``vectors`` in ``Z^dim``."""
    rows = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        if live:
            piv = live[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    # reduce entries above pivots
    for i, b in enumerate(basis):
        c = next(j for j, x in enumerate(b) if x)
        for k in range(i):
            q = basis[k][c] // b[c]
            if q:
                basis[k] = [a - q * x for a, x in zip(basis[k], b)]
    return [tuple(b) for b in basis]

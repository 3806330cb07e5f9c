"""Dense exact linear algebra over GF(2).

A matrix stores one Python integer per row (bit j = column j), so a row
operation is a single XOR and all arithmetic is exact at any size.
Instances are immutable; every operation returns a new matrix.

Beyond rank and the usual ring operations this module provides the
symmetric-congruence machinery the rest of the toolkit is built on:
reduction of a symmetric matrix to an invertible-core block form by
simultaneous row/column operations, the congruence test (rank plus
zero-diagonal class), and an exact Gram factorization A = B^T B whose
factor rank exceeds rank(A) by at most one, and only when A has an
all-zero diagonal.

Text format: first line ``<rows> <cols>``, then one '0'/'1' line per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, StructuralError


def dot(a: int, b: int) -> int:
    """Parity of the standard scalar product of two packed bit vectors."""
    return (a & b).bit_count() & 1


@dataclass(frozen=True)
class Gf2Matrix:
    """Immutable dense GF(2) matrix with bit-packed rows."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise StructuralError("matrix dimensions must be nonnegative")
        if len(self.bits) != self.rows:
            raise StructuralError(
                f"expected {self.rows} packed rows, got {len(self.bits)}"
            )
        limit = 1 << self.cols
        for r in self.bits:
            if not 0 <= r < limit:
                raise StructuralError("row has bits beyond the declared width")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def ones(cls, n: int) -> "Gf2Matrix":
        """The all-ones n x n matrix."""
        return cls(n, n, ((1 << n) - 1,) * n)

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "Gf2Matrix":
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        packed = []
        for row in entries:
            if len(row) != cols:
                raise StructuralError("ragged row in matrix literal")
            acc = 0
            for j, v in enumerate(row):
                if v & 1:
                    acc |= 1 << j
            packed.append(acc)
        return cls(rows, cols, tuple(packed))

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "Gf2Matrix":
        n = len(diag)
        return cls(n, n, tuple((d & 1) << i for i, d in enumerate(diag)))

    # -- basic queries ------------------------------------------------------

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise StructuralError(f"index ({i},{j}) out of range")
        return (self.bits[i] >> j) & 1

    def row(self, i: int) -> int:
        return self.bits[i]

    def column(self, j: int) -> int:
        acc = 0
        for i, r in enumerate(self.bits):
            acc |= ((r >> j) & 1) << i
        return acc

    def diag_bits(self) -> tuple[int, ...]:
        return tuple((self.bits[i] >> i) & 1 for i in range(min(self.rows, self.cols)))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        return all(
            self.bits[i] == self.column(i) for i in range(self.rows)
        )

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.bits)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise StructuralError(
                f"cannot add {self.rows}x{self.cols} and {other.rows}x{other.cols}"
            )
        return Gf2Matrix(
            self.rows, self.cols,
            tuple(a ^ b for a, b in zip(self.bits, other.bits)),
        )

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise StructuralError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = []
        for r in self.bits:
            acc = 0
            while r:
                j = (r & -r).bit_length() - 1
                acc ^= other.bits[j]
                r &= r - 1
            out.append(acc)
        return Gf2Matrix(self.rows, other.cols, tuple(out))

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(
            self.cols, self.rows, tuple(self.column(j) for j in range(self.cols))
        )

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Gf2Matrix":
        for i in row_idx:
            if not 0 <= i < self.rows:
                raise StructuralError(f"row index {i} out of range")
        for j in col_idx:
            if not 0 <= j < self.cols:
                raise StructuralError(f"column index {j} out of range")
        out = []
        for i in row_idx:
            acc = 0
            src = self.bits[i]
            for t, j in enumerate(col_idx):
                acc |= ((src >> j) & 1) << t
            out.append(acc)
        return Gf2Matrix(len(row_idx), len(col_idx), tuple(out))

    def flip_symmetric(self, pairs: Iterable[tuple[int, int]]) -> "Gf2Matrix":
        """Flip entries (i, j) and (j, i) for every listed pair."""
        work = list(self.bits)
        for i, j in pairs:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise StructuralError(f"index ({i},{j}) out of range")
            work[i] ^= 1 << j
            if i != j:
                work[j] ^= 1 << i
        return Gf2Matrix(self.rows, self.cols, tuple(work))

    def rank(self) -> int:
        work = [r for r in self.bits if r]
        rank = 0
        for col in range(self.cols):
            piv = None
            for t in range(rank, len(work)):
                if (work[t] >> col) & 1:
                    piv = t
                    break
            if piv is None:
                continue
            work[rank], work[piv] = work[piv], work[rank]
            for t in range(len(work)):
                if t != rank and ((work[t] >> col) & 1):
                    work[t] ^= work[rank]
            rank += 1
            if rank == len(work):
                break
        return rank

    def inverse(self) -> "Gf2Matrix":
        if not self.is_square():
            raise StructuralError("only square matrices can be inverted")
        n = self.rows
        aug = [self.bits[i] | (1 << (n + i)) for i in range(n)]
        for col in range(n):
            piv = None
            for t in range(col, n):
                if (aug[t] >> col) & 1:
                    piv = t
                    break
            if piv is None:
                raise StructuralError("matrix is not invertible")
            aug[col], aug[piv] = aug[piv], aug[col]
            for t in range(n):
                if t != col and ((aug[t] >> col) & 1):
                    aug[t] ^= aug[col]
        return Gf2Matrix(n, n, tuple(r >> n for r in aug))

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for r in self.bits:
            lines.append("".join(str((r >> j) & 1) for j in range(self.cols)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Gf2Matrix":
        m, _ = parse_matrix_lines(text.splitlines(), 0)
        return m

    def to_strings(self) -> list[str]:
        return ["".join(str((r >> j) & 1) for j in range(self.cols)) for r in self.bits]


def parse_matrix_lines(lines: Sequence[str], start: int) -> tuple[Gf2Matrix, int]:
    """Parse one matrix from ``lines`` beginning at index ``start``.

    Returns the matrix and the index of the first unconsumed line.
    """
    if start >= len(lines):
        raise ParseError("expected matrix header", start + 1)
    header = lines[start].split()
    if len(header) != 2:
        raise ParseError("matrix header must be '<rows> <cols>'", start + 1)
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("matrix header must hold two integers", start + 1) from None
    if rows < 0 or cols < 0:
        raise ParseError("matrix dimensions must be nonnegative", start + 1)
    packed = []
    for i in range(rows):
        idx = start + 1 + i
        if idx >= len(lines):
            raise ParseError(f"expected {rows} matrix rows", idx + 1)
        line = lines[idx].strip()
        if len(line) != cols or any(c not in "01" for c in line):
            raise ParseError(
                f"column {len(line) + 1}: row must be exactly {cols} characters of 0/1",
                idx + 1,
            )
        acc = 0
        for j, c in enumerate(line):
            if c == "1":
                acc |= 1 << j
        packed.append(acc)
    return Gf2Matrix(rows, cols, tuple(packed)), start + 1 + rows


# -- stacking ---------------------------------------------------------------


def hstack(mats: Sequence[Gf2Matrix]) -> Gf2Matrix:
    if not mats:
        return Gf2Matrix.zeros(0, 0)
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise StructuralError("hstack requires equal row counts")
    out = [0] * rows
    shift = 0
    for m in mats:
        for i in range(rows):
            out[i] |= m.bits[i] << shift
        shift += m.cols
    return Gf2Matrix(rows, shift, tuple(out))


def vstack(mats: Sequence[Gf2Matrix]) -> Gf2Matrix:
    if not mats:
        return Gf2Matrix.zeros(0, 0)
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise StructuralError("vstack requires equal column counts")
    bits: list[int] = []
    for m in mats:
        bits.extend(m.bits)
    return Gf2Matrix(len(bits), cols, tuple(bits))


def block_assemble(grid: Sequence[Sequence[Gf2Matrix]]) -> Gf2Matrix:
    """Assemble a block grid, validating that every row/column line up."""
    if not grid:
        return Gf2Matrix.zeros(0, 0)
    widths = [b.cols for b in grid[0]]
    for row in grid:
        if len(row) != len(widths):
            raise StructuralError("ragged block grid")
        if [b.cols for b in row] != widths:
            raise StructuralError("block column widths disagree across rows")
        heights = {b.rows for b in row}
        if len(heights) > 1:
            raise StructuralError("block row heights disagree within a row")
    return vstack([hstack(row) for row in grid])


def block_diag(mats: Sequence[Gf2Matrix]) -> Gf2Matrix:
    total_r = sum(m.rows for m in mats)
    total_c = sum(m.cols for m in mats)
    bits = []
    shift = 0
    for m in mats:
        for r in m.bits:
            bits.append(r << shift)
        shift += m.cols
    return Gf2Matrix(total_r, total_c, tuple(bits))


# -- symmetric congruence ----------------------------------------------------


def is_alternate(m: Gf2Matrix) -> bool:
    """True iff the (square, symmetric) matrix has an all-zero diagonal."""
    _require_symmetric(m, "alternateness test")
    return all(b == 0 for b in m.diag_bits())


def _require_symmetric(m: Gf2Matrix, what: str) -> None:
    if not m.is_square():
        raise StructuralError(f"{what} requires a square matrix")
    if not m.is_symmetric():
        raise StructuralError(f"{what} requires a symmetric matrix")


@dataclass(frozen=True)
class CongruenceReduction:
    """Decomposition input = transform^T @ core @ transform.

    ``core`` is block diagonal with an invertible top-left block of size
    ``core_rank`` (a mix of 1x1 identity pivots and 2x2 off-diagonal
    pivot blocks) and zeros elsewhere.
    """

    transform: Gf2Matrix
    core: Gf2Matrix
    core_rank: int


def congruence_reduce(a: Gf2Matrix) -> CongruenceReduction:
    """Reduce a symmetric matrix by simultaneous row/column operations.

    Pivoting is deterministic: the first available diagonal pivot in a
    row-major scan is used; when the remaining diagonal is all zero, the
    first off-diagonal 1 supplies a 2x2 pivot block.
    """
    _require_symmetric(a, "congruence reduction")
    n = a.rows
    d = list(a.bits)
    s = [1 << i for i in range(n)]  # row-op log; invariant: d = s @ a @ s^T

    def swap(i: int, j: int) -> None:
        if i == j:
            return
        d[i], d[j] = d[j], d[i]
        mask = (1 << i) | (1 << j)
        for t in range(n):
            bi = (d[t] >> i) & 1
            bj = (d[t] >> j) & 1
            if bi != bj:
                d[t] ^= mask
        s[i], s[j] = s[j], s[i]

    def add(i: int, j: int) -> None:
        # row i += row j, then column i += column j
        d[i] ^= d[j]
        for t in range(n):
            if (d[t] >> j) & 1:
                d[t] ^= 1 << i
        s[i] ^= s[j]

    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if (d[i] >> i) & 1), None)
        if piv is not None:
            swap(k, piv)
            for t in range(k + 1, n):
                if (d[t] >> k) & 1:
                    add(t, k)
            k += 1
            continue
        # remaining diagonal all zero: locate first off-diagonal 1 row-major
        found = None
        for i in range(k, n):
            rest = (d[i] >> k) << k  # bits at columns >= k
            rest &= ~(1 << i)
            if rest:
                found = (i, (rest & -rest).bit_length() - 1)
                break
        if found is None:
            break
        i, j = found
        swap(k, i)
        swap(k + 1, j)
        for t in range(k + 2, n):
            lo = (d[t] >> k) & 1
            hi = (d[t] >> (k + 1)) & 1
            if lo:
                add(t, k + 1)
            if hi:
                add(t, k)
        k += 2

    s_mat = Gf2Matrix(n, n, tuple(s))
    transform = s_mat.transpose().inverse()
    return CongruenceReduction(transform=transform, core=Gf2Matrix(n, n, tuple(d)), core_rank=k)


def congruent(a: Gf2Matrix, b: Gf2Matrix) -> bool:
    """Whether two symmetric matrices are congruent over GF(2).

    Congruence preserves both rank and the all-zero-diagonal class, and
    within each class equal rank suffices (validated against exhaustive
    search over invertible transforms in the test suite).
    """
    _require_symmetric(a, "congruence test")
    _require_symmetric(b, "congruence test")
    if a.rows != b.rows:
        raise StructuralError("congruence test requires equal sizes")
    if is_alternate(a) != is_alternate(b):
        return False
    return a.rank() == b.rank()


@dataclass(frozen=True)
class GramFactor:
    """Factor B with B^T B equal to the symmetric input."""

    factor: Gf2Matrix
    input_rank: int
    factor_rank: int


# 3x3 congruence sending diag(1, [[0,1],[1,0]]) to the identity; its
# inverse transpose is the Gram factor of that block.
_TRIPLE_FIX = Gf2Matrix.from_rows([[1, 0, 1], [1, 1, 1], [1, 1, 0]])


def _embed_triple(n: int, idx: tuple[int, int, int], local: Gf2Matrix) -> Gf2Matrix:
    rows = [1 << i for i in range(n)]
    for a, gi in enumerate(idx):
        acc = 0
        for b, gj in enumerate(idx):
            if local.get(a, b):
                acc |= 1 << gj
        rows[gi] = acc
    return Gf2Matrix(n, n, tuple(rows))


def _factor_invertible(m: Gf2Matrix) -> Gf2Matrix:
    """E with E^T E = m for invertible symmetric m with a nonzero diagonal."""
    red = congruence_reduce(m)
    n = m.rows
    if red.core_rank != n:
        raise StructuralError("matrix is not invertible")
    core = red.core
    # classify pivot atoms: 1x1 identity entries vs 2x2 off-diagonal blocks
    singles: list[int] = []
    pairs: list[int] = []
    k = 0
    while k < n:
        if core.get(k, k):
            singles.append(k)
            k += 1
        else:
            pairs.append(k)
            k += 2
    if pairs and not singles:
        raise StructuralError("matrix with all-zero diagonal has no equal-rank factor")
    q_acc = Gf2Matrix.identity(n)
    work = core
    anchor = singles[0] if singles else -1
    for p in pairs:
        q = _embed_triple(n, (anchor, p, p + 1), _TRIPLE_FIX)
        work = q @ work @ q.transpose()
        q_acc = q @ q_acc
    if work != Gf2Matrix.identity(n):
        raise StructuralError("congruence cascade failed to reach the identity")
    return q_acc.transpose().inverse() @ red.transform


def gram_factor(a: Gf2Matrix) -> GramFactor:
    """Factor a symmetric matrix as B^T B.

    rank(B) = rank(a) whenever a has a nonzero diagonal entry; for an
    all-zero diagonal, a bordering row raises the factor rank by at most
    one. Deterministic: driven entirely by congruence_reduce pivoting.
    """
    _require_symmetric(a, "Gram factorization")
    n = a.rows
    input_rank = a.rank()
    alternate = is_alternate(a)
    if alternate:
        # border with a single diagonal 1 in a fresh first row/column
        top = Gf2Matrix(1, n + 1, (1,))
        rest = Gf2Matrix(n, n + 1, tuple(r << 1 for r in a.bits))
        target = vstack([top, rest])
    else:
        target = a
    red = congruence_reduce(target)
    r = red.core_rank
    if r == 0:
        factor = Gf2Matrix.zeros(0, n)
        return GramFactor(factor=factor, input_rank=input_rank, factor_rank=0)
    d11 = red.core.submatrix(range(r), range(r))
    e11 = _factor_invertible(d11)
    wide = hstack([e11, Gf2Matrix.zeros(r, target.rows - r)])
    full = wide @ red.transform  # r x target.rows, rank r
    if alternate:
        factor = full.submatrix(range(r), range(1, n + 1))
    else:
        factor = full
    return GramFactor(factor=factor, input_rank=input_rank, factor_rank=factor.rank())


# -- rectangular normal forms -------------------------------------------------


def row_echelon_transform(m: Gf2Matrix) -> tuple[Gf2Matrix, int]:
    """Invertible V with V @ m having its nonzero rows first, independent.

    Returns (V, r) where r is rank(m); rows r.. of V @ m are zero.
    """
    nr = m.rows
    work = list(m.bits)
    acc = [1 << i for i in range(nr)]
    prow = 0
    for col in range(m.cols):
        piv = next((t for t in range(prow, nr) if (work[t] >> col) & 1), None)
        if piv is None:
            continue
        work[prow], work[piv] = work[piv], work[prow]
        acc[prow], acc[piv] = acc[piv], acc[prow]
        for t in range(nr):
            if t != prow and ((work[t] >> col) & 1):
                work[t] ^= work[prow]
                acc[t] ^= acc[prow]
        prow += 1
        if prow == nr:
            break
    return Gf2Matrix(nr, nr, tuple(acc)), prow


def rank_normal_form(m: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix, int]:
    """Invertible (R, Q) with R @ m @ Q^T = [[I_r, 0], [0, 0]]."""
    nr, nc = m.rows, m.cols
    row_tr, r = row_echelon_transform(m)
    work = list((row_tr @ m).bits)
    q = [1 << i for i in range(nc)]

    def col_swap(i: int, j: int) -> None:
        if i == j:
            return
        mask = (1 << i) | (1 << j)
        for t in range(nr):
            bi = (work[t] >> i) & 1
            bj = (work[t] >> j) & 1
            if bi != bj:
                work[t] ^= mask
        q[i], q[j] = q[j], q[i]

    def col_add(src: int, dst: int) -> None:
        for t in range(nr):
            if (work[t] >> src) & 1:
                work[t] ^= 1 << dst
        q[dst] ^= q[src]

    # sweep pivot columns to the front; the row phase left each pivot
    # column with a single 1, so column adds only ever touch one row
    for i in range(r):
        p = (work[i] & -work[i]).bit_length() - 1
        col_swap(i, p)
        rest = work[i] & ~(1 << i)
        while rest:
            c = (rest & -rest).bit_length() - 1
            col_add(i, c)
            rest &= rest - 1
    expected = [(1 << i) if i < r else 0 for i in range(nr)]
    if work != expected:
        raise StructuralError("rank normal form sweep failed")
    return row_tr, Gf2Matrix(nc, nc, tuple(q)), r


def solve_left(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    """Some X with a @ X = b; ``a`` must have independent rows."""
    if a.rows != b.rows:
        raise StructuralError("solve_left requires matching row counts")
    nr, nc = a.rows, a.cols
    aug = [a.bits[i] | (b.bits[i] << nc) for i in range(nr)]
    pivots: list[int] = []
    prow = 0
    for col in range(nc):
        piv = next((t for t in range(prow, nr) if (aug[t] >> col) & 1), None)
        if piv is None:
            continue
        aug[prow], aug[piv] = aug[piv], aug[prow]
        for t in range(nr):
            if t != prow and ((aug[t] >> col) & 1):
                aug[t] ^= aug[prow]
        pivots.append(col)
        prow += 1
        if prow == nr:
            break
    if prow < nr:
        raise StructuralError("solve_left requires full row rank")
    xrows = [0] * nc
    for i, p in enumerate(pivots):
        xrows[p] = aug[i] >> nc
    return Gf2Matrix(nc, b.cols, tuple(xrows))

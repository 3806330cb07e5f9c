"""Minimum-rank completion of partial symmetric matrices over GF(2).

Unknown blocks live on the diagonal only. Closed-form values come with
explicit witnesses obtained by replaying the congruence transforms that
prove them, so every result can be checked without trusting a formula.
A brute-force enumerator over all symmetric completions doubles as an
independent oracle for desk-scale instances.

Partial-matrix text format: header ``<k> ; <size_1> ... <size_k>``, then
k*k block entries in row-major order, each either a line ``?`` (allowed
on the diagonal only) or an inline matrix in the dense text format.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import CapacityError, InvariantViolation, ParseError, StructuralError
from .gf2 import (
    Gf2Matrix,
    block_assemble,
    block_diag,
    congruence_reduce,
    hstack,
    parse_matrix_lines,
    rank_normal_form,
    row_echelon_transform,
    solve_left,
    vstack,
)

DEFAULT_ORACLE_BITS = 24


@dataclass(frozen=True)
class PartialSymmetricMatrix:
    """Square block grid; ``None`` marks an unknown (diagonal) block."""

    block_sizes: tuple[int, ...]
    grid: tuple[tuple[Optional[Gf2Matrix], ...], ...]

    def __post_init__(self):
        k = len(self.block_sizes)
        if len(self.grid) != k or any(len(row) != k for row in self.grid):
            raise StructuralError("block grid must be k x k")
        for i in range(k):
            for j in range(k):
                blk = self.grid[i][j]
                if blk is None:
                    if i != j:
                        raise StructuralError(
                            f"unknown block at ({i},{j}): only diagonal blocks may be unknown"
                        )
                    continue
                if blk.rows != self.block_sizes[i] or blk.cols != self.block_sizes[j]:
                    raise StructuralError(
                        f"block ({i},{j}) is {blk.rows}x{blk.cols}, expected "
                        f"{self.block_sizes[i]}x{self.block_sizes[j]}"
                    )
                other = self.grid[j][i]
                if other is None or other != blk.transpose():
                    raise StructuralError(
                        f"block ({j},{i}) must be the transpose of block ({i},{j})"
                    )

    @property
    def size(self) -> int:
        return sum(self.block_sizes)

    def unknown_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.block_sizes)) if self.grid[i][i] is None)

    def substitute(self, witnesses: Sequence[Gf2Matrix]) -> Gf2Matrix:
        unknown = self.unknown_indices()
        if len(witnesses) != len(unknown):
            raise StructuralError(
                f"expected {len(unknown)} witness blocks, got {len(witnesses)}"
            )
        fill = dict(zip(unknown, witnesses))
        rows = []
        for i in range(len(self.block_sizes)):
            row = []
            for j in range(len(self.block_sizes)):
                blk = self.grid[i][j]
                if blk is None:
                    blk = fill[i]
                    if blk.rows != self.block_sizes[i] or not blk.is_symmetric():
                        raise StructuralError(
                            f"witness for block {i} must be symmetric of size {self.block_sizes[i]}"
                        )
                row.append(blk)
            rows.append(row)
        return block_assemble(rows)

    def free_bits(self, require_alternate: bool = False) -> int:
        total = 0
        for i in self.unknown_indices():
            s = self.block_sizes[i]
            total += s * (s - 1) // 2 if require_alternate else s * (s + 1) // 2
        return total

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        k = len(self.block_sizes)
        lines = [f"{k} ; " + " ".join(str(s) for s in self.block_sizes)]
        for i in range(k):
            for j in range(k):
                blk = self.grid[i][j]
                if blk is None:
                    lines.append("?")
                else:
                    lines.append(blk.to_text().rstrip("\n"))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PartialSymmetricMatrix":
        lines = text.splitlines()
        pos = 0
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines) or ";" not in lines[pos]:
            raise ParseError("expected header '<k> ; <size_1> ... <size_k>'", pos + 1)
        head, _, tail = lines[pos].partition(";")
        try:
            k = int(head.strip())
            sizes = tuple(int(t) for t in tail.split())
        except ValueError:
            raise ParseError("header fields must be integers", pos + 1) from None
        if k < 0 or len(sizes) != k or any(s < 0 for s in sizes):
            raise ParseError(f"header declares {k} blocks but {len(sizes)} sizes", pos + 1)
        pos += 1
        grid: list[list[Optional[Gf2Matrix]]] = []
        for i in range(k):
            row: list[Optional[Gf2Matrix]] = []
            for j in range(k):
                while pos < len(lines) and not lines[pos].strip():
                    pos += 1
                if pos >= len(lines):
                    raise ParseError(f"missing block ({i},{j})", len(lines) + 1)
                if lines[pos].strip() == "?":
                    row.append(None)
                    pos += 1
                else:
                    m, pos = parse_matrix_lines(lines, pos)
                    row.append(m)
            grid.append(row)
        while pos < len(lines):
            if lines[pos].strip():
                raise ParseError("trailing content after final block", pos + 1)
            pos += 1
        return cls(block_sizes=sizes, grid=tuple(tuple(r) for r in grid))


@dataclass(frozen=True)
class CompletionResult:
    value: int
    witnesses: tuple[Gf2Matrix, ...]
    achieved_rank: int
    kind: str  # "exact" | "upper_bound"


def _require_sym_block(a: Gf2Matrix, name: str) -> None:
    if not a.is_square() or not a.is_symmetric():
        raise StructuralError(f"{name} must be square and symmetric")


def minrank_corner(a11: Gf2Matrix, a12: Gf2Matrix) -> CompletionResult:
    """Exact minimum rank of [[a11, a12], [a12^T, X]] over symmetric X.

    The value is 2*rank([a11 | a12]) - rank(a11); the witness replays the
    congruence that block-diagonalizes a11 and zeroes the coupled block.
    """
    _require_sym_block(a11, "corner block a11")
    if a12.rows != a11.rows:
        raise StructuralError("a12 must have as many rows as a11")
    value = 2 * hstack([a11, a12]).rank() - a11.rank()
    red = congruence_reduce(a11)
    r = red.core_rank
    n2 = a12.cols
    coupled = red.transform.inverse().transpose() @ a12
    top = coupled.submatrix(range(r), range(n2))
    if r:
        d11_inv = red.core.submatrix(range(r), range(r)).inverse()
        witness = top.transpose() @ d11_inv @ top
    else:
        witness = Gf2Matrix.zeros(n2, n2)
    completed = block_assemble([[a11, a12], [a12.transpose(), witness]])
    achieved = completed.rank()
    if achieved != value:
        raise InvariantViolation(
            f"corner completion witness has rank {achieved}, formula value {value}"
        )
    return CompletionResult(value=value, witnesses=(witness,), achieved_rank=achieved, kind="exact")


def _two_diag_witnesses(a12: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix, int]:
    """Symmetric (X1, X2) with rank [[X1, a12], [a12^T, X2]] = rank(a12)."""
    row_tr, col_tr, r = rank_normal_form(a12)
    n, m = a12.rows, a12.cols
    unit_n = Gf2Matrix.diagonal([1] * r + [0] * (n - r))
    unit_m = Gf2Matrix.diagonal([1] * r + [0] * (m - r))
    ri = row_tr.inverse()
    qi = col_tr.inverse()
    x1 = ri @ unit_n @ ri.transpose()
    x2 = qi @ unit_m @ qi.transpose()
    return x1, x2, r


def minrank_two_diag(a12: Gf2Matrix) -> CompletionResult:
    """Exact minimum rank of [[X1, a12], [a12^T, X2]] over symmetric X1, X2.

    Equals rank(a12); both unknown diagonal blocks must be square of the
    same size, so a12 is required to be square.
    """
    if not a12.is_square():
        raise StructuralError("two-diagonal completion requires a square coupling block")
    x1, x2, r = _two_diag_witnesses(a12)
    completed = block_assemble([[x1, a12], [a12.transpose(), x2]])
    achieved = completed.rank()
    if achieved != r:
        raise InvariantViolation(
            f"two-diagonal witness has rank {achieved}, formula value {r}"
        )
    return CompletionResult(value=r, witnesses=(x1, x2), achieved_rank=achieved, kind="exact")


def three_upper_value(a11: Gf2Matrix, a12: Gf2Matrix, a13: Gf2Matrix, a23: Gf2Matrix) -> int:
    """Upper-bound formula for the two-unknown three-block completion."""
    return (
        2 * hstack([a11, a12, a13]).rank()
        + block_assemble([[a11, a12], [a13.transpose(), a23.transpose()]]).rank()
        - hstack([a11, a12]).rank()
        - hstack([a11, a13]).rank()
    )


def minrank_three_upper(
    a11: Gf2Matrix, a12: Gf2Matrix, a13: Gf2Matrix, a23: Gf2Matrix
) -> CompletionResult:
    """Witnessed upper bound for [[a11,a12,a13],[.,X2,a23],[.,.,X3]].

    Only an upper bound is guaranteed; equality is typical and the oracle
    comparison tests report the empirical gap. Witnesses are constructed
    by pushing the optimal reduced completion back through an explicit
    congruence.
    """
    _require_sym_block(a11, "three-block corner a11")
    n1 = a11.rows
    if a12.rows != n1 or a13.rows != n1:
        raise StructuralError("a12 and a13 must have as many rows as a11")
    n2, n3 = a12.cols, a13.cols
    if a23.rows != n2 or a23.cols != n3:
        raise StructuralError("a23 must be (cols of a12) x (cols of a13)")
    value = three_upper_value(a11, a12, a13, a23)

    total = n1 + n2 + n3
    base = block_assemble([
        [a11, a12, a13],
        [a12.transpose(), Gf2Matrix.zeros(n2, n2), a23],
        [a13.transpose(), a23.transpose(), Gf2Matrix.zeros(n3, n3)],
    ])
    ident = Gf2Matrix.identity
    zero = Gf2Matrix.zeros

    transform = ident(total)

    def current() -> Gf2Matrix:
        return transform @ base @ transform.transpose()

    def block(m: Gf2Matrix, bi: int, bj: int) -> Gf2Matrix:
        offs = [0, n1, n1 + n2, total]
        return m.submatrix(range(offs[bi], offs[bi + 1]), range(offs[bj], offs[bj + 1]))

    # diagonalize the known corner
    red = congruence_reduce(a11)
    r1 = red.core_rank
    corner_tr = red.transform.inverse().transpose()
    transform = block_diag([corner_tr, ident(n2), ident(n3)]) @ transform

    # clear the coupling of the invertible corner core with both strips
    m = current()
    if r1:
        d11_inv = block(m, 0, 0).submatrix(range(r1), range(r1)).inverse()
        d_top = block(m, 0, 1).submatrix(range(r1), range(n2))
        e_top = block(m, 0, 2).submatrix(range(r1), range(n3))
        k_d = hstack([d_top.transpose() @ d11_inv, zero(n2, n1 - r1)])
        k_e = hstack([e_top.transpose() @ d11_inv, zero(n3, n1 - r1)])
        transform = block_assemble([
            [ident(n1), zero(n1, n2), zero(n1, n3)],
            [k_d, ident(n2), zero(n2, n3)],
            [k_e, zero(n3, n2), ident(n3)],
        ]) @ transform

    # column-normalize the residual strips (full-column-rank head first)
    m = current()
    d_low = block(m, 0, 1).submatrix(range(r1, n1), range(n2))
    u2, r_d = row_echelon_transform(d_low.transpose())
    transform = block_diag([ident(n1), u2, ident(n3)]) @ transform
    m = current()
    e_low = block(m, 0, 2).submatrix(range(r1, n1), range(n3))
    u3, r_e = row_echelon_transform(e_low.transpose())
    transform = block_diag([ident(n1), ident(n2), u3]) @ transform

    # decouple the middle coupling from the strip heads
    m = current()
    f_blk = block(m, 1, 2)
    if r_d:
        head = block(m, 0, 1).submatrix(range(r1, n1), range(r_d)).transpose()  # r_d x (n1-r1)
        z = solve_left(head, f_blk.submatrix(range(r_d), range(n3)))
        q = hstack([zero(n3, r1), z.transpose()])
        transform = block_assemble([
            [ident(n1), zero(n1, n2), zero(n1, n3)],
            [zero(n2, n1), ident(n2), zero(n2, n3)],
            [q, zero(n3, n2), ident(n3)],
        ]) @ transform
        m = current()
        f_blk = block(m, 1, 2)
    if r_e:
        head = block(m, 0, 2).submatrix(range(r1, n1), range(r_e))  # (n1-r1) x r_e
        pt = solve_left(head.transpose(), f_blk.submatrix(range(n2), range(r_e)).transpose())
        p = hstack([zero(n2, r1), pt.transpose()])
        transform = block_assemble([
            [ident(n1), zero(n1, n2), zero(n1, n3)],
            [p, ident(n2), zero(n2, n3)],
            [zero(n3, n1), zero(n3, n2), ident(n3)],
        ]) @ transform
        m = current()
        f_blk = block(m, 1, 2)

    for i in range(n2):
        for j in range(n3):
            if (i < r_d or j < r_e) and f_blk.get(i, j):
                raise InvariantViolation("strip decoupling left residue in pinned rows/columns")

    # optimal completion of the reduced tail, pushed back through the transform
    tail = f_blk.submatrix(range(r_d, n2), range(r_e, n3))
    g, h, _ = _two_diag_witnesses(tail)
    want2 = block_diag([zero(r_d, r_d), g])
    want3 = block_diag([zero(r_e, r_e), h])
    off2 = block(m, 1, 1)
    off3 = block(m, 2, 2)
    u2i = u2.inverse()
    u3i = u3.inverse()
    x2 = u2i @ (want2 + off2) @ u2i.transpose()
    x3 = u3i @ (want3 + off3) @ u3i.transpose()

    completed = block_assemble([
        [a11, a12, a13],
        [a12.transpose(), x2, a23],
        [a13.transpose(), a23.transpose(), x3],
    ])
    achieved = completed.rank()
    if achieved > value:
        raise InvariantViolation(
            f"three-block witness has rank {achieved} above the bound {value}"
        )
    return CompletionResult(
        value=value, witnesses=(x2, x3), achieved_rank=achieved, kind="upper_bound"
    )


def davis_woerdeman(a11: Gf2Matrix, a12: Gf2Matrix, a21: Gf2Matrix) -> int:
    """Minimum completion rank with an unconstrained (asymmetric) unknown block."""
    if a12.rows != a11.rows:
        raise StructuralError("a12 must have as many rows as a11")
    if a21.cols != a11.cols:
        raise StructuralError("a21 must have as many columns as a11")
    return (
        hstack([a11, a12]).rank()
        + vstack([a11, a21]).rank()
        - a11.rank()
    )


@dataclass(frozen=True)
class CohenRanks:
    """The eight rank terms of the two-unknown completion formula.

    Stated for fields of characteristic other than 2; over GF(2) this is
    a comparison instrument only and the caller supplies the ranks.
    """

    top_row: int          # rank [a11 a12 a13]
    left_col: int         # rank [a11; a21; a31]
    rows_13_cols_12: int  # rank [[a11, a12], [a31, a32]]
    row_12: int           # rank [a11 a12]
    col_13: int           # rank [a11; a31]
    rows_12_cols_13: int  # rank [[a11, a13], [a21, a23]]
    row_13: int           # rank [a11 a13]
    col_12: int           # rank [a11; a21]


def cohen_minrank(ranks: CohenRanks) -> int:
    """Evaluate the characteristic-!=-2 completion formula as written."""
    branch_a = ranks.rows_13_cols_12 - (ranks.row_12 + ranks.col_13)
    branch_b = ranks.rows_12_cols_13 - (ranks.row_13 + ranks.col_12)
    return ranks.top_row + ranks.left_col + min(branch_a, branch_b)


def cohen_ranks_for(
    a11: Gf2Matrix, a12: Gf2Matrix, a13: Gf2Matrix, a23: Gf2Matrix
) -> CohenRanks:
    """Assemble the eight ranks for a symmetric three-block instance."""
    a21, a31, a32 = a12.transpose(), a13.transpose(), a23.transpose()
    return CohenRanks(
        top_row=hstack([a11, a12, a13]).rank(),
        left_col=vstack([a11, a21, a31]).rank(),
        rows_13_cols_12=block_assemble([[a11, a12], [a31, a32]]).rank(),
        row_12=hstack([a11, a12]).rank(),
        col_13=vstack([a11, a31]).rank(),
        rows_12_cols_13=block_assemble([[a11, a13], [a21, a23]]).rank(),
        row_13=hstack([a11, a13]).rank(),
        col_12=vstack([a11, a21]).rank(),
    )


def brute_force_minrank(
    p: PartialSymmetricMatrix,
    require_alternate: bool = False,
    bit_limit: int = DEFAULT_ORACLE_BITS,
) -> CompletionResult:
    """Exhaustive minimum over all symmetric completions.

    Unknown diagonal entries are forced to zero when ``require_alternate``
    is set. The reported witness is the lexicographically smallest among
    the minimizers (bits read block by block, upper triangle row-major).
    """
    unknown = p.unknown_indices()
    positions: list[tuple[int, int, int]] = []
    for b in unknown:
        s = p.block_sizes[b]
        for i in range(s):
            for j in range(i, s):
                if require_alternate and i == j:
                    continue
                positions.append((b, i, j))
    nbits = len(positions)
    if nbits > bit_limit:
        raise CapacityError(
            f"{nbits} free bits exceed the configured oracle limit of {bit_limit}"
        )
    best_rank: int | None = None
    best_assign = 0
    for assign in range(1 << nbits):
        blocks: dict[int, list[list[int]]] = {
            b: [[0] * p.block_sizes[b] for _ in range(p.block_sizes[b])] for b in unknown
        }
        for t, (b, i, j) in enumerate(positions):
            bit = (assign >> (nbits - 1 - t)) & 1
            blocks[b][i][j] = bit
            blocks[b][j][i] = bit
        witnesses = [Gf2Matrix.from_rows(blocks[b], p.block_sizes[b]) for b in unknown]
        rank = p.substitute(witnesses).rank()
        if best_rank is None or rank < best_rank:
            best_rank = rank
            best_assign = assign
    blocks = {b: [[0] * p.block_sizes[b] for _ in range(p.block_sizes[b])] for b in unknown}
    for t, (b, i, j) in enumerate(positions):
        bit = (best_assign >> (nbits - 1 - t)) & 1
        blocks[b][i][j] = bit
        blocks[b][j][i] = bit
    witnesses = tuple(Gf2Matrix.from_rows(blocks[b], p.block_sizes[b]) for b in unknown)
    assert best_rank is not None
    return CompletionResult(
        value=best_rank, witnesses=witnesses, achieved_rank=best_rank, kind="exact"
    )


# -- convenience builders for the three supported shapes ----------------------


def corner_instance(a11: Gf2Matrix, a12: Gf2Matrix) -> PartialSymmetricMatrix:
    return PartialSymmetricMatrix(
        block_sizes=(a11.rows, a12.cols),
        grid=((a11, a12), (a12.transpose(), None)),
    )


def two_diag_instance(a12: Gf2Matrix) -> PartialSymmetricMatrix:
    return PartialSymmetricMatrix(
        block_sizes=(a12.rows, a12.cols),
        grid=((None, a12), (a12.transpose(), None)),
    )


def three_block_instance(
    a11: Gf2Matrix, a12: Gf2Matrix, a13: Gf2Matrix, a23: Gf2Matrix
) -> PartialSymmetricMatrix:
    return PartialSymmetricMatrix(
        block_sizes=(a11.rows, a12.cols, a13.cols),
        grid=(
            (a11, a12, a13),
            (a12.transpose(), None, a23),
            (a13.transpose(), a23.transpose(), None),
        ),
    )

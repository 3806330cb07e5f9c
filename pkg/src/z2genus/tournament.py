"""Tournament matrices and block-tournament rank lower bounds.

A tournament matrix has a_ij + a_ji = 1 off the diagonal. The rank
bound ceil((n-1)/2) is checked directly; the block variant
ceil((m-1)(n-1)/2) - (m-2) is verified on generated instances whose
off-diagonal blocks share one base tournament up to a diagonal
perturbation and an optional all-ones flip.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainError, StructuralError
from .gf2 import Gf2Matrix, block_assemble, gram_factor


def is_tournament(a: Gf2Matrix) -> bool:
    if not a.is_square():
        raise StructuralError("tournament test requires a square matrix")
    n = a.rows
    s = a + a.transpose()
    full = (1 << n) - 1
    return all(s.bits[i] == (full ^ (1 << i)) for i in range(n))


@dataclass(frozen=True)
class DeCaenReport:
    n: int
    rank: int
    bound: int
    holds: bool


def decaen_check(a: Gf2Matrix) -> DeCaenReport:
    """Rank against the ceil((n-1)/2) tournament lower bound."""
    if not is_tournament(a):
        raise StructuralError("input is not a tournament matrix")
    n = a.rows
    bound = (n - 1 + 1) // 2 if n >= 1 else 0
    rank = a.rank()
    return DeCaenReport(n=n, rank=rank, bound=bound, holds=rank >= bound)


def block_bound(m: int, n: int) -> int:
    """ceil((m-1)(n-1)/2) - (m-2), clamped below at zero."""
    if m < 2:
        raise DomainError("block bound requires at least two block rows")
    if n < 1:
        raise DomainError("block size must be positive")
    return max(0, ((m - 1) * (n - 1) + 1) // 2 - (m - 2))


def block_bound_tail_variant(m: int, n: int) -> int:
    """Same bound with the correction term (n-2) instead of (m-2).

    The two variants coincide for m = n; instances separating them are
    recorded, never asserted.
    """
    if m < 2:
        raise DomainError("block bound requires at least two block rows")
    return max(0, ((m - 1) * (n - 1) + 1) // 2 - (n - 2))


@dataclass(frozen=True)
class BlockStructure:
    uses_ones: bool
    diag_perturbation: tuple[int, ...]


@dataclass(frozen=True)
class BlockTournamentInstance:
    m: int
    n: int
    base: Gf2Matrix
    full: Gf2Matrix
    structure: dict[tuple[int, int], BlockStructure]
    vectors: Gf2Matrix  # columns realize full as a Gram matrix

    def block(self, i: int, j: int) -> Gf2Matrix:
        rows = range(i * self.n, (i + 1) * self.n)
        cols = range(j * self.n, (j + 1) * self.n)
        return self.full.submatrix(rows, cols)


def random_tournament(n: int, rng: random.Random, random_diag: bool = True) -> Gf2Matrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        if random_diag:
            rows[i][i] = rng.getrandbits(1)
        for j in range(i + 1, n):
            b = rng.getrandbits(1)
            rows[i][j] = b
            rows[j][i] = b ^ 1
    return Gf2Matrix.from_rows(rows, n)


def _random_symmetric(n: int, rng: random.Random) -> Gf2Matrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            b = rng.getrandbits(1)
            rows[i][j] = b
            rows[j][i] = b
    return Gf2Matrix.from_rows(rows, n)


def generate_instance(m: int, n: int, seed: int) -> BlockTournamentInstance:
    """Deterministically draw a block-tournament instance.

    Off-diagonal blocks are base + diag (optionally + all-ones) by
    construction; diagonal blocks are arbitrary symmetric. The assembled
    target is then realized as the Gram matrix of explicit vectors, one
    column per block coordinate, so the full matrix is exactly a matrix
    of pairwise scalar products.
    """
    if m < 2:
        raise DomainError("need at least two block rows")
    if n < 1:
        raise DomainError("block size must be positive")
    rng = random.Random(("block-tournament", m, n, seed).__repr__())
    base = random_tournament(n, rng, random_diag=False)
    ones = Gf2Matrix.ones(n)
    structure: dict[tuple[int, int], BlockStructure] = {}
    grid: list[list[Gf2Matrix]] = [[None] * m for _ in range(m)]  # type: ignore[list-item]
    for i in range(m):
        grid[i][i] = _random_symmetric(n, rng)
    for i in range(m):
        for j in range(i + 1, m):
            uses_ones = bool(rng.getrandbits(1))
            diag = tuple(rng.getrandbits(1) for _ in range(n))
            blk = base + Gf2Matrix.diagonal(diag)
            if uses_ones:
                blk = blk + ones
            structure[(i, j)] = BlockStructure(uses_ones=uses_ones, diag_perturbation=diag)
            grid[i][j] = blk
            grid[j][i] = blk.transpose()
    target = block_assemble(grid)
    factor = gram_factor(target).factor
    full = factor.transpose() @ factor
    if full != target:
        raise StructuralError("Gram realization failed to reproduce the target")
    return BlockTournamentInstance(
        m=m, n=n, base=base, full=full, structure=structure, vectors=factor
    )


@dataclass(frozen=True)
class BlockBoundReport:
    m: int
    n: int
    rank: int
    bound_stmt: int
    bound_proof_tail: int
    holds: bool
    holds_tail: bool
    separates_variants: bool


def verify_block_bound(inst: BlockTournamentInstance) -> BlockBoundReport:
    """Direct rank check of a block-tournament instance against both bounds."""
    m, n = inst.m, inst.n
    if not inst.full.is_symmetric():
        raise StructuralError("instance matrix must be symmetric")
    ones = Gf2Matrix.ones(n)
    for i in range(m):
        for j in range(i + 1, m):
            residue = inst.block(i, j) + inst.base
            plain_diag = all(
                residue.get(a, b) == 0 for a in range(n) for b in range(n) if a != b
            )
            flipped = residue + ones
            flip_diag = all(
                flipped.get(a, b) == 0 for a in range(n) for b in range(n) if a != b
            )
            if not (plain_diag or flip_diag):
                raise StructuralError(
                    f"off-diagonal block ({i},{j}) is not base plus a diagonal "
                    "(optionally plus all-ones)"
                )
            if not is_tournament(inst.block(i, j)):
                raise StructuralError(
                    f"off-diagonal block ({i},{j}) violates the tournament condition"
                )
    rank = inst.full.rank()
    stmt = block_bound(m, n)
    tail = block_bound_tail_variant(m, n)
    return BlockBoundReport(
        m=m,
        n=n,
        rank=rank,
        bound_stmt=stmt,
        bound_proof_tail=tail,
        holds=rank >= stmt,
        holds_tail=rank >= tail,
        separates_variants=(min(stmt, tail) <= rank < max(stmt, tail)),
    )

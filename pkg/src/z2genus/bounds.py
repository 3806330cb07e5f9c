"""Genus bound computations and certificate searches.

Lower bounds for complete bipartite graphs come from closed formulas and
from the tournament block pipeline; upper bounds come from explicit
representing-matrix certificates found by a beam search over vertex
pull moves, every one of which is independently replayable. The
two-piece amalgamation inequalities are checked as interval arithmetic,
and the supporting rank inequality for split block matrices is verified
directly on concrete matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DomainError, InvariantViolation, StructuralError
from .gf2 import Gf2Matrix, block_assemble, dot, hstack, is_alternate
from .drawing import (
    CrosscapDrawing,
    Graph,
    complete_bipartite,
    convex_base_drawing,
    is_independently_even,
    vertex_edge_move,
)
from .tournament import BlockStructure, block_bound, is_tournament


# -- closed-form bounds for complete bipartite graphs -------------------------


def ringel_genus(m: int, n: int) -> int:
    """ceil((m-2)(n-2)/4), the exact orientable genus of K_{m,n}."""
    if m < 2 or n < 2:
        raise DomainError("formula requires m, n >= 2")
    return ((m - 2) * (n - 2) + 3) // 4


def ringel_euler_genus(m: int, n: int) -> int:
    """ceil((m-2)(n-2)/2), the exact Euler genus of K_{m,n}."""
    if m < 2 or n < 2:
        raise DomainError("formula requires m, n >= 2")
    return ((m - 2) * (n - 2) + 1) // 2


@dataclass(frozen=True)
class KmnBoundReport:
    m: int
    n: int
    g_ringel: int
    eg_ringel: int
    g0_lower: int
    eg0_lower: int
    ratio: Fraction

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "g_ringel": self.g_ringel,
            "eg_ringel": self.eg_ringel,
            "g0_lower": self.g0_lower,
            "eg0_lower": self.eg0_lower,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
        }


def kmn_lower_bounds(m: int, n: int) -> KmnBoundReport:
    """Parity-certified lower bounds for the independently even genus of
    K_{m,n}: (n-2)(m-2)/4 - (m-3)/2 and its Euler twin, integer-ceiled.
    """
    if m < 3:
        raise DomainError("lower bound is stated for n >= m >= 3")
    if n < m:
        raise DomainError("call with n >= m (swap the arguments)")
    num = (n - 2) * (m - 2) - 2 * (m - 3)
    g0_lower = max(0, (num + 3) // 4)
    eg0_lower = max(0, (num + 1) // 2)
    g_r = ringel_genus(m, n)
    return KmnBoundReport(
        m=m,
        n=n,
        g_ringel=g_r,
        eg_ringel=ringel_euler_genus(m, n),
        g0_lower=g0_lower,
        eg0_lower=eg0_lower,
        ratio=Fraction(g0_lower, g_r),
    )


def kmn_sweep(max_n: int = 12) -> list[KmnBoundReport]:
    return [
        kmn_lower_bounds(m, n)
        for m in range(3, max_n + 1)
        for n in range(m, max_n + 1)
    ]


# -- vertex-move machinery ----------------------------------------------------


def _base_mask(d: CrosscapDrawing, pairs: Sequence[tuple[int, int]]) -> int:
    mask = 0
    for t, (i, j) in enumerate(pairs):
        if d.base.get(i, j):
            mask |= 1 << t
    return mask


def move_effects(g: Graph, pairs: Sequence[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """Moves (v, e) with their flip masks over independent pairs.

    Moves with zero effect (v on e, or no independent partner at v) are
    dropped; moves sharing an effect keep the first in (v, e) order.
    """
    pos = {p: t for t, p in enumerate(pairs)}
    moves: list[tuple[int, int, int]] = []
    seen: set[int] = set()
    for v in range(g.vertex_count):
        for e in range(g.edge_count):
            eff = 0
            for f in g.incident(v):
                if f == e:
                    continue
                t = pos.get((min(e, f), max(e, f)))
                if t is not None:
                    eff ^= 1 << t
            if eff and eff not in seen:
                seen.add(eff)
                moves.append((v, e, eff))
    return moves


def _eliminate(items: Iterable[tuple[int, tuple[int, ...]]]):
    """GF(2) elimination with payload tracking.

    Returns (table, nulls): table maps a pivot bit to (vector, payload);
    nulls collects payloads of inputs that reduced to zero.
    """
    table: dict[int, tuple[int, tuple[int, ...]]] = {}
    nulls: list[tuple[int, ...]] = []
    for vec, payload in items:
        v, p = vec, payload
        while v:
            low = v & -v
            hit = table.get(low)
            if hit is None:
                table[low] = (v, p)
                break
            v ^= hit[0]
            p = tuple(a ^ b for a, b in zip(p, hit[1]))
        else:
            nulls.append(p)
    return table, nulls


def _reduce_through(table, vec: int, width: int) -> Optional[tuple[int, ...]]:
    payload = None
    v = vec
    while v:
        low = v & -v
        hit = table.get(low)
        if hit is None:
            return None
        v ^= hit[0]
        payload = hit[1] if payload is None else tuple(a ^ b for a, b in zip(payload, hit[1]))
    return payload if payload is not None else (0,) * width


def _restrict(mask: int, coords: Sequence[int]) -> int:
    out = 0
    for t, c in enumerate(coords):
        out |= ((mask >> c) & 1) << t
    return out


def span_parity_census(g: Graph) -> tuple[int, int, int]:
    """Walk the whole move-reachable parity space from the convex seed.

    Returns (dimension, points_visited, odd_points): the number of points
    whose independent-pair parity count is odd. Gray-code enumeration, so
    the walk is exhaustive over the reachable affine span.
    """
    pairs = g.independent_pairs()
    seed = _base_mask(convex_base_drawing(g), pairs)
    moves = move_effects(g, pairs)
    table, _ = _eliminate((eff, (0,)) for _, _, eff in moves)
    basis = [vec for vec, _ in table.values()]
    dim = len(basis)
    current = seed
    odd = current.bit_count() & 1
    count = 1
    for step in range(1, 1 << dim):
        # Gray code: flip the basis vector indexed by the lowest set bit
        current ^= basis[(step & -step).bit_length() - 1]
        odd += current.bit_count() & 1
        count += 1
    return dim, count, odd


# -- minimum-rank completion of a fixed independent-parity pattern ------------


class _NodeBudget(Exception):
    pass


def _zero_fill_rows(pairs, mask: int, k: int) -> list[int]:
    rows = [0] * k
    m = mask
    while m:
        t = (m & -m).bit_length() - 1
        i, j = pairs[t]
        rows[i] |= 1 << j
        rows[j] |= 1 << i
        m &= m - 1
    return rows


def _int_rank(rows: list[int], cols: int) -> int:
    work = [r for r in rows if r]
    rank = 0
    for col in range(cols):
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


def _gram_realize(
    k: int,
    r: int,
    constraints_by_edge: Sequence[Sequence[tuple[int, int]]],
    alternate: bool,
    forced_zero: frozenset[int],
    node_cap: int,
) -> Optional[list[int]]:
    """Lexicographically first assignment of r-bit vectors to the k edges
    matching all pairwise parity constraints, or None."""
    if alternate:
        cands = tuple(v for v in range(1 << r) if v.bit_count() % 2 == 0)
    else:
        cands = tuple(range(1 << r))
    assign = [0] * k
    nodes = 0

    def backtrack(e: int) -> bool:
        nonlocal nodes
        if e == k:
            return True
        options = (0,) if e in forced_zero else cands
        for v in options:
            nodes += 1
            if nodes > node_cap:
                raise _NodeBudget()
            ok = True
            for f, bit in constraints_by_edge[e]:
                if dot(assign[f], v) != bit:
                    ok = False
                    break
            if ok:
                assign[e] = v
                if backtrack(e + 1):
                    return True
        assign[e] = 0
        return False

    try:
        return assign if backtrack(0) else None
    except _NodeBudget:
        return None


def best_completion(
    g: Graph,
    pairs: Sequence[tuple[int, int]],
    mask: int,
    alternate: bool,
    node_cap: int = 20000,
    forced_zero: frozenset[int] = frozenset(),
) -> tuple[Gf2Matrix, int]:
    """Low-rank symmetric matrix with the given independent entries.

    Free (adjacent and diagonal) entries are minimized over: the zero
    fill gives a baseline, then bounded backtracking over fixed-dimension
    vector realizations looks for lower-rank completions. With
    ``alternate`` the diagonal stays zero throughout. Returns the best
    (rank, lexicographic) witness found; an upper bound, never claimed
    optimal.
    """
    k = g.edge_count
    rows0 = _zero_fill_rows(pairs, mask, k)
    best = Gf2Matrix(k, k, tuple(rows0))
    best_rank = _int_rank(rows0, k)
    constraints: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for t, (i, j) in enumerate(pairs):
        constraints[j].append((i, (mask >> t) & 1))
    r = 0
    while r <= best_rank + 1 and r <= k + 1:
        sol = _gram_realize(k, r, constraints, alternate, forced_zero, node_cap)
        if sol is not None:
            rows = [
                sum(dot(sol[i], sol[j]) << j for j in range(k)) for i in range(k)
            ]
            cand = Gf2Matrix(k, k, tuple(rows))
            cand_rank = _int_rank(rows, k)
            if (cand_rank, cand.bits) < (best_rank, best.bits):
                best, best_rank = cand, cand_rank
        r += 1
    return best, best_rank


# -- search for representing-matrix certificates -------------------------------


@dataclass(frozen=True)
class UpperBoundCertificate:
    graph: Graph
    witness_matrix: Gf2Matrix
    move_sequence: tuple[tuple[int, int], ...]
    alternate: bool
    bound_kind: str  # "g0" | "eg0"
    value: int
    seed_only: bool


def upper_bound_search(
    g: Graph,
    alternate_required: bool = False,
    budget: int = 100_000,
    beam_width: int = 64,
    seed: int = 0,
    node_cap: int = 20000,
    margin: int = 2,
) -> UpperBoundCertificate:
    """Beam search over vertex pull moves from the convex seed drawing.

    States are independent-pair parity patterns; each beam member is
    scored by a minimum-rank completion. Certificates are upper bounds
    only. Deterministic for a fixed seed; ties break on (value,
    lexicographic witness).
    """
    pairs = g.independent_pairs()
    k = g.edge_count
    d0 = convex_base_drawing(g)
    seed_mask = _base_mask(d0, pairs)
    moves = move_effects(g, pairs)
    rng = random.Random(seed)

    def value_of(rank: int) -> int:
        if alternate_required:
            if rank % 2:
                raise InvariantViolation("alternate witness with odd rank")
            return rank // 2
        return rank

    best_w, best_rank = best_completion(g, pairs, seed_mask, alternate_required, node_cap)
    best_value = value_of(best_rank)
    best_path: tuple[tuple[int, int], ...] = ()

    visited = {seed_mask}
    frontier: list[tuple[int, tuple[tuple[int, int], ...]]] = [(seed_mask, ())]
    scored = 1
    while frontier and scored < budget and best_value > 0:
        children: list[tuple[int, int, tuple[tuple[int, int], ...]]] = []
        for mask, path in frontier:
            order = list(moves)
            rng.shuffle(order)
            for v, e, eff in order:
                nm = mask ^ eff
                if nm in visited:
                    continue
                visited.add(nm)
                scored += 1
                cheap = _int_rank(_zero_fill_rows(pairs, nm, k), k)
                children.append((cheap, nm, path + ((v, e),)))
                if scored >= budget:
                    break
            if scored >= budget:
                break
        if not children:
            break
        children.sort(key=lambda c: (c[0], c[1]))
        frontier = [(nm, path) for _, nm, path in children[:beam_width]]
        for cheap, nm, path in children[:beam_width]:
            # the zero-fill completion is alternate, so cheap is even here
            if value_of(cheap) > best_value + margin:
                continue
            w, rank = best_completion(g, pairs, nm, alternate_required, node_cap)
            val = value_of(rank)
            if (val, w.bits) < (best_value, best_w.bits):
                best_value, best_w, best_path = val, w, path
            if best_value == 0:
                break
    return UpperBoundCertificate(
        graph=g,
        witness_matrix=best_w,
        move_sequence=best_path,
        alternate=is_alternate(best_w),
        bound_kind="g0" if alternate_required else "eg0",
        value=best_value,
        seed_only=not best_path,
    )


def replay_certificate(cert: UpperBoundCertificate) -> bool:
    """Re-derive the certificate with no reference to search state."""
    d = convex_base_drawing(cert.graph)
    for v, e in cert.move_sequence:
        d = vertex_edge_move(d, v, e)
    w = cert.witness_matrix
    if not w.is_symmetric():
        return False
    for i, j in cert.graph.independent_pairs():
        if w.get(i, j) != d.base.get(i, j):
            return False
    if cert.alternate != is_alternate(w):
        return False
    if cert.bound_kind == "g0":
        if not cert.alternate:
            return False
        return cert.value == w.rank() // 2
    return cert.value == w.rank()


# -- even drawings of complete bipartite graphs --------------------------------


def kmn_tree_edges(m: int, n: int) -> tuple[Graph, list[int]]:
    """The canonical K_{m,n} with the double-star spanning tree rooted at
    the first vertex of each part."""
    g = complete_bipartite(m, n)
    idx = g.edge_index()
    tree = [idx[(0, m + j)] for j in range(n)]
    tree += [idx[(i, m)] for i in range(1, m)]
    return g, sorted(tree)


def build_even_kmn_drawings(
    m: int, n: int, count: int, seed: int = 0, node_cap: int = 200_000
) -> list[tuple[CrosscapDrawing, tuple[tuple[int, int], ...]]]:
    """Independently even drawings of K_{m,n} whose double-star tree edges
    carry zero crosscap vectors.

    Reachable base parities with all tree-pair entries even are solved
    for linearly over the move span; each is realized by assigning
    crosscap vectors to the non-tree edges. Returns (drawing, moves)
    pairs; raises StructuralError when no such state is reachable.
    """
    g, tree = kmn_tree_edges(m, n)
    tree_set = set(tree)
    pairs = g.independent_pairs()
    d0 = convex_base_drawing(g)
    seed_mask = _base_mask(d0, pairs)
    moves = move_effects(g, pairs)
    coords = [t for t, (i, j) in enumerate(pairs) if i in tree_set or j in tree_set]

    items = []
    for idx_m, (_, _, eff) in enumerate(moves):
        items.append((_restrict(eff, coords), (eff, 1 << idx_m)))
    table, nulls = _eliminate(items)
    target = _restrict(seed_mask, coords)
    particular = _reduce_through(table, target, 2)
    if particular is None:
        raise StructuralError(
            "no reachable drawing clears the tree-edge crossing parities"
        )

    solutions: list[tuple[int, int]] = []
    rng = random.Random(("kmn-even", m, n, seed).__repr__())
    if len(nulls) <= 12:
        subsets: Iterable[int] = range(1 << len(nulls))
    else:
        subsets = sorted(rng.sample(range(1 << len(nulls)), 4096))
    base_eff, base_combo = particular
    for sub in subsets:
        eff, combo = base_eff, base_combo
        s = sub
        while s:
            t = (s & -s).bit_length() - 1
            ne, nc = nulls[t]
            eff ^= ne
            combo ^= nc
            s &= s - 1
        solutions.append((eff, combo))
    solutions.sort(key=lambda x: x[0])
    out = []
    for eff, combo in solutions[: count if count else len(solutions)]:
        state = seed_mask ^ eff
        move_seq = tuple(
            (moves[t][0], moves[t][1])
            for t in range(len(moves))
            if (combo >> t) & 1
        )
        d = d0
        for v, e in move_seq:
            d = vertex_edge_move(d, v, e)
        constraints: list[list[tuple[int, int]]] = [[] for _ in range(g.edge_count)]
        for t, (i, j) in enumerate(pairs):
            constraints[j].append((i, (state >> t) & 1))
        vectors = None
        for r in range(g.edge_count + 2):
            vectors = _gram_realize(
                g.edge_count, r, constraints, False, frozenset(tree), node_cap
            )
            if vectors is not None:
                h = r
                break
        if vectors is None:
            raise StructuralError("failed to realize crosscap vectors for an even state")
        even = CrosscapDrawing(graph=g, h=h, y=tuple(vectors), base=d.base)
        if not is_independently_even(even):
            raise InvariantViolation("constructed drawing is not independently even")
        out.append((even, move_seq))
    return out


def kleitman_check(
    d: CrosscapDrawing,
    parts: tuple[tuple[int, int, int], tuple[int, int, int]] = ((0, 1, 2), (3, 4, 5)),
) -> int:
    """The signature parity of an even drawing of K_{3,3} whose double-star
    tree is normalized to zero vectors. Must be 1 for every valid input."""
    (a, b, c), (x0, x1, x2) = parts
    idx = d.graph.edge_index()

    def edge_of(u: int, v: int) -> int:
        key = (min(u, v), max(u, v))
        if key not in idx:
            raise StructuralError(f"edge ({u},{v}) missing from the drawing's graph")
        return idx[key]

    if not is_independently_even(d):
        raise StructuralError("drawing is not independently even")
    for u, v in ((a, x0), (a, x1), (a, x2), (b, x0), (c, x0)):
        e = edge_of(u, v)
        if d.y[e]:
            raise StructuralError(
                f"tree edge ({u},{v}) carries a nonzero crosscap vector"
            )
    return dot(d.y[edge_of(b, x1)], d.y[edge_of(c, x2)]) ^ dot(
        d.y[edge_of(c, x1)], d.y[edge_of(b, x2)]
    )


@dataclass(frozen=True)
class KmnBlockReport:
    m: int
    n: int
    matrix: Gf2Matrix
    base: Optional[Gf2Matrix]
    structure: dict[tuple[int, int], BlockStructure]
    rank: int
    bound: int
    holds: bool


def kmn_block_matrix(d: CrosscapDrawing, m: int, n: int) -> KmnBlockReport:
    """Scalar-product block matrix of a normalized even K_{m,n} drawing.

    Assembles the (m-1)x(m-1) grid of (n-1)x(n-1) blocks of pairwise
    vector products over non-tree edges, verifies that every off-diagonal
    block is a tournament matrix decomposing as one base tournament plus
    a diagonal (optionally plus all-ones), and checks the block rank
    bound, closing the loop with the tournament module.
    """
    g, tree = kmn_tree_edges(m, n)
    if d.graph != g:
        raise StructuralError("drawing must use the canonical K_{m,n} layout")
    if not is_independently_even(d):
        raise StructuralError("drawing is not independently even")
    idx = g.edge_index()
    for e in tree:
        if d.y[e]:
            raise StructuralError(
                f"tree edge {g.edges[e]} carries a nonzero crosscap vector"
            )

    def vec(i: int, j: int) -> int:
        return d.y[idx[(i, m + j)]]

    size = n - 1
    blocks: list[list[Gf2Matrix]] = []
    for i1 in range(1, m):
        row = []
        for i2 in range(1, m):
            rows = [
                [dot(vec(i1, j1), vec(i2, j2)) for j2 in range(1, n)]
                for j1 in range(1, n)
            ]
            row.append(Gf2Matrix.from_rows(rows, size))
        blocks.append(row)
    full = block_assemble(blocks)

    structure: dict[tuple[int, int], BlockStructure] = {}
    base: Optional[Gf2Matrix] = None
    if m - 1 >= 2:
        first = blocks[0][1]
        base = first + Gf2Matrix.diagonal(first.diag_bits())
        ones = Gf2Matrix.ones(size)
        for i1 in range(m - 1):
            for i2 in range(i1 + 1, m - 1):
                blk = blocks[i1][i2]
                if not is_tournament(blk):
                    raise InvariantViolation(
                        f"block ({i1 + 1},{i2 + 1}) is not a tournament matrix"
                    )
                residue = blk + base
                if all(residue.get(a, b) == 0 for a in range(size) for b in range(size) if a != b):
                    structure[(i1, i2)] = BlockStructure(
                        uses_ones=False, diag_perturbation=residue.diag_bits()
                    )
                    continue
                flipped = residue + ones
                if all(flipped.get(a, b) == 0 for a in range(size) for b in range(size) if a != b):
                    structure[(i1, i2)] = BlockStructure(
                        uses_ones=True, diag_perturbation=flipped.diag_bits()
                    )
                    continue
                raise InvariantViolation(
                    f"block ({i1 + 1},{i2 + 1}) does not decompose over the base tournament"
                )
    bound = block_bound(m - 1, n - 1) if m - 1 >= 2 else 0
    rank = full.rank()
    return KmnBlockReport(
        m=m,
        n=n,
        matrix=full,
        base=base,
        structure=structure,
        rank=rank,
        bound=bound,
        holds=rank >= bound,
    )


# -- two-piece amalgamation arithmetic -----------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise StructuralError(f"malformed interval [{self.lo}, {self.hi}]")
        if self.lo < 0:
            raise StructuralError("genus bounds cannot be negative")

    @classmethod
    def exact(cls, v: int) -> "Interval":
        return cls(v, v)


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    status: str  # "holds" | "possible" | "refuted"

    @property
    def holds(self) -> bool:
        return self.status == "holds"


@dataclass(frozen=True)
class AmalgamationReport:
    k: int
    g0_parts: tuple[Interval, Interval]
    g0_whole: Interval
    eg0_parts: tuple[Interval, Interval]
    eg0_whole: Interval
    checks: tuple[InequalityCheck, ...]

    @property
    def any_refuted(self) -> bool:
        return any(c.status == "refuted" for c in self.checks)


def _check_lower(name: str, p1: Interval, p2: Interval, c: int, whole: Interval) -> InequalityCheck:
    # p1 + p2 - c <= whole
    if p1.hi + p2.hi - c <= whole.lo:
        return InequalityCheck(name, "holds")
    if p1.lo + p2.lo - c > whole.hi:
        return InequalityCheck(name, "refuted")
    return InequalityCheck(name, "possible")


def _check_upper(name: str, whole: Interval, p1: Interval, p2: Interval, c: int) -> InequalityCheck:
    # whole <= p1 + p2 + c
    if whole.hi <= p1.lo + p2.lo + c:
        return InequalityCheck(name, "holds")
    if whole.lo > p1.hi + p2.hi + c:
        return InequalityCheck(name, "refuted")
    return InequalityCheck(name, "possible")


def amalgamation_check(
    k: int,
    g0_parts: tuple[Interval, Interval],
    g0_whole: Interval,
    eg0_parts: tuple[Interval, Interval],
    eg0_whole: Interval,
) -> AmalgamationReport:
    """Interval check of the two-piece amalgamation inequalities.

    An inequality "holds" when no point assignment inside the intervals
    can violate it, is "possible" when the intervals straddle the
    violating region, and is "refuted" only when every assignment
    violates it; refutations are never silent.
    """
    if k < 1:
        raise DomainError("component count k must be at least 1")
    p1, p2 = g0_parts
    q1, q2 = eg0_parts
    checks = (
        _check_lower("g0_lower", p1, p2, k + 1, g0_whole),
        _check_upper("g0_upper", g0_whole, p1, p2, 1),
        _check_lower("eg0_lower", q1, q2, 2 * k - 1, eg0_whole),
        _check_upper("eg0_upper", eg0_whole, q1, q2, 2),
    )
    return AmalgamationReport(
        k=k,
        g0_parts=g0_parts,
        g0_whole=g0_whole,
        eg0_parts=eg0_parts,
        eg0_whole=eg0_whole,
        checks=checks,
    )


def shared_pair_components(g: Graph, u: int, v: int) -> int:
    """Connected components of g with u and v removed (isolated vertices count)."""
    if u == v or not (0 <= u < g.vertex_count and 0 <= v < g.vertex_count):
        raise StructuralError("u and v must be distinct vertices of g")
    alive = [w for w in range(g.vertex_count) if w not in (u, v)]
    parent = {w: w for w in alive}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.edges:
        if a in parent and b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return len({find(w) for w in alive})


def amalgamation_k(g: Graph, u: int, v: int) -> int:
    """The component count entering the amalgamation inequalities: the
    components of g - u - v, plus one when the edge uv is present."""
    l = shared_pair_components(g, u, v)
    has_edge = (min(u, v), max(u, v)) in g.edge_index()
    return l + 1 if has_edge else l


def subdivide_edge(g: Graph, u: int, v: int) -> Graph:
    """Replace edge uv by a two-edge path through a fresh vertex."""
    key = (min(u, v), max(u, v))
    if key not in g.edge_index():
        raise StructuralError(f"edge ({u},{v}) not present")
    w = g.vertex_count
    edges = [e for e in g.edges if e != key]
    edges += [(u, w), (v, w)]
    return Graph.from_edges(g.vertex_count + 1, edges)


def join_to_two_components(g: Graph, u: int, v: int) -> tuple[Graph, int]:
    """Add edges merging components of g - u - v until only two remain.

    Each added edge can raise the even-drawing genus by at most 1 (Euler
    variant: 2); the caller accounts for the adjustment. Returns the new
    graph and the number of edges added.
    """
    alive = [w for w in range(g.vertex_count) if w not in (u, v)]
    comp: dict[int, int] = {}
    label = 0
    adj: dict[int, list[int]] = {w: [] for w in alive}
    for a, b in g.edges:
        if a in adj and b in adj:
            adj[a].append(b)
            adj[b].append(a)
    for w in alive:
        if w in comp:
            continue
        stack = [w]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp[x] = label
            stack.extend(adj[x])
        label += 1
    if label <= 2:
        return g, 0
    reps = {}
    for w in alive:
        reps.setdefault(comp[w], w)
    order = [reps[c] for c in range(label)]
    edges = list(g.edges)
    for t in range(1, label - 1):
        edges.append((min(order[t], order[t + 1]), max(order[t], order[t + 1])))
    return Graph.from_edges(g.vertex_count, edges), label - 2


# -- rank inequality for split block matrices ----------------------------------


@dataclass(frozen=True)
class SplitRankReport:
    lhs: int
    rhs: int
    holds: bool

    @property
    def margin(self) -> int:
        return self.rhs - self.lhs


_SPLIT_ZERO_BLOCKS = ((0, 2), (0, 3), (1, 3))


def amalgam_split_rank_check(b: Gf2Matrix, sizes: tuple[int, int, int, int]) -> SplitRankReport:
    """Check the rank lower bound for a four-class split matrix.

    Classes are ordered (inner-1, shared-1, shared-2, inner-2); blocks
    coupling inner-1 with the second side, and shared-1 with inner-2,
    must vanish. Verifies
    2(rank[A11 A12] + rank[A44 A43]) - rank(A11) - rank(A44) <= rank(b).
    """
    if len(sizes) != 4 or any(s < 0 for s in sizes):
        raise StructuralError("need four nonnegative class sizes")
    total = sum(sizes)
    if b.rows != total or b.cols != total:
        raise StructuralError(f"matrix must be {total}x{total} for these class sizes")
    if not b.is_symmetric():
        raise StructuralError("matrix must be symmetric")
    offs = [0]
    for s in sizes:
        offs.append(offs[-1] + s)
    ranges = [range(offs[i], offs[i + 1]) for i in range(4)]

    def blk(i: int, j: int) -> Gf2Matrix:
        return b.submatrix(ranges[i], ranges[j])

    for i, j in _SPLIT_ZERO_BLOCKS:
        if not blk(i, j).is_zero():
            raise StructuralError(f"required zero block ({i},{j}) is nonzero")
    lhs = (
        2 * (hstack([blk(0, 0), blk(0, 1)]).rank() + hstack([blk(3, 3), blk(3, 2)]).rank())
        - blk(0, 0).rank()
        - blk(3, 3).rank()
    )
    rhs = b.rank()
    return SplitRankReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs)


def random_split_matrix(sizes: tuple[int, int, int, int], rng: random.Random) -> Gf2Matrix:
    """Random symmetric matrix respecting the split zero pattern."""
    total = sum(sizes)
    offs = [0]
    for s in sizes:
        offs.append(offs[-1] + s)
    klass = [0] * total
    for c in range(4):
        for i in range(offs[c], offs[c + 1]):
            klass[i] = c
    forbidden = set(_SPLIT_ZERO_BLOCKS) | {(j, i) for i, j in _SPLIT_ZERO_BLOCKS}
    rows = [[0] * total for _ in range(total)]
    for i in range(total):
        for j in range(i, total):
            if (klass[i], klass[j]) in forbidden:
                continue
            bit = rng.getrandbits(1)
            rows[i][j] = bit
            rows[j][i] = bit
    return Gf2Matrix.from_rows(rows, total)

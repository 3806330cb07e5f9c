"""Combinatorial model of plane drawings with crosscaps.

A drawing is a base matrix of plane crossing parities between edges plus
one bit vector per edge recording parity of passes through each of h
crosscaps. The crossing parity of two edges on the surface is then
base(e, f) + <y_e, y_f>, so everything downstream (evenness tests,
representing matrices, genus bounds) is pure GF(2) bookkeeping; no curve
geometry is ever represented.

Graph text format: line "n m", then m lines "u v". Drawing JSON format:
{n, edges, h, y: bitstrings, base: [i, j] independent pairs with parity 1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, StructuralError
from .gf2 import Gf2Matrix, dot, is_alternate


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edges are an ordered, duplicate-free list."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise StructuralError(f"loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise StructuralError(f"edge ({u},{v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise StructuralError(f"duplicate edge ({u},{v})")
            seen.add(key)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, tuple((min(u, v), max(u, v)) for u, v in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def incident(self, v: int) -> list[int]:
        return [i for i, (a, b) in enumerate(self.edges) if v in (a, b)]

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def independent_pairs(self) -> list[tuple[int, int]]:
        """Index pairs (i < j) of edges sharing no endpoint."""
        out = []
        for i, (a, b) in enumerate(self.edges):
            for j in range(i + 1, len(self.edges)):
                c, d = self.edges[j]
                if len({a, b, c, d}) == 4:
                    out.append((i, j))
        return out

    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {len(self.edges)}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        lines = [ln for ln in text.splitlines()]
        if not lines:
            raise ParseError("empty graph file", 1)
        head = lines[0].split()
        if len(head) != 2:
            raise ParseError("graph header must be '<n> <m>'", 1)
        try:
            n, m = int(head[0]), int(head[1])
        except ValueError:
            raise ParseError("graph header must hold two integers", 1) from None
        edges = []
        for i in range(m):
            if 1 + i >= len(lines):
                raise ParseError(f"expected {m} edge lines", i + 2)
            parts = lines[1 + i].split()
            if len(parts) != 2:
                raise ParseError("edge line must be '<u> <v>'", i + 2)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("edge endpoints must be integers", i + 2) from None
            edges.append((u, v))
        return cls.from_edges(n, edges)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(m: int, n: int) -> Graph:
    return Graph.from_edges(m + n, [(i, m + j) for i in range(m) for j in range(n)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


@dataclass(frozen=True)
class SpanningForest:
    """Depth-first spanning forest; fundamental cycles of non-tree edges
    not touching a root avoid that root."""

    parent: tuple[int, ...]       # -1 at roots
    parent_edge: tuple[int, ...]  # edge index to parent, -1 at roots
    roots: tuple[int, ...]
    order: tuple[int, ...]        # DFS preorder
    depth: tuple[int, ...]

    def tree_edges(self) -> list[int]:
        return sorted(e for e in self.parent_edge if e >= 0)

    def subtree(self, v: int) -> set[int]:
        children: dict[int, list[int]] = {}
        for w, p in enumerate(self.parent):
            if p >= 0:
                children.setdefault(p, []).append(w)
        out = set()
        stack = [v]
        while stack:
            w = stack.pop()
            out.add(w)
            stack.extend(children.get(w, ()))
        return out


def spanning_forest(g: Graph, root: int = 0) -> SpanningForest:
    n = g.vertex_count
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n)}
    for idx, (u, v) in enumerate(g.edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    for v in adj:
        adj[v].sort()
    parent = [-1] * n
    parent_edge = [-1] * n
    depth = [0] * n
    order: list[int] = []
    roots: list[int] = []
    visited = [False] * n
    starts = [root] + [v for v in range(n) if v != root]
    for start in starts:
        if visited[start]:
            continue
        roots.append(start)
        stack = [(start, -1, -1)]
        while stack:
            v, p, pe = stack.pop()
            if visited[v]:
                continue
            visited[v] = True
            parent[v] = p
            parent_edge[v] = pe
            depth[v] = 0 if p < 0 else depth[p] + 1
            order.append(v)
            for w, idx in reversed(adj[v]):
                if not visited[w]:
                    stack.append((w, v, idx))
    return SpanningForest(
        parent=tuple(parent),
        parent_edge=tuple(parent_edge),
        roots=tuple(roots),
        order=tuple(order),
        depth=tuple(depth),
    )


@dataclass(frozen=True)
class CrosscapDrawing:
    """Per-edge crosscap vectors over a base plane-crossing-parity matrix."""

    graph: Graph
    h: int
    y: tuple[int, ...]
    base: Gf2Matrix

    def __post_init__(self):
        k = self.graph.edge_count
        if len(self.y) != k:
            raise StructuralError("one crosscap vector per edge required")
        if self.h < 0:
            raise StructuralError("crosscap count must be nonnegative")
        limit = 1 << self.h
        if any(not 0 <= v < limit for v in self.y):
            raise StructuralError("crosscap vector has bits beyond h")
        if self.base.rows != k or self.base.cols != k:
            raise StructuralError("base matrix must be |E| x |E|")
        if not self.base.is_symmetric():
            raise StructuralError("base matrix must be symmetric")
        if any(self.base.get(i, i) for i in range(k)):
            raise StructuralError("base matrix must have a zero diagonal")

    def surface_parity(self, e: int, f: int) -> int:
        return self.base.get(e, f) ^ dot(self.y[e], self.y[f])


def _interleaves(e: tuple[int, int], f: tuple[int, int]) -> bool:
    a, b = min(e), max(e)
    return (a < f[0] < b) != (a < f[1] < b)


def convex_base_drawing(g: Graph) -> CrosscapDrawing:
    """Straight-line drawing with vertices in label order on a circle."""
    k = g.edge_count
    rows = [[0] * k for _ in range(k)]
    for i, j in g.independent_pairs():
        if _interleaves(g.edges[i], g.edges[j]):
            rows[i][j] = 1
            rows[j][i] = 1
    return CrosscapDrawing(graph=g, h=0, y=(0,) * k, base=Gf2Matrix.from_rows(rows, k))


def vertex_edge_move(d: CrosscapDrawing, v: int, e: int) -> CrosscapDrawing:
    """Pull vertex v across edge e: flips base(e, f) for every f at v, f != e."""
    if not 0 <= v < d.graph.vertex_count:
        raise StructuralError(f"vertex {v} out of range")
    if not 0 <= e < d.graph.edge_count:
        raise StructuralError(f"edge index {e} out of range")
    pairs = [(e, f) for f in d.graph.incident(v) if f != e]
    return CrosscapDrawing(graph=d.graph, h=d.h, y=d.y, base=d.base.flip_symmetric(pairs))


def _as_vector(w, h: int) -> int:
    if isinstance(w, str):
        if len(w) != h or any(c not in "01" for c in w):
            raise StructuralError(f"crosscap vector must be {h} characters of 0/1")
        return sum(1 << i for i, c in enumerate(w) if c == "1")
    if isinstance(w, int):
        if w < 0 or w >> h:
            raise StructuralError(f"crosscap vector has bits beyond h={h}")
        return w
    raise StructuralError("crosscap vector must be an int mask or a 0/1 string")


def subset_push(d: CrosscapDrawing, s: Iterable[int], w) -> CrosscapDrawing:
    """Add w to the vector of every edge with exactly one endpoint in s."""
    wv = _as_vector(w, d.h)
    sset = set(s)
    for v in sset:
        if not 0 <= v < d.graph.vertex_count:
            raise StructuralError(f"vertex {v} out of range")
    y = list(d.y)
    for i, (a, b) in enumerate(d.graph.edges):
        if (a in sset) != (b in sset):
            y[i] ^= wv
    return CrosscapDrawing(graph=d.graph, h=d.h, y=tuple(y), base=d.base)


def normalize_forest(d: CrosscapDrawing, f: SpanningForest) -> CrosscapDrawing:
    """Zero the vector of every forest edge by pushing whole subtrees.

    Each push moves the subtree under one tree edge, so it rewrites only
    that tree edge's vector (to zero) plus non-tree vectors in the cut;
    the base matrix is untouched.
    """
    n = d.graph.vertex_count
    if len(f.parent) != n:
        raise StructuralError("forest does not match the drawing's graph")
    for v in range(n):
        e = f.parent_edge[v]
        if e >= 0:
            if not 0 <= e < d.graph.edge_count:
                raise StructuralError("forest references a missing edge")
            if set(d.graph.edges[e]) != {v, f.parent[v]}:
                raise StructuralError("forest edge does not join child to parent")
    out = d
    for v in f.order:
        e = f.parent_edge[v]
        if e < 0:
            continue
        w = out.y[e]
        if w:
            out = subset_push(out, f.subtree(v), w)
    return out


def is_independently_even(d: CrosscapDrawing) -> bool:
    return all(d.surface_parity(i, j) == 0 for i, j in d.graph.independent_pairs())


def is_orientable(d: CrosscapDrawing) -> bool:
    """True iff every cycle's vectors sum to zero (checked on a cycle basis)."""
    f = spanning_forest(d.graph)
    tree = set(f.tree_edges())
    for idx, (u, v) in enumerate(d.graph.edges):
        if idx in tree:
            continue
        acc = d.y[idx]
        a, b = u, v
        while f.depth[a] > f.depth[b]:
            acc ^= d.y[f.parent_edge[a]]
            a = f.parent[a]
        while f.depth[b] > f.depth[a]:
            acc ^= d.y[f.parent_edge[b]]
            b = f.parent[b]
        while a != b:
            acc ^= d.y[f.parent_edge[a]] ^ d.y[f.parent_edge[b]]
            a, b = f.parent[a], f.parent[b]
        if acc:
            return False
    return True


def gram_matrix(d: CrosscapDrawing) -> Gf2Matrix:
    k = d.graph.edge_count
    rows = [[dot(d.y[i], d.y[j]) for j in range(k)] for i in range(k)]
    return Gf2Matrix.from_rows(rows, k)


ADJACENT_FILL_POLICIES = ("zero", "gram")


def representing_matrix(d: CrosscapDrawing, adjacent_fill: str = "zero") -> Gf2Matrix:
    """Symmetric matrix whose independent entries are the plane parities.

    Adjacent-pair and diagonal entries are free; they are filled with
    zeros or with scalar products of the crosscap vectors by policy.
    """
    if adjacent_fill not in ADJACENT_FILL_POLICIES:
        raise StructuralError(f"unknown adjacent fill policy {adjacent_fill!r}")
    k = d.graph.edge_count
    if adjacent_fill == "gram":
        rows = [[dot(d.y[i], d.y[j]) for j in range(k)] for i in range(k)]
    else:
        rows = [[0] * k for _ in range(k)]
    for i, j in d.graph.independent_pairs():
        rows[i][j] = d.base.get(i, j)
        rows[j][i] = rows[i][j]
    return Gf2Matrix.from_rows(rows, k)


def essential_restrict(a: Gf2Matrix, keep: Sequence[int], d: CrosscapDrawing) -> Gf2Matrix:
    """Principal submatrix on ``keep``; every dropped edge must cross all
    independent partners evenly on the surface."""
    k = d.graph.edge_count
    if a.rows != k or a.cols != k:
        raise StructuralError("matrix size must match the drawing's edge count")
    keep_sorted = sorted(set(keep))
    for e in keep_sorted:
        if not 0 <= e < k:
            raise StructuralError(f"edge index {e} out of range")
    kept = set(keep_sorted)
    for i, j in d.graph.independent_pairs():
        if i in kept and j in kept:
            continue
        if d.surface_parity(i, j):
            raise StructuralError(
                f"edges {i} and {j} cross oddly, so edge "
                f"{i if i not in kept else j} cannot be dropped"
            )
    return a.submatrix(keep_sorted, keep_sorted)


@dataclass(frozen=True)
class SynthesisResult:
    drawing: CrosscapDrawing
    independently_even: bool


def synthesize_drawing(plane: CrosscapDrawing, factor: Gf2Matrix) -> SynthesisResult:
    """Pull each edge over the crosscaps named by its factor column.

    If factor^T factor matches the plane drawing's parities on independent
    pairs, the result is independently even; the flag reports the check.
    """
    if plane.h != 0:
        raise StructuralError("synthesis starts from a plane drawing (h = 0)")
    if factor.cols != plane.graph.edge_count:
        raise StructuralError("factor needs one column per edge")
    y = tuple(factor.column(j) for j in range(factor.cols))
    d = CrosscapDrawing(graph=plane.graph, h=factor.rows, y=y, base=plane.base)
    return SynthesisResult(drawing=d, independently_even=is_independently_even(d))


@dataclass(frozen=True)
class GenusUpperBounds:
    eg0_upper: int
    g0_upper: int | None


def genus_upper_bounds(a: Gf2Matrix) -> GenusUpperBounds:
    """Genus bounds certified by a representing matrix: rank, and rank/2
    when the diagonal is all zero (rank is then even)."""
    if not a.is_square() or not a.is_symmetric():
        raise StructuralError("representing matrix must be square symmetric")
    r = a.rank()
    if is_alternate(a):
        return GenusUpperBounds(eg0_upper=r, g0_upper=r // 2)
    return GenusUpperBounds(eg0_upper=r, g0_upper=None)


# -- JSON-facing serialization -------------------------------------------------


def drawing_to_dict(d: CrosscapDrawing) -> dict:
    pairs = [
        [i, j]
        for i, j in d.graph.independent_pairs()
        if d.base.get(i, j)
    ]
    return {
        "n": d.graph.vertex_count,
        "edges": [[u, v] for u, v in d.graph.edges],
        "h": d.h,
        "y": ["".join(str((v >> t) & 1) for t in range(d.h)) for v in d.y],
        "base": pairs,
    }


def drawing_from_dict(data: dict) -> CrosscapDrawing:
    try:
        g = Graph.from_edges(int(data["n"]), [tuple(e) for e in data["edges"]])
        h = int(data["h"])
        y = tuple(_as_vector(s, h) for s in data["y"])
        k = g.edge_count
        rows = [[0] * k for _ in range(k)]
        indep = set(g.independent_pairs())
        for i, j in data["base"]:
            i, j = int(i), int(j)
            if (min(i, j), max(i, j)) not in indep:
                raise StructuralError(f"base entry ({i},{j}) is not an independent pair")
            rows[i][j] = 1
            rows[j][i] = 1
        base = Gf2Matrix.from_rows(rows, k)
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed drawing record: {exc}") from None
    return CrosscapDrawing(graph=g, h=h, y=y, base=base)

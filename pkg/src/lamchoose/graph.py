"""Simple undirected graphs with an optional vertex partition, plus the exact
structural invariants the rest of the package leans on: girth, degeneracy,
short-cycle counts and k-colourability.

Vertices are the integers 1..n.  Adjacency is kept as one int bitmask per
vertex (bit ``v`` set means ``v`` is a neighbour), which keeps the
backtracking searches cheap.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional


class _Infinite:
    """Girth of a forest.  Compares greater than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITE = _Infinite()


class GraphFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class PartiteGraph:
    n: int
    edges: frozenset
    part_of: Optional[tuple] = None  # part_of[v-1] in 1..k
    adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = [0] * (self.n + 1)
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {u}-{v} out of range 1..{self.n}")
            if u > v:
                u, v = v, u
            norm.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        if self.part_of is not None:
            if len(self.part_of) != self.n:
                raise ValueError("part_of must list one part per vertex")
            for u, v in norm:
                if self.part_of[u - 1] == self.part_of[v - 1]:
                    raise ValueError(f"edge {u}-{v} inside part {self.part_of[u - 1]}")
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "adj", tuple(adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, part_of=None) -> "PartiteGraph":
        return cls(n, frozenset(tuple(e) for e in edges),
                   None if part_of is None else tuple(part_of))

    @property
    def k(self) -> int:
        return 0 if self.part_of is None else max(self.part_of, default=0)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbours(self, v: int) -> list:
        return _bits(self.adj[v])

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def part(self, i: int) -> list:
        """Vertices of part ``i`` (1-indexed), ascending."""
        if self.part_of is None:
            raise ValueError("graph is not partitioned")
        return [v for v in self.vertices() if self.part_of[v - 1] == i]

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def without_edge(self, e) -> "PartiteGraph":
        u, v = sorted(e)
        return PartiteGraph(self.n, self.edges - {(u, v)}, self.part_of)

    def induced(self, vertices: Iterable[int]) -> tuple["PartiteGraph", list]:
        """Induced subgraph relabelled 1..len; also returns the old labels."""
        old = sorted(set(vertices))
        new = {v: i + 1 for i, v in enumerate(old)}
        edges = [(new[u], new[v]) for u, v in self.edges if u in new and v in new]
        return PartiteGraph.from_edges(len(old), edges), old


@dataclass(frozen=True)
class EliminationOrder:
    order: tuple
    back_degree: int


def _bits(mask: int) -> list:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def components(G: PartiteGraph) -> int:
    seen = 0
    count = 0
    for s in G.vertices():
        if seen >> s & 1:
            continue
        count += 1
        frontier = 1 << s
        seen |= frontier
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= G.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
    return count


# -- girth -----------------------------------------------------------------

def _bfs_cycle(G: PartiteGraph, root: int, bound):
    """Shortest closed walk through a non-tree edge seen from ``root``.

    Returns ``(length, u, w, parent)`` for the best non-tree edge ``uw`` with
    length below ``bound``, or None.  BFS stops once depth makes improvement
    impossible.
    """
    dist = {root: 0}
    parent = {root: 0}
    queue = deque([root])
    best = None
    while queue:
        u = queue.popleft()
        du = dist[u]
        # a non-tree edge seen from depth du closes a walk of length >= 2*du
        if best is not None and 2 * du >= best[0]:
            break
        if bound is not INFINITE and 2 * du >= bound:
            break
        for w in _bits(G.adj[u]):
            if w not in dist:
                dist[w] = du + 1
                parent[w] = u
                queue.append(w)
            elif w != parent[u]:
                length = du + dist[w] + 1
                if length < bound and (best is None or length < best[0]):
                    best = (length, u, w)
    if best is None:
        return None
    return best + (parent,)


def shortest_cycle(G: PartiteGraph, below=INFINITE) -> Optional[list]:
    """Vertex sequence of one shortest cycle of length < ``below``, or None.

    Roots are tried in ascending order and the first strictly shorter cycle
    wins, so the result is deterministic.
    """
    best_len = below
    best = None
    for root in G.vertices():
        found = _bfs_cycle(G, root, best_len)
        if found is None:
            continue
        length, u, w, parent = found
        best_len = length
        best = (u, w, parent)
        if best_len == 3:
            break
    if best is None:
        return None
    u, w, parent = best
    left = [u]
    while parent[left[-1]]:
        left.append(parent[left[-1]])
    right = [w]
    while parent[right[-1]]:
        right.append(parent[right[-1]])
    # at the global minimum the two tree paths only share the root
    return left[::-1] + right[:-1]


def girth(G: PartiteGraph):
    cycle = shortest_cycle(G)
    return INFINITE if cycle is None else len(cycle)


def count_short_cycles(G: PartiteGraph, max_len: int) -> dict:
    """Exact number of cycles of each length 3..max_len.

    Each cycle is counted from its smallest vertex, in the direction whose
    second vertex is smaller than its last.
    """
    counts = {l: 0 for l in range(3, max_len + 1)}
    if max_len < 3:
        return counts
    for s in G.vertices():
        allowed = ~((1 << (s + 1)) - 1)  # only vertices > s after the start
        stack = [(s, 1 << s, 1, None)]
        while stack:
            v, used, length, second = stack.pop()
            nbrs = G.adj[v]
            if length >= 3 and nbrs >> s & 1 and second < v:
                counts[length] += 1
            if length == max_len:
                continue
            for w in _bits(nbrs & allowed & ~used):
                stack.append((w, used | 1 << w, length + 1, w if second is None else second))
    return counts


# -- degeneracy and colouring ------------------------------------------------

def degeneracy(G: PartiteGraph) -> tuple[int, EliminationOrder]:
    """Repeatedly strip a minimum-degree vertex (smallest label on ties)."""
    deg = {v: G.degree(v) for v in G.vertices()}
    alive = sum(1 << v for v in G.vertices())
    order = []
    d = 0
    for _ in range(G.n):
        v = min(deg, key=lambda x: (deg[x], x))
        d = max(d, deg[v])
        order.append(v)
        del deg[v]
        alive &= ~(1 << v)
        for w in _bits(G.adj[v] & alive):
            deg[w] -= 1
    return d, EliminationOrder(tuple(order), d)


def back_degree(G: PartiteGraph, order) -> int:
    pos = {v: i for i, v in enumerate(order)}
    return max((sum(1 for w in G.neighbours(v) if pos[w] > pos[v]) for v in order), default=0)


def greedy_colouring(G: PartiteGraph, order) -> dict:
    colour = {}
    for v in order:
        used = {colour[w] for w in G.neighbours(v) if w in colour}
        c = 1
        while c in used:
            c += 1
        colour[v] = c
    return colour


def is_proper(G: PartiteGraph, colouring: dict) -> bool:
    return all(colouring[u] != colouring[v] for u, v in G.edges)


def _greedy_clique(G: PartiteGraph, order) -> list:
    clique = []
    for v in order:
        if all(G.has_edge(v, c) for c in clique):
            clique.append(v)
    return clique


def is_k_colourable(G: PartiteGraph, k: int) -> tuple[bool, Optional[dict]]:
    """Exact decision; the witness uses colours 1..k."""
    if G.n == 0:
        return True, {}
    if k <= 0:
        return False, None
    d, elim = degeneracy(G)
    if k > d:
        order = elim.order[::-1]
        return True, greedy_colouring(G, order)
    order = list(elim.order[::-1])
    clique = _greedy_clique(G, order)
    if len(clique) > k:
        return False, None
    # clique first with fixed colours, then the rest in degeneracy order
    rest = [v for v in order if v not in clique]
    seq = clique + rest
    colour = {v: i + 1 for i, v in enumerate(clique)}
    def blocked(v):
        m = 0
        for w in G.neighbours(v):
            c = colour.get(w)
            if c:
                m |= 1 << c
        return m

    def extend(i):
        if i == len(seq):
            return True
        v = seq[i]
        used = blocked(v)
        top = max(colour.values(), default=0)
        # a fresh colour is interchangeable with any other unused one
        for c in range(1, min(k, top + 1) + 1):
            if not used >> c & 1:
                colour[v] = c
                if extend(i + 1):
                    return True
                del colour[v]
        return False

    if extend(len(clique)):
        return True, dict(colour)
    return False, None


# -- text format ---------------------------------------------------------------

def parse_graph(text: str) -> PartiteGraph:
    n = m = None
    parts = {}
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if n is None:
            if tok[0] != "graph" or len(tok) != 3:
                raise GraphFormatError(lineno, "expected header 'graph <n> <m>'")
            try:
                n, m = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphFormatError(lineno, "non-integer header") from None
            if n < 0 or m < 0:
                raise GraphFormatError(lineno, "negative count in header")
            continue
        try:
            nums = [int(x) for x in tok[1:]]
        except ValueError:
            raise GraphFormatError(lineno, f"non-integer field in {line!r}") from None
        if tok[0] == "part":
            if len(nums) != 2:
                raise GraphFormatError(lineno, "expected 'part <v> <i>'")
            v, i = nums
            if not 1 <= v <= n:
                raise GraphFormatError(lineno, f"vertex {v} out of range 1..{n}")
            if i < 1:
                raise GraphFormatError(lineno, f"part index {i} must be >= 1")
            if v in parts:
                raise GraphFormatError(lineno, f"vertex {v} given two parts")
            parts[v] = i
        elif tok[0] == "e":
            if len(nums) != 2:
                raise GraphFormatError(lineno, "expected 'e <u> <v>'")
            u, v = nums
            for x in (u, v):
                if not 1 <= x <= n:
                    raise GraphFormatError(lineno, f"vertex {x} out of range 1..{n}")
            if u == v:
                raise GraphFormatError(lineno, f"loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(lineno, f"duplicate edge {u}-{v}")
            seen.add(key)
            edges.append((key, lineno))
        else:
            raise GraphFormatError(lineno, f"unknown record {tok[0]!r}")
    if n is None:
        raise GraphFormatError(1, "missing header")
    if len(edges) != m:
        raise GraphFormatError(lineno if text else 1, f"header announces {m} edges, found {len(edges)}")
    part_of = None
    if parts:
        if len(parts) != n:
            missing = min(set(range(1, n + 1)) - set(parts))
            raise GraphFormatError(lineno, f"vertex {missing} has no part")
        part_of = tuple(parts[v] for v in range(1, n + 1))
        for (u, v), ln in edges:
            if part_of[u - 1] == part_of[v - 1]:
                raise GraphFormatError(ln, f"edge {u}-{v} inside part {part_of[u - 1]}")
    return PartiteGraph.from_edges(n, [e for e, _ in edges], part_of)


def serialize_graph(G: PartiteGraph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"graph {G.n} {G.m}")
    if G.part_of is not None:
        lines += [f"part {v} {G.part_of[v - 1]}" for v in G.vertices()]
    lines += [f"e {u} {v}" for u, v in G.sorted_edges()]
    return "\n".join(lines) + "\n"


# -- small named graphs used by tests and the CLI ---------------------------

def cycle_graph(length: int) -> PartiteGraph:
    return PartiteGraph.from_edges(length, [(i, i % length + 1) for i in range(1, length + 1)])


def complete_graph(size: int) -> PartiteGraph:
    return PartiteGraph.from_edges(size, [(u, v) for u in range(1, size + 1) for v in range(u + 1, size + 1)])


def complete_bipartite(a: int, b: int) -> PartiteGraph:
    edges = [(u, a + v) for u in range(1, a + 1) for v in range(1, b + 1)]
    return PartiteGraph.from_edges(a + b, edges, [1] * a + [2] * b)


def petersen_graph() -> PartiteGraph:
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    return PartiteGraph.from_edges(10, outer + spokes + inner)

"""lambda-assignments, list colouring and the lambda-choosability decision.

Up to renaming, a colour is determined by its group and its support (the set
of vertices whose list contains it).  A lambda-assignment is therefore, for
each group i, a multiset of nonempty supports covering every vertex exactly
k_i times.  Supports are vertex bitmasks (vertex v is bit v-1) and each group's
multiset is stored as a non-increasing tuple of masks; an assignment's
encoding is the tuple of its group tuples.  Enumeration runs in descending
lexicographic order of encodings, which is the canonical order used to pick
certificates.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

from .graph import PartiteGraph, _bits, is_proper
from .partitions import Partition

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    pass


class AssignmentError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ListAssignment:
    lists: dict  # vertex -> frozenset of colour ids
    groups: tuple  # frozensets C_1..C_q, aligned with lam.parts
    lam: Partition

    def __eq__(self, other):
        if not isinstance(other, ListAssignment):
            return NotImplemented
        return (self.lists == other.lists and self.groups == other.groups
                and self.lam == other.lam)

    def colours(self) -> frozenset:
        return frozenset().union(*self.groups) if self.groups else frozenset()

    def group_of(self) -> dict:
        return {c: i for i, grp in enumerate(self.groups, 1) for c in grp}

    def to_text(self) -> str:
        lines = [f"lambda {self.lam.to_text()}", f"groups {len(self.groups)}"]
        for c, i in sorted(self.group_of().items()):
            lines.append(f"colour {c} {i}")
        for v in sorted(self.lists):
            lines.append(f"list {v} " + " ".join(str(c) for c in sorted(self.lists[v])))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ListAssignment":
        lam = None
        q = None
        group_of = {}
        lists = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            try:
                if tok[0] == "lambda":
                    lam = Partition.parse(tok[1])
                elif tok[0] == "groups":
                    q = int(tok[1])
                elif tok[0] == "colour":
                    group_of[int(tok[1])] = int(tok[2])
                elif tok[0] == "list":
                    lists[int(tok[1])] = frozenset(int(x) for x in tok[2:])
                else:
                    raise AssignmentError(f"line {lineno}: unknown record {tok[0]!r}")
            except (IndexError, ValueError) as exc:
                if isinstance(exc, AssignmentError):
                    raise
                raise AssignmentError(f"line {lineno}: malformed {line!r}") from None
        if lam is None or q is None:
            raise AssignmentError("missing 'lambda' or 'groups' line")
        groups = [set() for _ in range(q)]
        for c, i in group_of.items():
            if not 1 <= i <= q:
                raise AssignmentError(f"colour {c} in group {i}, outside 1..{q}")
            groups[i - 1].add(c)
        return cls(lists, tuple(frozenset(g) for g in groups), lam)


def single_group(lists: dict, lam: Optional[Partition] = None) -> ListAssignment:
    """Plain list assignment: every colour in one group."""
    lists = {v: frozenset(l) for v, l in lists.items()}
    allc = frozenset().union(*lists.values())
    if lam is None:
        lam = Partition.of(len(next(iter(lists.values()))))
    return ListAssignment(lists, (allc,), lam)


def assignment_violation(G: PartiteGraph, L: ListAssignment) -> Optional[str]:
    """First violated lambda-assignment constraint, or None."""
    if set(L.lists) != set(G.vertices()):
        return "lists do not cover exactly the vertex set"
    if len(L.groups) != L.lam.q:
        return f"{len(L.groups)} groups for a partition with {L.lam.q} parts"
    seen = set()
    for i, grp in enumerate(L.groups, 1):
        if seen & grp:
            return f"group {i} overlaps an earlier group on colours {sorted(seen & grp)}"
        seen |= grp
    used = frozenset().union(*L.lists.values())
    if used != seen:
        extra = sorted(used - seen)
        if extra:
            return f"colours {extra} belong to no group"
        return f"group colours {sorted(seen - used)} appear in no list"
    for v in G.vertices():
        lst = L.lists[v]
        if len(lst) != L.lam.k:
            return f"vertex {v}: list size {len(lst)}, expected {L.lam.k}"
        for i, (grp, ki) in enumerate(zip(L.groups, L.lam.parts), 1):
            got = len(lst & grp)
            if got != ki:
                return f"vertex {v}, group {i}: |L(v) & C_{i}| = {got}, expected {ki}"
    return None


def validate_assignment(G: PartiteGraph, L: ListAssignment) -> bool:
    return assignment_violation(G, L) is None


# -- list colouring ------------------------------------------------------------

class _Search:
    """Backtracking over vertex domains held as colour bitmasks."""

    def __init__(self, adj, max_nodes=None):
        self.adj = adj
        self.nbrs = [_bits(a) for a in adj]
        self.max_nodes = max_nodes
        self.nodes = 0

    def run(self, domains: list, todo: int) -> Optional[dict]:
        self.nodes = 0
        self.choice = {}
        # a vertex with more colours than uncoloured neighbours can go last
        deferred = []
        changed = True
        while changed:
            changed = False
            t = todo
            while t:
                low = t & -t
                t ^= low
                v = low.bit_length() - 1
                if domains[v].bit_count() > (self.adj[v] & todo).bit_count():
                    todo ^= low
                    deferred.append(v)
                    changed = True
        if not self._rec(domains, todo):
            return None
        choice = self.choice
        for v in reversed(deferred):
            taken = 0
            for w in self.nbrs[v]:
                if w in choice:
                    taken |= 1 << choice[w]
            free = domains[v] & ~taken
            self.choice[v] = (free & -free).bit_length() - 1
        return self.choice

    def _rec(self, dom, todo):
        if not todo:
            return True
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(f"list colouring exceeded {self.max_nodes} search nodes")
        # most constrained vertex first
        best = -1
        best_size = 1 << 30
        t = todo
        while t:
            low = t & -t
            v = low.bit_length() - 1
            t ^= low
            size = dom[v].bit_count()
            if size < best_size:
                best, best_size = v, size
                if size <= 1:
                    break
        if best_size == 0:
            return False
        v = best
        rest = todo & ~(1 << v)
        nbrs = _bits(self.adj[v] & rest)
        d = dom[v]
        while d:
            low = d & -d
            d ^= low
            new = list(dom)
            ok = True
            for w in nbrs:
                nw = new[w] & ~low
                if not nw:
                    ok = False
                    break
                new[w] = nw
            if ok and self._rec(new, rest):
                self.choice[v] = low.bit_length() - 1
                return True
        return False


def l_colour(G: PartiteGraph, L: ListAssignment, max_nodes: Optional[int] = None) -> Optional[dict]:
    """A proper colouring with colour_of[v] in L(v), or None if none exists."""
    colours = sorted(L.colours())
    index = {c: i for i, c in enumerate(colours)}
    dom = [0] * (G.n + 1)
    todo = 0
    for v in G.vertices():
        for c in L.lists[v]:
            dom[v] |= 1 << index[c]
        todo |= 1 << v
    found = _Search(G.adj, max_nodes).run(dom, todo)
    if found is None:
        return None
    return {v: colours[i] for v, i in sorted(found.items())}


def _domains(n, supports, vertex_bits=None) -> tuple:
    """Per-vertex colour bitmasks; colour i is the i-th support."""
    dom = [0] * (n + 1)
    for ci, s in enumerate(supports):
        bit = 1 << ci
        for v in (vertex_bits[s] if vertex_bits is not None else [b + 1 for b in _bits(s)]):
            dom[v] |= bit
    return tuple(dom)


def _colourable_supports(search: _Search, n, supports, vertex_bits=None, dom=None) -> bool:
    if dom is None:
        dom = _domains(n, supports, vertex_bits)
    todo = ((1 << (n + 1)) - 1) & ~1
    return search.run(dom, todo) is not None


def _vertex_table(n):
    """Vertices (1-indexed) of every support mask; only built for small n."""
    if n > 16:
        return None
    return [[b + 1 for b in _bits(m)] for m in range(1 << n)]


# -- enumeration -----------------------------------------------------------------

def support_multisets(n: int, c: int, bound: Optional[int] = None) -> Iterator[tuple]:
    """Non-increasing tuples of nonempty vertex masks covering each of n
    vertices exactly c times, in descending lexicographic order.

    The next support always contains the highest vertex still needing cover:
    later supports are no larger, so that vertex could never be reached
    otherwise.  This also means no branch dead-ends.
    """
    rem = [c] * n
    out: list = []
    start = (1 << n) if bound is None else bound

    def rec(prev):
        top = -1
        for v in range(n - 1, -1, -1):
            if rem[v]:
                top = v
                break
        if top < 0:
            yield tuple(out)
            return
        avail = 0
        for v in range(top):
            if rem[v]:
                avail |= 1 << v
        tb = 1 << top
        t = avail
        while True:
            s = tb | t
            if s <= prev:
                out.append(s)
                bits = _bits(s)
                for v in bits:
                    rem[v] -= 1
                yield from rec(s)
                for v in bits:
                    rem[v] += 1
                out.pop()
            if t == 0:
                break
            t = (t - 1) & avail

    if n == 0:
        yield ()
        return
    yield from rec(start)


def _first_supports(n: int, c: int) -> list:
    """Possible first supports of a group, descending (the shard prefixes)."""
    if n == 0:
        return [None]
    top = 1 << (n - 1)
    return [top | t for t in range(top - 1, -1, -1)]


def _with_first(groups, first):
    for g in groups:
        if g[0] != first:
            return
        yield g


def _group_encodings(n, lam: Partition, first=None) -> Iterator[tuple]:
    """Canonical encodings; equal parts must appear in non-increasing order."""
    parts = lam.parts

    def rec(i, acc):
        if i == len(parts):
            yield tuple(acc)
            return
        if i == 0 and first is not None:
            source = _with_first(support_multisets(n, parts[0], bound=first), first)
        else:
            source = support_multisets(n, parts[i])
        for grp in source:
            if i > 0 and parts[i] == parts[i - 1] and grp > acc[-1]:
                continue
            acc.append(grp)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(0, [])


def _order_key(enc: tuple) -> tuple:
    # enumeration runs in descending order; this key ascends with it
    return tuple(tuple(-s for s in grp) for grp in enc)


def encoding_to_assignment(n: int, lam: Partition, enc: tuple) -> ListAssignment:
    lists = {v: set() for v in range(1, n + 1)}
    groups = []
    colour = 0
    for grp in enc:
        members = set()
        for s in grp:
            colour += 1
            members.add(colour)
            for b in _bits(s):
                lists[b + 1].add(colour)
        groups.append(frozenset(members))
    return ListAssignment({v: frozenset(l) for v, l in lists.items()}, tuple(groups), lam)


def enumerate_lambda_assignments(G: PartiteGraph, lam: Partition) -> Iterator[ListAssignment]:
    """One representative per class of lambda-assignments of G, canonical order."""
    for enc in _group_encodings(G.n, lam):
        yield encoding_to_assignment(G.n, lam, enc)


@dataclass(frozen=True)
class Certificate:
    kind: str  # "choosable" | "not_choosable" | "colourable"
    assignment: Optional[ListAssignment] = None
    colouring: Optional[dict] = None
    checked: int = 0  # assignments examined
    encoding: Optional[tuple] = field(default=None, repr=False)

    @property
    def choosable(self) -> bool:
        return self.kind == "choosable"


def _merge(enc):
    return tuple(sorted((s for grp in enc for s in grp), reverse=True))


@lru_cache(maxsize=32)
def _class_table(n, lam):
    """Distinct merged support multisets in order of first appearance, each
    with its first encoding, that encoding's 1-based position, and the
    vertex domains it induces."""
    first = {}
    table = _vertex_table(n)
    for pos, enc in enumerate(_group_encodings(n, lam), 1):
        merged = _merge(enc)
        if merged not in first:
            first[merged] = (pos, enc)
    return tuple((merged, pos, enc, _domains(n, merged, table))
                 for merged, (pos, enc) in first.items())


# orders small enough that precomputing every class is cheaper than streaming
TABLE_MAX_N = 5


def _scan(n, adj, lam, first, max_assignments, max_nodes, memo=None):
    """Scan one shard; returns (count, first failing encoding or None)."""
    # colourability ignores groups; memoise on the merged support multiset
    cache = {} if memo is None else memo
    table = _vertex_table(n)
    search = _Search(adj, max_nodes)

    def colourable(merged, dom=None):
        ok = cache.get(merged)
        if ok is None:
            ok = _colourable_supports(search, n, merged, table, dom)
            cache[merged] = ok
        return ok

    if first is None and n <= TABLE_MAX_N:
        classes = _class_table(n, lam)
        for merged, pos, enc, dom in classes:
            if max_assignments is not None and pos > max_assignments:
                raise BudgetExceeded(f"more than {max_assignments} assignments")
            if not colourable(merged, dom):
                return pos, enc
        return _encoding_count(n, lam), None

    count = 0
    for enc in _group_encodings(n, lam, first):
        count += 1
        if max_assignments is not None and count > max_assignments:
            raise BudgetExceeded(f"more than {max_assignments} assignments")
        if not colourable(_merge(enc)):
            return count, enc
    return count, None


@lru_cache(maxsize=32)
def _encoding_count(n, lam):
    return sum(1 for _ in _group_encodings(n, lam))


def _scan_shard(args):
    return _scan(*args)


def is_lambda_choosable(G: PartiteGraph, lam: Partition, *, max_assignments: Optional[int] = None,
                        max_nodes: Optional[int] = None, shards: int = 1,
                        memo: Optional[dict] = None) -> Certificate:
    """Exhaustive decision.  On failure the certificate holds the canonically
    first non-colourable assignment, whatever the shard count."""
    if G.n == 0:
        return Certificate("choosable")
    if shards <= 1:
        count, bad = _scan(G.n, G.adj, lam, None, max_assignments, max_nodes, memo)
    else:
        prefixes = _first_supports(G.n, lam.parts[0])
        chunks = [prefixes[s::shards] for s in range(shards)]
        jobs = [(G.n, G.adj, lam, p, max_assignments, max_nodes)
                for chunk in chunks for p in chunk]
        with ProcessPoolExecutor(max_workers=shards) as pool:
            results = list(pool.map(_scan_shard, jobs))
        count = sum(c for c, _ in results)
        if max_assignments is not None and count > max_assignments:
            raise BudgetExceeded(f"more than {max_assignments} assignments")
        fails = [b for _, b in results if b is not None]
        bad = min(fails, key=_order_key) if fails else None
    if bad is None:
        log.debug("%s-choosable after %d assignments", lam, count)
        return Certificate("choosable", checked=count)
    return Certificate("not_choosable", assignment=encoding_to_assignment(G.n, lam, bad),
                       checked=count, encoding=bad)


def check_certificate(G: PartiteGraph, cert: Certificate) -> bool:
    """Re-verify a certificate independently of how it was produced."""
    if cert.kind == "not_choosable":
        return validate_assignment(G, cert.assignment) and l_colour(G, cert.assignment) is None
    if cert.kind == "colourable":
        L = cert.assignment
        col = cert.colouring
        return (col is not None and is_proper(G, col)
                and all(col[v] in L.lists[v] for v in G.vertices()))
    return cert.kind == "choosable"

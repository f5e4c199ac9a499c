"""Randomised large-girth construction of a graph that is lambda-choosable
but not lambda'-choosable, with the diagnostics that go with it.

Pipeline:

1. ``sample_base_graph``: a uniform m-edge subgraph of the complete k-partite
   graph with parts of size n, then short cycles are cut one edge at a time.
2. ``sample_split_labelling``: every base edge gets a uniform label in
   [r] x [r].
3. ``build_graph``: each base vertex v becomes a block {v} x [r] carrying a
   copy of its part's gadget; edge xy with label (s, u) becomes the single
   edge (x, s)-(y, u).
4. ``build_bad_assignment``: the adversarial target-assignment.

The probabilistic statements behind the construction only bite for
astronomically large n, so they are measured (Monte Carlo) and their
largeness conditions are evaluated (``feasibility_report``) rather than
enforced.
"""
from __future__ import annotations

import itertools
import math
import random
import statistics
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import mpmath

from .assignments import ListAssignment, assignment_violation, l_colour, BudgetExceeded
from .gadgets import Gadget, gadgets_for
from .graph import (INFINITE, PartiteGraph, _bits, count_short_cycles, degeneracy,
                    girth, is_proper, serialize_graph, shortest_cycle)
from .partitions import Partition, le

mpmath.mp.dps = 60


class ParamError(ValueError):
    pass


def stage_rng(seed: int, *path) -> random.Random:
    """Independent stream for one stage / trial, keyed by (seed, path)."""
    return random.Random("/".join(str(p) for p in (seed,) + path))


# -- parameters --------------------------------------------------------------

def edge_budget(k: int, n: int, eps) -> int:
    """floor(q * n^(1+2 eps)) with q = k(k-1)/2, in high precision."""
    q = k * (k - 1) // 2
    return int(mpmath.floor(q * mpmath.power(n, 1 + 2 * mpmath.mpf(str(eps)))))


def list_family_size(target: Partition) -> int:
    return math.prod(math.comb(2 * p - 1, p) for p in target.parts)


def t_for(target: Partition, r: int) -> int:
    return 2 * r * list_family_size(target) * target.k


@dataclass(frozen=True)
class ConstructionParams:
    lam: Partition
    targets: tuple
    g: int
    epsilon: float
    n: int
    seed: int = 0
    r: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.r:
            object.__setattr__(self, "r", max(J.order for J in gadgets_for(self.lam.parts, self.g)))

    @property
    def k(self) -> int:
        return self.lam.q

    @property
    def q(self) -> int:
        # number of part pairs, not the number of parts of lambda
        return self.k * (self.k - 1) // 2

    @property
    def m(self) -> int:
        return edge_budget(self.k, self.n, self.epsilon)

    @property
    def t(self) -> int:
        return max(t_for(tg, self.r) for tg in self.targets)

    @property
    def threshold(self) -> int:
        return -(-self.n * self.r // self.t)

    def violations(self) -> list:
        out = []
        if not self.targets:
            out.append("at least one target partition is required")
        if self.g < 3:
            out.append(f"g = {self.g} must be at least 3")
        if not 0 < self.epsilon < 1 / (4 * self.g):
            out.append(f"epsilon = {self.epsilon} not in (0, 1/(4g)) = (0, {1 / (4 * self.g):.6g})")
        if self.n < 1:
            out.append("n must be positive")
        for tg in self.targets:
            size = list_family_size(tg)
            if self.n % size:
                out.append(f"n = {self.n} is not a multiple of |L| = {size} for target {tg}")
            if le(self.lam, tg)[0]:
                out.append(f"{self.lam} <= {tg}, so no separating graph exists")
        if self.m > self.q * self.n * self.n:
            out.append(f"m = {self.m} exceeds q n^2 = {self.q * self.n * self.n}")
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            raise ParamError("; ".join(bad))

    def to_text(self) -> str:
        rows = [
            ("lambda", self.lam.to_text()),
            ("targets", " ".join(tg.to_text() for tg in self.targets)),
            ("g", self.g), ("epsilon", repr(self.epsilon)), ("n", self.n),
            ("k", self.k), ("q", self.q), ("m", self.m), ("r", self.r),
            ("t", self.t), ("seed", self.seed),
        ]
        return "".join(f"{a}={b}\n" for a, b in rows)

    @classmethod
    def from_text(cls, text: str) -> "ConstructionParams":
        kv = dict(line.split("=", 1) for line in text.splitlines() if "=" in line)
        return cls(Partition.parse(kv["lambda"]),
                   tuple(Partition.parse(x) for x in kv["targets"].split()),
                   int(kv["g"]), float(kv["epsilon"]), int(kv["n"]), int(kv["seed"]),
                   int(kv["r"]))


# -- binomial inequalities -----------------------------------------------------

def _e_lower() -> Fraction:
    # partial Taylor sum, strictly below e
    return sum((Fraction(1, math.factorial(i)) for i in range(40)), Fraction(0))


@dataclass(frozen=True)
class BinomialCheck:
    a: int
    b: int
    x: int
    ineq1: bool
    ineq2: bool
    ineq3: bool

    @property
    def all_hold(self) -> bool:
        return self.ineq1 and self.ineq2 and self.ineq3


def binomial_bounds(a: int, b: int, x: int) -> BinomialCheck:
    """Check C(a,b) <= (ea/b)^b, C(a-x,b)/C(a,b) <= ((a-b)/a)^x < e^(-bx/a)
    and C(a-x,b-x)/C(a,b) <= (b/a)^x for 0 <= x < b, b + x < a."""
    if not (0 <= x < b and b + x < a):
        raise ValueError(f"need 0 <= x < b and b + x < a, got a={a}, b={b}, x={x}")
    total = Fraction(math.comb(a, b))
    # a rational lower bound for e makes a pass here a proof of (1)
    ineq1 = total <= (_e_lower() * a / b) ** b
    if not ineq1:
        ineq1 = mpmath.log(math.comb(a, b)) <= b * (1 + mpmath.log(mpmath.mpf(a) / b))
    ratio2 = Fraction(math.comb(a - x, b)) / total
    mid = Fraction(a - b, a) ** x
    if x == 0:
        right = True  # both sides are 1
    else:
        right = x * mpmath.log(mpmath.mpf(a - b) / a) < -mpmath.mpf(b * x) / a
    ineq2 = ratio2 <= mid and right
    ratio3 = Fraction(math.comb(a - x, b - x)) / total
    ineq3 = ratio3 <= Fraction(b, a) ** x
    return BinomialCheck(a, b, x, bool(ineq1), bool(ineq2), bool(ineq3))


def random_binomial_triple(rng: random.Random, a_max: int = 200) -> tuple:
    a = rng.randint(3, a_max)
    b = rng.randint(1, a - 2)
    x = rng.randint(0, min(b - 1, a - b - 1))
    return a, b, x


# -- base graph ------------------------------------------------------------------

def _part_pairs(k):
    return [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]


def sample_uniform_graph(k: int, n: int, m: int, rng: random.Random) -> PartiteGraph:
    """Uniform m-edge subgraph of the complete k-partite graph K_{n,...,n}.

    Part i holds vertices (i-1)n+1 .. in.
    """
    pairs = _part_pairs(k)
    total = len(pairs) * n * n
    if m > total:
        raise ParamError(f"m = {m} exceeds the {total} available edges")
    edges = []
    for idx in rng.sample(range(total), m):
        p, rest = divmod(idx, n * n)
        a, b = divmod(rest, n)
        i, j = pairs[p]
        edges.append(((i - 1) * n + a + 1, (j - 1) * n + b + 1))
    part_of = [i for i in range(1, k + 1) for _ in range(n)]
    return PartiteGraph.from_edges(k * n, edges, part_of)


def cut_short_cycles(G: PartiteGraph, g: int) -> tuple[PartiteGraph, list]:
    """Delete the smallest edge of a shortest cycle until girth >= g."""
    deleted = []
    while True:
        cyc = shortest_cycle(G, below=g)
        if cyc is None:
            return G, deleted
        ring = list(zip(cyc, cyc[1:] + cyc[:1]))
        e = min(tuple(sorted(p)) for p in ring)
        deleted.append(e)
        G = G.without_edge(e)


def sample_base_graph(params: ConstructionParams, rng: random.Random) -> tuple[PartiteGraph, list]:
    """Returns the base graph and the edges cut to reach girth >= g."""
    G = sample_uniform_graph(params.k, params.n, params.m, rng)
    return cut_short_cycles(G, params.g)


def short_cycle_bounds(k: int, n: int, g: int, eps) -> tuple:
    """(sum_{l=3}^{g-1} k^l n^(2 eps l), n^(-eps) n^(2 g eps))."""
    e = mpmath.mpf(str(eps))
    total = mpmath.fsum(mpmath.power(k, l) * mpmath.power(n, 2 * e * l) for l in range(3, g))
    return total, mpmath.power(n, -e) * mpmath.power(n, 2 * g * e)


def montecarlo_short_cycles(k: int, n: int, g: int, eps, trials: int, seed: int = 0) -> dict:
    """Count cycles of length <= g-1 in uniform (pre-surgery) samples."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    m = edge_budget(k, n, eps)
    counts = []
    for trial in range(trials):
        G = sample_uniform_graph(k, n, m, stage_rng(seed, "cycles", trial))
        counts.append(sum(count_short_cycles(G, g - 1).values()))
    bound_sum, bound_decay = short_cycle_bounds(k, n, g, eps)
    return {
        "k": k, "n": n, "g": g, "epsilon": eps, "m": m, "trials": trials,
        "counts": counts,
        "mean": statistics.fmean(counts),
        "max": max(counts),
        "bound_sum": float(bound_sum),
        "bound_decay": float(bound_decay),
    }


# -- expansion ---------------------------------------------------------------------

def _part_size(G: PartiteGraph) -> int:
    return G.n // G.k


def check_expansion(G0: PartiteGraph, t: int, samples: int, rng: random.Random, eps=None) -> dict:
    """Edge counts between random A in V_i, B in V_j (i != j), |A| = |B| = floor(n/t)."""
    n = _part_size(G0)
    a = n // t
    if a < 1:
        raise ValueError(f"floor(n/t) = floor({n}/{t}) = 0: subsets would be empty")
    pairs = _part_pairs(G0.k)
    parts = {i: G0.part(i) for i in range(1, G0.k + 1)}
    counts = []
    for _ in range(samples):
        i, j = pairs[rng.randrange(len(pairs))]
        A = rng.sample(parts[i], a)
        B = rng.sample(parts[j], a)
        bmask = sum(1 << y for y in B)
        counts.append(sum((G0.adj[x] & bmask).bit_count() for x in A))
    out = {
        "n": n, "t": t, "size": a, "samples": samples, "counts": counts,
        "min": min(counts), "mean": statistics.fmean(counts),
        "stdev": statistics.stdev(counts) if len(counts) > 1 else 0.0,
        "expectation": G0.m * a * a / (len(pairs) * n * n),
    }
    if eps is not None:
        grow = float(mpmath.power(n, 1 + mpmath.mpf(str(eps))))
        out["floor_half"] = grow / 2
        out["floor_full"] = grow
    return out


def montecarlo_expansion(k: int, n: int, g: int, eps, t: int, trials: int, samples: int,
                         seed: int = 0, surgery: bool = False) -> dict:
    """Per-trial mean edge counts; the standard error comes from the spread of
    trial means, so within-graph correlation is accounted for."""
    m = edge_budget(k, n, eps)
    means = []
    rows = []
    for trial in range(trials):
        G = sample_uniform_graph(k, n, m, stage_rng(seed, "expansion", trial))
        if surgery:
            G, _ = cut_short_cycles(G, g)
        rep = check_expansion(G, t, samples, stage_rng(seed, "expansion-pairs", trial), eps)
        means.append(rep["mean"])
        rows.append(rep)
    a = n // t
    expectation = m * a * a / (k * (k - 1) // 2 * n * n)
    grand = statistics.fmean(means)
    if trials > 1:
        se = statistics.stdev(means) / math.sqrt(trials)
    else:
        se = rows[0]["stdev"] / math.sqrt(samples)
    return {
        "k": k, "n": n, "t": t, "m": m, "trials": trials, "samples": samples,
        "size": a, "trial_means": means, "mean": grand, "stderr": se,
        "expectation": expectation,
        "z": (grand - expectation) / se if se else 0.0,
        "min": min(r["min"] for r in rows),
        "floor_half": rows[0]["floor_half"], "floor_full": rows[0]["floor_full"],
    }


# -- split labelling ---------------------------------------------------------------

def _oriented(G0: PartiteGraph, e) -> tuple:
    u, v = e
    if G0.part_of is not None and G0.part_of[u - 1] > G0.part_of[v - 1]:
        return v, u
    return u, v


def sample_split_labelling(G0: PartiteGraph, r: int, rng: random.Random) -> dict:
    """(x, y) -> (s, u) with x the lower-part endpoint; uniform on [r] x [r]."""
    if r < 1:
        raise ValueError("r must be >= 1")
    label = {}
    for e in G0.sorted_edges():
        x, y = _oriented(G0, e)
        label[(x, y)] = (rng.randrange(r) + 1, rng.randrange(r) + 1)
    return label


def labelling_text(label: dict) -> str:
    return "".join(f"f {x} {y} {s} {u}\n" for (x, y), (s, u) in sorted(label.items()))


def parse_labelling(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        tok = line.split()
        if tok and tok[0] == "f":
            x, y, s, u = map(int, tok[1:])
            out[(x, y)] = (s, u)
    return out


def _is_bad(G0, label, A, B, sel) -> bool:
    # A lies in the lower part, so every A-B edge is keyed (x, y)
    for x in A:
        for y in _bits(G0.adj[x]):
            if y in B and label[(x, y)] == (sel[x], sel[y]):
                return False
    return True


def check_no_bad_pair(G0: PartiteGraph, label: dict, t: int, r: int, probes: int = 1000,
                      rng: Optional[random.Random] = None, exhaustive: bool = False) -> dict:
    """Fraction of (A, B, selector) triples with no edge xy labelled
    (selector(x), selector(y)).  A sits in the lower part."""
    n = _part_size(G0)
    a = n // t
    if a < 1:
        raise ValueError("floor(n/t) = 0")
    pairs = _part_pairs(G0.k)
    parts = {i: G0.part(i) for i in range(1, G0.k + 1)}
    bad = 0
    total = 0
    example = None

    def triples():
        if exhaustive:
            for i, j in pairs:
                for A in itertools.combinations(parts[i], a):
                    for B in itertools.combinations(parts[j], a):
                        for vals in itertools.product(range(1, r + 1), repeat=2 * a):
                            yield A, B, dict(zip(A + B, vals))
        else:
            for _ in range(probes):
                i, j = pairs[rng.randrange(len(pairs))]
                A = tuple(sorted(rng.sample(parts[i], a)))
                B = tuple(sorted(rng.sample(parts[j], a)))
                yield A, B, {v: rng.randrange(r) + 1 for v in A + B}

    for A, B, sel in triples():
        total += 1
        if _is_bad(G0, label, A, set(B), sel):
            bad += 1
            if example is None:
                example = (A, B, sel)
    return {"probed": total, "bad": bad, "fraction": bad / total if total else 0.0,
            "example": example, "exhaustive": exhaustive}


# -- assembling G ----------------------------------------------------------------

@dataclass(frozen=True)
class ConstructedGraph:
    base: PartiteGraph
    label: dict
    gadgets: tuple  # gadget for part i at index i-1, all of order r
    r: int
    graph: PartiteGraph  # flattened, vertex (v, s) -> (v-1) r + s
    params: Optional[ConstructionParams] = None

    def vertex(self, v: int, s: int) -> int:
        return (v - 1) * self.r + s

    def block(self, v: int) -> list:
        return [self.vertex(v, s) for s in range(1, self.r + 1)]

    def base_of(self, x: int) -> int:
        return (x - 1) // self.r + 1

    def part_vertices(self, i: int) -> list:
        return [x for v in self.base.part(i) for x in self.block(v)]


def build_graph(G0: PartiteGraph, label: dict, gadgets: Sequence[Gadget],
                params: Optional[ConstructionParams] = None) -> ConstructedGraph:
    orders = {J.order for J in gadgets}
    if len(orders) != 1:
        raise ValueError(f"gadgets must share one order, got {sorted(orders)}")
    if G0.part_of is None or len(gadgets) != G0.k:
        raise ValueError("need a partitioned base graph with one gadget per part")
    r = orders.pop()
    vid = lambda v, s: (v - 1) * r + s  # noqa: E731
    edges = []
    for (x, y), (s, u) in label.items():
        edges.append((vid(x, s), vid(y, u)))
    for v in G0.vertices():
        J = gadgets[G0.part_of[v - 1] - 1]
        edges.extend((vid(v, a), vid(v, b)) for a, b in J.graph.edges)
    flat = PartiteGraph.from_edges(G0.n * r, edges)
    return ConstructedGraph(G0, dict(label), tuple(gadgets), r, flat, params)


# -- adversarial assignment ------------------------------------------------------

@dataclass(frozen=True)
class AdversarialListFamily:
    colour_sets: tuple  # C'_j as tuples of colour ids, aligned with target.parts
    family: tuple  # every member of L as a frozenset
    list_of_copy: dict  # base vertex -> index into family


def adversarial_family(target: Partition) -> tuple:
    sets = []
    nxt = 1
    for p in target.parts:
        sets.append(tuple(range(nxt, nxt + 2 * p - 1)))
        nxt += 2 * p - 1
    family = tuple(frozenset(itertools.chain.from_iterable(choice))
                   for choice in itertools.product(*(itertools.combinations(C, p)
                                                     for C, p in zip(sets, target.parts))))
    return tuple(sets), family


def adversarial_lists(G: ConstructedGraph, target: Partition, rng: random.Random) -> AdversarialListFamily:
    sets, family = adversarial_family(target)
    n = _part_size(G.base)
    if n % len(family):
        raise ParamError(f"n = {n} is not a multiple of |L| = {len(family)}")
    per = n // len(family)
    chosen = {}
    for i in range(1, G.base.k + 1):
        slots = [idx for idx in range(len(family)) for _ in range(per)]
        rng.shuffle(slots)
        chosen.update(zip(G.base.part(i), slots))
    return AdversarialListFamily(sets, family, chosen)


def build_bad_assignment(G: ConstructedGraph, target: Partition, rng: random.Random) -> ListAssignment:
    fam = adversarial_lists(G, target, rng)
    lists = {}
    for v, idx in fam.list_of_copy.items():
        for x in G.block(v):
            lists[x] = fam.family[idx]
    groups = tuple(frozenset(C) for C in fam.colour_sets)
    # colours that no block received still have to be dropped from the groups
    used = frozenset().union(*lists.values())
    groups = tuple(grp & used for grp in groups)
    return ListAssignment(lists, groups, target)


# -- verification ----------------------------------------------------------------

@dataclass
class VerificationReport:
    girth: object
    girth_ok: bool
    part_degeneracy: dict
    degeneracy_ok: bool
    assignment_error: Optional[str]
    max_block_edges: int
    worst_block_pair: Optional[tuple]
    colourable: Optional[bool] = None  # None: not decided (size cap / budget)
    notes: list = field(default_factory=list)

    @property
    def structural_ok(self) -> bool:
        return (self.girth_ok and self.degeneracy_ok and self.assignment_error is None
                and self.max_block_edges <= 1)

    def to_text(self) -> str:
        rows = [
            ("girth", self.girth), ("girth_ok", self.girth_ok),
            ("part_degeneracy", " ".join(f"{i}:{d}" for i, d in sorted(self.part_degeneracy.items()))),
            ("degeneracy_ok", self.degeneracy_ok),
            ("assignment_ok", self.assignment_error is None),
            ("max_block_edges", self.max_block_edges),
            ("block_pairs_ok", self.max_block_edges <= 1),
            ("l_colourable", "undecided" if self.colourable is None else self.colourable),
        ]
        lines = [f"{a}={b}" for a, b in rows]
        if self.assignment_error:
            lines.append(f"assignment_error={self.assignment_error}")
        if self.worst_block_pair and self.max_block_edges > 1:
            lines.append(f"worst_block_pair={self.worst_block_pair[0]},{self.worst_block_pair[1]}")
        lines += [f"note={x}" for x in self.notes]
        return "\n".join(lines) + "\n"


def verify_construction(G: ConstructedGraph, L: Optional[ListAssignment], g: int,
                        lam: Partition, decide_cap: int = 0, max_nodes: int = 200_000) -> VerificationReport:
    """Exact structural checks; L-colourability is decided only when the
    flattened graph has at most ``decide_cap`` vertices."""
    gi = girth(G.graph)
    part_deg = {}
    for i in range(1, G.base.k + 1):
        sub, _ = G.graph.induced(G.part_vertices(i))
        part_deg[i] = degeneracy(sub)[0]
    deg_ok = all(part_deg[i] <= p - 1 for i, p in enumerate(lam.parts, 1))
    between = Counter()
    for x, y in G.graph.edges:
        bx, by = G.base_of(x), G.base_of(y)
        if bx != by:
            between[(min(bx, by), max(bx, by))] += 1
    worst = max(between.items(), key=lambda kv: (kv[1], [-c for c in kv[0]]), default=(None, 0))
    report = VerificationReport(
        girth=gi, girth_ok=gi >= g, part_degeneracy=part_deg, degeneracy_ok=deg_ok,
        assignment_error=None if L is None else assignment_violation(G.graph, L),
        max_block_edges=worst[1], worst_block_pair=worst[0],
    )
    if L is not None and report.assignment_error is None and G.graph.n <= decide_cap:
        try:
            phi = l_colour(G.graph, L, max_nodes=max_nodes)
            report.colourable = phi is not None
        except BudgetExceeded as exc:
            report.notes.append(str(exc))
    return report


@dataclass(frozen=True)
class OccupancyReport:
    threshold: int
    occupied_sets: dict  # part i -> frozenset of group indices j


def occupied_groups(G: ConstructedGraph, phi: dict, L: ListAssignment, t: Optional[int] = None) -> OccupancyReport:
    """N_i = {j : at least k'_j colours of C'_j each colour >= ceil(n r / t)
    vertices of part i}."""
    if not is_proper(G.graph, phi):
        raise ValueError("colouring is not proper")
    for v in G.graph.vertices():
        if phi[v] not in L.lists[v]:
            raise ValueError(f"vertex {v} coloured {phi[v]} outside its list")
    if t is None:
        if G.params is None:
            raise ValueError("t is needed when the graph carries no parameters")
        t = G.params.t
    n = _part_size(G.base)
    threshold = -(-n * G.r // t)
    occupied = {}
    for i in range(1, G.base.k + 1):
        use = Counter(phi[x] for x in G.part_vertices(i))
        occupied[i] = frozenset(
            j for j, (grp, kj) in enumerate(zip(L.groups, L.lam.parts), 1)
            if sum(1 for c in grp if use[c] >= threshold) >= kj)
    return OccupancyReport(threshold, occupied)


# -- largeness conditions ----------------------------------------------------------

def _cond_cycles(k, g, eps):
    e = mpmath.mpf(str(eps))
    rhs = (g - 3) * mpmath.power(k, g - 1)

    def slack(n):  # log(lhs) - log(rhs), holds when > 0
        if rhs <= 0:
            return mpmath.inf
        return e * mpmath.log(n) - mpmath.log(rhs)
    return slack


def _cond_expansion(k, eps, t):
    e = mpmath.mpf(str(eps))
    q = k * (k - 1) // 2

    def slack(n):  # holds when log(lhs) < 0, i.e. slack > 0
        if q == 0:
            return mpmath.inf
        n = mpmath.mpf(n)
        log_lhs = (-mpmath.power(n, 1 + 2 * e) / (2 * t * t) + mpmath.log(q)
                   + (2 * n / t) * (1 + mpmath.log(t)))
        return -log_lhs
    return slack


def _cond_labelling(k, eps, r):
    e = mpmath.mpf(str(eps))
    q = k * (k - 1) // 2

    def slack(n):
        if q == 0 or r == 1:
            return mpmath.inf  # (1 - 1/r^2) = 0 or no part pairs
        n = mpmath.mpf(n)
        log_lhs = (mpmath.log(q) + 2 * n * (1 + mpmath.log(k) + k * mpmath.log(r))
                   + mpmath.power(n, 1 + e) / 4 * mpmath.log(1 - mpmath.mpf(1) / (r * r)))
        return -log_lhs
    return slack


def _min_doubling(slack, max_exp):
    for ex in range(max_exp + 1):
        if slack(2 ** ex) > 0:
            return 2 ** ex
    return None


@dataclass(frozen=True)
class Condition:
    name: str
    formula: str
    slack: float  # log-domain margin at n; positive means the condition holds
    holds: bool
    min_n: Optional[int]  # first power of two where it holds, None if beyond 2^max_exp


def feasibility_report(k: int, n: int, g: int, eps, t: int, r: int, max_exp: int = 4096) -> list:
    specs = [
        ("short_cycles", "n^eps > (g-3) k^(g-1)", _cond_cycles(k, g, eps)),
        ("expansion", "exp(-n^(1+2eps)/(2t^2)) q (e t)^(2n/t) < 1", _cond_expansion(k, eps, t)),
        ("labelling", "q (e k r^k)^(2n) (1-1/r^2)^(n^(1+eps)/4) < 1", _cond_labelling(k, eps, r)),
    ]
    out = []
    for name, formula, slack in specs:
        s = slack(n)
        out.append(Condition(name, formula, float(s) if s != mpmath.inf else math.inf,
                             bool(s > 0), _min_doubling(slack, max_exp)))
    return out


def feasibility_text(conds) -> str:
    return "".join(f"{c.name}: holds={c.holds} slack={c.slack:.6g} min_n="
                   f"{'none' if c.min_n is None else '2^%d' % (c.min_n.bit_length() - 1)}"
                   f"  [{c.formula}]\n" for c in conds)


# -- whole pipeline ----------------------------------------------------------------

@dataclass
class Construction:
    params: ConstructionParams
    base: PartiteGraph
    deleted: list
    label: dict
    graph: ConstructedGraph
    assignments: list  # one per target


def construct(params: ConstructionParams, supplied: dict | None = None) -> Construction:
    params.validate()
    gadgets = gadgets_for(params.lam.parts, params.g, supplied)
    if gadgets[0].order != params.r:
        raise ParamError(f"gadget order {gadgets[0].order} disagrees with r = {params.r}")
    G0, deleted = sample_base_graph(params, stage_rng(params.seed, "base"))
    label = sample_split_labelling(G0, params.r, stage_rng(params.seed, "label"))
    G = build_graph(G0, label, gadgets, params)
    Ls = [build_bad_assignment(G, tg, stage_rng(params.seed, "assign", j))
          for j, tg in enumerate(params.targets)]
    return Construction(params, G0, deleted, label, G, Ls)


def write_bundle(c: Construction, outdir, decide_cap: int = 0) -> dict:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    p = c.params
    (out / "params.txt").write_text(p.to_text())
    (out / "base.graph").write_text(serialize_graph(c.base))
    (out / "labelling.txt").write_text(labelling_text(c.label))
    (out / "G.graph").write_text(serialize_graph(c.graph.graph))
    if len(c.assignments) == 1:
        (out / "assignment.txt").write_text(c.assignments[0].to_text())
    else:
        for j, L in enumerate(c.assignments, 1):
            (out / f"assignment_{j}.txt").write_text(L.to_text())
    lines = [f"deleted_edges={len(c.deleted)}", f"base_edges={c.base.m}"]
    reports = []
    for tg, L in zip(p.targets, c.assignments):
        rep = verify_construction(c.graph, L, p.g, p.lam, decide_cap=decide_cap)
        reports.append(rep)
        lines.append(f"[target {tg.to_text()}]")
        lines.append(rep.to_text().rstrip("\n"))
    lines.append("[feasibility]")
    lines.append(feasibility_text(feasibility_report(p.k, p.n, p.g, p.epsilon, p.t, p.r)).rstrip("\n"))
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    return {"reports": reports}

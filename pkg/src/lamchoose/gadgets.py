"""Gadget graphs J: (p-1)-degenerate, girth >= g, not (p-1)-colourable.

Explicit families exist for parts p <= 3 (a vertex, an edge, an odd cycle).
Larger parts need a user-supplied graph, which ``verify_gadget`` checks
exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import (INFINITE, PartiteGraph, cycle_graph, degeneracy, girth,
                    is_k_colourable, parse_graph, serialize_graph)


class UnsupportedPart(ValueError):
    pass


@dataclass(frozen=True)
class Gadget:
    graph: PartiteGraph
    part: int
    target_girth: int

    @property
    def order(self) -> int:
        return self.graph.n


def gadget_violations(J: PartiteGraph, part: int, g: int) -> list:
    out = []
    d, _ = degeneracy(J)
    if d > part - 1:
        out.append(f"degeneracy {d} > {part - 1}")
    gi = girth(J)
    if gi < g:
        out.append(f"girth {gi} < {g}")
    colourable, _ = is_k_colourable(J, part - 1)
    if colourable:
        out.append(f"{part - 1}-colourable")
    return out


def verify_gadget(J: PartiteGraph, part: int, g: int) -> tuple[bool, list]:
    bad = gadget_violations(J, part, g)
    return not bad, bad


def make_gadget(part: int, g: int) -> Gadget:
    if part == 1:
        J = PartiteGraph.from_edges(1, [])
    elif part == 2:
        # infinite girth, so one edge serves every g
        J = PartiteGraph.from_edges(2, [(1, 2)])
    elif part == 3:
        length = max(g, 3)
        if length % 2 == 0:
            length += 1
        J = cycle_graph(length)
    else:
        raise UnsupportedPart(
            f"no built-in gadget for part {part}; supply a {part - 1}-degenerate, "
            f"non-{part - 1}-colourable graph of girth >= {g} and load it with load_gadget")
    return Gadget(J, part, g)


def load_gadget(text: str, part: int, g: int) -> Gadget:
    J = parse_graph(text)
    ok, bad = verify_gadget(J, part, g)
    if not ok:
        raise ValueError(f"not a valid gadget for part {part}, girth {g}: " + "; ".join(bad))
    return Gadget(PartiteGraph(J.n, J.edges), part, g)


def gadget_text(J: Gadget) -> str:
    return serialize_graph(J.graph, comments=[f"gadget part={J.part} g={J.target_girth}"])


def pad_to_order(J: Gadget, r: int) -> Gadget:
    if r < J.order:
        raise ValueError(f"cannot pad a gadget of order {J.order} down to {r}")
    if r == J.order:
        return J
    return Gadget(PartiteGraph(r, J.graph.edges), J.part, J.target_girth)


def gadgets_for(parts, g: int, supplied: dict | None = None) -> list:
    """One gadget per part, all padded to the largest order r."""
    supplied = supplied or {}
    raw = [supplied[p] if p in supplied else make_gadget(p, g) for p in parts]
    r = max(J.order for J in raw)
    return [pad_to_order(J, r) for J in raw]


def min_gadget_girth(gadgets) -> object:
    return min((girth(J.graph) for J in gadgets), default=INFINITE)

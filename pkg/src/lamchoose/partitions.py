"""Integer partitions, refinement, and the order lambda <= lambda'.

lambda <= lambda' holds when the parts of lambda' can be grouped into exactly
q = len(lambda) blocks whose sums, matched against the parts of lambda,
dominate them part by part.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator, Optional


@total_ordering
@dataclass(frozen=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if not parts:
            raise ValueError("a partition needs at least one part")
        if parts[-1] < 1:
            raise ValueError(f"parts must be positive, got {parts[-1]}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip().strip("{}")
        try:
            return cls(tuple(int(x) for x in text.split(",") if x.strip()))
        except ValueError as exc:
            raise ValueError(f"bad partition {text!r}: {exc}") from None

    @property
    def k(self) -> int:
        return sum(self.parts)

    @property
    def q(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __lt__(self, other):
        # canonical (descending-lex) listing order
        return (self.k, self.parts) > (other.k, other.parts)

    def to_text(self) -> str:
        return ",".join(str(p) for p in reversed(self.parts))

    def __str__(self):
        return "{" + ", ".join(str(p) for p in reversed(self.parts)) + "}"


@dataclass(frozen=True)
class OrderWitness:
    lambda_pp: Partition
    # (k''_i, k_i) pairs; both sides sorted descending
    alignment: tuple
    # (k''_i, parts of lambda' grouped into it)
    refinement_map: tuple

    def check(self, lam: Partition, lam_p: Partition) -> bool:
        if sorted(a for a, _ in self.alignment) != sorted(self.lambda_pp.parts):
            return False
        if sorted(b for _, b in self.alignment) != sorted(lam.parts):
            return False
        if any(a < b for a, b in self.alignment):
            return False
        used = []
        for total, block in self.refinement_map:
            if sum(block) != total:
                return False
            used.extend(block)
        return (sorted(used) == sorted(lam_p.parts)
                and sorted(t for t, _ in self.refinement_map) == sorted(self.lambda_pp.parts))


def _groupings(parts: tuple, blocks: int) -> Iterator[list]:
    """All ways to split ``parts`` into exactly ``blocks`` nonempty blocks.

    Restricted-growth assignment, so each set partition of the positions
    appears once.
    """
    n = len(parts)
    if blocks > n or blocks < 1:
        return
    groups: list = []

    def rec(i):
        if n - i < blocks - len(groups):
            return
        if i == n:
            yield [list(g) for g in groups]
            return
        for g in groups:
            g.append(parts[i])
            yield from rec(i + 1)
            g.pop()
        if len(groups) < blocks:
            groups.append([parts[i]])
            yield from rec(i + 1)
            groups.pop()

    yield from rec(0)


def refines(fine: Partition, coarse: Partition) -> tuple[bool, Optional[tuple]]:
    """Whether ``fine`` is a refinement of ``coarse``; returns the grouping."""
    if fine.k != coarse.k or fine.q < coarse.q:
        return False, None
    targets = coarse.parts
    blocks: list = [[] for _ in targets]
    room = list(targets)

    def rec(i):
        if i == fine.q:
            return all(r == 0 for r in room)
        p = fine.parts[i]
        tried = set()
        for j, r in enumerate(room):
            # identical (target, remaining) blocks are interchangeable
            key = (targets[j], r)
            if r >= p and key not in tried:
                tried.add(key)
                room[j] -= p
                blocks[j].append(p)
                if rec(i + 1):
                    return True
                blocks[j].pop()
                room[j] += p
        return False

    if rec(0):
        return True, tuple((t, tuple(b)) for t, b in zip(targets, blocks))
    return False, None


def le(lam: Partition, lam_p: Partition) -> tuple[bool, Optional[OrderWitness]]:
    """Decide lam <= lam_p and return a witness lambda'' when it holds."""
    if lam_p.k < lam.k or lam_p.q < lam.q:
        return False, None
    seen = set()
    for blocks in _groupings(lam_p.parts, lam.q):
        sums = sorted((sum(b) for b in blocks), reverse=True)
        key = tuple(sums)
        if key in seen:
            continue
        seen.add(key)
        if all(a >= b for a, b in zip(sums, lam.parts)):
            blocks = sorted(blocks, key=lambda b: (sum(b), sorted(b, reverse=True)), reverse=True)
            lam_pp = Partition(key)
            witness = OrderWitness(
                lambda_pp=lam_pp,
                alignment=tuple(zip(lam_pp.parts, lam.parts)),
                refinement_map=tuple((sum(b), tuple(sorted(b, reverse=True))) for b in blocks),
            )
            return True, witness
    return False, None


def enumerate_partitions(k: int) -> list:
    """All partitions of k in descending lexicographic order."""
    if k < 1:
        raise ValueError("k must be positive")
    out = []

    def rec(rest, cap, acc):
        if rest == 0:
            out.append(Partition(tuple(acc)))
            return
        for p in range(min(rest, cap), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(k, k, [])
    return out

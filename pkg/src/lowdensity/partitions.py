"""Set partitions and creator/annihilator pairing diagrams.

A pairing diagram on n number symbols assigns to each creator slot l the
annihilator slot sigma(l) it is contracted with; sigma runs over all of S_n.
The diagram is irreducible exactly when sigma is a single n-cycle, and the
one diagram that survives the scaling limit is sigma = (1 -> n, l -> l-1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MAX_ENUM_PARTITION = 12
MAX_ENUM_DIAGRAM = 8
MAX_BELL = 20


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Number of partitions of an n-set into k nonempty blocks.

    >>> [stirling2(4, k) for k in range(5)]
    [0, 1, 7, 6, 1]
    """
    if n < 0 or k < 0:
        raise ValueError("stirling2 needs n >= 0 and k >= 0")
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bell(n: int) -> int:
    """Bell number B_n, the number of partitions of an n-set.

    >>> [bell(n) for n in range(7)]
    [1, 1, 2, 5, 15, 52, 203]
    """
    if not 0 <= n <= MAX_BELL:
        raise ValueError(f"bell supports 0 <= n <= {MAX_BELL}, got {n}")
    return sum(stirling2(n, k) for k in range(n + 1))


def touchard(n: int, lam: float) -> float:
    """Touchard polynomial sum_k S(n,k) lam^k; touchard(n, 1) == bell(n)."""
    if n < 1:
        raise ValueError("touchard needs n >= 1")
    return float(sum(stirling2(n, k) * lam**k for k in range(1, n + 1)))


@dataclass(frozen=True)
class SetPartition:
    """Partition of {1..n} into blocks, each block increasing, blocks ordered
    by their smallest element."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks) -> "SetPartition":
        canon = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
        part = cls(canon)
        part.validate()
        return part

    def validate(self) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            if list(block) != sorted(set(block)):
                raise ValueError("block not strictly increasing")
            if seen & set(block):
                raise ValueError("blocks overlap")
            seen.update(block)
        mins = [b[0] for b in self.blocks]
        if mins != sorted(mins):
            raise ValueError("blocks not ordered by least element")
        n = len(seen)
        if seen != set(range(1, n + 1)):
            raise ValueError("blocks do not cover {1..n}")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)


def enumerate_set_partitions(n: int) -> list[SetPartition]:
    """All partitions of {1..n}; len(result) == bell(n).

    >>> [len(p) for p in enumerate_set_partitions(3)]
    [3, 2, 2, 2, 1]
    """
    if not 1 <= n <= MAX_ENUM_PARTITION:
        raise ValueError(f"enumerate_set_partitions supports 1 <= n <= {MAX_ENUM_PARTITION}")
    out: list[SetPartition] = []

    def extend(element: int, blocks: list[list[int]]) -> None:
        if element > n:
            out.append(SetPartition(tuple(tuple(b) for b in blocks)))
            return
        for b in blocks:
            b.append(element)
            extend(element + 1, blocks)
            b.pop()
        blocks.append([element])
        extend(element + 1, blocks)
        blocks.pop()

    extend(1, [])
    return out


@dataclass(frozen=True)
class PairDiagram:
    """Contraction pattern: creator slot l is paired with annihilator slot
    sigma(l).  Stored 1-based, sigma[l-1] is the image of l.

    k counts the creator-first pairs (l <= sigma(l)); each diagram scales as
    epsilon^(k-1) in the limit, so only k == 1 diagrams can survive.
    """

    sigma: tuple[int, ...]

    def __post_init__(self):
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError("sigma is not a permutation of 1..n")

    @property
    def n(self) -> int:
        return len(self.sigma)

    @property
    def k(self) -> int:
        return sum(1 for l in range(1, self.n + 1) if l <= self.sigma[l - 1])

    def image(self, l: int) -> int:
        return self.sigma[l - 1]

    def preimage(self, m: int) -> int:
        return self.sigma.index(m) + 1

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Orbits of sigma, each starting at its least element, ordered by
        least element."""
        seen: set[int] = set()
        cycles: list[tuple[int, ...]] = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            m = self.sigma[start - 1]
            while m != start:
                cyc.append(m)
                seen.add(m)
                m = self.sigma[m - 1]
            cycles.append(tuple(cyc))
        return tuple(cycles)

    def label(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())


@dataclass(frozen=True)
class DiagramClass:
    cycles: tuple[tuple[int, ...], ...]
    irreducible: bool
    k: int


def classify(diagram: PairDiagram) -> DiagramClass:
    """Cycle decomposition; irreducible iff sigma is one n-cycle.

    >>> classify(PairDiagram((2, 1, 3))).cycles
    ((1, 2), (3,))
    """
    cycles = diagram.cycles()
    return DiagramClass(cycles=cycles, irreducible=len(cycles) == 1, k=diagram.k)


def is_irreducible_by_closure(diagram: PairDiagram) -> bool:
    """Closure criterion: reducible iff some proper nonempty subset of slots
    is mapped onto itself by sigma.  Equivalent to the single-cycle test;
    kept as an independent cross-check.
    """
    n = diagram.n
    slots = range(1, n + 1)
    for r in range(1, n):
        for subset in itertools.combinations(slots, r):
            if set(diagram.image(l) for l in subset) == set(subset):
                return False
    return True


def enumerate_pair_diagrams(n: int) -> list[PairDiagram]:
    """All n! pairing diagrams on n symbols."""
    if not 1 <= n <= MAX_ENUM_DIAGRAM:
        raise ValueError(f"enumerate_pair_diagrams supports 1 <= n <= {MAX_ENUM_DIAGRAM}")
    return [PairDiagram(p) for p in itertools.permutations(range(1, n + 1))]


def irreducible_diagrams(n: int) -> list[PairDiagram]:
    return [d for d in enumerate_pair_diagrams(n) if classify(d).irreducible]


def surviving_diagram(n: int) -> PairDiagram:
    """The unique diagram with a nonzero limit: 1 -> n and l -> l-1 for l >= 2.

    >>> surviving_diagram(4).sigma
    (4, 1, 2, 3)
    >>> surviving_diagram(4).k
    1
    """
    if n < 1:
        raise ValueError("surviving_diagram needs n >= 1")
    return PairDiagram((n,) + tuple(range(1, n)))


if __name__ == "__main__":
    for n in range(2, 7):
        diags = enumerate_pair_diagrams(n)
        irr = [d for d in diags if classify(d).irreducible]
        print(f"n={n}: {len(diags)} diagrams, {len(irr)} irreducible")

"""The per-level transversal tables and the membership (sifting) test.

Level ``k`` holds slots ``sigma[k][j]`` for ``1 <= j < k``; a filled slot is a
perm fixing every point above ``k`` and taking ``k -> j``, stored by inverse
images. Column ``k`` itself is the identity and is never stored. Each level
also keeps its generator list ``T(k)``, the list of filled columns in fill
order, and per-column counts used by the iterative update strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Optional

from .perm import DegreeMismatch, InverseRep, Perm, largest_moved_point

__all__ = [
    "TransversalSystem",
    "MembershipTrace",
    "new_system",
    "sift",
    "order",
    "strong_generators",
    "level_stats",
]


@dataclass(frozen=True)
class MembershipTrace:
    member: bool
    path: tuple[tuple[int, int], ...]
    residue: Perm
    failure_level: Optional[int] = None
    failure_column: Optional[int] = None
    cost_units: int = 0

    @property
    def multiplications(self) -> int:
        return len(self.path)


def _sift_raw(slots: list[dict], a, k: int):
    """Reduce ``a`` (0-based images, fixing points above ``k``) through levels k..2.

    Returns ``(remainder, cost)``; ``remainder`` is None when ``a`` is a member,
    otherwise the remainder at the level where a slot was empty.
    """
    cost = 0
    while k > 1:
        j = a[k - 1]
        if j != k - 1:
            q = slots[k].get(j + 1)
            if q is None:
                return a, cost
            a = [q[x] for x in a[:k]]
            cost += k
        k -= 1
    return None, cost


class TransversalSystem:
    """Transversal tables for levels 1..degree.

    Built empty (trivial group); grown only through :mod:`permsims.sims`.
    """

    def __init__(self, degree: int):
        if degree < 1:
            raise ValueError(f"degree must be at least 1, got {degree}")
        self.degree = degree
        r = range(degree + 1)
        self._slots: list[dict[int, tuple[int, ...]]] = [{} for _ in r]
        self._index: list[list[int]] = [[k] for k in r]
        self._gens: list[list] = [[] for _ in r]
        self._counts: list[list[int]] = [[0] for _ in r]
        self._gen_log: list = []

    # -- mutation (used by the update algorithms) ------------------------

    def _add_gen(self, k: int, a) -> None:
        self._gens[k].append(a)
        self._gen_log.append(a)

    def _fill(self, k: int, j: int, a) -> None:
        q = [0] * k
        for i in range(k):
            q[a[i]] = i
        self._slots[k][j] = tuple(q)
        self._index[k].append(j)
        self._counts[k].append(0)

    # -- read access ------------------------------------------------------

    def _check_level(self, k: int) -> None:
        if not 1 <= k <= self.degree:
            raise IndexError(f"level {k} outside 1..{self.degree}")

    def slot(self, k: int, j: int) -> Optional[InverseRep]:
        """The stored transversal element taking k to j, or None if the slot is empty."""
        self._check_level(k)
        if j == k:
            return InverseRep._raw(range(k))
        q = self._slots[k].get(j)
        return None if q is None else InverseRep._raw(q)

    def transversal(self, k: int) -> dict[int, Perm]:
        """Filled slots at level ``k`` as direct perms of the system degree, keyed by column."""
        self._check_level(k)
        out = {}
        for j in sorted(self._index[k]):
            rep = self.slot(k, j)
            out[j] = rep.direct().padded(self.degree)
        return out

    def index_list(self, k: int) -> list[int]:
        self._check_level(k)
        return list(self._index[k])

    def counts(self, k: int) -> list[int]:
        self._check_level(k)
        return list(self._counts[k])

    def generators(self, k: int) -> list[Perm]:
        self._check_level(k)
        return [_as_perm(a, self.degree) for a in self._gens[k]]

    def s(self, k: int) -> int:
        self._check_level(k)
        return len(self._index[k])

    def t(self, k: int) -> int:
        self._check_level(k)
        return len(self._gens[k])

    def filled_slots(self) -> int:
        return sum(len(x) for x in self._slots)

    def sift(self, p: Perm) -> MembershipTrace:
        return sift(self, p)

    def order(self) -> int:
        return order(self)

    def __repr__(self) -> str:
        return f"TransversalSystem(degree={self.degree}, order={order(self)})"


def _as_perm(a, degree: int) -> Perm:
    a = tuple(a[:degree])
    if len(a) < degree:
        a = a + tuple(range(len(a), degree))
    return Perm._raw(a)


def new_system(n: int) -> TransversalSystem:
    return TransversalSystem(n)


def sift(sys: TransversalSystem, p: Perm) -> MembershipTrace:
    """Membership test by successive reduction, top level first.

    At each level the remainder is multiplied by the inverse of the slot
    matching the image of ``k``; identity columns cost nothing. The system is
    not modified.
    """
    n = sys.degree
    top = largest_moved_point(p)
    if top > n:
        raise DegreeMismatch(f"perm moves point {top} beyond degree {n}")
    a = p.padded(n)._a if p.degree < n else p._a[:n]
    slots = sys._slots
    path = []
    cost = 0
    k = top
    while k > 1:
        j = a[k - 1] + 1
        if j != k:
            q = slots[k].get(j)
            if q is None:
                return MembershipTrace(
                    member=False,
                    path=tuple(path),
                    residue=_as_perm(a, n),
                    failure_level=k,
                    failure_column=j,
                    cost_units=cost,
                )
            a = [q[x] for x in a[:k]] + list(a[k:])
            path.append((k, j))
            cost += k
        k -= 1
    return MembershipTrace(True, tuple(path), Perm.identity(n), cost_units=cost)


def order(sys: TransversalSystem) -> int:
    """Group order as the product of level sizes s(k); exact integer."""
    return prod(len(ix) for ix in sys._index[1:])


def strong_generators(sys: TransversalSystem) -> list[Perm]:
    """Union of all generator lists in insertion order, duplicates dropped."""
    seen = set()
    out = []
    for a in sys._gen_log:
        p = _as_perm(a, sys.degree)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def level_stats(sys: TransversalSystem) -> list[tuple[int, int, int]]:
    return [(k, len(sys._index[k]), len(sys._gens[k])) for k in range(1, sys.degree + 1)]

"""Incremental construction of a transversal system (Sims's method, A/B form).

``A_k(p)`` appends ``p`` to ``T(k)`` and restores closure at level ``k`` by
submitting products ``sigma * tau`` to ``B_k``. ``B_k(p)`` either fills the
empty slot for ``p``'s image of ``k``, proves ``p`` already reducible, or
pushes the reduced remainder down with ``A_{k-1}``.

The two procedures are mutually recursive and the recursion can get deep
(roughly quadratic in the degree for the recursive strategy). Each call is
written as a Python generator that yields the sub-calls it needs; a small
driver runs them on an explicit stack, so call order is exactly that of the
recursive formulation while the interpreter stack stays flat.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .perm import DegreeMismatch, Perm, largest_moved_point
from .transversal import TransversalSystem, _sift_raw, new_system, sift

__all__ = [
    "Strategy",
    "BuildStats",
    "CostLimitExceeded",
    "insert_generator",
    "algorithm_A",
    "algorithm_B",
    "build",
]


class Strategy(enum.Enum):
    RECURSIVE = "recursive"
    ITERATIVE = "iterative"

    @classmethod
    def parse(cls, value: "str | Strategy") -> "Strategy":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class CostLimitExceeded(RuntimeError):
    pass


@dataclass
class LevelStats:
    b_invocations: int = 0
    product_tests: int = 0
    mult_cost_units: int = 0
    slots_filled: int = 0


@dataclass
class BuildStats:
    """Counters collected while building.

    ``mult_cost_units`` is the sifting cost: for every multiplication by a
    non-identity transversal inverse, the level at which it happens. It covers
    the membership tests made on incoming generators and inside ``B_k``.
    Forming the products ``sigma * tau`` themselves is tallied separately in
    ``product_cost_units`` (same unit, non-identity ``sigma`` only).
    """

    strategy: Strategy = Strategy.RECURSIVE
    b_invocations: int = 0
    product_tests: int = 0
    mult_cost_units: int = 0
    product_cost_units: int = 0
    slots_filled: int = 0
    membership_tests: int = 0
    a_invocations: int = 0
    per_level: dict[int, LevelStats] = field(default_factory=dict)

    def level(self, k: int) -> LevelStats:
        ls = self.per_level.get(k)
        if ls is None:
            ls = self.per_level[k] = LevelStats()
        return ls

    def as_dict(self) -> dict[str, object]:
        return {
            "strategy": self.strategy.value,
            "b_invocations": self.b_invocations,
            "product_tests": self.product_tests,
            "mult_cost_units": self.mult_cost_units,
            "product_cost_units": self.product_cost_units,
            "slots_filled": self.slots_filled,
            "membership_tests": self.membership_tests,
            "a_invocations": self.a_invocations,
        }


def _run(gen: Iterator) -> None:
    stack = [gen]
    while stack:
        try:
            sub = next(stack[-1])
        except StopIteration:
            stack.pop()
        else:
            stack.append(sub)


class _Engine:
    """Update procedures bound to one system, strategy and stats record.

    ``observer``, when given, is called as ``observer(event, k)`` with event
    one of ``"enter_B"`` / ``"exit_B"``; tests use it to watch which levels a
    call touches.
    """

    def __init__(
        self,
        sys: TransversalSystem,
        strategy: Strategy,
        stats: BuildStats,
        cost_limit: Optional[int] = None,
        observer: Optional[Callable[[str, int], None]] = None,
    ):
        self.sys = sys
        self.recursive = strategy is Strategy.RECURSIVE
        self.stats = stats
        self.cost_limit = cost_limit
        self.observer = observer

    def _charge_sift(self, k: int, cost: int) -> None:
        if cost:
            st = self.stats
            st.mult_cost_units += cost
            st.level(k).mult_cost_units += cost
            if self.cost_limit is not None and st.mult_cost_units > self.cost_limit:
                raise CostLimitExceeded(
                    f"cost {st.mult_cost_units} exceeded limit {self.cost_limit}"
                )

    def _submit(self, k: int, sigma_q, tau):
        """Form ``sigma * tau`` (sigma by inverse images, None for identity) and call B_k."""
        st = self.stats
        st.product_tests += 1
        st.level(k).product_tests += 1
        if sigma_q is None:
            return self.b(k, tau)
        d = [0] * k
        for qi, ti in zip(sigma_q, tau):
            d[qi] = ti
        st.product_cost_units += k
        return self.b(k, d)

    def a(self, k: int, p) -> Iterator:
        sys = self.sys
        self.stats.a_invocations += 1
        sys._add_gen(k, p)
        slots = sys._slots[k]
        index = sys._index[k]
        if self.recursive:
            # every sigma present now; later columns meet p through B2's cascade
            for j in index[: len(index)]:
                yield self._submit(k, None if j == k else slots[j], p)
        else:
            gens = sys._gens[k]
            counts = sys._counts[k]
            i = 0
            while i < len(index):
                while counts[i] < len(gens):
                    l = counts[i]
                    j = index[i]
                    yield self._submit(k, None if j == k else slots[j], gens[l])
                    counts[i] = l + 1
                i += 1

    def b(self, k: int, p) -> Iterator:
        sys = self.sys
        st = self.stats
        st.b_invocations += 1
        lv = st.level(k)
        lv.b_invocations += 1
        if self.observer:
            self.observer("enter_B", k)
        j = p[k - 1] + 1
        if j == k:
            rem = p
        else:
            q = sys._slots[k].get(j)
            if q is None:
                sys._fill(k, j, p)
                st.slots_filled += 1
                lv.slots_filled += 1
                if self.recursive:
                    q = sys._slots[k][j]
                    gens = sys._gens[k]
                    for tau in gens[: len(gens)]:
                        yield self._submit(k, q, tau)
                if self.observer:
                    self.observer("exit_B", k)
                return
            rem = [q[x] for x in p[:k]]
            self._charge_sift(k, k)
        residue, cost = _sift_raw(sys._slots, rem, k - 1)
        self._charge_sift(k, cost)
        if residue is not None:
            yield self.a(k - 1, rem)
        if self.observer:
            self.observer("exit_B", k)


def _raw_at(p: Perm, n: int):
    if largest_moved_point(p) > n:
        raise DegreeMismatch(f"perm moves points beyond degree {n}")
    return p.padded(n)._a if p.degree < n else p._a[:n]


def insert_generator(
    sys: TransversalSystem,
    p: Perm,
    strategy: Strategy | str = Strategy.RECURSIVE,
    stats: Optional[BuildStats] = None,
    *,
    cost_limit: Optional[int] = None,
) -> TransversalSystem:
    """Add ``p`` to the generated group and bring the system up to date.

    ``p`` is first sifted; members (identity, duplicates) leave the system
    untouched. Otherwise ``A_n(p)`` runs at the top level ``n = sys.degree``.
    """
    strategy = Strategy.parse(strategy)
    if stats is None:
        stats = BuildStats(strategy=strategy)
    n = sys.degree
    a = _raw_at(p, n)
    stats.membership_tests += 1
    residue, cost = _sift_raw(sys._slots, a, n)
    engine = _Engine(sys, strategy, stats, cost_limit)
    engine._charge_sift(n, cost)
    if residue is not None:
        _run(engine.a(n, a))
    return sys


def algorithm_A(
    sys: TransversalSystem,
    k: int,
    p: Perm,
    strategy: Strategy | str = Strategy.RECURSIVE,
    stats: Optional[BuildStats] = None,
    *,
    observer: Optional[Callable[[str, int], None]] = None,
) -> TransversalSystem:
    """Run ``A_k(p)``: append ``p`` to ``T(k)`` and restore closure of level ``k``.

    Requires the system to be up to date through level ``k``, ``p`` to fix all
    points above ``k``, and ``p`` not to be a member already.
    """
    strategy = Strategy.parse(strategy)
    stats = stats if stats is not None else BuildStats(strategy=strategy)
    if not 2 <= k <= sys.degree:
        raise ValueError(f"level {k} outside 2..{sys.degree}")
    if largest_moved_point(p) > k:
        raise ValueError(f"perm moves points above level {k}")
    if __debug__ and sift(sys, p).member:
        raise ValueError("perm is already a member of the group at this level")
    _run(_Engine(sys, strategy, stats, observer=observer).a(k, _raw_at(p, k)))
    return sys


def algorithm_B(
    sys: TransversalSystem,
    k: int,
    p: Perm,
    strategy: Strategy | str = Strategy.RECURSIVE,
    stats: Optional[BuildStats] = None,
    *,
    observer: Optional[Callable[[str, int], None]] = None,
) -> TransversalSystem:
    """Run ``B_k(p)``: make ``p`` a member of level ``k``'s group.

    ``p`` must lie in the group generated by ``T(k)`` and ``k`` must exceed 1.
    """
    if k <= 1:
        raise ValueError("B_k requires k > 1")
    if k > sys.degree or largest_moved_point(p) > k:
        raise ValueError(f"perm or level exceeds degree/level {k}")
    strategy = Strategy.parse(strategy)
    stats = stats if stats is not None else BuildStats(strategy=strategy)
    _run(_Engine(sys, strategy, stats, observer=observer).b(k, _raw_at(p, k)))
    return sys


def build(
    gens: "Iterable[Perm] | GeneratorSet",
    strategy: Strategy | str = Strategy.RECURSIVE,
    degree: Optional[int] = None,
    *,
    cost_limit: Optional[int] = None,
) -> tuple[TransversalSystem, BuildStats]:
    """Insert generators in order into a fresh system of the given degree.

    ``gens`` may be a :class:`~permsims.families.GeneratorSet` (which carries
    its degree) or any iterable of perms together with ``degree``.
    """
    strategy = Strategy.parse(strategy)
    perms = getattr(gens, "perms", None)
    if perms is not None:
        degree = gens.degree if degree is None else degree
    else:
        perms = list(gens)
        if degree is None:
            degree = max((p.degree for p in perms), default=1)
    sys = new_system(degree)
    stats = BuildStats(strategy=strategy)
    for p in perms:
        insert_generator(sys, p, strategy, stats, cost_limit=cost_limit)
    return sys, stats

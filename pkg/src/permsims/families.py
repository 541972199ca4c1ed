"""Generator families with known behaviour, and a brute-force closure oracle."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .perm import Perm, largest_moved_point, parse_cycles

__all__ = [
    "GeneratorSet",
    "FamilySpec",
    "ClosureCapExceeded",
    "doubling_cycle_perm",
    "staircase_family",
    "two_generator_family",
    "transposition_products_family",
    "sims_example",
    "brute_force_closure",
    "parse_family_spec",
    "FAMILY_NAMES",
]


@dataclass(frozen=True)
class GeneratorSet:
    degree: int
    perms: tuple[Perm, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "perms", tuple(p.padded(self.degree) for p in self.perms))

    def __len__(self) -> int:
        return len(self.perms)

    def __iter__(self):
        return iter(self.perms)

    def reversed(self) -> GeneratorSet:
        return GeneratorSet(self.degree, self.perms[::-1], self.label + ",reversed")


def _perm_from_cycles(degree: int, cycles: Iterable[Iterable[int]]) -> Perm:
    a = list(range(degree))
    for c in cycles:
        c = [x - 1 for x in c]
        for x, y in zip(c, c[1:] + c[:1]):
            a[x] = y
    return Perm._raw(a)


def doubling_cycle_perm(h: int, relabeled: bool = False) -> GeneratorSet:
    """One perm of degree ``2**h - 2`` with cycles of lengths ``2**(h-1), ..., 2``.

    Cycles are filled from point 1 upward, each closed by one of the top
    ``h - 1`` points. Without relabeling the longest cycle is closed by the
    top point ``n``; relabeled, the closing points are assigned in reverse so
    the shortest cycle holds ``n``.
    """
    if h < 2:
        raise ValueError(f"h must be at least 2, got {h}")
    n = 2**h - 2
    closers = list(range(n, n - h + 1, -1))  # n, n-1, ..., n-h+2
    if relabeled:
        closers.reverse()
    cycles = []
    nxt = 1
    for i in range(1, h):
        length = 2 ** (h - i)
        body = list(range(nxt, nxt + length - 1))
        nxt += length - 1
        cycles.append(body + [closers[i - 1]])
    name = "doubling-relabeled" if relabeled else "doubling"
    return GeneratorSet(n, (_perm_from_cycles(n, cycles),), f"{name}:h={h}")


STAIRCASE_KINDS = ("adjacent", "cycle", "random")


def _random_step(k: int, rng: random.Random) -> Perm:
    # k -> k-1, and 1..k-1 onto {1..k} minus {k-1} by a uniform bijection
    targets = [x for x in range(k) if x != k - 2]
    rng.shuffle(targets)
    return Perm._raw(targets + [k - 2])


def staircase_family(n: int, kind: str = "adjacent", seed: Optional[int] = None) -> GeneratorSet:
    """Perms ``pi_2, ..., pi_n`` where ``pi_k`` fixes points above k and sends k to k-1.

    ``kind`` selects ``pi_k``: ``"adjacent"`` is the transposition ``[k-1,k]``,
    ``"cycle"`` the cycle ``[k,k-1,...,1]``, ``"random"`` a uniform choice among
    the ``(k-1)!`` perms allowed (needs ``seed``; uses :class:`random.Random`).
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if kind not in STAIRCASE_KINDS:
        raise ValueError(f"unknown staircase kind {kind!r}")
    perms = []
    if kind == "random":
        if seed is None:
            raise ValueError("random staircase needs a seed")
        rng = random.Random(seed)
        for k in range(2, n + 1):
            perms.append(_random_step(k, rng).padded(n))
        return GeneratorSet(n, tuple(perms), f"stairs-random:n={n},seed={seed}")
    for k in range(2, n + 1):
        if kind == "adjacent":
            perms.append(_perm_from_cycles(n, [[k - 1, k]]))
        else:
            perms.append(_perm_from_cycles(n, [list(range(k, 0, -1))]))
    return GeneratorSet(n, tuple(perms), f"stairs-{kind}:n={n}")


def two_generator_family(n: int) -> GeneratorSet:
    """The full cycle ``[1,2,...,n]`` followed by the transposition ``[n-1,n]``."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    sigma = _perm_from_cycles(n, [list(range(1, n + 1))])
    tau = _perm_from_cycles(n, [[n - 1, n]])
    return GeneratorSet(n, (sigma, tau), f"two-gen:n={n}")


def transposition_products_family(n: int) -> GeneratorSet:
    """``n/2`` involutions; the i-th swaps each of the last i adjacent pairs."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and at least 2, got {n}")
    perms = []
    for i in range(1, n // 2 + 1):
        pairs = [[n - 2 * m - 1, n - 2 * m] for m in range(i)]
        perms.append(_perm_from_cycles(n, pairs))
    return GeneratorSet(n, tuple(perms), f"transposition-products:n={n}")


def sims_example() -> GeneratorSet:
    """A 7-cycle and a double transposition on 7 points (order 168 group)."""
    perms = (parse_cycles("[1,2,4,5,7,3,6]", 7), parse_cycles("[2,4][3,5]", 7))
    return GeneratorSet(7, perms, "sims-example")


class ClosureCapExceeded(RuntimeError):
    pass


def brute_force_closure(gens: GeneratorSet, cap: int = 50_000) -> set[Perm]:
    """Every product of the generators, found breadth first from the identity."""
    n = gens.degree
    ident = tuple(range(n))
    gen_arrays = [p.padded(n)._a for p in gens.perms]
    seen = {ident}
    queue = deque([ident])
    while queue:
        a = queue.popleft()
        for g in gen_arrays:
            b = tuple(g[x] for x in a)
            if b not in seen:
                seen.add(b)
                if len(seen) > cap:
                    raise ClosureCapExceeded(f"closure exceeds {cap} elements")
                queue.append(b)
    return {Perm._raw(a) for a in seen}


# -- textual family specs -------------------------------------------------

FAMILY_NAMES = (
    "doubling",
    "doubling-relabeled",
    "stairs-adjacent",
    "stairs-cycle",
    "stairs-random",
    "two-gen",
    "transposition-products",
    "sims-example",
)

# which parameter --sizes varies for each family
SIZE_PARAM = {"doubling": "h", "doubling-relabeled": "h"}


@dataclass(frozen=True)
class FamilySpec:
    """A family name plus integer parameters, e.g. ``stairs-random:n=16,seed=1``."""

    name: str
    params: dict = field(default_factory=dict)

    @property
    def size_param(self) -> str:
        return SIZE_PARAM.get(self.name, "n")

    def instantiate(self, size: Optional[int] = None, seed: Optional[int] = None) -> GeneratorSet:
        params = dict(self.params)
        if size is not None:
            params[self.size_param] = size
        if seed is not None:
            params["seed"] = seed
        name = self.name
        try:
            if name == "doubling":
                return doubling_cycle_perm(params["h"], relabeled=False)
            if name == "doubling-relabeled":
                return doubling_cycle_perm(params["h"], relabeled=True)
            if name == "stairs-adjacent":
                return staircase_family(params["n"], "adjacent")
            if name == "stairs-cycle":
                return staircase_family(params["n"], "cycle")
            if name == "stairs-random":
                return staircase_family(params["n"], "random", params.get("seed", 1))
            if name == "two-gen":
                return two_generator_family(params["n"])
            if name == "transposition-products":
                return transposition_products_family(params["n"])
            if name == "sims-example":
                return sims_example()
        except KeyError as exc:
            raise ValueError(f"family {name!r} needs parameter {exc.args[0]!r}") from None
        raise ValueError(f"unknown family {name!r}")

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


def parse_family_spec(text: str) -> FamilySpec:
    name, _, rest = text.strip().partition(":")
    if name not in FAMILY_NAMES:
        raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"bad family parameter {item!r}; expected key=value")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise ValueError(f"family parameter {key!r} must be an integer") from None
    return FamilySpec(name, params)

"""Counting helpers, structural bound checks, and growth-rate measurement."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .families import FamilySpec, parse_family_spec
from .sims import Strategy, build
from .transversal import TransversalSystem, order

__all__ = [
    "theta",
    "minimal_product",
    "check_bounds",
    "BoundReport",
    "GrowthFit",
    "BenchRow",
    "growth_fit",
    "CSV_COLUMNS",
    "write_csv",
]


def theta(N: int) -> int:
    """Number of prime factors of ``N`` counted with multiplicity."""
    if N < 1:
        raise ValueError(f"theta needs N >= 1, got {N}")
    count = 0
    while N % 2 == 0:
        N //= 2
        count += 1
    d = 3
    while d * d <= N:
        while N % d == 0:
            N //= d
            count += 1
        d += 2
    if N > 1:
        count += 1
    return count


def minimal_product(n: int, s: int) -> int:
    """Smallest ``prod(s_k)`` over ``1 <= s_k <= k`` (k = 1..n) with ``sum(s_k - 1) == s``.

    The minimum fills the top levels completely: ``s_k = k`` for k above some
    q, ``s_q = r``, the rest 1; here ``C(n,2) - s - 1 == C(q,2) - r`` with
    ``1 <= r < q <= n``, giving ``r * n! / q!``.
    """
    top = n * (n - 1) // 2
    if not 0 <= s < top:
        raise ValueError(f"s must satisfy 0 <= s < {top}, got {s}")
    v = top - s - 1
    q = 2
    while q * (q - 1) // 2 <= v:
        q += 1
    r = q * (q - 1) // 2 - v
    assert 1 <= r < q <= n
    return r * math.factorial(n) // math.factorial(q)


@dataclass
class BoundReport:
    n: int
    g: int
    theta_g: int
    l_n_g: int
    sum_s_minus_1: int
    minimal_product_bound: int
    log_n_g: float
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_bounds(sys: TransversalSystem) -> BoundReport:
    """Check the structural size bounds every finished system must satisfy."""
    n = sys.degree
    g = order(sys)
    th = theta(g)
    sizes = [(k, sys.s(k), sys.t(k)) for k in range(1, n + 1)]
    total = sum(s - 1 for _, s, _ in sizes)
    violations = []
    notes = []
    for k, s, t in sizes:
        if s > k:
            violations.append(f"s({k})={s} exceeds {k}")
        if k >= 2 and t > 2 * k - 3:
            violations.append(f"t({k})={t} exceeds 2k-3={2 * k - 3}")
        if t > th:
            violations.append(f"t({k})={t} exceeds theta(g)={th}")
    busy = sum(1 for _, s, _ in sizes if s > 1)
    if busy > th:
        violations.append(f"{busy} levels with s(k)>1 exceed theta(g)={th}")
    if total < n * (n - 1) // 2:
        bound = minimal_product(n, total)
        if g < bound:
            violations.append(f"g={g} below minimal product {bound}")
    else:
        # every slot filled: the only configuration, product n!
        bound = math.factorial(n)
        notes.append(f"all slots filled: sum of s(k)-1 = C({n},2) = {total}")
        if g != bound:
            violations.append(f"all slots filled but g={g} != {n}!")
    log_n_g = math.log(g) / math.log(n) if n > 1 else 0.0
    return BoundReport(n, g, th, min(n, th), total, bound, log_n_g, violations, notes)


# -- growth measurement ----------------------------------------------------

CSV_COLUMNS = (
    "family",
    "label",
    "n",
    "seed",
    "strategy",
    "mult_cost_units",
    "product_tests",
    "b_invocations",
    "slots_filled",
    "order",
    "theta_g",
    "wall_ms",
)


@dataclass(frozen=True)
class BenchRow:
    family: str
    label: str
    n: int
    seed: Optional[int]
    strategy: str
    mult_cost_units: int
    product_tests: int
    b_invocations: int
    slots_filled: int
    order: int
    theta_g: int
    wall_ms: float
    product_cost_units: int = 0
    bounds_ok: bool = True

    @property
    def total_cost_units(self) -> int:
        return self.mult_cost_units + self.product_cost_units

    def as_csv_row(self) -> list:
        return [
            self.family,
            self.label,
            self.n,
            "" if self.seed is None else self.seed,
            self.strategy,
            self.mult_cost_units,
            self.product_tests,
            self.b_invocations,
            self.slots_filled,
            self.order,
            self.theta_g,
            f"{self.wall_ms:.3f}",
        ]


@dataclass
class GrowthFit:
    label: str
    sizes: list[int]
    costs: list[float]
    pairwise_exponents: list[float]
    rows: list[BenchRow] = field(default_factory=list)
    metric: str = "mult_cost_units"


def _run_cell(spec: FamilySpec, size, seed, strategy: Strategy, cost_limit) -> BenchRow:
    gens = spec.instantiate(size, seed)
    t0 = time.perf_counter()
    sys, stats = build(gens, strategy, cost_limit=cost_limit)
    wall = (time.perf_counter() - t0) * 1000
    g = order(sys)
    return BenchRow(
        family=spec.name,
        label=gens.label,
        n=gens.degree,
        seed=seed,
        strategy=strategy.value,
        mult_cost_units=stats.mult_cost_units,
        product_tests=stats.product_tests,
        b_invocations=stats.b_invocations,
        slots_filled=stats.slots_filled,
        order=g,
        theta_g=theta(g),
        wall_ms=wall,
        product_cost_units=stats.product_cost_units,
        bounds_ok=check_bounds(sys).ok,
    )


def growth_fit(
    family: "FamilySpec | str",
    sizes: Sequence[Optional[int]],
    strategy: "Strategy | str" = Strategy.RECURSIVE,
    seeds: Optional[Iterable[int]] = None,
    *,
    cost_limit: Optional[int] = None,
    workers: int = 1,
    metric: str = "mult_cost_units",
) -> GrowthFit:
    """Build the family at each size and fit cost exponents between consecutive sizes.

    ``sizes`` are values of the family's size parameter (``h`` for the
    doubling families, ``n`` otherwise); ``None`` keeps the size written in the family string.
    With ``seeds``, each size is built once per seed and costs are averaged.
    The exponent between two sizes is ``log(cost2/cost1) / log(n2/n1)`` on the
    degrees, which is the base-2 log of the cost ratio for doubling chains.

    ``metric`` is ``"mult_cost_units"`` (sifting cost only) or
    ``"total_cost_units"`` (sifting plus forming the tested products); the
    single-perm doubling families do almost all their work in the latter.
    """
    if metric not in ("mult_cost_units", "total_cost_units"):
        raise ValueError(f"unknown cost metric {metric!r}")
    spec = parse_family_spec(family) if isinstance(family, str) else family
    strategy = Strategy.parse(strategy)
    seed_list = list(seeds) if seeds is not None else [None]
    cells = [(size, seed) for size in sizes for seed in seed_list]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                cell: pool.submit(_run_cell, spec, cell[0], cell[1], strategy, cost_limit)
                for cell in cells
            }
            results = {cell: f.result() for cell, f in futures.items()}
    else:
        results = {cell: _run_cell(spec, cell[0], cell[1], strategy, cost_limit) for cell in cells}

    degrees, costs = [], []
    for size in sizes:
        rows = [results[(size, seed)] for seed in seed_list]
        degrees.append(rows[0].n)
        costs.append(sum(getattr(r, metric) for r in rows) / len(rows))
    for a, b in zip(degrees, degrees[1:]):
        if b <= a:
            raise ValueError(f"sizes must give strictly increasing degrees, got {degrees}")
    exponents = []
    for (n1, c1), (n2, c2) in zip(zip(degrees, costs), zip(degrees[1:], costs[1:])):
        if c1 <= 0 or c2 <= 0:
            raise ValueError("costs must be positive to fit an exponent")
        exponents.append(math.log(c2 / c1) / math.log(n2 / n1))
    return GrowthFit(
        label=f"{spec}/{strategy.value}",
        sizes=degrees,
        costs=costs,
        pairwise_exponents=exponents,
        rows=[results[cell] for cell in cells],
        metric=metric,
    )


def write_csv(rows: Iterable[BenchRow], out: Optional[io.TextIOBase] = None) -> str:
    """Write bench rows as CSV to ``out`` (if given) and return the text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.as_csv_row())
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text

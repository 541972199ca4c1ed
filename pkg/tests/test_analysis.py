import io
import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permsims import (
    build,
    check_bounds,
    growth_fit,
    minimal_product,
    new_system,
    sims_example,
    staircase_family,
    theta,
    transposition_products_family,
)
from permsims.analysis import CSV_COLUMNS, write_csv


def exhaustive_min_product(n, s):
    best = None
    for sizes in itertools.product(*(range(1, k + 1) for k in range(1, n + 1))):
        if sum(x - 1 for x in sizes) == s:
            p = math.prod(sizes)
            best = p if best is None else min(best, p)
    return best


def test_theta_values():
    assert theta(1) == 0
    assert theta(24) == 4
    assert theta(2**7 * 3**3 * 5**2 * 7) == theta(604800) == 13
    assert theta(1_000_003) == 1
    assert theta(math.factorial(30)) == sum(theta(k) for k in range(2, 31))
    with pytest.raises(ValueError):
        theta(0)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_theta_additive(a, b):
    assert theta(a * b) == theta(a) + theta(b)


def test_minimal_product_examples():
    assert minimal_product(5, 0) == 1
    assert minimal_product(5, 3) == 4
    assert minimal_product(4, 5) == 12 == exhaustive_min_product(4, 5)
    for s in range(0, 5):
        assert minimal_product(5, s) == s + 1


def test_minimal_product_range():
    with pytest.raises(ValueError):
        minimal_product(4, 6)
    with pytest.raises(ValueError):
        minimal_product(4, -1)


@pytest.mark.parametrize("n", range(2, 8))
def test_minimal_product_monotone(n):
    values = [minimal_product(n, s) for s in range(n * (n - 1) // 2)]
    assert values == sorted(values)


def test_check_bounds_trivial():
    rep = check_bounds(new_system(5))
    assert rep.ok and rep.g == 1 and rep.theta_g == 0 and rep.sum_s_minus_1 == 0


def test_check_bounds_full_symmetric():
    rep = check_bounds(build(staircase_family(6, "adjacent"))[0])
    assert rep.ok
    assert rep.g == 720 and rep.sum_s_minus_1 == 15
    assert rep.notes and "all slots filled" in rep.notes[0]


def test_check_bounds_transposition_products():
    s, _ = build(transposition_products_family(8))
    rep = check_bounds(s)
    assert rep.ok and rep.g == 16 and rep.theta_g == 4
    assert sum(1 for k in range(1, 9) if s.s(k) > 1) == 4
    assert rep.l_n_g == 4


def test_check_bounds_reports_violations():
    s, _ = build(sims_example())
    s._gens[2].extend([s._gens[7][0]] * 3)  # corrupt: t(2) > 2k-3
    rep = check_bounds(s)
    assert not rep.ok
    assert any("t(2)" in v for v in rep.violations)


def test_growth_fit_two_gen_small():
    fit = growth_fit("two-gen", [16, 32, 64])
    assert fit.sizes == [16, 32, 64]
    assert all(2.5 <= e <= 3.5 for e in fit.pairwise_exponents)
    assert len(fit.rows) == 3 and all(r.bounds_ok for r in fit.rows)


def test_growth_fit_seed_average():
    fit = growth_fit("stairs-random", [6, 12], seeds=[1, 2, 3])
    assert len(fit.rows) == 6
    by_n = {}
    for r in fit.rows:
        by_n.setdefault(r.n, []).append(r.mult_cost_units)
    assert fit.costs == [sum(by_n[6]) / 3, sum(by_n[12]) / 3]


def test_growth_fit_parallel_matches_serial():
    a = growth_fit("stairs-random", [6, 12], seeds=[1, 2], workers=2)
    b = growth_fit("stairs-random", [6, 12], seeds=[1, 2])
    assert a.costs == b.costs


def test_growth_fit_doubling_total_metric():
    fit = growth_fit("doubling-relabeled", [4, 5, 6, 7], metric="total_cost_units")
    assert fit.sizes == [14, 30, 62, 126]
    assert [r.slots_filled for r in fit.rows] == [3, 4, 5, 6]
    # n log n: exponent between 1 and 1.5 at these sizes
    assert all(1.0 < e < 1.5 for e in fit.pairwise_exponents)


def test_growth_fit_errors():
    with pytest.raises(ValueError):
        growth_fit("two-gen", [16, 8])
    with pytest.raises(ValueError):
        growth_fit("two-gen", [8], metric="wall")


def test_csv_schema():
    fit = growth_fit("two-gen", [8])
    text = write_csv(fit.rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[0] == (
        "family,label,n,seed,strategy,mult_cost_units,product_tests,"
        "b_invocations,slots_filled,order,theta_g,wall_ms"
    )
    fields = lines[1].split(",")
    assert fields[:5] == ["two-gen", "two-gen:n=8", "8", "", "recursive"]
    assert fields[9] == "40320"
    buf = io.StringIO()
    write_csv(fit.rows, buf)
    assert buf.getvalue() == text

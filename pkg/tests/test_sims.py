import itertools
import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from permsims import (
    BuildStats,
    Perm,
    Strategy,
    algorithm_A,
    algorithm_B,
    brute_force_closure,
    build,
    compose,
    doubling_cycle_perm,
    insert_generator,
    level_stats,
    new_system,
    order,
    parse_cycles,
    power,
    sift,
    sims_example,
    staircase_family,
    two_generator_family,
)
from permsims.families import GeneratorSet
from permsims.sims import CostLimitExceeded

PI = "[1,2,3,4,5,6,7,14][8,9,10,13][11,12]"
PI_BAR = "[1,2,3,4,5,6,7,12][8,9,10,13][11,14]"
STRATEGIES = ["recursive", "iterative"]


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_insert_single_doubling_cycle(strategy):
    pi = parse_cycles(PI, 14)
    s = new_system(14)
    insert_generator(s, pi, strategy)
    assert s.generators(14) == [pi]
    assert all(s.t(k) == 0 for k in range(1, 14))
    # sigma_{14, a_j} = pi^j along the cycle through 14
    point = 14
    for j in range(1, 8):
        point = pi(point)
        assert s.transversal(14)[point] == power(pi, j)
    assert s.s(14) == 8


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_insert_relabeled_doubling_cycle(strategy):
    bar = parse_cycles(PI_BAR, 14)
    s = new_system(14)
    insert_generator(s, bar, strategy)
    filled = {(k, j): p for k in range(1, 15) for j, p in s.transversal(k).items() if j != k}
    assert filled == {(14, 11): bar, (13, 9): power(bar, 2), (12, 4): power(bar, 4)}
    gens = {k: s.generators(k) for k in range(1, 15) if s.t(k)}
    assert gens == {14: [bar], 13: [power(bar, 2)], 12: [power(bar, 4)]}


def test_insert_identity_and_duplicate_are_noops():
    s, stats = build(sims_example())
    before = level_stats(s)
    insert_generator(s, Perm.identity(7), stats=stats)
    insert_generator(s, parse_cycles("[2,4][3,5]", 7), stats=stats)
    assert level_stats(s) == before
    assert stats.membership_tests == 4


def test_insert_degree_exceeded():
    with pytest.raises(ValueError):
        insert_generator(new_system(3), parse_cycles("[1,5]", 5))


def test_generator_below_top_level_reaches_all_levels():
    # the second generator fixes 3 and 4 but must still be tested against sigma_{4,j}
    gens = GeneratorSet(4, (parse_cycles("[1,3][2,4]", 4), parse_cycles("[1,2]", 4)))
    for strategy in STRATEGIES:
        s, _ = build(gens, strategy)
        assert order(s) == 8 == len(brute_force_closure(gens))


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_staircase_generator_lists(strategy):
    n = 7
    gens = staircase_family(n, "random", seed=5)
    s, _ = build(gens, strategy)
    for k in range(2, n + 1):
        assert s.generators(k) == list(gens.perms[: k - 1])
        assert s.s(k) == k
    assert s.t(1) == 0


def test_two_generator_cascade_enters_lower_level_with_shorter_cycle():
    n = 6
    sigma, tau = two_generator_family(n).perms
    s = new_system(n)
    insert_generator(s, sigma)
    assert s.t(n - 1) == 0
    algorithm_A(s, n, tau)
    sigma_low = parse_cycles("[1,2,3,4,5]", n)
    tau_low = parse_cycles("[4,5]", n)
    assert s.generators(n - 1)[:2] == [sigma_low, tau_low]


def test_algorithm_B_fill_path():
    s = new_system(5)
    stats = BuildStats()
    p = parse_cycles("[2,5]", 5)
    s._add_gen(5, p.padded(5)._a)  # make p a member of <T(5)>
    algorithm_B(s, 5, p, stats=stats)
    assert s.transversal(5)[2] == p
    assert stats.slots_filled == 1


def test_algorithm_B_identity_power_is_immediate():
    pi = parse_cycles(PI, 14)
    s, _ = build([pi], degree=14)
    before = level_stats(s)
    stats = BuildStats()
    algorithm_B(s, 14, power(pi, 8), stats=stats)
    assert level_stats(s) == before
    assert stats.b_invocations == 1 and stats.mult_cost_units == 0


def test_algorithm_B_rejects_level_one():
    with pytest.raises(ValueError):
        algorithm_B(new_system(3), 1, Perm.identity(3))


def test_algorithm_A_rejects_members():
    s, _ = build(sims_example())
    with pytest.raises(ValueError):
        algorithm_A(s, 7, parse_cycles("[2,4][3,5]", 7))


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_stats_consistency(strategy):
    for gens in (sims_example(), staircase_family(8, "random", seed=2), two_generator_family(9)):
        s, stats = build(gens, strategy)
        assert stats.slots_filled == sum(sk - 1 for _, sk, _ in level_stats(s))
        assert stats.product_tests >= stats.b_invocations
        # every B call starts from a product test
        assert stats.product_tests == sum(sk * tk for _, sk, tk in level_stats(s))
        assert stats.strategy is Strategy.parse(strategy)
        assert sum(ls.mult_cost_units for ls in stats.per_level.values()) == stats.mult_cost_units


def test_empty_generator_list():
    s, stats = build([], degree=5)
    assert order(s) == 1 and stats.product_tests == 0


def test_cost_limit():
    with pytest.raises(CostLimitExceeded):
        build(staircase_family(20, "random", seed=1), cost_limit=1000)


def test_deep_cascade_has_no_recursion_limit():
    s, _ = build(two_generator_family(200), "recursive")
    assert s.s(200) == 200


# -- oracle and property checks --------------------------------------------


def random_generator_set(rng, n, m):
    perms = []
    for _ in range(m):
        img = list(range(1, n + 1))
        rng.shuffle(img)
        perms.append(Perm(img))
    return GeneratorSet(n, tuple(perms), "random")


@pytest.mark.parametrize("seed", range(12))
def test_membership_matches_closure(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    gens = random_generator_set(rng, n, rng.randint(1, 3))
    group = brute_force_closure(gens)
    for strategy in STRATEGIES:
        s, _ = build(gens, strategy)
        members = {
            Perm(p) for p in itertools.permutations(range(1, n + 1)) if sift(s, Perm(p)).member
        }
        assert members == group


gen_sets = st.integers(2, 7).flatmap(
    lambda n: st.lists(st.permutations(range(1, n + 1)), min_size=0, max_size=3).map(
        lambda ps: GeneratorSet(n, tuple(Perm(p) for p in ps), "hyp")
    )
)


@settings(max_examples=60, suppress_health_check=[HealthCheck.too_slow])
@given(gen_sets)
def test_strategies_agree_on_level_sizes(gens):
    a, _ = build(gens, "recursive")
    b, _ = build(gens, "iterative")
    assert [x[1] for x in level_stats(a)] == [x[1] for x in level_stats(b)]
    assert order(a) == order(b)
    for g in gens.perms:
        assert sift(a, g).member and sift(b, g).member


def random_element(s, rng):
    # product sigma_1 ... sigma_n of random stored transversal perms, one per level
    p = Perm.identity(s.degree)
    for k in range(1, s.degree + 1):
        col = rng.choice(s.index_list(k))
        p = compose(p, s.transversal(k)[col])
    return p


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_closed_under_multiplication(strategy):
    rng = random.Random(7)
    for gens in (sims_example(), staircase_family(9, "random", seed=4), doubling_cycle_perm(4, True)):
        s, _ = build(gens, strategy)
        for _ in range(60):
            assert sift(s, compose(random_element(s, rng), random_element(s, rng))).member


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_B_only_changes_lower_levels(strategy):
    # while B_k runs, t(k') and existing c(k', i') may change only for k' < k
    s = new_system(8)
    active = []
    violations = []

    def snapshot(k):
        return [(s.t(x), s.counts(x)) for x in range(k, 9)]

    def observer(event, k):
        if event == "enter_B":
            active.append((k, snapshot(k)))
            return
        k0, snap = active.pop()
        for (t0, c0), (t1, c1) in zip(snap, snapshot(k0)):
            if t0 != t1 or c1[: len(c0)] != c0:
                violations.append(k0)

    stats = BuildStats()
    for g in staircase_family(8, "random", seed=9).perms:
        if not sift(s, g).member:
            algorithm_A(s, 8, g, strategy, stats, observer=observer)
    assert stats.b_invocations > 50
    assert not active and not violations

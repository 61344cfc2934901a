import itertools
import math
from fractions import Fraction

import pytest

from oracles import MN_GRID, PROPOSED_GRID, brute_proposed_equations
from spc_caching.analysis import mn_rate
from spc_caching.delivery import (
    empty_intersection,
    schedule_mn,
    schedule_proposed,
    verify_schedule,
)
from spc_caching.design import SchemeParams, design_for
from spc_caching.errors import InconsistentInputError
from spc_caching.schemes import build_mn_scheme, build_proposed_scheme

Q2_K3_EQUATIONS = [
    [("12", 3), ("13", 2), ("23", 1)],
    [("12", 4), ("24", 1), ("14", 2)],
    [("34", 1), ("13", 4), ("14", 3)],
    [("34", 2), ("24", 3), ("23", 4)],
]


def proposed(q, k, N=2):
    return build_proposed_scheme(SchemeParams(q, k), N=N)


def label_terms(scheme, eq):
    return [(scheme.user_labels[u][3:-1], s + 1) for u, s in eq.terms]


def test_q2_k3_schedule(example_scheme):
    sched = schedule_proposed(example_scheme, example_scheme.design)
    assert [label_terms(example_scheme, eq) for eq in sched.equations] == Q2_K3_EQUATIONS
    assert sched.rate == 1
    assert sched.listing().splitlines()[0].endswith("W_{d_{12},3} ⊕ W_{d_{13},2} ⊕ W_{d_{23},1}")


def test_q2_k2():
    s = proposed(2, 2)
    sched = schedule_proposed(s)
    assert len(sched.equations) == 2 and sched.rate == 1
    for eq in sched.equations:
        (u0, s0), (u1, s1) = eq.terms
        assert u0 // 2 == 0 and u1 // 2 == 1
        # each user is sent the one subfile it lacks, which its partner holds
        assert s0 not in s.cached[u0] and s0 in s.cached[u1]
        assert s1 not in s.cached[u1] and s1 in s.cached[u0]


def test_q3_k2_against_brute_force():
    sched = schedule_proposed(proposed(3, 2))
    assert len(sched.equations) == 6 and sched.rate == 2
    assert [eq.terms for eq in sched.equations] == brute_proposed_equations(3, 2)


@pytest.mark.parametrize("q, k", PROPOSED_GRID)
def test_matches_brute_force(q, k):
    sched = schedule_proposed(proposed(q, k))
    assert [eq.terms for eq in sched.equations] == brute_proposed_equations(q, k)


@pytest.mark.parametrize("q, k", PROPOSED_GRID)
def test_tuple_count_identity(q, k):
    count = sum(empty_intersection(l, q) for l in itertools.product(range(q), repeat=k))
    assert count == q**k - q ** (k - 1) == q ** (k - 1) * (q - 1)


@pytest.mark.parametrize("q, k", PROPOSED_GRID)
def test_arithmetic_condition_matches_sets(q, k):
    design = design_for(q, k)
    for labels in itertools.product(range(q), repeat=k):
        common = frozenset.intersection(*(design.blocks[i, labels[i]] for i in range(k)))
        assert empty_intersection(labels, q) == (not common)


@pytest.mark.parametrize("q, k", PROPOSED_GRID)
def test_decodability_pattern(q, k):
    s = proposed(q, k)
    design = s.design
    for eq in schedule_proposed(s).equations:
        assert sorted(u // q for u in eq.users) == list(range(k))
        for a, (ua, sa) in enumerate(eq.terms):
            assert sa not in design.blocks[divmod(ua, q)]
            for b, (ub, _) in enumerate(eq.terms):
                if b != a:
                    assert sa in design.blocks[divmod(ub, q)]


def test_proposed_rejects_mn_scheme():
    with pytest.raises(InconsistentInputError):
        schedule_proposed(build_mn_scheme(4, Fraction(1, 2), 2))


def test_proposed_rejects_foreign_design():
    with pytest.raises(InconsistentInputError):
        schedule_proposed(proposed(2, 3), design_for(3, 3))


def test_mn_k3_single_equation():
    s = build_mn_scheme(3, Fraction(2, 3), 3)
    sched = schedule_mn(s)
    assert len(sched.equations) == 1 and sched.rate == Fraction(1, 3)
    # user 1 gets {2,3}, user 2 gets {1,3}, user 3 gets {1,2}
    assert [(u, s.subsets[x]) for u, x in sched.equations[0].terms] == [(0, (1, 2)), (1, (0, 2)), (2, (0, 1))]


def test_mn_smallest():
    sched = schedule_mn(build_mn_scheme(2, Fraction(1, 2), 2))
    assert len(sched.equations) == 1 and sched.rate == Fraction(1, 2)


def test_mn_k6():
    sched = schedule_mn(build_mn_scheme(6, Fraction(1, 2), 6))
    assert len(sched.equations) == 15 and sched.rate == Fraction(3, 4)


@pytest.mark.parametrize("K, t", MN_GRID)
def test_mn_rate_formula(K, t):
    s = build_mn_scheme(K, Fraction(t, K), 2)
    sched = schedule_mn(s)
    assert len(sched.equations) == math.comb(K, t + 1)
    assert sched.rate == mn_rate(K, Fraction(t, K))
    assert verify_schedule(s, sched).ok


def test_mn_rejects_proposed():
    with pytest.raises(InconsistentInputError):
        schedule_mn(proposed(2, 2))


def test_verify_example(example_scheme):
    report = verify_schedule(example_scheme, schedule_proposed(example_scheme))
    assert report.ok
    assert [u.participation for u in report.users] == [2] * 6
    assert [sorted(x + 1 for x in u.recovered) for u in report.users] == [
        [3, 4], [1, 2], [2, 4], [1, 3], [2, 3], [1, 4]
    ]


def test_verify_q2_k2():
    report = verify_schedule(proposed(2, 2), schedule_proposed(proposed(2, 2)))
    assert report.ok and all(u.participation == 1 for u in report.users)


def test_verify_q3_k3():
    s = proposed(3, 3)
    sched = schedule_proposed(s)
    tally = [0] * s.K
    for eq in sched.equations:
        for u in eq.users:
            tally[u] += 1
    assert len(sched.equations) == 18 and tally == [6] * 9
    report = verify_schedule(s, sched)
    assert report.ok and [u.participation for u in report.users] == tally


def test_verify_reports_broken_schedule(example_scheme):
    sched = schedule_proposed(example_scheme)
    broken = type(sched)(example_scheme, sched.equations[:-1] + sched.equations[:1])
    report = verify_schedule(example_scheme, broken)
    assert not report.ok
    assert any(not u.distinct for u in report.users)
    assert any(not u.complete for u in report.users)

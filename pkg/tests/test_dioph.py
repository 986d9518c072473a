from fractions import Fraction

import pytest

from ablab import (
    CFNumber,
    PrecisionExhausted,
    TAU_INF,
    WindowEmpty,
    convergents,
    exact_order_estimate,
    find_convergent_in_window,
    find_witnesses,
    make_number,
)
from ablab.dioph import DiophantineSpec

GOLDEN = CFNumber.golden()
TAU3 = make_number(DiophantineSpec(Fraction(3), (2,)))
TAU6 = make_number(DiophantineSpec(Fraction(6), (2,)))


def test_make_number_tau3_sequence():
    assert [TAU3.quotient(i) for i in range(1, 5)] == [2, 2, 5, 27]
    assert [c.q for c in convergents(TAU3, 4)] == [1, 2, 5, 27, 734]


def test_make_number_tau2_is_all_ones():
    x = make_number(DiophantineSpec(Fraction(2), (1,)))
    assert [x.quotient(i) for i in range(1, 10)] == [1] * 9


def test_make_number_tau6_sequence():
    assert [TAU6.quotient(i) for i in range(1, 4)] == [2, 16, 1185921]
    assert [c.q for c in convergents(TAU6, 3)] == [1, 2, 33, 39135395]


def test_make_number_liouville_sequence():
    x = make_number(DiophantineSpec(TAU_INF, (2,)))
    # a_{n+1} = q_n ** n on top of seed [2]: q = 2, 5, 127, ...
    assert [x.quotient(i) for i in range(1, 5)] == [2, 2, 25, 2048383]
    assert [c.q for c in convergents(x, 3)] == [1, 2, 5, 127]


def test_spec_validation():
    with pytest.raises(ValueError):
        DiophantineSpec(Fraction(3, 2), (2,))
    with pytest.raises(ValueError):
        DiophantineSpec(Fraction(3), ())
    with pytest.raises(ValueError):
        DiophantineSpec(Fraction(3), (0,))


def test_spec_json_round_trip():
    for spec in (DiophantineSpec(Fraction(5, 2), (2, 7)),
                 DiophantineSpec(TAU_INF, (3,))):
        assert DiophantineSpec.from_json(spec.to_json_dict()) == spec


def test_exact_order_estimate_golden():
    assert exact_order_estimate(GOLDEN, 6) == 2


def test_exact_order_estimate_constructed():
    # a_{n+1} = q_n exactly for tau = 3, so every term is exactly 3
    assert exact_order_estimate(TAU3, 4) == 3
    assert exact_order_estimate(TAU6, 3) == 6
    assert Fraction(29, 10) <= exact_order_estimate(TAU3, 4) <= Fraction(31, 10)


def test_exact_order_estimate_monotone():
    x = make_number(DiophantineSpec(TAU_INF, (2,)))
    estimates = [exact_order_estimate(x, d) for d in (2, 3, 4, 5)]
    assert all(a <= b for a, b in zip(estimates, estimates[1:]))
    assert estimates[-1] > 4  # liouville growth outruns every finite order


def test_find_witnesses_tau6():
    wits = find_witnesses(TAU6, Fraction(6), 2)
    assert [(w.l, w.q) for w in wits] == [(1, 2), (2, 33)]
    # certificates are the exact convergent error bounds
    assert wits[0].error_bound == Fraction(1, 2 * 33)
    assert wits[1].error_bound == Fraction(1, 33 * 39135395)
    # and they really certify order 6: 1/(q_n q_{n+1}) <= q_n^-6
    for w in wits:
        assert w.error_bound <= Fraction(1, w.q ** 6)


def test_find_witnesses_golden_exhausts():
    with pytest.raises(PrecisionExhausted):
        find_witnesses(GOLDEN, Fraction(3), 1)


def test_find_witnesses_dirichlet_everywhere():
    # every convergent already approximates to order 2
    wits = find_witnesses(TAU3, Fraction(2), 3)
    assert [w.q for w in wits] == [2, 5, 27]


def test_find_convergent_in_window_golden():
    c = find_convergent_in_window(GOLDEN, 8, Fraction(2), Fraction(1, 2))
    assert c.q == 8  # smallest in-window denominator; 8 is itself a denominator
    c = find_convergent_in_window(GOLDEN, 2, Fraction(2), Fraction(1, 2))
    assert c.q == 2  # lower endpoint inclusive
    c = find_convergent_in_window(GOLDEN, 9, Fraction(2), Fraction(1, 2))
    assert c.q == 13


def test_find_convergent_in_window_tau3():
    # the tau = 3 number scanned with its own type: window [6, 6^2.5]
    c = find_convergent_in_window(TAU3, 6, Fraction(3), Fraction(1, 2))
    assert c.q == 27


def test_find_convergent_in_window_empty():
    # denominators of TAU3 are 2, 5, 27, 734, ...; [29, 29^1.01] misses them
    with pytest.raises(WindowEmpty):
        find_convergent_in_window(TAU3, 29, Fraction(2), Fraction(1, 100))


def test_window_preconditions():
    with pytest.raises(ValueError):
        find_convergent_in_window(GOLDEN, 1, Fraction(2), Fraction(1, 2))
    with pytest.raises(ValueError):
        find_convergent_in_window(GOLDEN, 8, Fraction(2), Fraction(0))

import random
import threading
from fractions import Fraction

import pytest

from ablab import (
    AmbiguousFold,
    CertifiedValue,
    CFNumber,
    DepthExceeded,
    PrecisionExhausted,
    best_approx_verify,
    cf_from_json,
    convergents,
    dist_to_nearest_int,
    evaluate,
    nearest_int_dist,
)
from ablab.dioph import DiophantineSpec, make_number

GOLDEN = CFNumber.golden()


def oracle_convergents(quots):
    """By-the-recurrence reference, independent of the library internals."""
    ps, qs = [0], [1]
    p_prev, q_prev = 1, 0
    for a in quots:
        ps.append(a * ps[-1] + p_prev)
        qs.append(a * qs[-1] + q_prev)
        p_prev, q_prev = ps[-2], qs[-2]
    return ps, qs


def golden_contains(iv: CertifiedValue) -> bool:
    """(sqrt(5)-1)/2 lies in iv, decided by the sign of t^2 + t - 1."""
    f = lambda t: t * t + t - 1
    return f(iv.lo) <= 0 <= f(iv.hi)


def test_convergents_golden():
    convs = convergents(GOLDEN, 5)
    assert [c.p for c in convs] == [0, 1, 1, 2, 3, 5]
    assert [c.q for c in convs] == [1, 1, 2, 3, 5, 8]


def test_convergents_literal_12():
    convs = convergents(CFNumber.literal([1, 2]), 2)
    assert (convs[1].p, convs[1].q) == (1, 1)
    assert (convs[2].p, convs[2].q) == (2, 3)


def test_convergent_seed():
    convs = convergents(CFNumber.literal([7]), 0)
    assert len(convs) == 1 and (convs[0].n, convs[0].p, convs[0].q) == (0, 0, 1)


def test_determinant_identity_random_literals():
    rng = random.Random(11)
    for _ in range(50):
        quots = [rng.randint(1, 10 ** 6) for _ in range(rng.randint(1, 30))]
        x = CFNumber.literal(quots)
        convs = convergents(x, len(quots))
        for n in range(1, len(convs)):
            det = convs[n].p * convs[n - 1].q - convs[n - 1].p * convs[n].q
            assert det == (-1) ** (n - 1)
        ps, qs = oracle_convergents(quots)
        assert [c.p for c in convs] == ps and [c.q for c in convs] == qs


def test_evaluate_golden_coarse():
    iv = evaluate(GOLDEN, Fraction(1, 40))
    assert iv.width <= Fraction(1, 40)
    assert golden_contains(iv)


def test_evaluate_golden_fine():
    iv = evaluate(GOLDEN, Fraction(1, 10 ** 12))
    assert iv.width <= Fraction(1, 10 ** 12)
    assert golden_contains(iv)


def test_evaluate_finite_literal():
    half = CFNumber.literal([2])
    iv = evaluate(half, Fraction(1))
    assert iv.contains(Fraction(1, 2)) and iv.width <= 1
    # pushed past its quotients, the literal is its exact rational
    assert evaluate(half, Fraction(1, 100)) == CertifiedValue.exact(Fraction(1, 2))


def test_evaluate_nesting():
    widths = [Fraction(1, 10), Fraction(1, 100), Fraction(1, 10 ** 6)]
    ivs = [evaluate(GOLDEN, w) for w in widths]
    assert ivs[0].encloses(ivs[1]) and ivs[1].encloses(ivs[2])


def test_evaluate_precision_exhausted():
    x = make_number(DiophantineSpec(Fraction(6), (2,)), depth_cap=3)
    with pytest.raises(PrecisionExhausted):
        evaluate(x, Fraction(1, 10 ** 60))


def test_two_sided_bound_certified():
    """Convergent error strictly between the classical two-sided bounds.

    An interval whose bracket stops at depth n+1 touches the bounds with
    equality, so the value is evaluated two levels deeper (bracket from
    convergents n+3 and n+4), where both strict comparisons are
    decidable for every continued fraction.
    """
    tau3 = make_number(DiophantineSpec(Fraction(3), (2,)))
    for x in (GOLDEN, tau3, CFNumber.periodic((2, 1), (3, 1))):
        for n in range(1, 9):
            c_n = x.convergent(n)
            q_next = x.denominator(n + 1)
            lower = Fraction(1, c_n.q * (q_next + c_n.q))
            upper = Fraction(1, c_n.q * q_next)
            c = c_n.value
            iv = evaluate(x, Fraction(1, x.denominator(n + 3) * x.denominator(n + 4)))
            dist_lo, dist_hi = sorted((abs(iv.lo - c), abs(iv.hi - c)))
            assert not iv.contains(c)
            assert lower < dist_lo and dist_hi < upper


def test_growth_bound_golden():
    for n in range(1, 12):
        assert GOLDEN.denominator(n + 1) <= 2 * GOLDEN.quotient(n + 1) * GOLDEN.denominator(n)


def test_nearest_int_dist_convergent_scale():
    # at q = q_4 = 5 the distance lands inside (1/(q_4+q_5), 1/q_5) = (1/13, 1/8)
    d = nearest_int_dist(GOLDEN, 5, Fraction(1, 1000))
    assert Fraction(1, 13) < d.lo and d.hi < Fraction(1, 8)


def test_nearest_int_dist_exact_rational():
    d = nearest_int_dist(CFNumber.literal([2]), 2, Fraction(1, 2))
    assert d == CertifiedValue.exact(0)


def test_nearest_int_dist_non_denominator():
    d4 = nearest_int_dist(GOLDEN, 4, Fraction(1, 10 ** 6))
    d3 = nearest_int_dist(GOLDEN, 3, Fraction(1, 10 ** 6))
    assert d4.lo >= d3.lo


def test_ambiguous_fold_raised_and_recoverable():
    with pytest.raises(AmbiguousFold):
        nearest_int_dist(GOLDEN, 13, Fraction(1, 2))
    d = nearest_int_dist(GOLDEN, 13, Fraction(1, 1000))
    assert Fraction(1, 34) < d.lo and d.hi < Fraction(1, 21)


def test_dist_to_nearest_int_half_fold():
    with pytest.raises(AmbiguousFold):
        dist_to_nearest_int(CertifiedValue(Fraction(2, 5), Fraction(3, 5)))
    d = dist_to_nearest_int(CertifiedValue(Fraction(7, 5), Fraction(29, 20)))
    assert d == CertifiedValue(Fraction(2, 5), Fraction(9, 20))


def test_best_approx_verify_golden():
    assert best_approx_verify(GOLDEN, 4) is True
    assert best_approx_verify(GOLDEN, 3) is True  # q equals a denominator


def brute_force_dist_bounds(x, q, width):
    """Bracket of min over p of |q*x - p| straight from an interval of x."""
    iv = evaluate(x, width)
    lo, hi = q * iv.lo, q * iv.hi
    best_lo, best_hi = None, None
    p = lo.numerator // lo.denominator
    while Fraction(p) <= hi + 1:
        d_lo = max(Fraction(0), max(Fraction(p) - hi, lo - Fraction(p)))
        d_hi = max(abs(lo - p), abs(hi - p))
        best_lo = d_lo if best_lo is None else min(best_lo, d_lo)
        best_hi = d_hi if best_hi is None else min(best_hi, d_hi)
        p += 1
    return best_lo, best_hi


def test_best_approx_verify_constructed():
    x = make_number(DiophantineSpec(Fraction(6), (2,)))
    assert best_approx_verify(x, 10) is True
    # independent confirmation: ||10 x|| really is >= ||2 x|| (q_1 = 2)
    w = Fraction(1, 10 ** 9)
    lo10, _ = brute_force_dist_bounds(x, 10, w)
    _, hi2 = brute_force_dist_bounds(x, 2, w)
    assert lo10 >= hi2


def test_best_approx_verify_every_q_below_materialized():
    for q in range(1, GOLDEN.denominator(10)):
        assert best_approx_verify(GOLDEN, q) is True


def test_literal_depth_errors():
    x = CFNumber.literal([1, 2, 3])
    with pytest.raises(DepthExceeded):
        convergents(x, 4)
    with pytest.raises(DepthExceeded):
        x.quotient(4)


def test_json_round_trip():
    for x in (CFNumber.literal([1, 2, 3]),
              CFNumber.periodic((2,), (1, 3)),
              make_number(DiophantineSpec(Fraction(5, 2), (2,))),
              make_number(DiophantineSpec(float("inf"), (3,)))):
        again = cf_from_json(x.to_json_dict())
        assert again.to_json_dict() == x.to_json_dict()
        assert [again.quotient(i) for i in range(1, 4)] == \
               [x.quotient(i) for i in range(1, 4)]


def test_invalid_constructions():
    with pytest.raises(ValueError):
        CFNumber.literal([])
    with pytest.raises(ValueError):
        CFNumber.literal([0, 2])
    with pytest.raises(ValueError):
        CFNumber.periodic((1,), ())
    with pytest.raises(ValueError):
        CFNumber.generated("nonsense", {"seed": [2]})


def test_concurrent_materialization():
    x = make_number(DiophantineSpec(Fraction(5, 2), (2,)))
    results = []

    def worker():
        results.append([c.q for c in convergents(x, 12)])

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)

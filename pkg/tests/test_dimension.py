import random
from fractions import Fraction

import pytest

from ablab import (
    AmbiguousMembership,
    BoundParams,
    BoxCountSample,
    CertifiedValue,
    CFNumber,
    InadmissibleParams,
    SeparationFailed,
    TAU_INF,
    WindowEmpty,
    box_count,
    dist_to_nearest_int,
    embed_threshold,
    evaluate,
    extract_separated_subset,
    gen_omega,
    make_number,
    theorem_bound,
    upper_box_dim_estimate,
)
from ablab.dimension import _certify_pairs
from ablab.dioph import DiophantineSpec

GOLDEN = CFNumber.golden()
TAU6 = make_number(DiophantineSpec(Fraction(6), (2,)))


def exact_points(values):
    return [CertifiedValue.exact(Fraction(v)) for v in values]


def brute_arc_count(values, r):
    """Independent occupancy scan on the same grid geometry."""
    arcs = -((-1) // (2 * Fraction(r)))  # ceil(1/(2r))
    occupied = {(Fraction(v) * arcs).__floor__() % arcs for v in values}
    return len(occupied)


def test_box_count_antipodal():
    sample = box_count(exact_points([0, Fraction(1, 2)]), Fraction(1, 8))
    assert sample.count == 2


def test_box_count_full_grid():
    pts = exact_points([Fraction(i, 100) for i in range(100)])
    sample = box_count(pts, Fraction(1, 8))
    assert sample.count == 4  # ceil(1/(2r)) arcs, all occupied


def test_box_count_matches_brute_force():
    rng = random.Random(13)
    for _ in range(10):
        values = [Fraction(rng.randint(0, 10 ** 6), 10 ** 6 + 1) for _ in range(200)]
        for r in (Fraction(1, 8), Fraction(1, 64), Fraction(1, 512)):
            assert box_count(exact_points(values), r).count == brute_arc_count(values, r)


def test_box_count_ambiguous_interval():
    straddling = CertifiedValue(Fraction(49, 100), Fraction(51, 100))
    with pytest.raises(AmbiguousMembership) as exc_info:
        box_count([CertifiedValue.exact(Fraction(1, 8)), straddling], Fraction(1, 4))
    assert exc_info.value.point_index == 1


def test_box_count_width_precondition():
    wide = CertifiedValue(Fraction(0), Fraction(1, 4))
    with pytest.raises(ValueError):
        box_count([wide], Fraction(1, 8))


def test_upper_box_dim_examples():
    est = upper_box_dim_estimate([BoxCountSample(Fraction(1, 4), 2),
                                  BoxCountSample(Fraction(1, 16), 4)])
    assert est.value == Fraction(1, 2)

    est = upper_box_dim_estimate([BoxCountSample(Fraction(1, 8), 1),
                                  BoxCountSample(Fraction(1, 64), 1)])
    assert est.value == 0

    est = upper_box_dim_estimate([BoxCountSample(Fraction(1, 8), 4),
                                  BoxCountSample(Fraction(1, 64), 32)])
    assert est.value == Fraction(5, 6)
    assert est.value == max(r for _, _, r in est.table)


def test_upper_box_dim_at_most_one_on_grid_counts():
    rng = random.Random(17)
    for _ in range(10):
        values = [Fraction(rng.randint(0, 999), 1000) for _ in range(rng.randint(1, 300))]
        samples = [box_count(exact_points(values), r)
                   for r in (Fraction(1, 8), Fraction(1, 32), Fraction(1, 128))]
        est = upper_box_dim_estimate(samples)
        assert est.value <= 1


def test_upper_box_dim_preconditions():
    with pytest.raises(ValueError):
        upper_box_dim_estimate([BoxCountSample(Fraction(1, 4), 2)])
    with pytest.raises(ValueError):
        BoxCountSample(Fraction(1, 4), 0)  # count >= 1 enforced at the type


def test_theorem_bound_values():
    assert theorem_bound(BoundParams(Fraction(2), Fraction(4))) == Fraction(1, 2)
    assert theorem_bound(BoundParams(Fraction(2), TAU_INF)) == 1
    assert theorem_bound(BoundParams(Fraction(2), Fraction(6))) == Fraction(2, 3)
    with pytest.raises(InadmissibleParams):
        theorem_bound(BoundParams(Fraction(3), Fraction(4)))


def test_embed_threshold_values():
    assert embed_threshold(BoundParams(Fraction(2), Fraction(4))) == Fraction(1, 4)
    assert embed_threshold(BoundParams(Fraction(2), TAU_INF)) == Fraction(1, 2)
    assert embed_threshold(BoundParams(Fraction(2), Fraction(8))) == Fraction(3, 8)


def test_bound_positivity_iff_admissible():
    rng = random.Random(23)
    for _ in range(200):
        tau1 = Fraction(rng.randint(4, 40), rng.randint(1, 2)) / 2 + 1  # >= 2
        tau2 = Fraction(rng.randint(4, 80), rng.randint(1, 2)) / 2 + 1
        params = BoundParams(tau1, tau2)
        if params.admissible:
            assert theorem_bound(params) > 0
            assert embed_threshold(params) == theorem_bound(params) / 2
        else:
            with pytest.raises(InadmissibleParams):
                theorem_bound(params)


def test_extract_level_one_pipeline():
    """Frozen hand-run: q_l = 2, window picks q' = 5, alternating word gives
    k = (0, 1, 2), residues (0, 1, 0) mod 2, so the class p' = 0 holds
    j = 1 and j = 3."""
    omega = gen_omega("alternating", 12)
    wit = extract_separated_subset(GOLDEN, TAU6, omega, Fraction(2), Fraction(6),
                                   Fraction(1, 4), 1, Fraction(2))
    assert (wit.q_l, wit.q_l_prime, wit.p_prime) == (2, 5, 0)
    assert wit.members == ((1, 0), (3, 2))
    assert wit.ball_radius == Fraction(1, 50)
    assert wit.gap_lower_bound >= Fraction(1, 4 * 5)
    assert wit.pigeonhole_ok and len(wit.members) * 2 * 2 >= 5
    assert wit.alpha_bound_ok and wit.alpha_pair_gap >= Fraction(1, 10)
    assert wit.beta_bound_ok and wit.beta_pair_err <= Fraction(5, 64)
    assert wit.verified
    # datapoint is a certified lower bound of log 2 / log 50 = 0.17718...
    assert Fraction(17, 100) < wit.dim_datapoint <= Fraction(17719, 100000)


def test_extract_gap_survives_finer_reverification():
    omega = gen_omega("alternating", 12)
    wit = extract_separated_subset(GOLDEN, TAU6, omega, Fraction(2), Fraction(6),
                                   Fraction(1, 4), 1, Fraction(2))
    threshold = Fraction(1, 4 * wit.q_l_prime)
    width = threshold / 4 / 64
    ia, ib = evaluate(GOLDEN, width), evaluate(TAU6, width)
    for a_idx in range(len(wit.members)):
        for b_idx in range(a_idx + 1, len(wit.members)):
            dj = wit.members[b_idx][0] - wit.members[a_idx][0]
            dk = wit.members[b_idx][1] - wit.members[a_idx][1]
            iv = CertifiedValue(dj * ia.lo + dk * ib.lo, dj * ia.hi + dk * ib.hi)
            assert dist_to_nearest_int(iv).lo >= threshold


def test_extract_member_boxes_cover_half():
    omega = gen_omega("alternating", 12)
    wit = extract_separated_subset(GOLDEN, TAU6, omega, Fraction(2), Fraction(6),
                                   Fraction(1, 4), 1, Fraction(2))
    r = wit.ball_radius
    weight = max(j + k for j, k in wit.members) + 1
    ia = evaluate(GOLDEN, r / (20 * weight))
    ib = evaluate(TAU6, r / (20 * weight))
    values = []
    for j, k in wit.members:
        lo = j * ia.lo + k * ib.lo
        hi = j * ia.hi + k * ib.hi
        shift = lo.numerator // lo.denominator
        values.append(CertifiedValue(lo - shift, hi - shift))
    count = box_count(values, r).count
    assert 2 * count >= len(wit.members)


def test_extract_window_empty():
    sparse_alpha = CFNumber.literal([10 ** 6, 10 ** 6])
    omega = gen_omega("alternating", 12)
    with pytest.raises(WindowEmpty):
        extract_separated_subset(sparse_alpha, TAU6, omega, Fraction(2), Fraction(6),
                                 Fraction(1, 4), 1, Fraction(2))


def test_extract_inadmissible():
    omega = gen_omega("alternating", 12)
    with pytest.raises(InadmissibleParams):
        extract_separated_subset(GOLDEN, TAU6, omega, Fraction(3), Fraction(4),
                                 Fraction(1, 4), 1, Fraction(2))


def test_certify_pairs_failure_branch():
    # ||1 * golden|| = 0.381966... is certifiably below a threshold of 2/5
    diffs = {(1, 0): ((1, 0), (2, 0))}
    with pytest.raises(SeparationFailed) as exc_info:
        _certify_pairs(GOLDEN, TAU6, diffs, Fraction(2, 5))
    assert exc_info.value.pair == ((1, 0), (2, 0))

"""Box counting on the circle, separated-subset extraction, and the
dimension bound calculators.

The extraction pipeline certifies, in exact rational arithmetic, that a
pigeonhole-selected subset of an alpha-beta orbit is pairwise separated
by at least 1/(4*q'), where q' is a convergent denominator of alpha
chosen inside a window determined by a good rational approximation of
beta.  Each such certificate yields one box-dimension datapoint
log(#members) / log(10*q').
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cf import CertifiedValue, CFNumber, TAU_INF, dist_to_nearest_int, evaluate
from .dioph import find_witnesses
from .errors import (
    AmbiguousFold,
    AmbiguousMembership,
    DegenerateSample,
    InadmissibleParams,
    SeparationFailed,
    WindowEmpty,
    WordTooShort,
)
from .exact import cmp_vs_pow, floor_kth_root, format_rational, log_ratio_bounds
from .orbit import OmegaWord, k_sequence

RATIO_TOL = Fraction(1, 1 << 20)


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class BoxCountSample:
    """Occupied-arc count at radius r.

    The grid count G of arcs of length <= 2r brackets the optimal
    closed-ball covering number N within N <= G <= 2N, so dimension
    ratios computed from G carry at most a log(2) additive error in the
    numerator, which vanishes in the scaling limit.
    """

    r: Fraction
    count: int

    def __post_init__(self):
        if not 0 < self.r < 1:
            raise ValueError("radius must lie in (0, 1)")
        if not 1 <= self.count <= _ceil_fraction(1 / self.r):
            raise ValueError("count must lie in [1, ceil(1/r)]")


@dataclass(frozen=True)
class BoundParams:
    """Diophantine types (tau1, tau2) for the dimension bound."""

    tau1: Fraction
    tau2: Fraction | float  # Fraction, or TAU_INF

    def __post_init__(self):
        if Fraction(self.tau1) < 2:
            raise ValueError("tau1 must be >= 2")
        if self.tau2 != TAU_INF and Fraction(self.tau2) < 2:
            raise ValueError("tau2 must be >= 2 (or infinity)")

    @property
    def admissible(self) -> bool:
        return 2 * self.tau1 < self.tau2 + 2


@dataclass(frozen=True)
class SeparationWitness:
    """Certificate that a residue class of orbit points is well separated.

    members are (j, k_j) pairs; the certified circle distance between
    any two of their orbit points is at least gap_lower_bound, which on
    a verified witness is >= 1/(4*q_l_prime).  dim_datapoint is a
    certified rational lower bound on log(#members)/log(10*q_l_prime).
    """

    l: int
    q_l: int
    q_l_prime: int
    epsilon: Fraction
    p_prime: int
    members: tuple[tuple[int, int], ...]
    gap_lower_bound: Fraction
    ball_radius: Fraction
    dim_datapoint: Fraction
    tau1: Fraction
    tau2: Fraction
    C: Fraction
    pigeonhole_ok: bool
    alpha_pair_gap: Fraction
    alpha_bound_ok: bool
    beta_pair_err: Fraction
    beta_bound_ok: bool
    verified: bool = True

    def to_json_dict(self) -> dict:
        return {
            "l": str(self.l),
            "q_l": str(self.q_l),
            "q_l_prime": str(self.q_l_prime),
            "epsilon": format_rational(self.epsilon),
            "p_prime": str(self.p_prime),
            "members": [[str(j), str(k)] for j, k in self.members],
            "member_count": str(len(self.members)),
            "gap_lower_bound": format_rational(self.gap_lower_bound),
            "ball_radius": format_rational(self.ball_radius),
            "dim_datapoint": format_rational(self.dim_datapoint),
            "tau1": format_rational(self.tau1),
            "tau2": format_rational(self.tau2),
            "C": format_rational(self.C),
            "pigeonhole_ok": self.pigeonhole_ok,
            "alpha_pair_gap": format_rational(self.alpha_pair_gap),
            "alpha_bound_ok": self.alpha_bound_ok,
            "beta_pair_err": format_rational(self.beta_pair_err),
            "beta_bound_ok": self.beta_bound_ok,
            "verified": self.verified,
        }


@dataclass(frozen=True)
class DimensionEstimate:
    """Finite-scale surrogate of the upper box dimension."""

    value: Fraction
    table: tuple[tuple[Fraction, int, Fraction], ...]  # (r, count, ratio)


def box_count(points: Sequence[CertifiedValue], r: Fraction) -> BoxCountSample:
    """Occupied arcs among ceil(1/(2r)) equal arcs covering the circle.

    Every point interval must have width <= r/10; an interval that
    meets two arcs raises AmbiguousMembership with its index so the
    caller can re-evaluate the points more precisely.
    """
    r = Fraction(r)
    if not 0 < r < 1:
        raise ValueError("radius must lie in (0, 1)")
    if not points:
        raise ValueError("no points to count")
    arcs = _ceil_fraction(1 / (2 * r))
    occupied: set[int] = set()
    for idx, pt in enumerate(points):
        if pt.width > r / 10:
            raise ValueError(
                f"point {idx} has width {pt.width} > r/10; evaluate more precisely")
        lo = pt.lo - (pt.lo.numerator // pt.lo.denominator)  # canonical mod 1
        hi = lo + pt.width
        scaled_lo, scaled_hi = lo * arcs, hi * arcs
        arc_lo = scaled_lo.numerator // scaled_lo.denominator
        arc_hi = scaled_hi.numerator // scaled_hi.denominator
        if arc_lo != arc_hi:
            raise AmbiguousMembership(
                f"point {idx} interval straddles an arc boundary at scale r={r}",
                point_index=idx)
        occupied.add(arc_lo % arcs)
    return BoxCountSample(r=r, count=len(occupied))


def upper_box_dim_estimate(samples: Sequence[BoxCountSample],
                           tol: Fraction = RATIO_TOL) -> DimensionEstimate:
    """max over samples of log(count)/log(1/r), with the full ratio table.

    Ratios are certified rational lower bounds (width <= tol), so the
    estimate never overstates the true finite-scale value.
    """
    if len(samples) < 2 or len({s.r for s in samples}) < 2:
        raise ValueError("need at least two samples at distinct radii")
    table = []
    for s in samples:
        if s.count < 1:
            raise DegenerateSample(f"sample at r={s.r} has count {s.count}")
        ratio_lo, _ = log_ratio_bounds(s.count, 1 / s.r, tol)
        table.append((s.r, s.count, ratio_lo))
    value = max(ratio for _, _, ratio in table)
    return DimensionEstimate(value=value, table=tuple(table))


def theorem_bound(params: BoundParams) -> Fraction:
    """Lower bound 1 - 2*(tau1 - 1)/tau2 for the upper box dimension of
    an alpha-beta orbit with step types (tau1, tau2); 1 when tau2 is
    infinite.  Positive exactly on admissible parameters."""
    if not params.admissible:
        raise InadmissibleParams(
            f"need 2*tau1 < tau2 + 2; got tau1={params.tau1}, tau2={params.tau2}")
    if params.tau2 == TAU_INF:
        return Fraction(1)
    return 1 - 2 * (params.tau1 - 1) / Fraction(params.tau2)


def embed_threshold(params: BoundParams) -> Fraction:
    """Half the orbit bound: the Hausdorff-dimension threshold below which
    the affine-embedding obstruction applies."""
    return theorem_bound(params) / 2


# ---- separated-subset extraction -----------------------------------------


def _window_denominator(alpha: CFNumber, q_l: int, tau1: Fraction, tau2: Fraction,
                        epsilon: Fraction) -> int:
    """Largest convergent denominator of alpha in
    [q_l**lo_exp, q_l**hi_exp], the window the separation argument
    needs.  The largest choice maximizes the resulting dimension
    datapoint; endpoint tests are exact cross-multiplied powers."""
    lo_exp = (tau2 - 2 * epsilon) / (2 * (tau1 + epsilon - 1))
    hi_exp = (tau2 - 2 * epsilon) / 2
    base = Fraction(q_l)
    best: int | None = None
    n = 1
    while True:
        q_n = alpha.denominator(n)
        if cmp_vs_pow(Fraction(q_n), base, hi_exp) > 0:
            break
        if q_n >= 2 and cmp_vs_pow(Fraction(q_n), base, lo_exp) >= 0:
            best = q_n
        n += 1
    if best is None:
        raise WindowEmpty(
            f"no convergent denominator of alpha in [q_l^{lo_exp}, q_l^{hi_exp}] "
            f"for q_l={q_l}; retry with a larger witness index")
    return best


def _certify_pairs(alpha: CFNumber, beta: CFNumber,
                   diffs: dict[tuple[int, int], tuple[tuple[int, int], tuple[int, int]]],
                   threshold: Fraction) -> Fraction:
    """Refine until every pairwise circle distance clears `threshold`.

    diffs maps (dj, dk) to one representative member pair for error
    reporting.  Returns the certified minimum gap lower bound.
    """
    pending = dict(diffs)
    max_dj = max(dj for dj, _ in pending)
    max_dk = max((dk for _, dk in pending), default=0)
    width = threshold / (8 * (max_dj + max_dk + 1))
    min_gap: Fraction | None = None
    while pending:
        ia = evaluate(alpha, width)
        ib = evaluate(beta, width)
        still = {}
        for (dj, dk), pair in pending.items():
            iv = CertifiedValue(dj * ia.lo + dk * ib.lo, dj * ia.hi + dk * ib.hi)
            try:
                dist = dist_to_nearest_int(iv)
            except AmbiguousFold:
                still[(dj, dk)] = pair
                continue
            if dist.lo >= threshold:
                min_gap = dist.lo if min_gap is None else min(min_gap, dist.lo)
            elif dist.hi < threshold:
                raise SeparationFailed(
                    f"orbit points for j={pair[0][0]} and j={pair[1][0]} are only "
                    f"{dist.hi} apart (< {threshold}); witness index below the "
                    f"separation threshold", pair=pair)
            else:
                still[(dj, dk)] = pair
        pending = still
        width /= 16
    assert min_gap is not None
    return min_gap


def _certify_alpha_lower(alpha: CFNumber, djs: set[int], bound: Fraction
                         ) -> tuple[Fraction, bool]:
    """Certified min over dj of ||alpha*dj||, and whether it clears `bound`."""
    width = bound / 8
    worst: Fraction | None = None
    ok = True
    pending = set(djs)
    while pending:
        ia = evaluate(alpha, width)
        still = set()
        for dj in pending:
            try:
                dist = dist_to_nearest_int(ia.scaled(dj))
            except AmbiguousFold:
                still.add(dj)
                continue
            if dist.lo >= bound:
                worst = dist.lo if worst is None else min(worst, dist.lo)
            elif dist.hi < bound:
                ok = False
                worst = Fraction(0) if worst is None else min(worst, dist.lo)
            else:
                still.add(dj)
        pending = still
        width /= 16
    assert worst is not None
    return worst, ok


def _certify_beta_upper(beta: CFNumber, dks: set[int], bound: Fraction
                        ) -> tuple[Fraction, bool]:
    """Certified max over dk of ||beta*dk||, and whether it stays <= `bound`."""
    dks = {dk for dk in dks if dk > 0}
    if not dks:
        return Fraction(0), True
    width = bound / 8
    worst = Fraction(0)
    ok = True
    pending = set(dks)
    while pending:
        ib = evaluate(beta, width)
        still = set()
        for dk in pending:
            try:
                dist = dist_to_nearest_int(ib.scaled(dk))
            except AmbiguousFold:
                still.add(dk)
                continue
            if dist.hi <= bound:
                worst = max(worst, dist.hi)
            elif dist.lo > bound:
                ok = False
                worst = max(worst, dist.hi)
            else:
                still.add(dk)
        pending = still
        width /= 16
    return worst, ok


def extract_separated_subset(alpha: CFNumber, beta: CFNumber, omega: OmegaWord,
                             tau1: Fraction, tau2: Fraction, epsilon: Fraction,
                             l: int, C: Fraction) -> SeparationWitness:
    """Run the full separation pipeline for witness index l.

    Stages: (1) take the l-th order-tau2 approximation denominator q_l
    of beta; (2) pick the largest convergent denominator q' of alpha in
    the window [q_l**((tau2-2e)/(2(tau1+e-1))), q_l**((tau2-2e)/2)];
    (3) count J = A's among the first q' letters and compute k_1..k_J;
    (4) bucket j by k_j mod q_l and keep the fullest residue class;
    (5) certify all pairwise circle gaps >= 1/(4*q'); (6) attach the
    datapoint log(#members)/log(10*q').

    Raises WindowEmpty / WordTooShort / PrecisionExhausted /
    SeparationFailed; the last signals a witness index below the
    argument's "sufficiently large" threshold, not a defect.
    """
    tau1, tau2, epsilon, C = (Fraction(tau1), Fraction(tau2), Fraction(epsilon),
                              Fraction(C))
    params = BoundParams(tau1, tau2)
    if not params.admissible:
        raise InadmissibleParams(
            f"need 2*tau1 < tau2 + 2; got tau1={tau1}, tau2={tau2}")
    if epsilon <= 0 or C < 1 or l < 1:
        raise ValueError("need epsilon > 0, C >= 1, l >= 1")

    q_l = find_witnesses(beta, tau2, l)[l - 1].q
    q_lp = _window_denominator(alpha, q_l, tau1, tau2, epsilon)
    if len(omega) < q_lp:
        raise WordTooShort(
            f"word of length {len(omega)} cannot cover the prefix {q_lp} "
            f"needed at witness index {l}")

    j_total = omega.alpha_count(q_lp)
    ks = k_sequence(omega, j_total)
    buckets: dict[int, list[tuple[int, int]]] = {}
    for j in range(1, j_total + 1):
        buckets.setdefault(ks[j - 1] % q_l, []).append((j, ks[j - 1]))
    best_size = max(len(v) for v in buckets.values())
    p_prime = min(p for p, v in buckets.items() if len(v) == best_size)
    members = tuple(buckets[p_prime])

    pigeonhole_ok = len(members) * C * q_l >= q_lp

    threshold = Fraction(1, 4 * q_lp)
    diffs: dict[tuple[int, int], tuple[tuple[int, int], tuple[int, int]]] = {}
    for a_idx in range(len(members)):
        for b_idx in range(a_idx + 1, len(members)):
            dj = members[b_idx][0] - members[a_idx][0]
            dk = members[b_idx][1] - members[a_idx][1]
            diffs.setdefault((dj, dk), (members[a_idx], members[b_idx]))

    if diffs:
        gap_lower = _certify_pairs(alpha, beta, diffs, threshold)
        alpha_gap, alpha_ok = _certify_alpha_lower(
            alpha, {dj for dj, _ in diffs}, Fraction(1, 2 * q_lp))
        if tau2.denominator == 1:
            beta_bound = Fraction(q_lp, q_l ** tau2.numerator)
        else:
            beta_bound = _rational_power_bound(q_lp, q_l, tau2)
        beta_err, beta_ok = _certify_beta_upper(
            beta, {dk for _, dk in diffs}, beta_bound)
    else:
        # single member: vacuously separated
        gap_lower = Fraction(1, 2)
        alpha_gap, alpha_ok = Fraction(1, 2), True
        beta_err, beta_ok = Fraction(0), True

    datapoint_lo, _ = log_ratio_bounds(len(members), 10 * q_lp, RATIO_TOL)
    return SeparationWitness(
        l=l, q_l=q_l, q_l_prime=q_lp, epsilon=epsilon, p_prime=p_prime,
        members=members, gap_lower_bound=gap_lower,
        ball_radius=Fraction(1, 10 * q_lp), dim_datapoint=datapoint_lo,
        tau1=tau1, tau2=tau2, C=C, pigeonhole_ok=pigeonhole_ok,
        alpha_pair_gap=alpha_gap, alpha_bound_ok=alpha_ok,
        beta_pair_err=beta_err, beta_bound_ok=beta_ok)


def _rational_power_bound(q_lp: int, q_l: int, tau2: Fraction) -> Fraction:
    """Rational lower bound on q_lp * q_l**(-tau2) for non-integer tau2.

    The denominator rounds q_l**tau2 up to an integer, so the returned
    bound errs low: a check against it is harder to pass, never unsound.
    """
    power_ceiling = floor_kth_root(q_l ** tau2.numerator, tau2.denominator) + 1
    return Fraction(q_lp, power_ceiling)

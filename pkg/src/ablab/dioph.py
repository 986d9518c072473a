"""Numbers of prescribed Diophantine type and witness-finding procedures.

The growth rule a_{n+1} = ceil(q_n**(tau - 2)) forces the convergent
error |x - p_n/q_n| to track q_n**(-tau) on both sides, so the
constructed number has exact approximation order tau; a_{n+1} = q_n**n
gives a Liouville number (order infinity).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cf import CFNumber, Convergent, TAU_INF
from .errors import DepthExceeded, PrecisionExhausted, WindowEmpty
from .exact import cmp_vs_pow, format_rational, log_ratio_bounds, parse_rational


@dataclass(frozen=True)
class DiophantineSpec:
    """Target approximation order plus the initial quotients."""

    tau: Fraction | float  # Fraction >= 2, or TAU_INF
    seed_quotients: tuple[int, ...]

    def __post_init__(self):
        if self.tau != TAU_INF and Fraction(self.tau) < 2:
            raise ValueError("tau must be >= 2 (or infinity)")
        if not self.seed_quotients or any(a < 1 for a in self.seed_quotients):
            raise ValueError("seed quotients must be a nonempty list of integers >= 1")

    def to_json_dict(self) -> dict:
        tau = "inf" if self.tau == TAU_INF else format_rational(self.tau)
        return {"tau": tau, "seed": [int(a) for a in self.seed_quotients]}

    @classmethod
    def from_json(cls, data: dict) -> "DiophantineSpec":
        raw = str(data["tau"]).strip().lower()
        tau = TAU_INF if raw in ("inf", "infinity") else parse_rational(raw)
        return cls(tau, tuple(int(a) for a in data["seed"]))


@dataclass(frozen=True)
class ApproximationWitness:
    """A reduced fraction p/q with certified error |beta - p/q| <= q**(-tau2)."""

    l: int
    p: int
    q: int
    error_bound: Fraction

    def to_json_dict(self) -> dict:
        return {"l": str(self.l), "p": str(self.p), "q": str(self.q),
                "error_bound": format_rational(self.error_bound)}


def make_number(spec: DiophantineSpec, depth_cap: int | None = None) -> CFNumber:
    """Lazily generated CFNumber following the spec's growth rule."""
    seed = list(spec.seed_quotients)
    if spec.tau == TAU_INF:
        return CFNumber.generated("liouville", {"seed": seed}, depth_cap=depth_cap)
    return CFNumber.generated(
        "exact_order", {"tau": Fraction(spec.tau), "seed": seed}, depth_cap=depth_cap)


def exact_order_estimate(x: CFNumber, depth: int,
                         tol: Fraction = Fraction(1, 1 << 20)) -> Fraction:
    """Lower estimate of the approximation order from materialized quotients.

    Returns max over 1 <= m < depth of 2 + log(a_{m+1}) / log(q_m),
    each term as a certified rational lower bound; indices with q_m = 1
    carry no information and are skipped.  Monotone nondecreasing in
    depth.  Every irrational has order >= 2, which is the floor.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    best = Fraction(2)
    for m in range(1, depth):
        q_m = x.denominator(m)  # DepthExceeded propagates
        a_next = x.quotient(m + 1)
        if q_m < 2:
            continue
        lo, _ = log_ratio_bounds(a_next, q_m, tol)
        best = max(best, 2 + lo)
    return best


def find_witnesses(beta: CFNumber, tau2: Fraction, count: int) -> list[ApproximationWitness]:
    """First `count` convergents of beta certified to approximate to order tau2.

    A convergent qualifies when q_{n+1} >= q_n**(tau2 - 1), since then
    the convergent error bound 1/(q_n*q_{n+1}) is at most q_n**(-tau2).
    Denominators q_n = 1 are vacuous witnesses and skipped.
    """
    tau2 = Fraction(tau2)
    if tau2 < 2:
        raise ValueError("tau2 must be >= 2")
    if count < 1:
        raise ValueError("count must be >= 1")
    out: list[ApproximationWitness] = []
    n = 1
    while len(out) < count:
        try:
            q_n = beta.denominator(n)
            q_next = beta.denominator(n + 1)
        except DepthExceeded:
            raise PrecisionExhausted(
                f"only {len(out)} of {count} witnesses of order {tau2} found "
                f"within the available quotients") from None
        if q_n >= 2 and cmp_vs_pow(Fraction(q_next), Fraction(q_n), tau2 - 1) >= 0:
            conv = beta.convergent(n)
            out.append(ApproximationWitness(
                l=len(out) + 1, p=conv.p, q=conv.q,
                error_bound=Fraction(1, q_n * q_next)))
        n += 1
    return out


def find_convergent_in_window(alpha: CFNumber, q: int, tau1: Fraction,
                              epsilon: Fraction) -> Convergent:
    """Smallest convergent denominator of alpha in [q, q**(tau1 + epsilon - 1)].

    The window is closed on both ends; endpoint membership is decided by
    exact cross-multiplied integer powers, never by rounded roots.  For
    numbers of order tau1 the window is nonempty for all sufficiently
    large q; small q may legitimately raise WindowEmpty.
    """
    tau1, epsilon = Fraction(tau1), Fraction(epsilon)
    if q < 2:
        raise ValueError("q must be >= 2")
    if epsilon <= 0 or tau1 < 2:
        raise ValueError("need epsilon > 0 and tau1 >= 2")
    upper_exp = tau1 + epsilon - 1
    n = 1
    while True:
        q_n = alpha.denominator(n)  # DepthExceeded propagates
        if cmp_vs_pow(Fraction(q_n), Fraction(q), upper_exp) > 0:
            raise WindowEmpty(
                f"no convergent denominator of alpha in [{q}, {q}^{upper_exp}]")
        if q_n >= q:
            return alpha.convergent(n)
        n += 1

"""Exact continued-fraction engine.

A CFNumber is an irrational in (0, 1) given by its partial quotients
a_1, a_2, ... (all >= 1), materialized lazily up to a depth cap.  All
evaluation goes through exact rational intervals (CertifiedValue); no
floating point touches a certified path.

Three kinds are supported:

* literal   -- a finite quotient list; the number is the exact rational
               the list denotes, and asking for quotients past the end
               is an error (never extrapolated).
* periodic  -- eventually periodic quotients (quadratic irrationals).
* generated -- quotients produced by a growth rule from the convergent
               denominators; used to build numbers of prescribed
               Diophantine type ("exact_order" and "liouville" rules).
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

from .errors import AmbiguousFold, DepthExceeded, PrecisionExhausted
from .exact import ceil_pow, format_rational, parse_rational

DEFAULT_DEPTH_CAP = 64

GENERATION_RULES = ("exact_order", "liouville")

#: sentinel for tau = infinity (Liouville targets); compares correctly
#: against Fractions.
TAU_INF = float("inf")


def default_depth_cap() -> int:
    """Depth cap from ABLAB_DEPTH_CAP, falling back to 64."""
    raw = os.environ.get("ABLAB_DEPTH_CAP")
    if raw is None:
        return DEFAULT_DEPTH_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError("ABLAB_DEPTH_CAP must be a positive integer")
    return cap


@dataclass(frozen=True)
class CertifiedValue:
    """Exact rational interval [lo, hi] guaranteed to contain a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def encloses(self, other: "CertifiedValue") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other: "CertifiedValue") -> "CertifiedValue":
        return CertifiedValue(self.lo + other.lo, self.hi + other.hi)

    def scaled(self, factor: int | Fraction) -> "CertifiedValue":
        """Scale by a nonnegative exact factor."""
        if factor < 0:
            raise ValueError("scaled() expects a nonnegative factor")
        return CertifiedValue(self.lo * factor, self.hi * factor)

    @staticmethod
    def exact(value: Fraction | int) -> "CertifiedValue":
        v = Fraction(value)
        return CertifiedValue(v, v)


@dataclass(frozen=True)
class Convergent:
    """Exact convergent p_n/q_n of a continued fraction."""

    n: int
    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("convergent denominator must be positive")
        if gcd(self.p, self.q) != 1:
            raise ValueError("convergent must be in lowest terms")

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


class CFNumber:
    """A number in (0, 1) represented by partial quotients.

    Materialization is append-only and lock-protected, so instances are
    safe to share across threads; every operation on a CFNumber is pure.
    """

    def __init__(self, kind: str, *, quotients=(), preperiod=(), period=(),
                 rule: str = "", rule_params: dict | None = None,
                 depth_cap: int | None = None):
        self.kind = kind
        self.depth_cap = default_depth_cap() if depth_cap is None else int(depth_cap)
        if self.depth_cap < 1:
            raise ValueError("depth_cap must be positive")
        self._lock = threading.Lock()
        self._quotients: list[int] = []
        self._ps: list[int] = [0]  # p_0 = 0
        self._qs: list[int] = [1]  # q_0 = 1
        self._preperiod = tuple(int(a) for a in preperiod)
        self._period = tuple(int(a) for a in period)
        self.rule = rule
        self.rule_params = dict(rule_params or {})

        if kind == "literal":
            initial = [int(a) for a in quotients]
            if not initial:
                raise ValueError("literal CFNumber needs at least one quotient")
            self._literal_len = len(initial)
            self._append_quotients(initial)
        elif kind == "periodic":
            if not self._period:
                raise ValueError("periodic CFNumber needs a nonempty period")
            self._check_positive(self._preperiod + self._period)
            self._literal_len = None
        elif kind == "generated":
            if rule not in GENERATION_RULES:
                raise ValueError(f"unknown generation rule {rule!r}")
            seed = [int(a) for a in self.rule_params.get("seed", ())]
            if not seed:
                raise ValueError("generated CFNumber needs seed quotients")
            self._literal_len = None
            self._append_quotients(seed)
        else:
            raise ValueError(f"unknown CFNumber kind {kind!r}")

    # ---- constructors -------------------------------------------------

    @classmethod
    def literal(cls, quotients: Iterable[int], depth_cap: int | None = None) -> "CFNumber":
        return cls("literal", quotients=tuple(quotients), depth_cap=depth_cap)

    @classmethod
    def periodic(cls, preperiod: Iterable[int], period: Iterable[int],
                 depth_cap: int | None = None) -> "CFNumber":
        return cls("periodic", preperiod=tuple(preperiod), period=tuple(period),
                   depth_cap=depth_cap)

    @classmethod
    def generated(cls, rule: str, params: dict, depth_cap: int | None = None) -> "CFNumber":
        return cls("generated", rule=rule, rule_params=params, depth_cap=depth_cap)

    @classmethod
    def golden(cls, depth_cap: int | None = None) -> "CFNumber":
        """All-ones expansion, (sqrt(5) - 1) / 2."""
        return cls.periodic((), (1,), depth_cap=depth_cap)

    # ---- materialization ----------------------------------------------

    @staticmethod
    def _check_positive(quotients) -> None:
        for a in quotients:
            if a < 1:
                raise ValueError("partial quotients must be >= 1")

    def _append_quotients(self, new: list[int]) -> None:
        self._check_positive(new)
        for a in new:
            n = len(self._quotients)
            p_prev = self._ps[n - 1] if n >= 1 else 1  # p_{-1} = 1
            q_prev = self._qs[n - 1] if n >= 1 else 0  # q_{-1} = 0
            self._quotients.append(a)
            self._ps.append(a * self._ps[n] + p_prev)
            self._qs.append(a * self._qs[n] + q_prev)

    def _next_quotient_unlocked(self) -> int:
        n = len(self._quotients)
        if self.kind == "periodic":
            if n < len(self._preperiod):
                return self._preperiod[n]
            return self._period[(n - len(self._preperiod)) % len(self._period)]
        if self.kind == "generated":
            q_n = self._qs[-1]
            if self.rule == "liouville":
                return q_n ** n
            tau = self.rule_params["tau"]
            return max(1, ceil_pow(q_n, Fraction(tau) - 2))
        raise AssertionError("literal numbers never generate quotients")

    def _ensure(self, count: int) -> bool:
        """Materialize quotients a_1..a_count; False when impossible."""
        if count <= len(self._quotients):
            return True
        if self.kind == "literal":
            return False
        with self._lock:
            while len(self._quotients) < count:
                if len(self._quotients) >= self.depth_cap:
                    return False
                self._append_quotients([self._next_quotient_unlocked()])
        return True

    # ---- accessors -----------------------------------------------------

    def __len__(self) -> int:
        """Quotients materialized so far."""
        return len(self._quotients)

    def quotient(self, n: int) -> int:
        """a_n (1-indexed)."""
        if n < 1:
            raise ValueError("quotient index starts at 1")
        if not self._ensure(n):
            raise DepthExceeded(self._depth_message(n))
        return self._quotients[n - 1]

    def convergent(self, n: int) -> Convergent:
        """Convergent p_n/q_n (n = 0 gives 0/1)."""
        if n < 0:
            raise ValueError("convergent index starts at 0")
        if not self._ensure(n):
            raise DepthExceeded(self._depth_message(n))
        return Convergent(n, self._ps[n], self._qs[n])

    def denominator(self, n: int) -> int:
        if not self._ensure(n):
            raise DepthExceeded(self._depth_message(n))
        return self._qs[n]

    def _depth_message(self, n: int) -> str:
        if self.kind == "literal":
            return (f"literal CFNumber has {self._literal_len} quotients; "
                    f"index {n} is beyond its known precision")
        return f"depth cap {self.depth_cap} reached before index {n}"

    def exact_value(self) -> Fraction | None:
        """The exact rational a finite literal denotes; None otherwise."""
        if self.kind != "literal":
            return None
        return Fraction(self._ps[-1], self._qs[-1])

    def __repr__(self) -> str:
        head = ",".join(str(a) for a in self._quotients[:6])
        tail = ",..." if self.kind != "literal" or len(self._quotients) > 6 else ""
        return f"CFNumber({self.kind}: [{head}{tail}])"

    # ---- serialization --------------------------------------------------

    def to_json_dict(self) -> dict:
        if self.kind == "literal":
            return {"kind": "literal", "a": [str(a) for a in self._quotients]}
        if self.kind == "periodic":
            return {
                "kind": "periodic",
                "pre": [str(a) for a in self._preperiod],
                "per": [str(a) for a in self._period],
            }
        params = {"seed": [str(a) for a in self.rule_params["seed"]]}
        if self.rule == "exact_order":
            params["tau"] = format_rational(self.rule_params["tau"])
        return {"kind": "generated", "rule": self.rule, "params": params}


def cf_from_json(data: dict, depth_cap: int | None = None) -> CFNumber:
    """Inverse of CFNumber.to_json_dict (integers may be ints or strings)."""
    kind = data.get("kind")
    if kind == "literal":
        return CFNumber.literal([int(a) for a in data["a"]], depth_cap=depth_cap)
    if kind == "periodic":
        return CFNumber.periodic(
            [int(a) for a in data.get("pre", ())],
            [int(a) for a in data["per"]],
            depth_cap=depth_cap,
        )
    if kind == "generated":
        rule = data["rule"]
        raw = data.get("params", {})
        params: dict = {"seed": [int(a) for a in raw["seed"]]}
        if rule == "exact_order":
            params["tau"] = parse_rational(raw["tau"])
        return CFNumber.generated(rule, params, depth_cap=depth_cap)
    raise ValueError(f"unknown CFNumber kind {kind!r}")


# ---- operations ---------------------------------------------------------


def convergents(x: CFNumber, n: int) -> list[Convergent]:
    """Convergents of index 0..n, satisfying the standard recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return [x.convergent(i) for i in range(n + 1)]


def evaluate(x: CFNumber, target_width: Fraction) -> CertifiedValue:
    """Certified interval of width <= target_width containing x.

    Deepens until consecutive convergents bracket the value tightly
    enough (bracket width 1/(q_n*q_{n+1})).  A finite literal that runs
    out of quotients first is returned as its exact rational.
    """
    target_width = Fraction(target_width)
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    n = 0
    while True:
        if not x._ensure(n + 1):
            exact = x.exact_value()
            if exact is not None:
                return CertifiedValue.exact(exact)
            raise PrecisionExhausted(
                f"width {target_width} unreachable within depth cap {x.depth_cap}")
        c_n, c_next = x.convergent(n), x.convergent(n + 1)
        bracket_width = Fraction(1, c_n.q * c_next.q)
        if bracket_width <= target_width:
            lo = c_n.value - bracket_width
            hi = c_n.value + bracket_width
            blo, bhi = sorted((c_n.value, c_next.value))
            return CertifiedValue(max(lo, blo), min(hi, bhi))
        n += 1


def _fold_distance(value: Fraction) -> Fraction:
    r = value - (value.numerator // value.denominator)
    return min(r, 1 - r)


def dist_to_nearest_int(interval: CertifiedValue) -> CertifiedValue:
    """Image of an interval under distance-to-nearest-integer.

    Raises AmbiguousFold when a fold point (integer or half-integer)
    lies strictly inside the interval, since the folded image would no
    longer pin the value down; callers retry with a narrower interval.
    """
    lo, hi = interval.lo, interval.hi
    first_int = (lo.numerator // lo.denominator) + 1
    if first_int < hi:
        raise AmbiguousFold(f"interval [{lo}, {hi}] straddles integer {first_int}")
    shifted = lo + Fraction(1, 2)
    first_half = (shifted.numerator // shifted.denominator) + Fraction(1, 2)
    if first_half < hi:
        raise AmbiguousFold(f"interval [{lo}, {hi}] straddles half-integer {first_half}")
    d_lo, d_hi = _fold_distance(lo), _fold_distance(hi)
    return CertifiedValue(min(d_lo, d_hi), max(d_lo, d_hi))


def nearest_int_dist(x: CFNumber, q: int, target_width: Fraction) -> CertifiedValue:
    """Certified bracket of ||q*x|| (distance from q*x to the nearest integer)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    target_width = Fraction(target_width)
    scaled = evaluate(x, target_width / q).scaled(q)
    return dist_to_nearest_int(scaled)


def _best_approx_index(x: CFNumber, q: int) -> int:
    """Maximal n with q_n <= q < q_{n+1} (materializes as needed)."""
    n = 0
    while True:
        if not x._ensure(n + 1):
            raise DepthExceeded(x._depth_message(n + 1))
        if x.denominator(n + 1) > q:
            return n
        n += 1


def best_approx_verify(x: CFNumber, q: int) -> bool:
    """Check ||q*x|| >= ||q_n*x|| for the convergent scale q_n <= q < q_{n+1}.

    True for every genuine continued fraction (best-approximation
    property); exists as a test oracle.  Intervals are refined until the
    comparison is decidable.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    n = _best_approx_index(x, q)
    q_n = x.denominator(n)
    if q == q_n:
        return True
    width = Fraction(1, 4 * q * x.denominator(n + 1))
    while True:
        try:
            d_q = nearest_int_dist(x, q, width)
            d_qn = nearest_int_dist(x, q_n, width)
        except AmbiguousFold:
            width /= 16
            continue
        if d_q.lo >= d_qn.hi:
            return True
        if d_q.hi < d_qn.lo:
            return False
        width /= 16

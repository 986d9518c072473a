"""Choice words over {A, B} and the circle orbits they drive.

A word omega selects, at every step, whether the orbit adds alpha
(letter A) or beta (letter B) mod 1.  With the orbit anchored at
x_0 = 0, the n-th point is j*alpha + k*beta mod 1 where j and k count
the A's and B's among the first n letters.
"""

from __future__ import annotations

import csv
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, TextIO

from .cf import CertifiedValue, CFNumber, evaluate
from .errors import InvalidPattern, NotEnoughAlphas
from .exact import format_rational, parse_rational

ALPHA_LETTER = "A"
BETA_LETTER = "B"

STRATEGIES = ("alternating", "periodic", "bernoulli", "literal")


@dataclass(frozen=True)
class OmegaWord:
    """Finite choice word with cached prefix counts."""

    letters: str
    strategy: str = "literal"

    def __post_init__(self):
        if not self.letters or set(self.letters) - {ALPHA_LETTER, BETA_LETTER}:
            raise InvalidPattern("word must be a nonempty string over {A, B}")

    def __len__(self) -> int:
        return len(self.letters)

    @cached_property
    def _alpha_prefix(self) -> tuple[int, ...]:
        counts = [0]
        for ch in self.letters:
            counts.append(counts[-1] + (ch == ALPHA_LETTER))
        return tuple(counts)

    def alpha_count(self, n: int) -> int:
        """Number of A's among the first n letters."""
        return self._alpha_prefix[n]

    def beta_count(self, n: int) -> int:
        return n - self._alpha_prefix[n]

    @property
    def prefix_alpha_counts(self) -> tuple[int, ...]:
        """alpha_count(n) for n = 0..N."""
        return self._alpha_prefix

    def rle(self) -> str:
        """Run-length encoding, e.g. "3A2B1A"."""
        out = []
        for m in re.finditer(r"(A+|B+)", self.letters):
            run = m.group(0)
            out.append(f"{len(run)}{run[0]}")
        return "".join(out)

    @classmethod
    def from_rle(cls, encoded: str, strategy: str = "literal") -> "OmegaWord":
        parts = re.findall(r"(\d+)([AB])", encoded)
        if not parts or "".join(f"{n}{c}" for n, c in parts) != encoded:
            raise InvalidPattern(f"malformed run-length encoding {encoded!r}")
        return cls("".join(int(n) * c for n, c in parts), strategy=strategy)

    def to_json_dict(self) -> dict:
        return {"n": len(self.letters), "strategy": self.strategy, "rle": self.rle()}


@dataclass(frozen=True)
class OrbitPoint:
    """Certified orbit point x_n = j*alpha + k*beta mod 1.

    `value` is canonical mod 1: lo lies in [0, 1); hi may reach past 1,
    which means the interval wraps through 0.
    """

    n: int
    j: int
    k: int
    value: CertifiedValue

    @property
    def wrapped(self) -> bool:
        return self.value.hi >= 1

    def pieces(self) -> list[CertifiedValue]:
        """The interval as one or two sub-intervals of [0, 1]."""
        if not self.wrapped:
            return [self.value]
        return [CertifiedValue(self.value.lo, Fraction(1)),
                CertifiedValue(Fraction(0), self.value.hi - 1)]


@dataclass(frozen=True)
class BalanceReport:
    """How comparable the A-counts and B-counts of a word stay."""

    C_estimate: Fraction | None
    longest_run: int
    classification: str  # "comparable" | "unbalanced"


def gen_omega(strategy: str, n: int, seed: int | None = None, *,
              pattern: str | None = None, p: Fraction | None = None,
              letters: str | None = None) -> OmegaWord:
    """Deterministic word of length n for the given strategy.

    alternating: ABAB...; periodic: repeats `pattern`; bernoulli: i.i.d.
    letters with P(A) = p from random.Random(seed); literal: `letters`
    passed through.
    """
    if n < 1:
        raise ValueError("word length must be >= 1")
    if strategy == "alternating":
        word = (ALPHA_LETTER + BETA_LETTER) * ((n + 1) // 2)
        return OmegaWord(word[:n], strategy="alternating")
    if strategy == "periodic":
        if not pattern or set(pattern) - {ALPHA_LETTER, BETA_LETTER}:
            raise InvalidPattern("periodic strategy needs a nonempty pattern over {A, B}")
        word = (pattern * (n // len(pattern) + 1))[:n]
        return OmegaWord(word, strategy=f"periodic:{pattern}")
    if strategy == "bernoulli":
        prob = Fraction(1, 2) if p is None else Fraction(p)
        if not 0 <= prob <= 1:
            raise ValueError("bernoulli p must lie in [0, 1]")
        rng = random.Random(seed)
        cutoff = float(prob)
        word = "".join(
            ALPHA_LETTER if rng.random() < cutoff else BETA_LETTER for _ in range(n))
        return OmegaWord(
            word, strategy=f"bernoulli:p={format_rational(prob)},seed={seed}")
    if strategy == "literal":
        if letters is None:
            raise InvalidPattern("literal strategy needs letters")
        if len(letters) < n:
            raise ValueError(f"literal letters shorter than requested length {n}")
        return OmegaWord(letters[:n], strategy="literal")
    raise ValueError(f"unknown strategy {strategy!r}")


def k_sequence(omega: OmegaWord, J: int) -> list[int]:
    """k_j = number of B's strictly before the j-th A, for j = 1..J.

    Equivalently the smallest k with alpha_count(j + k) = j, minus
    nothing: the j-th A sits at position j + k_j.  Nondecreasing in j.
    """
    if J < 0:
        raise ValueError("J must be >= 0")
    out: list[int] = []
    b_seen = 0
    for ch in omega.letters:
        if ch == ALPHA_LETTER:
            out.append(b_seen)
            if len(out) == J:
                return out
        else:
            b_seen += 1
    if len(out) < J:
        raise NotEnoughAlphas(f"word has only {len(out)} A's; {J} requested")
    return out


def balance_classify(omega: OmegaWord, burn_in: int) -> BalanceReport:
    """Comparability constant over prefixes past a burn-in.

    C_estimate is the largest of count ratio and inverse ratio over all
    prefixes N' in (burn_in, N] where both counts are positive; any
    prefix in that range with a zero count marks the word unbalanced.
    """
    n = len(omega)
    if not 0 <= burn_in < n:
        raise ValueError("need 0 <= burn_in < len(omega)")
    worst: Fraction | None = None
    degenerate = False
    for n_prime in range(burn_in + 1, n + 1):
        a = omega.alpha_count(n_prime)
        b = n_prime - a
        if a == 0 or b == 0:
            degenerate = True
            continue
        ratio = max(Fraction(a, b), Fraction(b, a))
        worst = ratio if worst is None else max(worst, ratio)
    longest = max(len(m.group(0)) for m in re.finditer(r"A+|B+", omega.letters))
    classification = "unbalanced" if degenerate else "comparable"
    return BalanceReport(C_estimate=worst, longest_run=longest,
                         classification=classification)


def orbit_points(alpha: CFNumber, beta: CFNumber, omega: OmegaWord,
                 precision: Fraction) -> list[OrbitPoint]:
    """Certified points x_0 = 0 and x_1..x_N, each of width <= precision.

    Both numbers are evaluated once at width precision / (2N) so the
    accumulated interval width after n steps stays below the target.
    """
    precision = Fraction(precision)
    if not 0 < precision < Fraction(1, 2):
        raise ValueError("precision must lie in (0, 1/2)")
    n_total = len(omega)
    width_each = precision / (2 * n_total)
    ia = evaluate(alpha, width_each)
    ib = evaluate(beta, width_each)
    points = [OrbitPoint(0, 0, 0, CertifiedValue.exact(0))]
    for n in range(1, n_total + 1):
        j = omega.alpha_count(n)
        k = n - j
        lo = j * ia.lo + k * ib.lo
        hi = j * ia.hi + k * ib.hi
        shift = lo.numerator // lo.denominator
        points.append(OrbitPoint(n, j, k, CertifiedValue(lo - shift, hi - shift)))
    return points


# ---- CSV export / import --------------------------------------------------

ORBIT_CSV_HEADER = ["n", "j", "k", "lo", "hi"]


def write_orbit_csv(points: Sequence[OrbitPoint], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(ORBIT_CSV_HEADER)
    for pt in points:
        writer.writerow([pt.n, pt.j, pt.k,
                         format_rational(pt.value.lo), format_rational(pt.value.hi)])


def read_points_csv(stream: TextIO) -> list[CertifiedValue]:
    """Read intervals from an orbit CSV (header n,j,k,lo,hi)."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header != ORBIT_CSV_HEADER:
        raise ValueError(f"expected orbit CSV header {ORBIT_CSV_HEADER}, got {header}")
    return [CertifiedValue(parse_rational(row[3]), parse_rational(row[4]))
            for row in reader if row]


def read_points_lines(lines: Iterable[str]) -> list[CertifiedValue]:
    """Read one exact rational per line as zero-width intervals."""
    points = []
    for raw in lines:
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        points.append(CertifiedValue.exact(parse_rational(text)))
    return points

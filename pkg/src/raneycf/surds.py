"""Exact quadratic irrationals (P + sqrt(D))/Q and the continued-fraction oracle.

Everything here is integer-exact: floors come from math.isqrt, periodicity
from repeating complete quotients.  This module is deliberately independent
of the transducer machinery so the two can cross-check each other.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .matrices import Mat2, det as mat_det

_MAX_EXPANSION_STEPS = 1_000_000


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


@dataclass(frozen=True, eq=False)
class QuadraticSurd:
    """The value (P + sqrt(D))/Q with D > 0 nonsquare, Q != 0, Q | D - P^2."""

    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.Q == 0:
            raise ValueError("Q must be nonzero")
        if self.D <= 0 or _is_square(self.D):
            raise ValueError("D must be a positive nonsquare")
        if (self.D - self.P * self.P) % self.Q:
            raise ValueError("not normalized: Q does not divide D - P^2")

    # Value equality: (P + sqrt(D))/Q is determined by the pair of rationals
    # (P/Q, D/Q^2) together with the sign of Q (sqrt(D)/Q = sgn(Q)*sqrt(D/Q^2)).
    def _key(self):
        return (
            Fraction(self.P, self.Q),
            Fraction(self.D, self.Q * self.Q),
            self.Q > 0,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticSurd):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"QuadraticSurd({self.P},{self.Q},{self.D})"


def surd(P: int, Q: int, D: int) -> QuadraticSurd:
    """Build a surd, rescaling (P, Q, D) -> (Pk, Qk, Dk^2) if needed so that
    Q divides D - P^2 (the standard complete-quotient form)."""
    if Q == 0:
        raise ValueError("Q must be nonzero")
    if (D - P * P) % Q:
        k = abs(Q)
        P, Q, D = P * k, Q * k, D * k * k
    return QuadraticSurd(P, Q, D)


def floor_surd(x: QuadraticSurd) -> int:
    num = x.P + isqrt(x.D)  # floor(P + sqrt(D)), exact since D is nonsquare
    if x.Q > 0:
        return num // x.Q
    return -(num // -x.Q) - 1


def approx(x: QuadraticSurd, digits: int = 30) -> Fraction:
    """Rational approximation with error below |Q|^-1 * 10^-digits."""
    scale = 10**digits
    return Fraction(x.P * scale + isqrt(x.D * scale * scale), x.Q * scale)


def conjugate_approx(x: QuadraticSurd, digits: int = 30) -> Fraction:
    scale = 10**digits
    return Fraction(x.P * scale - isqrt(x.D * scale * scale), x.Q * scale)


@dataclass(frozen=True)
class PeriodicCF:
    preperiod: tuple[int, ...]
    repetend: tuple[int, ...]

    def __post_init__(self):
        if not self.repetend:
            raise ValueError("repetend must be nonempty")
        if any(q < 1 for q in self.repetend):
            raise ValueError("repetend entries must be positive")
        if any(q < 1 for q in self.preperiod[1:]):
            raise ValueError("preperiod entries after the first must be positive")

    @classmethod
    def create(cls, preperiod, repetend) -> "PeriodicCF":
        """Normalize: primitive repetend, then roll the cycle start backward
        while the last preperiod entry matches the end of the cycle."""
        pre = list(preperiod)
        rep = list(repetend)
        if not rep:
            raise ValueError("repetend must be nonempty")
        p = _primitive_period(rep)
        rep = rep[:p]
        while pre and pre[-1] == rep[-1]:
            rep = [rep[-1]] + rep[:-1]
            pre.pop()
        return cls(tuple(pre), tuple(rep))

    def __str__(self) -> str:
        return format_cf(self)


def _primitive_period(seq) -> int:
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and seq[:p] * (n // p) == list(seq):
            return p
    raise AssertionError("unreachable")


def per(cf: PeriodicCF) -> int:
    return len(cf.repetend)


def cf_from_surd(x: QuadraticSurd) -> PeriodicCF:
    """Classical complete-quotient expansion with exact integer floors."""
    P, Q, D = x.P, x.Q, x.D
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    for step in range(_MAX_EXPANSION_STEPS):
        if (P, Q) in seen:
            s = seen[(P, Q)]
            return PeriodicCF.create(quotients[:s], quotients[s:])
        seen[(P, Q)] = step
        a = floor_surd(QuadraticSurd(P, Q, D))
        quotients.append(a)
        P1 = a * Q - P
        P, Q = P1, (D - P1 * P1) // Q
    raise RuntimeError("continued fraction expansion did not close")


def surd_from_cf(cf: PeriodicCF) -> QuadraticSurd:
    """Fixed-point construction: the purely periodic tail y satisfies
    c*y^2 + (d-a)*y - b = 0 for the convergent matrix of the repetend."""
    m = Mat2(1, 0, 0, 1)
    for q in cf.repetend:
        m = m * Mat2(q, 1, 1, 0)
    a, b, c, d = m.entries
    disc = (a + d) ** 2 - 4 * mat_det(m)
    y = surd(a - d, 2 * c, disc)
    if cf.preperiod:
        conv = Mat2(1, 0, 0, 1)
        for q in cf.preperiod:
            conv = conv * Mat2(q, 1, 1, 0)
        y = apply_mobius(conv, y)
    return y


def apply_mobius(m: Mat2, x: QuadraticSurd) -> QuadraticSurd:
    """h_m(x) = (a*x + b)/(c*x + d), exactly, staying in Q(sqrt(D))."""
    if mat_det(m) == 0:
        raise ValueError("singular matrix")
    A, B, C, Dm = m.entries
    alpha = A * x.P + B * x.Q
    beta = C * x.P + Dm * x.Q
    e = x.Q * mat_det(m)  # coefficient of sqrt(D) after rationalizing
    P2 = alpha * beta - A * C * x.D
    Q2 = beta * beta - C * C * x.D
    D2 = e * e * x.D
    if e < 0:
        P2, Q2 = -P2, -Q2
    g = gcd(P2, Q2)
    if g > 1:
        # shrink when the square content of D allows it
        while g > 1 and D2 % (g * g) == 0 and ((D2 // (g * g) - (P2 // g) ** 2) % (Q2 // g) == 0):
            P2, Q2, D2 = P2 // g, Q2 // g, D2 // (g * g)
            g = gcd(P2, Q2)
    return surd(P2, Q2, D2)


def parse_cf(text: str) -> PeriodicCF:
    """Parse the grammar "[p0,p1,...;r0,r1,...]", e.g. "[;3]" or "[-1,1,11;7,1]"."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")) or ";" not in s:
        raise ValueError(f"bad continued fraction syntax: {text!r}")
    pre_s, rep_s = s[1:-1].split(";", 1)

    def ints(chunk: str) -> list[int]:
        chunk = chunk.strip()
        if not chunk:
            return []
        try:
            return [int(p.strip()) for p in chunk.split(",")]
        except ValueError:
            raise ValueError(f"bad continued fraction syntax: {text!r}") from None

    rep = ints(rep_s)
    if not rep:
        raise ValueError(f"empty repetend in {text!r}")
    return PeriodicCF.create(ints(pre_s), rep)


def format_cf(cf: PeriodicCF) -> str:
    pre = ",".join(str(q) for q in cf.preperiod)
    rep = ",".join(str(q) for q in cf.repetend)
    return f"[{pre};{rep}]"


def parse_surd(text: str) -> QuadraticSurd:
    """Parse "P,Q,D" meaning (P + sqrt(D))/Q."""
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected P,Q,D, got {text!r}")
    P, Q, D = (int(p.strip()) for p in parts)
    return surd(P, Q, D)


def format_surd(x: QuadraticSurd) -> str:
    return f"{x.P},{x.Q},{x.D}"

"""The period bound S_n: divisor-sum closed form, the independent
transducer-side sum over LE walks, and the (unproven) prime-case formula."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .matrices import Mat2, content_gcd, enumerate_LE, nu_L, xi
from .transducer import walk_LE
from .words import sigma


@dataclass(frozen=True)
class BoundTerm:
    t: int
    j: int
    xi: int
    term: int


@dataclass(frozen=True)
class BoundBreakdown:
    n: int
    terms: tuple[BoundTerm, ...]
    total: int


def s_n_closed_form(n: int) -> BoundBreakdown:
    """S_n = sum over divisors t of n, j in [t, 2t-1] \\ J_t, of 2*floor(xi(j,t)/2)+1,
    where J_t is the multiples of gcd(t, n/t) when that gcd exceeds 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    terms = []
    for t in range(1, n + 1):
        if n % t:
            continue
        g = gcd(t, n // t)
        for j in range(t, 2 * t):
            if g > 1 and j % g == 0:
                continue
            x = xi(j, t)
            terms.append(BoundTerm(t, j, x, 2 * (x // 2) + 1))
    return BoundBreakdown(n, tuple(terms), sum(tm.term for tm in terms))


def s_n_via_transducer(n: int) -> int:
    """Same quantity from the walk side: sum over M in LE_n and
    i in [nu_L(M), 2*nu_L(M)-1] of sigma(W_{L,M,i}) - 1.

    Parametrized LE matrices with content k > 1 (possible when some
    gcd(t, n/t) is composite, first at n = 16) are walked after dividing
    the content out: scaling a state leaves escapes, peels and outputs
    untouched, so the walk lives in T_{n/k^2} with identical sigma.
    """
    total = 0
    for m in sorted(enumerate_LE(n), key=lambda m: m.entries):
        k = content_gcd(m)
        if k > 1:
            m = Mat2(m.a // k, m.b // k, m.c // k, m.d // k)
        nn = n // (k * k)
        nu = nu_L(m)
        for i in range(nu, 2 * nu):
            _, _, w = walk_LE(nn, m, i)
            total += sigma(w) - 1
    return total


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_sharp_bound(n: int) -> int:
    """The sharp value conjectured for prime n: 5 for n=2, otherwise
    2 + 2*sum_{i=1}^{(n-1)/2} (xi(i,n)+2) shifted down by 1 when n = 1 mod 4."""
    if not _is_prime(n):
        raise ValueError(f"{n} is not prime")
    if n == 2:
        return 5
    s = sum(xi(i, n) + 2 for i in range(1, (n - 1) // 2 + 1))
    if n % 4 == 3:
        return 2 + 2 * s
    return 1 + 2 * s


def check_bound(n: int, per_x: int, per_hx: int) -> str:
    """Verdict for per_x/S_n <= per_hx <= S_n*per_x."""
    if n < 1 or per_x < 1 or per_hx < 1:
        raise ValueError("all arguments must be positive")
    s = s_n_closed_form(n).total
    if per_hx > s * per_x:
        return "violates_upper"
    if Fraction(per_hx) < Fraction(per_x, s):
        return "violates_lower"
    return "holds"


def breakdown_to_json(bb: BoundBreakdown) -> str:
    doc = {
        "n": bb.n,
        "terms": [{"t": t.t, "j": t.j, "xi": t.xi, "term": t.term} for t in bb.terms],
        "total": bb.total,
    }
    return json.dumps(doc, indent=2)

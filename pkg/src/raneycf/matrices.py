"""Exact 2x2 integer matrices and Raney's balanced matrix classes.

Matrices are row-major [[a,b],[c,d]].  The class predicates (D_n, RB_n,
CB_n, DB_n, ...) follow Raney's definitions: determinant n, nonnegative
entries, content 1, plus row/column balance inequalities.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __repr__(self) -> str:
        return f"Mat2({self.a},{self.b},{self.c},{self.d})"

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


IDENTITY = Mat2(1, 0, 0, 1)
L_MAT = Mat2(1, 0, 1, 1)
R_MAT = Mat2(1, 1, 0, 1)
J_MAT = Mat2(0, 1, 1, 0)


def det(m: Mat2) -> int:
    return m.a * m.d - m.b * m.c


def content_gcd(m: Mat2) -> int:
    return gcd(m.a, m.b, m.c, m.d)


def multiply(m1: Mat2, m2: Mat2) -> Mat2:
    return m1 * m2


def inverse_times_det(m: Mat2) -> Mat2:
    """Adjugate: m * inverse_times_det(m) = det(m) * identity."""
    return Mat2(m.d, -m.b, -m.c, m.a)


def transpose(m: Mat2) -> Mat2:
    return Mat2(m.a, m.c, m.b, m.d)


def associated(m: Mat2) -> Mat2:
    """The associated matrix M* = J M J (swap a<->d, b<->c)."""
    return Mat2(m.d, m.c, m.b, m.a)


def negate(m: Mat2) -> Mat2:
    return Mat2(-m.a, -m.b, -m.c, -m.d)


def xi(a: int, c: int) -> int:
    """Number of division steps of the Euclidean algorithm on (a, c).

    Symmetric; xi(x, 0) = 0 for x > 0; (0, 0) is rejected.
    """
    if a < 0 or c < 0:
        raise ValueError("xi expects nonnegative arguments")
    if a == 0 and c == 0:
        raise ValueError("xi(0, 0) is undefined")
    hi, lo = max(a, c), min(a, c)
    steps = 0
    while lo:
        hi, lo = lo, hi % lo
        steps += 1
    return steps


def _nonneg(m: Mat2) -> bool:
    return m.a >= 0 and m.b >= 0 and m.c >= 0 and m.d >= 0


def in_D(m: Mat2, n: int) -> bool:
    if n < 1:
        raise ValueError("n must be >= 1")
    return det(m) == n and _nonneg(m) and content_gcd(m) == 1


def in_RB(m: Mat2, n: int) -> bool:
    return in_D(m, n) and m.a > m.c and m.d > m.b


def in_CB(m: Mat2, n: int) -> bool:
    return in_D(m, n) and m.a > m.b and m.d > m.c


def in_DB(m: Mat2, n: int) -> bool:
    return in_D(m, n) and m.a > m.c and m.d > m.b and m.a > m.b and m.d > m.c


@lru_cache(maxsize=None)
def _enumerate_DB(n: int) -> tuple[Mat2, ...]:
    # in_DB forces 1 <= a, d <= n, 0 <= c < a, 0 <= b < d with ad - bc = n
    found = []
    for a in range(1, n + 1):
        for c in range(0, a):
            for b in range(0, n + 1):
                num = n + b * c
                if num % a:
                    continue
                d = num // a
                if d > b and d > c and a > b and gcd(a, b, c, d) == 1:
                    found.append(Mat2(a, b, c, d))
    return tuple(sorted(found, key=lambda m: m.entries))


def enumerate_DB(n: int) -> set[Mat2]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return set(_enumerate_DB(n))


def _require_DB(m: Mat2) -> int:
    n = det(m)
    if n < 1 or not in_DB(m, n):
        raise ValueError(f"{m!r} is not doubly balanced")
    return n


def is_LS(m: Mat2) -> bool:
    _require_DB(m)
    return m.b == 0


def is_RS(m: Mat2) -> bool:
    _require_DB(m)
    return m.c == 0


def is_LE(m: Mat2) -> bool:
    _require_DB(m)
    return m.b == 0 and m.c < gcd(m.a, m.d)


def is_RE(m: Mat2) -> bool:
    _require_DB(m)
    return m.c == 0 and m.b < gcd(m.a, m.d)


def nu_L(m: Mat2) -> int:
    if not is_LE(m):
        raise ValueError(f"{m!r} is not in LE")
    return m.a // gcd(m.a, m.d)


def nu_R(m: Mat2) -> int:
    if not is_RE(m):
        raise ValueError(f"{m!r} is not in RE")
    return m.d // gcd(m.a, m.d)


def enumerate_LE(n: int) -> set[Mat2]:
    """All [[t,0],[u,m]] with t*m = n and u in I_t (0 if gcd(t,m)=1, else 1..gcd-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = set()
    for t in range(1, n + 1):
        if n % t:
            continue
        m = n // t
        g = gcd(t, m)
        us = (0,) if g == 1 else range(1, g)
        for u in us:
            out.add(Mat2(t, 0, u, m))
    return out


def enumerate_RE(n: int) -> set[Mat2]:
    return {associated(m) for m in enumerate_LE(n)}


def parse_mat2(text: str) -> Mat2:
    """Parse the row-major "a,b,c,d" format."""
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 4 comma-separated integers, got {text!r}")
    try:
        a, b, c, d = (int(p.strip()) for p in parts)
    except ValueError:
        raise ValueError(f"non-integer matrix entry in {text!r}") from None
    return Mat2(a, b, c, d)


def format_mat2(m: Mat2) -> str:
    return f"{m.a},{m.b},{m.c},{m.d}"

"""Dense polynomials over GF(p) as coefficient lists, low degree first.

The zero polynomial is the empty list.  Only what the field constructor
needs lives here: multiplication, division with remainder, gcd and modular
powering.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence


def trim(a: Sequence[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    size = max(len(a), len(b))
    out = [0] * size
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return trim(out)


def mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([c % p for c in out])


def divmod_(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    if len(r) <= db:
        return [], r
    quo = [0] * (len(r) - db)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = (r[-1] * inv_lead) % p
        quo[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = (r[shift + i] - c * y) % p
        r = trim(r)
    return trim(quo), r


def mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    return divmod_(a, b, p)[1]


def gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def powmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = mod(a, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        base = mod(mul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: f has no factor of degree <= deg(f)/2.

    Checks gcd(X^(p^i) - X, f) = 1 for i = 1 .. deg(f)//2.
    """
    f = trim(f)
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    h = x
    for _ in range(d // 2):
        h = powmod(h, p, f, p)
        if len(gcd(sub(h, x, p), f, p)) > 1:
            return False
    return True


def monic_candidates(p: int, d: int, skip_zero_constant: bool = False) -> Iterator[list[int]]:
    """Monic degree-d polynomials, lexicographic on (c0, c1, ..., c_{d-1})."""
    for c0 in range(1 if skip_zero_constant else 0, p):
        for rest in product(range(p), repeat=d - 1):
            yield [c0, *rest, 1]


def smallest_irreducible(p: int, d: int) -> list[int]:
    # for d > 1, X divides anything with c0 = 0
    for cand in monic_candidates(p, d, skip_zero_constant=d > 1):
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("unreachable: irreducibles exist in every degree")

"""Arithmetic in GF(p^(eps*n)) viewed as the top of the tower F_p < F_q < F_{q^n}.

Elements are plain integers: the coefficient vector (c_0, ..., c_{D-1}) of
the residue class c_0 + c_1 X + ... mod the field modulus is encoded as
sum(c_i p^i).  Integer order is the canonical element order used for every
"first" or "smallest" choice in the package.

Two arithmetic back ends sit behind one interface.  Fields with at most
``TABLE_LIMIT`` elements get exp/log/Zech tables and all vector operations
run in the log domain; larger fields fall back to coefficient arithmetic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from functools import cached_property
from math import isqrt

import numpy as np
import sympy

from ..errors import DomainError, ParameterError, ResourceError
from . import fplinalg, polyfp

TABLE_LIMIT = 8_000_000


class LogTables:
    """exp/log/Zech tables relative to the canonical primitive element g.

    Logs live in [0, N-2]; the value N-1 is reserved for log(0).
    """

    def __init__(self, exp: np.ndarray, log: np.ndarray, zech: np.ndarray):
        self.exp = exp
        self.log = log
        self.zech = zech
        self.nm1 = exp.size - 1
        self.zero = self.nm1
        self.minus_one = self.nm1 // 2

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = a + b
        r = np.where(r >= self.nm1, r - self.nm1, r)
        return np.where((a == self.zero) | (b == self.zero), self.zero, r)

    def div(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if np.any(b == self.zero):
            raise DomainError("division by zero")
        r = a - b
        r = np.where(r < 0, r + self.nm1, r)
        return np.where(a == self.zero, self.zero, r)

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        d = (b - a) % self.nm1
        z = self.zech[d]
        r = (a + z) % self.nm1
        r = np.where(z == self.zero, self.zero, r)
        r = np.where(a == self.zero, b, r)
        return np.where(b == self.zero, a, r)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        r = (a + self.minus_one) % self.nm1
        return np.where(a == self.zero, self.zero, r)

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.zeros_like(a)
        r = (a * (e % self.nm1)) % self.nm1
        if e < 0 and np.any(a == self.zero):
            raise DomainError("negative power of zero")
        return np.where(a == self.zero, self.zero, r)


class FieldCtx:
    """The field GF(p^D), D = eps*n, with its F_q and F_{q^n} structure.

    Immutable after construction; share it freely.
    """

    def __init__(self, p: int, eps: int, n: int, modulus):
        if not sympy.isprime(p) or p == 2:
            raise ParameterError(f"p must be an odd prime, got {p}")
        if eps < 1 or n < 1:
            raise ParameterError("eps and n must be positive")
        self.p = p
        self.eps = eps
        self.n = n
        self.degree = eps * n
        self.q = p**eps
        self.order = p**self.degree
        self.modulus = tuple(int(c) % p for c in modulus)
        d = self.degree
        if len(self.modulus) != d + 1 or self.modulus[-1] != 1:
            raise ParameterError(f"modulus must be monic of degree {d}")
        if not polyfp.is_irreducible(self.modulus, p):
            raise ParameterError("modulus is not irreducible over F_p")
        self._pow_p = np.array([p**i for i in range(d)], dtype=np.int64)
        # row k: coefficients of X^k mod modulus, k = 0 .. 2D-2
        red = np.zeros((2 * d - 1, d), dtype=np.int64)
        for k in range(2 * d - 1):
            r = polyfp.mod([0] * k + [1], self.modulus, p)
            red[k, : len(r)] = r
        self._red = red
        self.frob_mats = self._frobenius_matrices()

    def __repr__(self) -> str:
        return f"FieldCtx({self.descriptor()!r})"

    # -- encoding -------------------------------------------------------

    def descriptor(self) -> str:
        return f"{self.p}^{self.eps}^{self.n}:" + ",".join(map(str, self.modulus))

    def coeffs(self, x: int) -> np.ndarray:
        out = np.zeros(self.degree, dtype=np.int64)
        x = int(x)
        for i in range(self.degree):
            x, out[i] = divmod(x, self.p)
        return out

    def from_coeffs(self, v) -> int:
        return int(np.dot(np.asarray(v, dtype=np.int64) % self.p, self._pow_p))

    def to_digits(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        return (xs[..., None] // self._pow_p) % self.p

    def from_digits(self, digits) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) % self.p) @ self._pow_p

    def check(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.order:
            raise DomainError(f"{x} is not an element index of GF({self.p}^{self.degree})")
        return x

    # -- coefficient back end --------------------------------------------

    def _reduce(self, conv: np.ndarray) -> np.ndarray:
        return (conv @ self._red) % self.p

    def _digits_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        d = self.degree
        shape = np.broadcast_shapes(a.shape, b.shape)
        conv = np.zeros(shape[:-1] + (2 * d - 1,), dtype=np.int64)
        for i in range(d):
            conv[..., i : i + d] += a[..., i : i + 1] * b
        return self._reduce(conv % self.p)

    def mul_matrix(self, c: int) -> np.ndarray:
        """Matrix over F_p of x -> c*x in the basis 1, X, ..., X^(D-1)."""
        return self.mul_matrices(np.array([c]))[0]

    def mul_matrices(self, cs) -> np.ndarray:
        d = self.degree
        dig = self.to_digits(np.asarray(cs, dtype=np.int64).ravel())
        out = np.empty((dig.shape[0], d, d), dtype=np.int64)
        for j in range(d):
            shifted = np.zeros((dig.shape[0], 2 * d - 1), dtype=np.int64)
            shifted[:, j : j + d] = dig
            out[:, :, j] = self._reduce(shifted)
        return out

    def _frobenius_matrices(self) -> np.ndarray:
        d, p = self.degree, self.p
        one_step = np.zeros((d, d), dtype=np.int64)
        xp = polyfp.powmod([0, 1], p, self.modulus, p)
        col = [1]
        for j in range(d):
            one_step[: len(col), j] = col
            col = polyfp.mod(polyfp.mul(col, xp, p), self.modulus, p)
        mats = np.empty((d, d, d), dtype=np.int64)
        mats[0] = np.eye(d, dtype=np.int64)
        for k in range(1, d):
            mats[k] = (one_step @ mats[k - 1]) % p
        if not np.array_equal((one_step @ mats[d - 1]) % p, mats[0]):
            raise AssertionError("Frobenius does not have order D; modulus is broken")
        return mats

    def power_digits(self, c: int, count: int) -> np.ndarray:
        """Digit rows of c^0, c^1, ..., c^(count-1), computed in blocks."""
        d, p = self.degree, self.p
        block = max(1, isqrt(count) + 1)
        step = self.mul_matrix(c)
        first = np.empty((block, d), dtype=np.int64)
        v = np.zeros(d, dtype=np.int64)
        v[0] = 1
        for i in range(block):
            first[i] = v
            v = (step @ v) % p
        giant = self.mul_matrix(self.from_coeffs(v)).T.copy()
        nblocks = -(-count // block)
        out = np.empty((nblocks * block, d), dtype=np.int64)
        cur = first
        for b in range(nblocks):
            out[b * block : (b + 1) * block] = cur
            cur = (cur @ giant) % p
        return out[:count]

    # -- tables -----------------------------------------------------------

    @property
    def has_tables(self) -> bool:
        return self.order <= TABLE_LIMIT

    @cached_property
    def generator(self) -> int:
        """Index-smallest primitive element."""
        nm1 = self.order - 1
        cofactors = [nm1 // r for r in sympy.factorint(nm1)]
        for g in range(2, self.order):
            dg = self.coeffs(g)
            if all(not self._is_one(self._digits_pow(dg, e)) for e in cofactors):
                return g
        raise AssertionError("unreachable: multiplicative group is cyclic")

    def _is_one(self, dig: np.ndarray) -> bool:
        return dig[0] == 1 and not dig[1:].any()

    def _digits_pow(self, dig: np.ndarray, e: int) -> np.ndarray:
        result = np.zeros_like(dig)
        result[..., 0] = 1
        base = dig
        while e:
            if e & 1:
                result = self._digits_mul(result, base)
            e >>= 1
            if e:
                base = self._digits_mul(base, base)
        return result

    @cached_property
    def tables(self) -> LogTables:
        if not self.has_tables:
            raise ResourceError(
                f"GF({self.p}^{self.degree}) has {self.order} elements, above the "
                f"table limit {TABLE_LIMIT}"
            )
        nm1 = self.order - 1
        exp = np.empty(self.order, dtype=np.int64)
        exp[:nm1] = self.from_digits(self.power_digits(self.generator, nm1))
        exp[nm1] = 0
        log = np.empty(self.order, dtype=np.int64)
        log[exp[:nm1]] = np.arange(nm1, dtype=np.int64)
        log[0] = nm1
        plus_one = np.where(exp % self.p == self.p - 1, exp - (self.p - 1), exp + 1)
        zech = log[plus_one]
        zech[nm1] = 0
        return LogTables(exp, log, zech)

    # -- scalar arithmetic ----------------------------------------------

    def add(self, x: int, y: int) -> int:
        return self.from_coeffs(self.coeffs(x) + self.coeffs(y))

    def sub(self, x: int, y: int) -> int:
        return self.from_coeffs(self.coeffs(x) - self.coeffs(y))

    def neg(self, x: int) -> int:
        return self.from_coeffs(-self.coeffs(x))

    def mul(self, x: int, y: int) -> int:
        if self.has_tables:
            t = self.tables
            lx, ly = t.log[x], t.log[y]
            if lx == t.zero or ly == t.zero:
                return 0
            return int(t.exp[(lx + ly) % t.nm1])
        return self.from_coeffs(self._digits_mul(self.coeffs(x), self.coeffs(y)))

    def inv(self, x: int) -> int:
        if x == 0:
            raise DomainError("inverse of zero")
        return self.pow(x, -1)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise DomainError("negative power of zero")
            return 1 if e == 0 else 0
        e %= self.order - 1
        if self.has_tables:
            t = self.tables
            return int(t.exp[(int(t.log[x]) * e) % t.nm1])
        return self.from_coeffs(self._digits_pow(self.coeffs(x), e))

    def frobenius(self, x: int, k: int) -> int:
        """x^(p^k), applied as a precomputed F_p-linear matrix."""
        k %= self.degree
        return self.from_coeffs(self.frob_mats[k] @ self.coeffs(x))

    def qpow(self, x: int, i: int) -> int:
        """x^(q^i)."""
        return self.frobenius(x, self.eps * i)

    def element(self, c: int) -> int:
        """The prime-field element c mod p."""
        return int(c) % self.p

    @property
    def minus_one(self) -> int:
        return self.p - 1

    # -- vector arithmetic (index arrays) ---------------------------------

    def vlog(self, xs) -> np.ndarray:
        return self.tables.log[np.asarray(xs, dtype=np.int64)]

    def vexp(self, ls) -> np.ndarray:
        return self.tables.exp[np.asarray(ls, dtype=np.int64)]

    def vmul(self, xs, ys) -> np.ndarray:
        if self.has_tables:
            t = self.tables
            return t.exp[t.mul(t.log[np.asarray(xs)], t.log[np.asarray(ys)])]
        return self.from_digits(self._digits_mul(self.to_digits(xs), self.to_digits(ys)))

    def vadd(self, xs, ys) -> np.ndarray:
        return self.from_digits(self.to_digits(xs) + self.to_digits(ys))

    def vsub(self, xs, ys) -> np.ndarray:
        return self.from_digits(self.to_digits(xs) - self.to_digits(ys))

    def vpow(self, xs, e: int) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if self.has_tables:
            t = self.tables
            return t.exp[t.pow(t.log[xs], e)]
        if e < 0:
            raise DomainError("negative powers need the table back end")
        return self.from_digits(self._digits_pow(self.to_digits(xs), e))

    def vfrobenius(self, xs, k: int) -> np.ndarray:
        k %= self.degree
        return self.from_digits(self.to_digits(xs) @ self.frob_mats[k].T)

    # -- relative norm and trace ------------------------------------------

    def _check_tower(self, from_deg: int, to_deg: int) -> None:
        if from_deg < 1 or to_deg < 1 or self.degree % from_deg or from_deg % to_deg:
            raise DomainError(
                f"need to_deg | from_deg | {self.degree}, got {from_deg}, {to_deg}"
            )

    def rel_norm(self, x: int, from_deg: int, to_deg: int) -> int:
        """Norm from GF(p^from_deg) to GF(p^to_deg): product of conjugates."""
        self._check_tower(from_deg, to_deg)
        out = 1
        for i in range(from_deg // to_deg):
            out = self.mul(out, self.frobenius(x, to_deg * i))
        return out

    def rel_trace(self, x: int, from_deg: int, to_deg: int) -> int:
        self._check_tower(from_deg, to_deg)
        acc = np.zeros(self.degree, dtype=np.int64)
        for i in range(from_deg // to_deg):
            acc += self.coeffs(self.frobenius(x, to_deg * i))
        return self.from_coeffs(acc)

    def subfield(self, m: int) -> "SubfieldHandle":
        if m < 1 or self.degree % m:
            raise DomainError(f"no subfield of degree {m} in GF({self.p}^{self.degree})")
        return _subfield(self, m)


@dataclass(frozen=True, eq=False)
class SubfieldHandle:
    """GF(p^m) inside a FieldCtx, as a predicate plus enumerations."""

    ctx: FieldCtx
    m: int

    @property
    def order(self) -> int:
        return self.ctx.p**self.m

    def contains(self, x: int) -> bool:
        return self.ctx.frobenius(x, self.m) == x

    def contains_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        return self.ctx.vfrobenius(xs, self.m) == xs

    @cached_property
    def generator(self) -> int:
        ctx = self.ctx
        return ctx.pow(ctx.generator, (ctx.order - 1) // (self.order - 1))

    @cached_property
    def power_sequence(self) -> np.ndarray:
        """h^0, h^1, ..., h^(p^m - 2) for the subfield generator h."""
        ctx = self.ctx
        if ctx.has_tables:
            step = (ctx.order - 1) // (self.order - 1)
            return ctx.tables.exp[np.arange(self.order - 1, dtype=np.int64) * step]
        return ctx.from_digits(ctx.power_digits(self.generator, self.order - 1))

    @cached_property
    def elements(self) -> np.ndarray:
        """All elements, 0 included, in canonical index order."""
        return np.sort(np.concatenate([[0], self.power_sequence]))

    @cached_property
    def basis(self) -> np.ndarray:
        """F_p-basis as digit rows, in reduced echelon form."""
        ctx = self.ctx
        rows = ctx.power_digits(self.generator, self.m)
        r, piv = fplinalg.rref(rows, ctx.p)
        return r[: len(piv)]

    def span(self, basis_digits: np.ndarray | None = None) -> np.ndarray:
        b = self.basis if basis_digits is None else basis_digits
        return span_indices(self.ctx, b)


def span_indices(ctx: FieldCtx, basis_digits: np.ndarray) -> np.ndarray:
    """All F_p-combinations of the given digit rows, as sorted indices."""
    basis_digits = np.asarray(basis_digits, dtype=np.int64)
    k = basis_digits.shape[0]
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    combos = coordinate_grid(ctx.p, k)
    return np.sort(ctx.from_digits(combos @ basis_digits))


def coordinate_grid(p: int, k: int) -> np.ndarray:
    """All vectors of F_p^k, first coordinate varying slowest."""
    idx = np.arange(p**k, dtype=np.int64)
    pw = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // pw) % p


@functools.lru_cache(maxsize=None)
def _subfield(ctx: FieldCtx, m: int) -> SubfieldHandle:
    return SubfieldHandle(ctx, m)


@functools.lru_cache(maxsize=None)
def make_field(p: int, eps: int, n: int) -> FieldCtx:
    """GF(p^(eps*n)) defined by the smallest monic irreducible of that degree.

    Candidates are compared on (c_0, c_1, ...) lexicographically, so the
    choice is reproducible anywhere.
    """
    if not sympy.isprime(p) or p == 2:
        raise ParameterError(f"p must be an odd prime, got {p}")
    if eps < 1 or n < 1:
        raise ParameterError("eps and n must be positive")
    modulus = polyfp.smallest_irreducible(p, eps * n)
    return FieldCtx(p, eps, n, modulus)


def parse_descriptor(text: str) -> FieldCtx:
    """Inverse of FieldCtx.descriptor()."""
    try:
        head, coeffs = text.strip().split(":")
        p, eps, n = (int(v) for v in head.split("^"))
        modulus = [int(c) for c in coeffs.split(",")]
    except ValueError as exc:
        raise ParameterError(f"bad field descriptor {text!r}") from exc
    ctx = make_field(p, eps, n)
    if tuple(modulus) != ctx.modulus:
        return FieldCtx(p, eps, n, modulus)
    return ctx

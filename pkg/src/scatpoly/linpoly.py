"""q-polynomials modulo X^(q^n) - X.

A LinPoly stores n coefficients a_0 .. a_{n-1} (element indices) of
f = sum a_i X^(q^i).  Composition, adjoint and Frobenius twists act on the
coefficient vector directly; evaluation on many points goes through the
field's log tables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ParameterError
from .gfield import FieldCtx, fplinalg


@dataclass(frozen=True, eq=False)
class LinPoly:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.n:
            raise ParameterError(
                f"expected {self.ctx.n} coefficients, got {len(self.coeffs)}"
            )
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> LinPoly:
        return cls(ctx, (0,) * ctx.n)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> LinPoly:
        return cls.monomial(ctx, 0)

    @classmethod
    def monomial(cls, ctx: FieldCtx, i: int, c: int = 1) -> LinPoly:
        """c X^(q^i), exponent taken mod n."""
        return cls.from_terms(ctx, {i: c})

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms) -> LinPoly:
        """Sum of c X^(q^i) over (i, c) pairs; repeated exponents add up."""
        coeffs = [0] * ctx.n
        items = terms.items() if hasattr(terms, "items") else terms
        for i, c in items:
            k = i % ctx.n
            coeffs[k] = ctx.add(coeffs[k], ctx.check(c))
        return cls(ctx, tuple(coeffs))

    @classmethod
    def from_sigma_terms(cls, ctx: FieldCtx, J: int, terms) -> LinPoly:
        """Sum of c X^(sigma^i) with sigma = q^J."""
        items = terms.items() if hasattr(terms, "items") else terms
        return cls.from_terms(ctx, [(i * J, c) for i, c in items])

    # -- structure ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinPoly)
            and other.ctx is self.ctx
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self) -> str:
        return f"LinPoly({self.to_text()})"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    @property
    def q_degree(self) -> int:
        """Largest i with a_i != 0 (-1 for the zero polynomial)."""
        s = self.support
        return s[-1] if s else -1

    def __add__(self, other: LinPoly) -> LinPoly:
        ctx = self.ctx
        return LinPoly(ctx, tuple(ctx.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: LinPoly) -> LinPoly:
        ctx = self.ctx
        return LinPoly(ctx, tuple(ctx.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> LinPoly:
        return LinPoly(self.ctx, tuple(self.ctx.neg(a) for a in self.coeffs))

    def scale(self, c: int) -> LinPoly:
        """Left multiplication: x -> c * f(x)."""
        return LinPoly(self.ctx, tuple(self.ctx.mul(c, a) for a in self.coeffs))

    def __matmul__(self, other: LinPoly) -> LinPoly:
        return compose_mod(self, other)

    # -- evaluation ------------------------------------------------------

    def __call__(self, x: int) -> int:
        ctx = self.ctx
        acc = 0
        for i in self.support:
            acc = ctx.add(acc, ctx.mul(self.coeffs[i], ctx.qpow(x, i)))
        return acc

    def log_ratio_terms(self, logs: np.ndarray) -> np.ndarray:
        """log(f(x)/x) for x = g^logs (all x nonzero), log(0) sentinel included."""
        ctx = self.ctx
        t = ctx.tables
        logs = np.asarray(logs, dtype=np.int64)
        acc = None
        for i in self.support:
            e = (ctx.q**i - 1) % t.nm1
            term = (logs * e + int(t.log[self.coeffs[i]])) % t.nm1
            acc = term if acc is None else t.add(acc, term)
        if acc is None:
            return np.full(logs.shape, t.zero, dtype=np.int64)
        return acc

    def eval_many(self, xs) -> np.ndarray:
        ctx = self.ctx
        xs = np.asarray(xs, dtype=np.int64)
        if ctx.has_tables:
            t = ctx.tables
            lx = t.log[xs]
            acc = np.full(xs.shape, t.zero, dtype=np.int64)
            for i in self.support:
                term = t.mul(t.pow(lx, ctx.q**i), int(t.log[self.coeffs[i]]))
                acc = t.add(acc, term)
            return t.exp[acc]
        acc = np.zeros(xs.shape + (ctx.degree,), dtype=np.int64)
        dig = ctx.to_digits(xs)
        for i in self.support:
            xi = dig @ ctx.frob_mats[(ctx.eps * i) % ctx.degree].T % ctx.p
            acc += ctx._digits_mul(xi, ctx.coeffs(self.coeffs[i]))
        return ctx.from_digits(acc)

    # -- linear-map views --------------------------------------------------

    @cached_property
    def matrix(self) -> np.ndarray:
        """F_p-matrix of x -> f(x) on the basis 1, X, ..., X^(D-1)."""
        ctx = self.ctx
        d = ctx.degree
        out = np.zeros((d, d), dtype=np.int64)
        for i in self.support:
            fr = ctx.frob_mats[(ctx.eps * i) % d]
            out += ctx.mul_matrix(self.coeffs[i]) @ fr
        return out % ctx.p

    def to_matrix(self) -> FqLinearMap:
        return FqLinearMap(self.matrix, self.ctx.p, self.ctx.eps)

    def kernel_dim(self) -> int:
        return self.to_matrix().kernel_dim

    def image_dim(self) -> int:
        return self.to_matrix().rank

    def kernel(self) -> np.ndarray:
        """All kernel elements, sorted by index."""
        from .gfield import span_indices

        return span_indices(self.ctx, fplinalg.nullspace(self.matrix, self.ctx.p))

    def image(self) -> np.ndarray:
        from .gfield import span_indices

        r, piv = fplinalg.rref(self.matrix.T, self.ctx.p)
        return span_indices(self.ctx, r[: len(piv)])

    # -- text form ---------------------------------------------------------

    def to_text(self) -> str:
        body = ", ".join(f"{i}:{c}" for i, c in enumerate(self.coeffs) if c)
        return f"q-poly n={self.ctx.n} [{body}]"

    @classmethod
    def parse(cls, ctx: FieldCtx, text: str) -> LinPoly:
        m = re.fullmatch(r"\s*q-poly\s+n=(\d+)\s*\[(.*)\]\s*", text)
        if not m:
            raise ParameterError(f"bad q-polynomial text {text!r}")
        if int(m.group(1)) != ctx.n:
            raise ParameterError(f"polynomial has n={m.group(1)}, field has n={ctx.n}")
        terms = []
        body = m.group(2).strip()
        if body:
            for item in body.split(","):
                i, c = item.split(":")
                terms.append((int(i), int(c)))
        return cls.from_terms(ctx, terms)


@dataclass(frozen=True)
class FqLinearMap:
    """An F_q-linear endomorphism of F_{q^n}, stored as its F_p-matrix.

    With eps = 1 this is literally the n x n matrix over F_q; for eps > 1 the
    F_q-dimensions are the F_p-dimensions divided by eps.
    """

    matrix: np.ndarray
    p: int
    eps: int

    @cached_property
    def rank(self) -> int:
        r = fplinalg.rank(self.matrix, self.p)
        assert r % self.eps == 0
        return r // self.eps

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // self.eps

    @property
    def kernel_dim(self) -> int:
        return self.n - self.rank


def compose_mod(f: LinPoly, g: LinPoly) -> LinPoly:
    """f(g(X)) mod X^(q^n) - X.

    (f o g)_k = sum_i f_i * g_{k-i}^(q^i), indices mod n.
    """
    ctx = f.ctx
    if g.ctx is not ctx:
        raise ParameterError("compose_mod needs polynomials over the same field")
    n = ctx.n
    out = [0] * n
    gs = g.support
    for i in f.support:
        fi = f.coeffs[i]
        for j in gs:
            k = (i + j) % n
            out[k] = ctx.add(out[k], ctx.mul(fi, ctx.qpow(g.coeffs[j], i)))
    return LinPoly(ctx, tuple(out))


def adjoint(f: LinPoly) -> LinPoly:
    """Adjoint for the trace form: a_i X^(q^i) -> a_i^(q^(n-i)) X^(q^(n-i))."""
    ctx = f.ctx
    n = ctx.n
    out = [0] * n
    for i in f.support:
        out[(n - i) % n] = ctx.qpow(f.coeffs[i], n - i)
    return LinPoly(ctx, tuple(out))


def frobenius_twist(f: LinPoly, k: int) -> LinPoly:
    """Coefficientwise x -> x^(p^k); the graph of the result is the twisted graph."""
    ctx = f.ctx
    return LinPoly(ctx, tuple(ctx.frobenius(a, k) for a in f.coeffs))


def from_matrix(ctx: FieldCtx, matrix: np.ndarray) -> LinPoly:
    """The unique q-polynomial of q-degree < n acting as ``matrix`` (F_p basis).

    The matrix must be F_q-linear; solved as an F_p-linear system for the
    coefficients.
    """
    d, n, p = ctx.degree, ctx.n, ctx.p
    matrix = np.asarray(matrix, dtype=np.int64) % p
    # column (i, l): matrix of x -> (p^l-th basis element) * x^(q^i)
    cols = []
    for i in range(n):
        fr = ctx.frob_mats[(ctx.eps * i) % d]
        for l in range(d):
            cols.append(((ctx.mul_matrix(p**l) @ fr) % p).reshape(-1))
    system = np.stack(cols, axis=1)
    sol = fplinalg.solve(system, matrix.reshape(-1), p)
    if sol is None:
        raise ParameterError("matrix is not F_q-linear")
    sol = sol.reshape(n, d)
    return LinPoly(ctx, tuple(ctx.from_coeffs(row) for row in sol))


def trace_q(ctx: FieldCtx, x: int) -> int:
    """Tr_{q^n/q}(x)."""
    return ctx.rel_trace(x, ctx.degree, ctx.eps)

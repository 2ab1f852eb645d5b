"""Graph stabilizers, right idealizers and semilinear equivalence.

A 2x2 matrix [[a, b], [c, d]] over F_{q^n} maps the graph of ``inner`` into
the graph of ``outer`` exactly when

    outer o (a X + b inner) = c X + d inner

as q-polynomials.  Each coefficient of the left side is F_p-linear in the
digits of a and b, and the right side is F_p-linear in c and d, so the set of
such matrices is the kernel of one F_p-matrix with 4*D columns.  Solution
vectors are laid out as [a digits | b digits | c digits | d digits].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .errors import ParameterError, ResourceError, SelfCheckError
from .families import PhiParams, WSubspace
from .gfield import FieldCtx, coordinate_grid, fplinalg, solve_fp_nullspace, span_indices
from .linpoly import LinPoly, adjoint, compose_mod, frobenius_twist, from_matrix
from .scatter import linear_set

ENUM_LIMIT = 10**6
NAIVE_LIMIT = 1000
SEARCH_BUDGET = 10**6
SAMPLE_SEED = 20240101


def _poly_digits(f: LinPoly) -> np.ndarray:
    """Coefficient vector of f flattened to n*D F_p-digits."""
    return f.ctx.to_digits(np.array(f.coeffs, dtype=np.int64)).reshape(-1)


def _require_nonzero(f: LinPoly) -> None:
    if f.is_zero():
        raise ParameterError("the zero polynomial is excluded")


def _require_independent(f: LinPoly) -> None:
    """X and f must span a 2-dimensional F_{q^n}-space."""
    _require_nonzero(f)
    if f.support == [0]:
        raise ParameterError("f is a scalar multiple of X; its graph is degenerate")


def _graph_map_system(outer: LinPoly, inner: LinPoly) -> np.ndarray:
    """F_p-matrix whose kernel is {(a,b,c,d) : outer o (aX + b inner) = cX + d inner}."""
    ctx = outer.ctx
    if inner.ctx is not ctx:
        raise ParameterError("polynomials live over different fields")
    p, d = ctx.p, ctx.degree
    basis = [p**l for l in range(d)]
    cols = []
    for e in basis:
        cols.append(_poly_digits(compose_mod(outer, LinPoly.monomial(ctx, 0, e))))
    for e in basis:
        cols.append(_poly_digits(compose_mod(outer, inner.scale(e))))
    for e in basis:
        cols.append(-_poly_digits(LinPoly.monomial(ctx, 0, e)))
    for e in basis:
        cols.append(-_poly_digits(inner.scale(e)))
    return np.stack(cols, axis=1) % p


def _split(ctx: FieldCtx, vectors: np.ndarray) -> np.ndarray:
    """Rows of 4*D digits to rows of 4 element indices (a, b, c, d)."""
    d = ctx.degree
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, 4, d)
    return ctx.from_digits(vectors).reshape(-1, 4)


def _join(ctx: FieldCtx, elems: np.ndarray) -> np.ndarray:
    elems = np.asarray(elems, dtype=np.int64).reshape(-1, 4)
    return ctx.to_digits(elems).reshape(elems.shape[0], -1)


def _det(ctx: FieldCtx, elems: np.ndarray) -> np.ndarray:
    a, b, c, d = elems.T
    return ctx.vsub(ctx.vmul(a, d), ctx.vmul(b, c))


@dataclass(frozen=True, eq=False)
class StabilizerSet:
    """An F_p-space of 2x2 matrices, stored by its reduced echelon basis.

    Two sets over the same field are equal exactly when their bases agree.
    ``elements`` rows are (a, b, c, d) in coordinate order, zero first.
    """

    ctx: FieldCtx
    basis: np.ndarray = field(repr=False)

    @classmethod
    def from_spanning(cls, ctx: FieldCtx, vectors) -> StabilizerSet:
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, 4 * ctx.degree)
        r, piv = fplinalg.rref(vectors, ctx.p)
        return cls(ctx, r[: len(piv)])

    @classmethod
    def from_elements(cls, ctx: FieldCtx, elems) -> StabilizerSet:
        """The set spanned by explicit matrices, which must already be a space."""
        elems = np.unique(np.asarray(elems, dtype=np.int64).reshape(-1, 4), axis=0)
        out = cls.from_spanning(ctx, _join(ctx, elems))
        if out.cardinality != elems.shape[0]:
            raise SelfCheckError(
                f"{elems.shape[0]} matrices span {out.cardinality}; the set is not F_p-linear"
            )
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StabilizerSet)
            and other.ctx is self.ctx
            and np.array_equal(other.basis, self.basis)
        )

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    @property
    def cardinality(self) -> int:
        return self.ctx.p**self.dimension

    @cached_property
    def elements(self) -> np.ndarray:
        if self.cardinality > ENUM_LIMIT:
            raise ResourceError(f"{self.cardinality} matrices exceed the enumeration limit")
        coords = coordinate_grid(self.ctx.p, self.dimension)
        return _split(self.ctx, coords @ self.basis % self.ctx.p)

    def sorted_elements(self) -> np.ndarray:
        e = self.elements
        return e[np.lexsort(e.T[::-1])]

    def contains(self, matrix) -> bool:
        v = _join(self.ctx, np.asarray(matrix).reshape(1, 4))[0]
        return fplinalg.solve(self.basis.T, v, self.ctx.p) is not None

    @cached_property
    def invertible_count(self) -> int:
        return int(np.count_nonzero(_det(self.ctx, self.elements)))

    @cached_property
    def b_value_count(self) -> int:
        return int(np.unique(self.elements[:, 1]).size)

    def is_diagonal(self) -> bool:
        return not self.elements[:, 1:3].any()

    def as_dict(self) -> dict:
        return {
            "dimension_over_Fp": self.dimension,
            "cardinality": self.cardinality,
            "invertible_count": self.invertible_count,
            "b_value_count": self.b_value_count,
        }


def graph_map_space(outer: LinPoly, inner: LinPoly) -> StabilizerSet:
    """All matrices A with A U_inner contained in U_outer."""
    ctx = outer.ctx
    system = _graph_map_system(outer, inner)
    return StabilizerSet.from_spanning(ctx, solve_fp_nullspace(system, ctx.p))


def graph_stabilizer(f: LinPoly) -> StabilizerSet:
    """{A : A U_f contained in U_f} by coefficient matching."""
    _require_nonzero(f)
    return graph_map_space(f, f)


def naive_graph_stabilizer(f: LinPoly, limit: int = NAIVE_LIMIT) -> StabilizerSet:
    """The stabilizer by sweeping every (a, b); only for q^n <= ``limit``.

    For each (a, b) the values h(x) = f(a x + b f(x)) are taken at two points
    with independent (x, f(x)), which pins down (c, d); the identity
    h = c X + d f is then tested on all x for the candidates that pass on an
    F_q-spanning set.
    """
    _require_independent(f)
    ctx = f.ctx
    if ctx.order > limit:
        raise ResourceError(f"naive sweep needs q^n <= {limit}, field has {ctx.order}")
    xs = np.arange(1, ctx.order, dtype=np.int64)
    fx = f.eval_many(xs)
    # an F_q-spanning set of test points: powers of the generator
    pts = ctx.vexp(np.arange(ctx.n, dtype=np.int64))
    fpts = f.eval_many(pts)
    x1, f1 = 1, int(f.eval_many([1])[0])
    cross = ctx.vsub(fpts, ctx.vmul(pts, np.full(pts.size, f1)))
    j = int(np.flatnonzero(cross)[0])
    x2, f2 = int(pts[j]), int(fpts[j])
    delta_inv = ctx.inv(ctx.sub(ctx.mul(x1, f2), ctx.mul(x2, f1)))

    every = np.arange(ctx.order, dtype=np.int64)
    a_all = np.repeat(every, ctx.order)
    b_all = np.tile(every, ctx.order)

    def image(x: int, fxv: int) -> np.ndarray:
        arg = ctx.vadd(ctx.vmul(a_all, np.full(a_all.size, x)), ctx.vmul(b_all, np.full(b_all.size, fxv)))
        return f.eval_many(arg)

    h1, h2 = image(x1, f1), image(x2, f2)
    c = ctx.vmul(ctx.vsub(ctx.vmul(h1, np.full(h1.size, f2)), ctx.vmul(h2, np.full(h2.size, f1))), np.full(h1.size, delta_inv))
    d = ctx.vmul(ctx.vsub(ctx.vmul(h2, np.full(h2.size, x1)), ctx.vmul(h1, np.full(h1.size, x2))), np.full(h1.size, delta_inv))
    ok = np.ones(a_all.size, dtype=bool)
    for x, fxv in zip(pts.tolist(), fpts.tolist()):
        rhs = ctx.vadd(ctx.vmul(c, np.full(c.size, x)), ctx.vmul(d, np.full(d.size, fxv)))
        ok &= image(x, fxv) == rhs
    cand = np.stack([a_all[ok], b_all[ok], c[ok], d[ok]], axis=1)
    for a, b, cc, dd in cand.tolist():
        lhs = f.eval_many(ctx.vadd(ctx.vmul(np.full(xs.size, a), xs), ctx.vmul(np.full(xs.size, b), fx)))
        rhs = ctx.vadd(ctx.vmul(np.full(xs.size, cc), xs), ctx.vmul(np.full(xs.size, dd), fx))
        if not np.array_equal(lhs, rhs):
            raise SelfCheckError(f"(a,b)=({a},{b}) passes on a spanning set but not everywhere")
    return StabilizerSet.from_elements(ctx, cand)


def stabilizer_formula_phi(params: PhiParams) -> StabilizerSet:
    """The closed-form stabilizer of phi_{m,sigma}, valid for t > 4.

    Matrices [[a, b], [4 m b^sigma, a^sigma]] with a in F_{q^gcd(t,2)} and b in
    W solving b^(sigma^2) = m^(1-sigma) b.  For t odd the solutions are
    lambda z m^R, lambda in F_q, z^sigma = -z, R = -(sigma^(t+1)-1)/(sigma^2-1).
    """
    ctx, t, J, m = params.ctx, params.t, params.J, params.m
    if t <= 4:
        raise ParameterError(f"the closed form needs t > 4, got t={t}; use graph_stabilizer")
    q = ctx.q
    sigma = q**J
    eJ = ctx.eps * J
    a_vals = ctx.subfield(ctx.eps * gcd(t, 2)).elements
    w = WSubspace(ctx, t)
    if t % 2:
        z_space = fplinalg.nullspace(LinPoly.from_terms(ctx, [(J, 1), (0, 1)]).matrix, ctx.p)
        zs = ctx.from_digits(z_space)
        z = int(np.sort(zs[zs != 0])[0]) if zs.size else 0
        if z == 0:
            raise SelfCheckError("no nonzero z with z^sigma + z = 0")
        R = -(sigma ** (t + 1) - 1) // (sigma**2 - 1)
        base = ctx.mul(z, ctx.pow(m, R))
        lam = ctx.subfield(ctx.eps).elements
        b_vals = np.sort(ctx.vmul(lam, np.full(lam.size, base)))
        rhs_c = ctx.pow(m, 1 - sigma)
        for b in b_vals.tolist():
            if not w.contains(b) or ctx.frobenius(b, 2 * eJ) != ctx.mul(rhs_c, b):
                raise SelfCheckError(f"closed-form b={b} does not solve the b-equation in W")
    else:
        eq = LinPoly.from_terms(ctx, [(2 * J, 1), (0, ctx.neg(ctx.pow(m, 1 - sigma)))])
        sol = fplinalg.nullspace(np.vstack([eq.matrix, _w_equation(ctx, t)]), ctx.p)
        b_vals = span_indices(ctx, sol)
    a_all = np.repeat(a_vals, b_vals.size)
    b_all = np.tile(b_vals, a_vals.size)
    four_m = ctx.mul(ctx.element(4), m)
    c_all = ctx.vmul(np.full(b_all.size, four_m), ctx.vfrobenius(b_all, eJ))
    d_all = ctx.vfrobenius(a_all, eJ)
    return StabilizerSet.from_elements(ctx, np.stack([a_all, b_all, c_all, d_all], axis=1))


def _w_equation(ctx: FieldCtx, t: int) -> np.ndarray:
    return LinPoly.from_terms(ctx, [(t, 1), (0, 1)]).matrix


def right_idealizer_cardinality(f: LinPoly) -> int:
    """|{h : c o h in C for all c in C}| for C = <X, f> over F_{q^n}.

    C is closed under left scalars, so the condition is h in C and f o h in C.
    Membership of a coefficient vector v in C is v_i f_j - v_j f_i = 0 for
    i outside {0, j}, where j != 0 is a position with f_j != 0.
    """
    _require_independent(f)
    ctx = f.ctx
    p, d, n = ctx.p, ctx.degree, ctx.n
    j = next(i for i in f.support if i != 0)
    fj = f.coeffs[j]
    others = [i for i in range(n) if i not in (0, j)]

    def membership(v: LinPoly) -> np.ndarray:
        vals = [ctx.sub(ctx.mul(v.coeffs[i], fj), ctx.mul(v.coeffs[j], f.coeffs[i])) for i in others]
        return ctx.to_digits(np.array(vals, dtype=np.int64)).reshape(-1)

    cols = []
    for k in range(n):
        for l in range(d):
            h = LinPoly.monomial(ctx, k, p**l)
            cols.append(np.concatenate([membership(h), membership(compose_mod(f, h))]))
    system = np.stack(cols, axis=1) % p
    return p ** solve_fp_nullspace(system, p).shape[0]


# -- equivalence -------------------------------------------------------------


@dataclass(frozen=True)
class SemilinearWitness:
    """M U_{f^(k)} = U_g, with f^(k) the coefficientwise p^k-th power of f."""

    k: int
    M: tuple[tuple[int, int], tuple[int, int]]

    def as_dict(self) -> dict:
        return {"k": self.k, "M": [list(r) for r in self.M]}


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    witness: SemilinearWitness | None
    space_dims: tuple[int, ...]
    method: str

    def as_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "witness": self.witness.as_dict() if self.witness else None,
            "space_dims_by_k": list(self.space_dims),
            "method": self.method,
        }


_IDENTITY = np.array([1, 0, 0, 1], dtype=np.int64)


def _search_invertible(space: StabilizerSet, budget: int, seed: int) -> tuple[np.ndarray | None, str]:
    """First invertible member: the identity if present, else coordinate order."""
    ctx = space.ctx
    if space.dimension == 0:
        return None, "exhaustive"
    if space.contains(_IDENTITY):
        return _IDENTITY.copy(), "exhaustive"
    if space.cardinality <= budget:
        elems = space.elements
        good = np.flatnonzero(_det(ctx, elems))
        return (elems[good[0]] if good.size else None), "exhaustive"
    rng = np.random.default_rng(seed)
    p, r = ctx.p, space.dimension
    drawn = 0
    while drawn < budget:
        size = min(4096, budget - drawn)
        coords = rng.integers(0, p, size=(size, r))
        elems = _split(ctx, coords @ space.basis % p)
        good = np.flatnonzero(_det(ctx, elems))
        if good.size:
            return elems[good[0]], "sampled"
        drawn += size
    raise ResourceError(
        f"solution space of size {space.cardinality} exceeds the search budget {budget} "
        "and sampling found no invertible member"
    )


def are_equivalent(
    f: LinPoly, g: LinPoly, budget: int = SEARCH_BUDGET, seed: int = SAMPLE_SEED
) -> EquivalenceResult:
    """Decide whether U_g = M U_{f^(k)} for some k in 0..D-1 and invertible M.

    Absence is certified: every solution space is searched exhaustively, and
    a space too large to search raises ResourceError unless sampling finds a
    witness.
    """
    _require_nonzero(f)
    _require_nonzero(g)
    ctx = f.ctx
    if g.ctx is not ctx:
        raise ParameterError("polynomials live over different fields")
    dims = []
    methods = set()
    for k in range(ctx.degree):
        space = graph_map_space(g, frobenius_twist(f, k))
        dims.append(space.dimension)
        row, method = _search_invertible(space, budget, seed + k)
        methods.add(method)
        if row is not None:
            a, b, c, d = (int(v) for v in row)
            w = SemilinearWitness(k, ((a, b), (c, d)))
            return EquivalenceResult(True, w, tuple(dims), method)
    return EquivalenceResult(False, None, tuple(dims), "exhaustive")


def _sample_points(ctx: FieldCtx, limit: int, seed: int) -> np.ndarray:
    if ctx.order <= limit:
        return np.arange(ctx.order, dtype=np.int64)
    rng = np.random.default_rng(seed)
    return rng.integers(0, ctx.order, size=limit, dtype=np.int64)


def verify_witness(f: LinPoly, g: LinPoly, w: SemilinearWitness, limit: int = ENUM_LIMIT) -> bool:
    """det M != 0 and M (y, f^(k)(y)) lies on U_g for every y (sampled above ``limit``)."""
    ctx = f.ctx
    (a, b), (c, d) = w.M
    if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)) == 0:
        return False
    fk = frobenius_twist(f, w.k)
    ys = _sample_points(ctx, limit, SAMPLE_SEED)
    fy = fk.eval_many(ys)
    first = ctx.vadd(ctx.vmul(np.full(ys.size, a), ys), ctx.vmul(np.full(ys.size, b), fy))
    second = ctx.vadd(ctx.vmul(np.full(ys.size, c), ys), ctx.vmul(np.full(ys.size, d), fy))
    return bool(np.array_equal(g.eval_many(first), second))


def _matrix_inverse(ctx: FieldCtx, M) -> tuple[tuple[int, int], tuple[int, int]]:
    (a, b), (c, d) = M
    det = ctx.sub(ctx.mul(a, d), ctx.mul(b, c))
    di = ctx.inv(det)
    return (
        (ctx.mul(d, di), ctx.mul(ctx.neg(b), di)),
        (ctx.mul(ctx.neg(c), di), ctx.mul(a, di)),
    )


def invert_witness(ctx: FieldCtx, w: SemilinearWitness) -> SemilinearWitness:
    """A witness for (g, f) from one for (f, g): twist M^(-1) by -k."""
    k = (-w.k) % ctx.degree
    inv = _matrix_inverse(ctx, w.M)
    return SemilinearWitness(k, tuple(tuple(ctx.frobenius(x, k) for x in row) for row in inv))


def semilinear_image(f: LinPoly, k: int, M) -> LinPoly:
    """The g with U_g = M U_{f^(k)}; M's first row must give a bijection."""
    ctx = f.ctx
    p = ctx.p
    (a, b), (c, d) = M
    fk = frobenius_twist(f, k).matrix
    u = (ctx.mul_matrix(a) + ctx.mul_matrix(b) @ fk) % p
    v = (ctx.mul_matrix(c) + ctx.mul_matrix(d) @ fk) % p
    try:
        u_inv = fplinalg.inverse(u, p)
    except ZeroDivisionError:
        raise ParameterError("M U_f is not the graph of a function") from None
    return from_matrix(ctx, v @ u_inv % p)


# -- invariants --------------------------------------------------------------


@dataclass(frozen=True)
class NonequivalenceCertificate:
    certified: bool
    invariant: str | None
    values: tuple | None

    def as_dict(self) -> dict:
        return {
            "certified": self.certified,
            "invariant": self.invariant,
            "values": list(self.values) if self.values else None,
        }


def nonequivalence_certificate(f: LinPoly, g: LinPoly) -> NonequivalenceCertificate:
    """Compare equivalence invariants; a mismatch proves nonequivalence."""
    sf, sg = graph_stabilizer(f), graph_stabilizer(g)
    lf, lg = linear_set(f), linear_set(g)
    checks = (
        ("stabilizer_cardinality", lambda: (sf.cardinality, sg.cardinality)),
        ("stabilizer_invertible_count", lambda: (sf.invertible_count, sg.invertible_count)),
        ("linear_set_size", lambda: (lf.size, lg.size)),
        ("weight_histogram", lambda: (lf.weight_histogram, lg.weight_histogram)),
    )
    for name, values in checks:
        x, y = values()
        if x != y:
            return NonequivalenceCertificate(True, name, (x, y))
    return NonequivalenceCertificate(False, None, None)


@dataclass(frozen=True)
class AdjointReport:
    direct: EquivalenceResult
    adjoint: EquivalenceResult

    @property
    def holds(self) -> bool:
        return (not self.direct.equivalent) or self.adjoint.equivalent


def adjoint_equivalence_property(f: LinPoly, g: LinPoly, budget: int = SEARCH_BUDGET) -> AdjointReport:
    """f ~ g must imply adjoint(f) ~ adjoint(g); both searches are reported."""
    rep = AdjointReport(are_equivalent(f, g, budget), are_equivalent(adjoint(f), adjoint(g), budget))
    if not rep.holds:
        raise SelfCheckError("f and g are equivalent but their adjoints are not")
    return rep

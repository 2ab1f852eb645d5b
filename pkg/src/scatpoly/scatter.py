"""Exact scatteredness checks and linear-set weight distributions.

``is_scattered`` counts the distinct values of f(x)/x over one x per
F_q^*-class.  The partial checks sweep rho over the relevant subfield
difference and test whether x -> f(rho x) - rho f(x) is injective, one small
F_p-rank per rho.
"""

from __future__ import annotations

import functools
import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, ResourceError, SelfCheckError
from .gfield import FieldCtx, batch_rank, nullspace, span_indices
from .linpoly import LinPoly

log = logging.getLogger(__name__)

L_PARTIAL_BUDGET = 2_000_000
_CHUNK = 4096


@dataclass(frozen=True)
class ScatterVerdict:
    """Outcome of one property check.

    ``witness`` is (y, x) with f(x)/x = f(y)/y for the plain property, or
    (rho, x) with f(rho x) = rho f(x) for the partial ones; index-smallest.
    """

    prop: str
    holds: bool
    witness: tuple[int, int] | None
    method: str

    def __bool__(self) -> bool:
        return self.holds

    def as_dict(self) -> dict:
        return {
            "property": self.prop,
            "holds": self.holds,
            "witness": list(self.witness) if self.witness else None,
            "method": self.method,
        }


@dataclass(frozen=True)
class ScatterReport:
    is_scattered: bool
    is_L_partial: bool
    is_R_partial: bool
    verdicts: tuple[ScatterVerdict, ...]

    @property
    def consistent(self) -> bool:
        return self.is_scattered == (self.is_L_partial and self.is_R_partial)


def _require_nonzero(f: LinPoly) -> None:
    if f.is_zero():
        raise ParameterError("the zero polynomial is excluded")


def _projective_count(ctx: FieldCtx) -> int:
    return (ctx.order - 1) // (ctx.q - 1)


def ratio_logs(f: LinPoly) -> np.ndarray:
    """log(f(x)/x) for x = g^L, L = 0 .. (q^n-1)/(q-1) - 1 (one x per F_q^*-class)."""
    return f.log_ratio_terms(np.arange(_projective_count(f.ctx), dtype=np.int64))


def _first_collision(f: LinPoly) -> tuple[int, int]:
    """Smallest x (then y < x) with f(x)/x = f(y)/y and x/y not in F_q."""
    ctx = f.ctx
    t = ctx.tables
    xs = np.arange(1, ctx.order, dtype=np.int64)
    logs = t.log[xs]
    vals = f.log_ratio_terms(logs)
    cls = logs % _projective_count(ctx)
    order = np.lexsort((xs, vals))
    sv, sx, sc = vals[order], xs[order], cls[order]
    starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
    group = np.repeat(np.arange(starts.size), np.diff(np.r_[starts, sv.size]))
    first = starts[group]
    bad = sc != sc[first]
    k = int(np.argmin(np.where(bad, sx, ctx.order)))
    return int(sx[first[k]]), int(sx[k])


def _all_distinct(vals: np.ndarray, seen: np.ndarray) -> bool:
    seen[:] = False
    seen[vals] = True
    return int(np.count_nonzero(seen)) == vals.size


def is_scattered(f: LinPoly) -> ScatterVerdict:
    """f(x)/x = f(y)/y only if x/y in F_q."""
    _require_nonzero(f)
    ctx = f.ctx
    holds = _all_distinct(ratio_logs(f), np.empty(ctx.order, dtype=bool))
    witness = None if holds else _first_collision(f)
    return ScatterVerdict("scattered", holds, witness, "enumeration")


def scattered_pencil(g: LinPoly, h: LinPoly, cs) -> np.ndarray:
    """Scatteredness of g + c*h for each c in ``cs``, as a boolean array.

    Same value count as ``is_scattered``; the logs of g(x)/x and h(x)/x are
    computed once and each c costs one Zech addition.
    """
    ctx = g.ctx
    t = ctx.tables
    nm1, zero = t.nm1, t.zero
    la, lb = ratio_logs(g).astype(np.int32), ratio_logs(h).astype(np.int32)
    zech = t.zech.astype(np.int32)
    a_zero, b_zero = la == zero, lb == zero
    both = ~(a_zero | b_zero)
    la_both = la[both]
    diff = lb[both] - la_both
    diff[diff < 0] += nm1
    only_b = lb[a_zero & ~b_zero]
    # where h(x)/x = 0 the value does not depend on c
    fixed = la[b_zero]
    seen = np.empty(ctx.order, dtype=bool)
    out = np.empty(len(cs), dtype=bool)
    for k, c in enumerate(cs):
        if c == 0:
            out[k] = _all_distinct(la, seen)
            continue
        lc = int(t.log[c])
        idx = diff + lc
        idx[idx >= nm1] -= nm1
        z = zech[idx]
        v = la_both + z
        v[v >= nm1] -= nm1
        v[z == zero] = zero
        w = only_b + lc
        w[w >= nm1] -= nm1
        out[k] = _all_distinct(np.concatenate([v, w, fixed]), seen)
    return out


def _check_t(ctx: FieldCtx, t: int) -> None:
    if not (1 < t < ctx.n and ctx.n % t == 0):
        raise ParameterError(f"need t | n and 1 < t < n, got t={t}, n={ctx.n}")


def _rho_sweep(f: LinPoly, rhos: np.ndarray, prop: str, cached=None) -> ScatterVerdict:
    """Injectivity of x -> f(rho x) - rho f(x) for every rho, in index order."""
    ctx = f.ctx
    p, d = ctx.p, ctx.degree
    fm = f.matrix
    for start in range(0, rhos.size, _CHUNK):
        chunk = rhos[start : start + _CHUNK]
        mats = cached[start : start + _CHUNK] if cached is not None else ctx.mul_matrices(chunk)
        diff = (fm[None] @ mats - mats @ fm[None]) % p
        ranks = batch_rank(diff, p)
        bad = np.flatnonzero(ranks < d)
        if bad.size:
            rho = int(chunk[bad[0]])
            kernel = span_indices(ctx, nullspace(diff[bad[0]], p))
            return ScatterVerdict(prop, False, (rho, int(kernel[kernel != 0][0])), "kernel-sweep")
        if rhos.size > 10 * _CHUNK:
            log.debug("%s sweep: %d / %d", prop, start + chunk.size, rhos.size)
    return ScatterVerdict(prop, True, None, "kernel-sweep")


def _subfield_elements(ctx: FieldCtx, k: int) -> np.ndarray:
    """F_{q^k} as sorted indices."""
    return ctx.subfield(ctx.eps * k).elements


def is_R_partial(f: LinPoly, t: int) -> ScatterVerdict:
    """f(rho x) = rho f(x), x != 0, rho in F_{q^t} forces rho in F_q."""
    _require_nonzero(f)
    ctx = f.ctx
    _check_t(ctx, t)
    rhos, mats = _r_partial_rhos(ctx, t)
    return _rho_sweep(f, rhos, "R-partial", mats)


@functools.lru_cache(maxsize=8)
def _r_partial_rhos(ctx: FieldCtx, t: int) -> tuple[np.ndarray, np.ndarray]:
    """F_{q^t} minus F_q with the multiplication matrices, shared across calls."""
    rhos = np.setdiff1d(_subfield_elements(ctx, t), _subfield_elements(ctx, 1))
    return rhos, ctx.mul_matrices(rhos)


def is_L_partial(f: LinPoly, t: int, budget: int = L_PARTIAL_BUDGET) -> ScatterVerdict:
    """f(rho x) = rho f(x), x != 0 forces rho in F_{q^t}."""
    _require_nonzero(f)
    ctx = f.ctx
    _check_t(ctx, t)
    if ctx.order > budget:
        raise ResourceError(
            f"L-partial sweep over {ctx.order} elements exceeds budget {budget}; "
            "check is_scattered and is_R_partial instead"
        )
    sub = _subfield_elements(ctx, t)
    mask = np.ones(ctx.order, dtype=bool)
    mask[sub] = False
    return _rho_sweep(f, np.flatnonzero(mask).astype(np.int64), "L-partial")


def scatter_report(f: LinPoly, t: int, budget: int = L_PARTIAL_BUDGET) -> ScatterReport:
    s, l_, r = is_scattered(f), is_L_partial(f, t, budget), is_R_partial(f, t)
    rep = ScatterReport(s.holds, l_.holds, r.holds, (s, l_, r))
    if not rep.consistent:
        raise SelfCheckError(
            f"scattered={s.holds} but L-partial={l_.holds}, R-partial={r.holds}"
        )
    return rep


@dataclass(frozen=True)
class LinearSetReport:
    """Points <(1, u)> of L_f with their weights.

    ``points`` are the u-values in index order and ``weights`` align with
    them; the point <(0, 1)> never occurs for a graph.
    """

    q: int
    n: int
    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.points.size)

    @property
    def weight_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.weights.tolist()).items()))

    @property
    def max_weight(self) -> int:
        return int(self.weights.max())

    @property
    def is_scattered(self) -> bool:
        return self.size == (self.q**self.n - 1) // (self.q - 1)

    def weight_sum(self) -> int:
        return sum(c * (self.q**w - 1) // (self.q - 1) for w, c in self.weight_histogram.items())


def linear_set(f: LinPoly, method: str = "count") -> LinearSetReport:
    """L_f with point weights.

    ``count``: the weight of <(1,u)> comes from |{x != 0 : f(x) = u x}| =
    q^w - 1.  ``kernel``: w is the kernel dimension of x -> u x - f(x),
    taken over every u (only for small fields).
    """
    _require_nonzero(f)
    ctx = f.ctx
    q, n = ctx.q, ctx.n
    if method == "count":
        vals = ratio_logs(f)
        uniq, counts = np.unique(vals, return_counts=True)
        hits = (q - 1) * counts + 1
        weights = np.rint(np.log(hits) / np.log(q)).astype(np.int64)
        if not np.array_equal(q**weights, hits):
            raise SelfCheckError("a point of L_f has a hit count that is not q^w - 1")
        points = ctx.tables.exp[uniq]
        order = np.argsort(points)
        rep = LinearSetReport(q, n, points[order], weights[order])
    elif method == "kernel":
        us = np.arange(ctx.order, dtype=np.int64)
        fm = f.matrix
        p = ctx.p
        weights = np.empty(us.size, dtype=np.int64)
        for start in range(0, us.size, _CHUNK):
            chunk = us[start : start + _CHUNK]
            mats = (ctx.mul_matrices(chunk) - fm[None]) % p
            weights[start : start + chunk.size] = (ctx.degree - batch_rank(mats, p)) // ctx.eps
        keep = weights > 0
        rep = LinearSetReport(q, n, us[keep], weights[keep])
    else:
        raise ParameterError(f"unknown method {method!r}")
    if rep.weight_sum() != (q**n - 1) // (q - 1):
        raise SelfCheckError("weight-sum identity fails for L_f")
    return rep

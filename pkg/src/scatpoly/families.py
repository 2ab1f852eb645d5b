"""Polynomial families and distinguished subsets of F_{q^t} used throughout.

Everything here lives in F_{q^{2t}}: the field context must have n = 2t.
Elements of F_{q^t} are ordinary element indices of the big field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from .errors import ParameterError, SelfCheckError
from .gfield import FieldCtx, fplinalg, span_indices
from .linpoly import LinPoly

LABELS = ("q-1", "q+1", "sigma+1", "norm-one")


def _half_degree(ctx: FieldCtx, t: int | None = None) -> int:
    if ctx.n % 2:
        raise ParameterError(f"field must have even n = 2t over F_q, got n={ctx.n}")
    half = ctx.n // 2
    if t is not None and t != half:
        raise ParameterError(f"t={t} does not match field n={ctx.n}")
    if half < 3:
        raise ParameterError(f"t >= 3 required, got t={half}")
    return half


def in_fqt(ctx: FieldCtx, x: int, t: int) -> bool:
    return ctx.qpow(x, t) == x


@dataclass(frozen=True)
class PhiParams:
    ctx: FieldCtx
    t: int
    J: int
    m: int

    def __post_init__(self):
        ctx = self.ctx
        _half_degree(ctx, self.t)
        if not 1 <= self.J < 2 * self.t or gcd(self.J, 2 * self.t) != 1:
            raise ParameterError(f"J must be in 1..2t-1 and coprime to 2t={2 * self.t}, got J={self.J}")
        ctx.check(self.m)
        if self.m == 0:
            raise ParameterError("m must be nonzero")
        if not in_fqt(ctx, self.m, self.t):
            raise ParameterError(f"m={self.m} is not in F_(q^{self.t})")

    @property
    def sigma_exponent(self) -> int:
        """sigma = q^J; this is J."""
        return self.J


def phi(ctx: FieldCtx, t: int, J: int, m: int) -> LinPoly:
    """X^(s^(t-1)) + X^(s^(2t-1)) + m (X^s - X^(s^(t+1))), s = q^J."""
    PhiParams(ctx, t, J, m)
    return alpha(ctx, t, J) + beta(ctx, t, J, m)


def phi_from(params: PhiParams) -> LinPoly:
    return phi(params.ctx, params.t, params.J, params.m)


def alpha(ctx: FieldCtx, t: int, J: int) -> LinPoly:
    PhiParams(ctx, t, J, 1)
    return LinPoly.from_sigma_terms(ctx, J, [(t - 1, 1), (2 * t - 1, 1)])


def beta(ctx: FieldCtx, t: int, J: int, m: int) -> LinPoly:
    PhiParams(ctx, t, J, m)
    return LinPoly.from_sigma_terms(ctx, J, [(1, m), (t + 1, ctx.neg(m))])


def pseudoregulus(ctx: FieldCtx, s: int) -> LinPoly:
    if gcd(s, ctx.n) != 1:
        raise ParameterError(f"pseudoregulus needs gcd(s, n) = 1, got s={s}, n={ctx.n}")
    return LinPoly.monomial(ctx, s)


def norm_q(ctx: FieldCtx, x: int, over_degree: int | None = None) -> int:
    """N_{q^k/q}(x) with k = over_degree (default n)."""
    k = ctx.n if over_degree is None else over_degree
    return ctx.rel_norm(x, ctx.eps * k, ctx.eps)


def lunardon_polverino(ctx: FieldCtx, s: int, delta: int) -> LinPoly:
    """X^(q^(n-s)) + delta X^(q^s); requires N(delta) not in {0, 1}."""
    n = ctx.n
    if gcd(s, n) != 1:
        raise ParameterError(f"Lunardon-Polverino needs gcd(s, n) = 1, got s={s}, n={n}")
    nm = norm_q(ctx, ctx.check(delta))
    if nm in (0, 1):
        raise ParameterError(f"N_(q^n/q)(delta) must not be 0 or 1, got {nm}")
    return LinPoly.from_terms(ctx, [(n - s, 1), (s, delta)])


def quadrinomial_psi(ctx: FieldCtx, s: int, h: int) -> tuple[LinPoly, str]:
    """psi_{s,h} and its sub-family label, "iii-a" (h in F_{q^t}) or "iii-b"."""
    t = _half_degree(ctx)
    if gcd(s, 2 * t) != 1:
        raise ParameterError(f"psi needs gcd(s, 2t) = 1, got s={s}")
    ctx.check(h)
    if h == 0 or ctx.pow(h, ctx.q**t + 1) != ctx.minus_one:
        raise ParameterError("psi needs h^(q^t+1) = -1")
    q = ctx.q
    poly = LinPoly.from_terms(
        ctx,
        [
            (s, 1),
            (s * (t - 1), 1),
            (s * (t + 1), ctx.pow(h, 1 + q**s)),
            (s * (2 * t - 1), ctx.pow(h, 1 - q ** (s * (2 * t - 1)))),
        ],
    )
    return poly, ("iii-a" if in_fqt(ctx, h, t) else "iii-b")


def phi_adjoint_form(ctx: FieldCtx, t: int, mu: int) -> LinPoly:
    """X^q + X^(q^(t+1)) + mu (X^(q^(2t-1)) - X^(q^(t-1))), mu in F_{q^t}*."""
    _half_degree(ctx, t)
    ctx.check(mu)
    if mu == 0:
        raise ParameterError("mu must be nonzero")
    if not in_fqt(ctx, mu, t):
        raise ParameterError(f"mu={mu} is not in F_(q^{t})")
    return LinPoly.from_terms(
        ctx, [(1, 1), (t + 1, 1), (2 * t - 1, mu), (t - 1, ctx.neg(mu))]
    )


class WSubspace:
    """W = {x : x^(q^t) + x = 0}, found as a kernel, not by formula."""

    def __init__(self, ctx: FieldCtx, t: int | None = None):
        self.ctx = ctx
        self.t = _half_degree(ctx, t)
        defining = LinPoly.from_terms(ctx, [(self.t, 1), (0, 1)])
        self.basis = fplinalg.nullspace(defining.matrix, ctx.p)

    def contains(self, x: int) -> bool:
        return self.ctx.add(self.ctx.qpow(x, self.t), x) == 0

    @cached_property
    def elements(self) -> np.ndarray:
        return span_indices(self.ctx, self.basis)

    @property
    def cardinality(self) -> int:
        return self.ctx.p ** self.basis.shape[0]


@dataclass(frozen=True)
class PowerClassReport:
    label: str
    power: int
    equation_exponent: int
    equation_rhs: int
    elements: np.ndarray = field(repr=False)
    expected_cardinality: int

    @property
    def cardinality(self) -> int:
        return int(self.elements.size)


def _class_power(ctx: FieldCtx, t: int, label: str, J: int) -> int:
    q = ctx.q
    return {"q-1": q - 1, "q+1": q + 1, "sigma+1": q**J + 1}[label]


def _fqt_star(ctx: FieldCtx, t: int):
    """(elements h^j, discrete logs j) of F_{q^t}^* for the subfield generator h."""
    sub = ctx.subfield(ctx.eps * t)
    seq = sub.power_sequence
    return seq, np.arange(seq.size, dtype=np.int64)


def power_class(ctx: FieldCtx, t: int, label: str, J: int = 1) -> PowerClassReport:
    """A power class of W (or the norm-one set), computed two ways.

    For D in {q-1, q+1, q^J+1} the set {w^D : w in W, w != 0} is enumerated
    directly and compared with the solutions in F_{q^t}^* of
    x^((q^t-1)/d) = (-1)^(D/d), d = gcd(D, q^t-1).  For "norm-one" the
    product of conjugates is compared with x^((q^t-1)/(q-1)) = 1.
    """
    if label not in LABELS:
        raise ParameterError(f"unknown power-class label {label!r}; use one of {LABELS}")
    _half_degree(ctx, t)
    if label == "sigma+1" and gcd(J, 2 * t) != 1:
        raise ParameterError(f"J must be coprime to 2t, got J={J}")
    q = ctx.q
    order = q**t - 1
    elems, logs = _fqt_star(ctx, t)
    if label == "norm-one":
        power = 0
        exponent, rhs_log = order // (q - 1), 0
        conj = np.ones_like(elems)
        for i in range(t):
            conj = ctx.vmul(conj, ctx.vfrobenius(elems, ctx.eps * i))
        direct = np.sort(elems[conj == 1])
        expected = order // (q - 1)
    else:
        power = _class_power(ctx, t, label, J)
        d = gcd(power, order)
        exponent = order // d
        rhs_log = 0 if (power // d) % 2 == 0 else order // 2
        w = WSubspace(ctx, t).elements
        w = w[w != 0]
        if label == "sigma+1":
            powered = ctx.vmul(ctx.vfrobenius(w, ctx.eps * J), w)
        else:
            powered = ctx.vpow(w, power)
        direct = np.unique(powered)
        expected = order // d
    by_equation = np.sort(elems[(logs * exponent) % order == rhs_log])
    if not np.array_equal(direct, by_equation):
        raise SelfCheckError(
            f"power class {label}: enumeration gives {direct.size} elements, "
            f"equation gives {by_equation.size}"
        )
    if direct.size != expected:
        raise SelfCheckError(
            f"power class {label}: {direct.size} elements, closed form says {expected}"
        )
    rhs = 1 if rhs_log == 0 else ctx.minus_one
    return PowerClassReport(label, power, exponent, rhs, direct, expected)


def _in_class_by_equation(ctx: FieldCtx, t: int, power: int, m: int) -> bool:
    order = ctx.q**t - 1
    d = gcd(power, order)
    rhs = 1 if (power // d) % 2 == 0 else ctx.minus_one
    return ctx.pow(m, order // d) == rhs


@dataclass(frozen=True)
class MClassification:
    m: int
    in_S_q_minus_1: bool
    in_S_q_plus_1: bool
    in_S_sigma_plus_1: bool
    norm_one: bool

    @property
    def scattered_guarantee(self) -> bool:
        """m is neither a (q-1)- nor a (q+1)-power of an element of W."""
        return not (self.in_S_q_minus_1 or self.in_S_q_plus_1)

    @property
    def not_scattered_guarantee(self) -> bool:
        """m is a (sigma+1)-power of an element of W."""
        return self.in_S_sigma_plus_1

    @property
    def theory_verdict(self) -> bool | None:
        """True/False when a guarantee applies, None when theory is silent."""
        if self.scattered_guarantee:
            return True
        if self.not_scattered_guarantee:
            return False
        return None

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "in_S_q-1": self.in_S_q_minus_1,
            "in_S_q+1": self.in_S_q_plus_1,
            "in_S_sigma+1": self.in_S_sigma_plus_1,
            "norm_one": self.norm_one,
            "scattered_guarantee": self.scattered_guarantee,
            "not_scattered_guarantee": self.not_scattered_guarantee,
        }


def classify_m(ctx: FieldCtx, t: int, J: int, m: int) -> MClassification:
    params = PhiParams(ctx, t, J, m)
    q = ctx.q
    out = MClassification(
        m=params.m,
        in_S_q_minus_1=_in_class_by_equation(ctx, t, q - 1, m),
        in_S_q_plus_1=_in_class_by_equation(ctx, t, q + 1, m),
        in_S_sigma_plus_1=_in_class_by_equation(ctx, t, q**J + 1, m),
        norm_one=norm_q(ctx, m, t) == 1,
    )
    if out.scattered_guarantee and out.not_scattered_guarantee:
        raise SelfCheckError(f"m={m}: both scatteredness guarantees claimed")
    return out


def fqt_star_sorted(ctx: FieldCtx, t: int) -> np.ndarray:
    return np.sort(_fqt_star(ctx, t)[0])


@dataclass(frozen=True)
class WitnessReport:
    t: int
    q: int
    m: int | None
    union_size: int
    class_sizes: dict
    bound: Fraction
    bound_holds: bool

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "t": self.t,
            "m": self.m,
            "union_size": self.union_size,
            "class_sizes": dict(self.class_sizes),
            "union_bound": str(self.bound),
            "union_bound_below_q^t-1": self.bound_holds,
        }


def union_bound(q: int, t: int) -> Fraction:
    """Upper bound on |S_{q-1} u S_{q+1} u T| from the class sizes."""
    if t % 2 == 0:
        return Fraction((q**t - 1) * (3 * q + 1), q * q - 1)
    return Fraction((q**t - 1) * (q + 3), 2 * (q - 1))


def find_witness_m(ctx: FieldCtx, t: int | None = None) -> WitnessReport:
    """Index-smallest m in F_{q^t}^* outside S_{q-1}, S_{q+1} and the norm-one set."""
    t = _half_degree(ctx, t)
    q = ctx.q
    order = q**t - 1
    elems, logs = _fqt_star(ctx, t)
    masks = {}
    for name, power in (("S_q-1", q - 1), ("S_q+1", q + 1)):
        d = gcd(power, order)
        rhs = 0 if (power // d) % 2 == 0 else order // 2
        masks[name] = (logs * (order // d)) % order == rhs
    masks["T"] = (logs * (order // (q - 1))) % order == 0
    union = masks["S_q-1"] | masks["S_q+1"] | masks["T"]
    free = elems[~union]
    bound = union_bound(q, t)
    return WitnessReport(
        t=t,
        q=q,
        m=int(free.min()) if free.size else None,
        union_size=int(union.sum()),
        class_sizes={k: int(v.sum()) for k, v in masks.items()},
        bound=bound,
        bound_holds=bound < order,
    )

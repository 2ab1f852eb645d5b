import numpy as np
import pytest

from scatpoly.errors import ParameterError
from scatpoly.families import (
    PhiParams,
    WSubspace,
    alpha,
    beta,
    classify_m,
    find_witness_m,
    fqt_star_sorted,
    in_fqt,
    lunardon_polverino,
    norm_q,
    phi,
    phi_adjoint_form,
    power_class,
    pseudoregulus,
    quadrinomial_psi,
    union_bound,
)
from scatpoly.gfield import make_field
from scatpoly.linpoly import LinPoly, adjoint


def field(q, t):
    return make_field(q, 1, 2 * t)


def test_phi_terms():
    ctx = field(3, 3)
    f = phi(ctx, 3, 1, 2)
    # X^(q^2) + X^(q^5) + 2 X^q - 2 X^(q^4)
    assert f.coeffs == (0, 2, 1, 0, ctx.neg(2), 1)
    assert f == alpha(ctx, 3, 1) + beta(ctx, 3, 1, 2)


def test_phi_parameter_checks():
    ctx = field(3, 3)
    with pytest.raises(ParameterError):
        phi(ctx, 3, 2, 1)  # gcd(J, 6) != 1
    with pytest.raises(ParameterError):
        phi(ctx, 3, 1, 0)
    outside = next(x for x in range(2, ctx.order) if not in_fqt(ctx, x, 3))
    with pytest.raises(ParameterError):
        PhiParams(ctx, 3, 1, outside)
    with pytest.raises(ParameterError):
        phi(make_field(3, 1, 4), 2, 1, 1)  # t >= 3


def test_alpha_maps_into_fqt():
    ctx = field(3, 3)
    a = alpha(ctx, 3, 1)
    vals = a.eval_many(np.arange(ctx.order))
    assert all(in_fqt(ctx, int(v), 3) for v in np.unique(vals))


@pytest.mark.parametrize("q,t", [(3, 3), (3, 4), (5, 3)])
def test_w_subspace(q, t):
    ctx = field(q, t)
    w = WSubspace(ctx, t)
    assert w.cardinality == q**t
    els = w.elements
    assert all(w.contains(int(x)) for x in els[:50])
    # W meets F_{q^t} only in 0
    assert sum(in_fqt(ctx, int(x), t) for x in els) == 1


@pytest.mark.parametrize("q,t", [(3, 3), (3, 4), (5, 3), (5, 4), (7, 3), (3, 5), (3, 6)])
def test_power_class_counts(q, t):
    ctx = field(q, t)
    n = q**t - 1
    assert power_class(ctx, t, "q-1").cardinality == n // (q - 1)
    expected = n // (q + 1) if t % 2 == 0 else n // 2
    assert power_class(ctx, t, "q+1").cardinality == expected
    assert power_class(ctx, t, "norm-one").cardinality == n // (q - 1)


def test_sigma_power_class_equation_even_t():
    # for t even, (sigma+1)-powers of W are the solutions of x^((sigma^t-1)/(sigma+1)) = -1
    ctx = field(3, 4)
    for J in (1, 3):
        rep = power_class(ctx, 4, "sigma+1", J)
        sig = 3**J
        e = (sig**4 - 1) // (sig + 1)
        fqt = fqt_star_sorted(ctx, 4)
        by_eq = sorted(int(x) for x in fqt if ctx.pow(int(x), e) == ctx.minus_one)
        assert rep.elements.tolist() == by_eq


def test_power_class_label_rejected():
    with pytest.raises(ParameterError):
        power_class(field(3, 3), 3, "q+2")


def test_classify_m_consistent_with_classes():
    ctx = field(5, 3)
    s1 = set(power_class(ctx, 3, "q-1").elements.tolist())
    s2 = set(power_class(ctx, 3, "q+1").elements.tolist())
    s3 = set(power_class(ctx, 3, "sigma+1").elements.tolist())
    for m in fqt_star_sorted(ctx, 3).tolist():
        c = classify_m(ctx, 3, 1, m)
        assert (c.in_S_q_minus_1, c.in_S_q_plus_1, c.in_S_sigma_plus_1) == (m in s1, m in s2, m in s3)
        assert c.norm_one == (norm_q(ctx, m, 3) == 1)


def test_q3_classes_cover_everything():
    # at q = 3, S_{q-1} = {N = -1} and the norm-one set complete F_{q^t}^*
    for t in (3, 4, 5):
        ctx = field(3, t)
        rep = find_witness_m(ctx, t)
        assert rep.m is None
        assert rep.union_size == 3**t - 1


def test_witness_q7_t5():
    ctx = make_field(7, 1, 10)
    rep = find_witness_m(ctx, 5)
    assert rep.m is not None and rep.bound_holds
    c = classify_m(ctx, 5, 1, rep.m)
    assert not (c.in_S_q_minus_1 or c.in_S_q_plus_1 or c.norm_one)
    assert rep.union_size <= union_bound(7, 5)


def test_union_bound_values():
    assert union_bound(5, 4) < 5**4 - 1
    assert union_bound(7, 5) < 7**5 - 1
    assert union_bound(5, 5) >= 5**5 - 1


def test_other_families():
    ctx = field(3, 3)
    assert pseudoregulus(ctx, 5) == LinPoly.monomial(ctx, 5)
    with pytest.raises(ParameterError):
        pseudoregulus(ctx, 2)
    delta = next(d for d in range(1, ctx.order) if norm_q(ctx, d) not in (0, 1))
    lp = lunardon_polverino(ctx, 1, delta)
    assert lp.support == [1, 5]
    with pytest.raises(ParameterError):
        lunardon_polverino(ctx, 1, 1)


def test_psi_requires_h_condition():
    ctx = field(3, 3)
    q, t = 3, 3
    hs = [h for h in range(1, ctx.order) if ctx.pow(h, q**t + 1) == ctx.minus_one]
    assert hs
    f, label = quadrinomial_psi(ctx, 1, hs[0])
    assert label in ("iii-a", "iii-b")
    assert len(f.support) == 4
    bad = next(h for h in range(1, ctx.order) if ctx.pow(h, q**t + 1) != ctx.minus_one)
    with pytest.raises(ParameterError):
        quadrinomial_psi(ctx, 1, bad)


def test_adjoint_of_phi_is_adjoint_form():
    for q, t in ((3, 3), (5, 3), (3, 4)):
        ctx = field(q, t)
        for m in fqt_star_sorted(ctx, t)[:5].tolist():
            mu = ctx.qpow(m, t - 1)
            assert adjoint(phi(ctx, t, 1, m)) == phi_adjoint_form(ctx, t, mu)

import numpy as np
import pytest
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from scatpoly.errors import ParameterError
from scatpoly.families import classify_m, fqt_star_sorted, phi
from scatpoly.gfield import make_field
from scatpoly.linpoly import LinPoly
from scatpoly.rankcode import (
    RankCode,
    codeword_rank,
    gabidulin,
    is_mrd,
    mrd_rank_distribution,
    rank_spectrum,
)
from scatpoly.scatter import is_scattered

C6 = make_field(3, 1, 6)


def sympy_rank(poly):
    p = poly.ctx.p
    m = poly.matrix
    rows = [[GF(p)(int(v)) for v in r] for r in m.tolist()]
    return DomainMatrix(rows, m.shape, GF(p)).rank() // poly.ctx.eps


def test_spectrum_against_sampled_codewords():
    code = RankCode(C6, LinPoly.monomial(C6, 1))
    spec = rank_spectrum(code)
    rng = np.random.default_rng(0)
    seen = {}
    for a, b in rng.integers(0, C6.order, size=(1000, 2)).tolist():
        if a == 0 and b == 0:
            continue
        r = sympy_rank(code.codeword(a, b))
        assert r in spec.full
        seen[r] = seen.get(r, 0) + 1
    # ranks 5 and 6 each take about half of the code
    assert set(seen) == {5, 6}
    assert spec.projective == {5: 364, 6: 366}


def test_rank_invariance_under_scaling():
    f = phi(C6, 3, 1, 1)
    code = RankCode(C6, f)
    rng = np.random.default_rng(1)
    for a, b, lam in rng.integers(1, C6.order, size=(50, 3)).tolist():
        c = code.codeword(a, b)
        assert codeword_rank(c.scale(lam)) == codeword_rank(c)


def test_spectrum_totals_and_identity_class():
    code = RankCode(C6, phi(C6, 3, 1, 2))
    spec = rank_spectrum(code)
    assert sum(spec.full.values()) == 3**12 - 1
    assert sum(spec.projective.values()) == 3**6 + 1
    assert codeword_rank(code.codeword(1, 0)) == 6


def test_scattered_gives_mrd():
    for f in (LinPoly.monomial(C6, 1), LinPoly.monomial(C6, 5)):
        assert is_scattered(f).holds
        rep = is_mrd(RankCode(C6, f))
        assert rep.is_mrd and rep.min_rank == 5
        assert rep.spectrum.full[5] % (3**6 - 1) == 0


def test_phi1_q3_t3_not_mrd():
    rep = is_mrd(RankCode(C6, phi(C6, 3, 1, 1)))
    assert not rep.is_mrd and rep.min_rank <= 4


def test_scattered_mrd_bridge_over_all_m():
    ctx = make_field(5, 1, 6)
    for m in fqt_star_sorted(ctx, 3)[::7].tolist():
        f = phi(ctx, 3, 1, m)
        sc = is_scattered(f).holds
        rep = is_mrd(RankCode(ctx, f))
        assert sc == rep.is_mrd
        if classify_m(ctx, 3, 1, m).scattered_guarantee:
            assert rep.is_mrd


def test_degenerate_code_rejected():
    with pytest.raises(ParameterError):
        RankCode(C6, LinPoly.identity(C6).scale(2))
    with pytest.raises(ParameterError):
        RankCode(C6, LinPoly.zero(C6))


def test_gabidulin_2_is_pseudoregulus_code():
    assert gabidulin(C6, 2).projective == rank_spectrum(RankCode(C6, LinPoly.monomial(C6, 1))).projective
    assert gabidulin(C6, 2).min_rank == 5


def test_gabidulin_matches_closed_form():
    ctx = make_field(3, 1, 4)
    for k in (1, 2, 3):
        spec = gabidulin(ctx, k)
        assert spec.full == mrd_rank_distribution(3, 4, k)


def test_gabidulin_full_space():
    spec = gabidulin(C6, 6)
    assert spec.min_rank == 1 and 6 in spec.projective
    with pytest.raises(ParameterError):
        gabidulin(C6, 0)


def test_mrd_distribution_totals():
    for q, n, k in ((3, 6, 2), (5, 3, 2), (3, 4, 3)):
        dist = mrd_rank_distribution(q, n, k)
        assert sum(dist.values()) == q ** (n * k) - 1
        assert min(r for r, c in dist.items() if c) == n - k + 1

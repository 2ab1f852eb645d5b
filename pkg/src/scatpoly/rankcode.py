"""Rank-metric codes <X, f> over F_{q^n} and the Gabidulin reference codes.

Rank is unchanged by left multiplication with a nonzero scalar, so a
2-generator code is scanned one projective class (a : b) at a time: (1 : 0)
and (u : 1) for every u.  The codeword u X + f has F_p-matrix Mat(u) + F.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, SelfCheckError
from .gfield import FieldCtx, batch_rank
from .linpoly import LinPoly

_CHUNK = 4096


@dataclass(frozen=True)
class RankCode:
    """C = <X, f>, the left F_{q^n}-span of the identity and f."""

    ctx: FieldCtx
    f: LinPoly

    def __post_init__(self):
        if self.f.ctx is not self.ctx:
            raise ParameterError("f lives over a different field")
        if self.f.support in ([], [0]):
            raise ParameterError("X and f are F_(q^n)-dependent; the code degenerates")

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def generators(self) -> tuple[LinPoly, LinPoly]:
        return LinPoly.identity(self.ctx), self.f

    def codeword(self, a: int, b: int) -> LinPoly:
        x, f = self.generators
        return x.scale(a) + f.scale(b)


@dataclass(frozen=True)
class RankSpectrum:
    """Rank histograms of the nonzero codewords.

    ``projective`` counts classes (a : b); ``full`` counts codewords, each
    class holding q^n - 1 of them.
    """

    q: int
    n: int
    size_exponent: int
    projective: dict[int, int]
    full: dict[int, int] = field(init=False)

    def __post_init__(self):
        scale = self.q**self.n - 1
        object.__setattr__(self, "full", {r: c * scale for r, c in self.projective.items()})
        total = sum(self.full.values())
        if total != self.q ** (self.size_exponent * self.n) - 1:
            raise SelfCheckError(f"spectrum counts {total} codewords, expected q^{self.size_exponent * self.n} - 1")

    @property
    def min_rank(self) -> int:
        return min(self.projective)

    def rows(self) -> list[tuple[int, int, int]]:
        return [(r, self.projective[r], self.full[r]) for r in sorted(self.projective)]

    def as_dict(self) -> dict:
        return {
            "min_rank": self.min_rank,
            "projective": {str(r): c for r, c in sorted(self.projective.items())},
            "full": {str(r): c for r, c in sorted(self.full.items())},
        }


def _ranks(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    return batch_rank(mats, ctx.p) // ctx.eps


def rank_spectrum(code: RankCode) -> RankSpectrum:
    ctx = code.ctx
    p = ctx.p
    fm = code.f.matrix
    hist: Counter[int] = Counter({ctx.n: 1})  # class (1 : 0) is X itself
    for start in range(0, ctx.order, _CHUNK):
        us = np.arange(start, min(start + _CHUNK, ctx.order), dtype=np.int64)
        mats = (ctx.mul_matrices(us) + fm[None]) % p
        hist.update(_ranks(ctx, mats).tolist())
    return RankSpectrum(ctx.q, ctx.n, 2, dict(sorted(hist.items())))


def codeword_rank(c: LinPoly) -> int:
    return c.to_matrix().rank


@dataclass(frozen=True)
class MRDReport:
    is_mrd: bool
    min_rank: int
    spectrum: RankSpectrum

    def __bool__(self) -> bool:
        return self.is_mrd

    def as_dict(self) -> dict:
        return {"min_rank": self.min_rank, "is_mrd": self.is_mrd, "spectrum": self.spectrum.as_dict()}


def is_mrd(code: RankCode) -> MRDReport:
    """A code of size q^(2n) in n x n matrices is MRD iff its minimum rank is n - 1."""
    spec = rank_spectrum(code)
    return MRDReport(spec.min_rank == code.n - 1, spec.min_rank, spec)


def mrd_rank_distribution(q: int, n: int, k: int) -> dict[int, int]:
    """Rank distribution of any linear MRD code of n x n matrices with d = n - k + 1."""

    def gauss(a: int, b: int) -> int:
        num = den = 1
        for i in range(b):
            num *= q ** (a - i) - 1
            den *= q ** (i + 1) - 1
        return num // den

    d = n - k + 1
    out = {}
    for r in range(d, n + 1):
        s = sum(
            (-1) ** j * q ** (j * (j - 1) // 2) * gauss(r, j) * (q ** (n * (r - d - j + 1)) - 1)
            for j in range(r - d + 1)
        )
        out[r] = gauss(n, r) * s
    return out


def gabidulin(ctx: FieldCtx, k: int, enumerate_limit: int = 10**6) -> RankSpectrum:
    """Spectrum of <X, X^q, ..., X^(q^(k-1))>.

    Scanned class by class (normalised leading coefficient) when the class
    count is within ``enumerate_limit``; otherwise taken from the closed-form
    MRD distribution.
    """
    n = ctx.n
    if not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k}")
    q, p = ctx.q, ctx.p
    classes = (q ** (n * k) - 1) // (q**n - 1)
    if classes > enumerate_limit:
        full = mrd_rank_distribution(q, n, k)
        proj = {r: c // (q**n - 1) for r, c in full.items() if c}
        return RankSpectrum(q, n, k, proj)
    frob = [ctx.frob_mats[(ctx.eps * i) % ctx.degree] for i in range(k)]
    hist: Counter[int] = Counter()
    # class representatives: last nonzero coefficient equal to 1
    for lead in range(k):
        fixed = frob[lead]
        count = ctx.order**lead
        for start in range(0, count, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, count), dtype=np.int64)
            mats = np.broadcast_to(fixed, (idx.size,) + fixed.shape).copy()
            for i in range(lead):
                coeff = (idx // ctx.order ** (lead - 1 - i)) % ctx.order
                mats += ctx.mul_matrices(coeff) @ frob[i]
            hist.update(_ranks(ctx, mats % p).tolist())
    return RankSpectrum(q, n, k, dict(sorted(hist.items())))

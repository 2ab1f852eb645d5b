"""scatpoly command line: sweeps and checks over one field GF(q^(2t)), q = p^eps.

Every run prints a header with the package version, the field descriptor
(including the modulus) and the configuration, so the output can be
reproduced exactly.  Exit status: 0 when every requested check agrees,
1 on any disagreement, 2 on bad parameters, 3 when a budget is exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import gcd

import numpy as np

from . import __version__, families, formats, rankcode, scatter, symmetry
from .errors import ParameterError, ResourceError, ScatpolyError
from .gfield import FieldCtx, make_field

log = logging.getLogger("scatpoly")

COMMANDS = ("sweep-m", "stabilizer", "equiv", "rank-spectrum", "weights", "witness", "field-info")
FORMATS = ("text", "json", "csv")
DEFAULT_BUDGET = 10**6


@dataclass
class RunConfig:
    command: str
    p: int = 3
    eps: int = 1
    t: int = 3
    J: int = 1
    m_index: int | None = None
    families: list[str] = field(default_factory=list)
    format: str = "text"
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    out: str | None = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        return cls(
            command=ns.command,
            p=ns.p,
            eps=ns.eps,
            t=ns.t,
            J=ns.J,
            m_index=ns.m_index,
            families=list(ns.family or []),
            format=ns.format,
            workers=ns.workers,
            budget=ns.budget,
            out=ns.out,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        return cls(**d)

    def echo(self) -> str:
        """Config line for the header; the output path is left out."""
        d = self.to_dict()
        d.pop("out")
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ParameterError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ParameterError(f"format must be one of {FORMATS}")
        if self.p < 3 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise ParameterError(f"--p must be an odd prime, got {self.p}")
        if self.eps < 1:
            raise ParameterError("--eps must be positive")
        if self.t < 3:
            raise ParameterError(f"--t must be at least 3, got {self.t}")
        if not 1 <= self.J < 2 * self.t or gcd(self.J, 2 * self.t) != 1:
            raise ParameterError(f"--J must lie in 1..2t-1 and be coprime to 2t, got {self.J}")
        if self.workers < 1 or self.budget < 1:
            raise ParameterError("--workers and --budget must be positive")
        if self.m_index is not None and self.m_index < 1:
            raise ParameterError("--m-index must be a nonzero element index")
        for fam in self.families:
            formats.check_descriptor(fam)
        wants = {"equiv": 2, "rank-spectrum": (0, 1), "weights": (0, 1), "stabilizer": (0, 1)}
        need = wants.get(self.command)
        if need == 2 and len(self.families) != 2:
            raise ParameterError("equiv needs exactly two --family descriptors")
        if isinstance(need, tuple) and len(self.families) not in need:
            raise ParameterError(f"{self.command} takes at most one --family descriptor")


@dataclass
class Result:
    """What a command produced: a JSON payload, an optional table, a verdict."""

    payload: dict
    header: list[str] | None = None
    rows: list[list] | None = None
    ok: bool = True
    summary: str | None = None


# -- helpers -----------------------------------------------------------------


def _field(cfg: RunConfig) -> FieldCtx:
    return make_field(cfg.p, cfg.eps, 2 * cfg.t)


def _default_phi(cfg: RunConfig, ctx: FieldCtx) -> str:
    m = cfg.m_index if cfg.m_index is not None else int(families.fqt_star_sorted(ctx, cfg.t)[0])
    return f"phi:t={cfg.t},J={cfg.J},m={m}"


def _one_family(cfg: RunConfig, ctx: FieldCtx) -> tuple[str, object]:
    desc = cfg.families[0] if cfg.families else _default_phi(cfg, ctx)
    return desc, formats.parse_family(ctx, desc)


# -- commands ----------------------------------------------------------------


def _sweep_chunk(args) -> list[list]:
    p, eps, t, J, ms = args
    ctx = make_field(p, eps, 2 * t)
    base = families.alpha(ctx, t, J)
    pencil = families.beta(ctx, t, J, 1)
    scattered = scatter.scattered_pencil(base, pencil, ms)
    rows = []
    for m, sc in zip(ms, scattered.tolist()):
        c = families.classify_m(ctx, t, J, m)
        r_partial = scatter.is_R_partial(families.phi(ctx, t, J, m), t).holds
        theory = c.theory_verdict
        agree = (theory is None or theory == sc) and r_partial
        rows.append(
            [m, c.in_S_q_minus_1, c.in_S_q_plus_1, c.in_S_sigma_plus_1, c.norm_one,
             "-" if theory is None else theory, sc, r_partial, agree]
        )
    return rows


def cmd_sweep_m(cfg: RunConfig, ctx: FieldCtx) -> Result:
    t, q = cfg.t, ctx.q
    if ctx.order > 8_000_000:
        raise ResourceError(f"sweep-m enumerates q^(2t) = {ctx.order} points; too large")
    ms = [cfg.m_index] if cfg.m_index is not None else families.fqt_star_sorted(ctx, t).tolist()
    if cfg.m_index is not None:
        families.PhiParams(ctx, t, cfg.J, cfg.m_index)
    chunk = max(1, -(-len(ms) // (4 * cfg.workers)))
    jobs = [(cfg.p, cfg.eps, t, cfg.J, ms[i : i + chunk]) for i in range(0, len(ms), chunk)]
    rows: list[list] = []
    if cfg.workers == 1:
        results = map(_sweep_chunk, jobs)
    else:
        pool = ProcessPoolExecutor(cfg.workers)
        results = pool.map(_sweep_chunk, jobs)
    for i, part in enumerate(results):
        rows.extend(part)
        log.info("sweep-m: %d / %d chunks", i + 1, len(jobs))
    if cfg.workers > 1:
        pool.shutdown()
    header = ["m", "in_S_q-1", "in_S_q+1", "in_S_sigma+1", "norm_one",
              "theory", "scattered", "R_partial", "agree"]
    n_sc = sum(r[6] for r in rows)
    existence_applies = (t >= 4 and t % 2 == 0) or q > 3
    footer = {
        "m_count": len(rows),
        "scattered_count": n_sc,
        "R_partial_count": sum(r[7] for r in rows),
        "disagreements": sum(not r[8] for r in rows),
        "existence_claim_applies": existence_applies,
        "existence_check": (n_sc >= 1) if existence_applies and cfg.m_index is None else None,
    }
    ok = footer["disagreements"] == 0 and footer["existence_check"] is not False
    payload = {"rows": [dict(zip(header, r)) for r in rows], "footer": footer}
    return Result(payload, header, rows, ok, json.dumps(footer, sort_keys=True))


def cmd_stabilizer(cfg: RunConfig, ctx: FieldCtx) -> Result:
    desc, f = _one_family(cfg, ctx)
    stab = symmetry.graph_stabilizer(f)
    payload = {"family": desc, "stabilizer": stab.as_dict()}
    ok = True
    idealizer = symmetry.right_idealizer_cardinality(f)
    payload["right_idealizer_cardinality"] = idealizer
    ok &= idealizer == stab.cardinality
    if desc.startswith("phi:") and cfg.t > 4:
        _, named = formats.parse_fields(desc.split(":", 1)[1])
        params = families.PhiParams(ctx, named["t"], named["J"], named["m"])
        formula = symmetry.stabilizer_formula_phi(params)
        payload["closed_form"] = formula.as_dict()
        payload["closed_form_agrees"] = formula == stab
        ok &= formula == stab
    elif desc.startswith("phi:"):
        payload["closed_form"] = "not applicable for t <= 4"
    rows = [[k, v] for k, v in sorted(stab.as_dict().items())]
    rows.append(["right_idealizer_cardinality", idealizer])
    return Result(payload, ["quantity", "value"], rows, ok)


def cmd_equiv(cfg: RunConfig, ctx: FieldCtx) -> Result:
    (d1, d2) = cfg.families
    f, g = formats.parse_family(ctx, d1), formats.parse_family(ctx, d2)
    cert = symmetry.nonequivalence_certificate(f, g)
    payload = {"families": [d1, d2], "invariants": cert.as_dict()}
    search = None
    if cert.certified:
        verdict, reason = "NONEQUIVALENT (certified)", f"invariant {cert.invariant}"
    else:
        search = symmetry.are_equivalent(f, g, cfg.budget)
        payload["search"] = search.as_dict()
        if search.equivalent:
            verdict, reason = "EQUIVALENT", f"witness found by {search.method} search"
            payload["witness_verified"] = symmetry.verify_witness(f, g, search.witness)
        else:
            verdict, reason = "NONEQUIVALENT (certified)", "exhaustive search over all k"
    payload["verdict"] = verdict
    payload["reason"] = reason
    ok = payload.get("witness_verified", True)
    rows = [["verdict", verdict], ["reason", reason]]
    if search is not None and search.witness is not None:
        rows.append(["witness", json.dumps(search.witness.as_dict(), sort_keys=True)])
    return Result(payload, ["quantity", "value"], rows, ok, verdict)


def cmd_rank_spectrum(cfg: RunConfig, ctx: FieldCtx) -> Result:
    desc, f = _one_family(cfg, ctx)
    rep = rankcode.is_mrd(rankcode.RankCode(ctx, f))
    summary = {"min_rank": rep.min_rank, "is_mrd": rep.is_mrd}
    payload = {"family": desc, **rep.as_dict()}
    rows = [list(r) for r in rep.spectrum.rows()]
    return Result(payload, ["rank", "projective_count", "total_count"], rows, True,
                  json.dumps(summary, sort_keys=True))


def cmd_weights(cfg: RunConfig, ctx: FieldCtx) -> Result:
    desc, f = _one_family(cfg, ctx)
    ls = scatter.linear_set(f)
    hist = ls.weight_histogram
    payload = {"family": desc, "points": ls.size, "scattered": ls.is_scattered,
               "weight_histogram": {str(k): v for k, v in hist.items()}}
    rows = [[w, c] for w, c in hist.items()]
    return Result(payload, ["weight", "count"], rows, True,
                  json.dumps({"points": ls.size, "scattered": ls.is_scattered}, sort_keys=True))


def cmd_witness(cfg: RunConfig, ctx: FieldCtx) -> Result:
    rep = families.find_witness_m(ctx, cfg.t)
    payload = rep.as_dict()
    ok = True
    if rep.m is not None:
        c = families.classify_m(ctx, cfg.t, 1, rep.m)
        flags = {"in_S_q-1": c.in_S_q_minus_1, "in_S_q+1": c.in_S_q_plus_1, "norm_one": c.norm_one}
        payload["exclusion_flags"] = flags
        ok = not any(flags.values())
        rows = [["m", rep.m]] + [[k, v] for k, v in flags.items()]
    else:
        rows = [["m", "none"]]
    rows.append(["union_size", rep.union_size])
    rows.append(["union_bound_below_q^t-1", rep.bound_holds])
    return Result(payload, ["quantity", "value"], rows, ok)


def cmd_field_info(cfg: RunConfig, ctx: FieldCtx) -> Result:
    payload = {
        "descriptor": ctx.descriptor(),
        "p": ctx.p,
        "q": ctx.q,
        "n": ctx.n,
        "degree_over_Fp": ctx.degree,
        "order": ctx.order,
        "generator": ctx.generator,
        "tables": ctx.has_tables,
    }
    rows = [[k, v] for k, v in payload.items()]
    return Result(payload, ["quantity", "value"], rows)


HANDLERS = {
    "sweep-m": cmd_sweep_m,
    "stabilizer": cmd_stabilizer,
    "equiv": cmd_equiv,
    "rank-spectrum": cmd_rank_spectrum,
    "weights": cmd_weights,
    "witness": cmd_witness,
    "field-info": cmd_field_info,
}


# -- output ------------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    raise TypeError(f"not serializable: {type(v)}")


def render(cfg: RunConfig, ctx: FieldCtx, res: Result) -> str:
    head = {"version": __version__, "field": ctx.descriptor(), "config": cfg.echo()}
    if cfg.format == "json":
        doc = {"header": head, "ok": res.ok, "result": res.payload}
        return json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n"
    lines = [f"# scatpoly {head['version']}", f"# field {head['field']}", f"# config {head['config']}"]
    if cfg.format == "csv":
        body = formats.to_csv(res.header or [], res.rows or [])
    else:
        body = formats.to_text_table(res.header or [], res.rows or [])
    tail = []
    if res.summary:
        tail.append(f"# summary {res.summary}")
    tail.append(f"# status {'OK' if res.ok else 'DISAGREEMENT'}")
    return "\n".join(lines) + "\n" + body + "\n".join(tail) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="characteristic (odd prime)")
    common.add_argument("--eps", type=int, default=1, help="q = p^eps")
    common.add_argument("--t", type=int, default=3, help="half degree; the field is GF(q^(2t))")
    common.add_argument("--J", type=int, default=1, help="sigma = q^J, gcd(J, 2t) = 1")
    common.add_argument("--m-index", type=int, default=None, help="element index of m")
    common.add_argument("--family", action="append", default=None,
                        help="family descriptor, e.g. phi:t=3,J=1,m=2 or pr:6,1 (repeatable)")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="largest solution space searched exhaustively")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    ap = argparse.ArgumentParser(prog="scatpoly", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"scatpoly {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "sweep-m": "classify and brute-force check phi_{m,sigma} for every m",
        "stabilizer": "graph stabilizer, closed form (t > 4) and right idealizer",
        "equiv": "decide equivalence of two family descriptors",
        "rank-spectrum": "rank distribution of the code <X, f>",
        "weights": "linear set size and weight histogram",
        "witness": "smallest m outside S_{q-1}, S_{q+1} and the norm-one set",
        "field-info": "field descriptor, generator and sizes",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(message)s")
    cfg = RunConfig.from_args(ns)
    try:
        cfg.validate()
        ctx = _field(cfg)
        res = HANDLERS[cfg.command](cfg, ctx)
    except (ParameterError, ValueError) as e:
        print(f"scatpoly: error: {e}", file=sys.stderr)
        return 2
    except ResourceError as e:
        print(f"scatpoly: budget exceeded: {e}", file=sys.stderr)
        return 3
    except ScatpolyError as e:
        print(f"scatpoly: self-check failed: {e}", file=sys.stderr)
        return 1
    text = render(cfg, ctx, res)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not res.ok:
        print("scatpoly: disagreement found; see output", file=sys.stderr)
    return 0 if res.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())

"""Text forms shared by the CLI: family descriptors and table writers.

Family descriptors name a polynomial over a given field:

    phi:t=<t>,J=<J>,m=<idx>     X^(s^(t-1)) + X^(s^(2t-1)) + m (X^s - X^(s^(t+1)))
    pr:<n>,<s>                  X^(q^s)
    lp:<n>,<s>,delta=<idx>      X^(q^(n-s)) + delta X^(q^s)
    psi:<t>,<s>,h=<idx>         the quadrinomial psi_{s,h}
    phiT:<t>,mu=<idx>           X^q + X^(q^(t+1)) + mu (X^(q^(2t-1)) - X^(q^(t-1)))
    poly:<q-poly text>          any q-polynomial, e.g. "poly:q-poly n=6 [1:1]"

Element arguments are element indices.
"""

from __future__ import annotations

import csv
import io
import json
import re

from . import families
from .errors import ParameterError
from .gfield import FieldCtx
from .linpoly import LinPoly

_KINDS = ("phi", "pr", "lp", "psi", "phiT", "poly")


def parse_fields(body: str) -> tuple[list[int], dict[str, int]]:
    pos, named = [], {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        if "=" in item:
            k, v = item.split("=", 1)
            named[k.strip()] = int(v)
        else:
            pos.append(int(item))
    return pos, named


def check_descriptor(text: str) -> str:
    """Syntax check without a field; returns the family kind."""
    m = re.fullmatch(r"\s*(\w+)\s*:(.*)", text)
    if not m or m.group(1) not in _KINDS:
        raise ParameterError(f"bad family descriptor {text!r}; kinds are {', '.join(_KINDS)}")
    kind, body = m.group(1), m.group(2)
    if kind == "poly":
        return kind
    try:
        pos, named = parse_fields(body)
    except ValueError:
        raise ParameterError(f"non-integer field in descriptor {text!r}") from None
    shape = {
        "phi": (0, {"t", "J", "m"}),
        "pr": (2, set()),
        "lp": (2, {"delta"}),
        "psi": (2, {"h"}),
        "phiT": (1, {"mu"}),
    }[kind]
    if len(pos) != shape[0] or set(named) != shape[1]:
        raise ParameterError(f"descriptor {text!r} does not match the {kind} form")
    return kind


def parse_family(ctx: FieldCtx, text: str) -> LinPoly:
    kind = check_descriptor(text)
    body = text.split(":", 1)[1]
    if kind == "poly":
        return LinPoly.parse(ctx, body)
    pos, named = parse_fields(body)

    def need_n(n: int) -> None:
        if n != ctx.n:
            raise ParameterError(f"descriptor {text!r} has n={n}, field has n={ctx.n}")

    if kind == "phi":
        return families.phi(ctx, named["t"], named["J"], named["m"])
    if kind == "pr":
        need_n(pos[0])
        return families.pseudoregulus(ctx, pos[1])
    if kind == "lp":
        need_n(pos[0])
        return families.lunardon_polverino(ctx, pos[1], named["delta"])
    if kind == "psi":
        need_n(2 * pos[0])
        return families.quadrinomial_psi(ctx, pos[1], named["h"])[0]
    need_n(2 * pos[0])
    return families.phi_adjoint_form(ctx, pos[0], named["mu"])


def to_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def to_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def to_text_table(header: list[str], rows) -> str:
    cells = [[str(h) for h in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"

"""Preset root/torus data and JSON (de)serialization.

A preset bundles a prime p, a field degree k, a root datum and the pro-p
structure constants.  Built-ins: gl2, gl3, pgl2 (and sl2-like, which is
deliberately outside the supported valuation case and must be rejected).

File format: one JSON document with integer entries only,

    {"name": ..., "p": ..., "field_degree": ...,
     "lattice": {"rank": r},
     "roots": {"simple_roots": [...], "simple_coroots": [...]},
     "zkappa": {"orders": [...], "weyl_action": [matrix per simple],
                "ns_squared": [exponent vector per simple]},
     "lambda_s": [lattice vector per simple],
     "subgroups": {"z_alpha": [[exponent vectors] per simple]},
     "omega": [[lattice vector, word], ...]}

Torsion elements are exponent vectors over the Z_kappa generators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .gf import GF, get_field
from .propweyl import ProPDatum
from .roots import RootDatum


@dataclass
class Preset:
    name: str
    p: int
    field_degree: int
    datum: ProPDatum

    @property
    def field(self) -> GF:
        return get_field(self.p, self.field_degree)

    def with_field_degree(self, k: int) -> "Preset":
        return Preset(self.name, self.p, k, self.datum)


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b) if a and b else a or b


def validate_field(p: int, k: int, zk_orders) -> None:
    exponent = 1
    for o in zk_orders:
        exponent = _lcm(exponent, o)
    if exponent and (p**k - 1) % exponent:
        raise ValueError(
            f"F_{p}^{k} has no characters of order {exponent}; raise the field degree"
        )


def _gl_preset(n: int, p: int, field_degree: int) -> Preset:
    rank = n
    simples = []
    cosimples = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        simples.append(tuple(v))
        cosimples.append(tuple(v))
    datum = RootDatum(rank, simples, cosimples, name=f"gl{n}")
    orders = [p - 1] * n
    half = (p - 1) // 2  # exponent of -1 in F_p^*
    zk_act = []
    ns_sq = []
    lambda_s = []
    z_gens = []
    for i in range(n - 1):
        m = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        m[i][i] = m[i + 1][i + 1] = 0
        m[i][i + 1] = m[i + 1][i] = 1
        zk_act.append(m)
        sq = [0] * n
        sq[i] = sq[i + 1] = half
        ns_sq.append(sq)
        ls = [0] * n
        ls[i + 1] = 1
        lambda_s.append(ls)
        g = [0] * n
        g[i], g[i + 1] = 1, p - 2
        z_gens.append([g])
    pd = ProPDatum(datum, p, orders, zk_act, ns_sq, lambda_s, z_gens, name=f"gl{n}")
    validate_field(p, field_degree, orders)
    return Preset(f"gl{n}", p, field_degree, pd)


def _pgl2_preset(p: int, field_degree: int) -> Preset:
    datum = RootDatum(1, [(1,)], [(2,)], name="pgl2")
    orders = [p - 1]
    zk_act = [[[-1]]]
    ns_sq = [[0]]
    lambda_s = [[-1]]
    z_gens = [[[2]]]
    pd = ProPDatum(datum, p, orders, zk_act, ns_sq, lambda_s, z_gens, name="pgl2")
    validate_field(p, field_degree, orders)
    return Preset("pgl2", p, field_degree, pd)


def _sl2_like_preset(p: int, field_degree: int) -> Preset:
    # Lambda = Z alpha-check: the pairing image is 2Z; ProPDatum must reject it
    datum = RootDatum(1, [(2,)], [(1,)], name="sl2-like")
    orders = [p - 1]
    zk_act = [[[-1]]]
    ns_sq = [[(p - 1) // 2]]
    lambda_s = [[0]]  # no lattice point pairs to -1; placeholder
    z_gens = [[[1]]]
    pd = ProPDatum(datum, p, orders, zk_act, ns_sq, lambda_s, z_gens, name="sl2-like")
    validate_field(p, field_degree, orders)
    return Preset("sl2-like", p, field_degree, pd)


BUILTINS = {
    "gl2": lambda p, k: _gl_preset(2, p, k),
    "gl3": lambda p, k: _gl_preset(3, p, k),
    "pgl2": _pgl2_preset,
    "sl2-like": _sl2_like_preset,
}


def load_preset(name_or_path: str, p: int = 5, field_degree: int = 1) -> Preset:
    """A built-in preset by name, or a JSON preset file by path."""
    if name_or_path in BUILTINS:
        return BUILTINS[name_or_path](p, field_degree)
    with open(name_or_path) as fh:
        doc = json.load(fh)
    return preset_from_dict(doc)


def preset_from_dict(doc: dict) -> Preset:
    try:
        name = doc["name"]
        p = int(doc["p"])
        k = int(doc.get("field_degree", 1))
        rank = int(doc["lattice"]["rank"])
        simples = [tuple(v) for v in doc["roots"]["simple_roots"]]
        cosimples = [tuple(v) for v in doc["roots"]["simple_coroots"]]
        orders = [int(o) for o in doc["zkappa"]["orders"]]
        zk_act = doc["lifts"]["weyl_action"]
        ns_sq = doc["lifts"]["ns_squared"]
        lambda_s = doc["lambda_s"]
        z_gens = doc["subgroups"]["z_alpha"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed preset document: missing field {exc}") from exc
    datum = RootDatum(rank, simples, cosimples, name=name)
    pd = ProPDatum(datum, p, orders, zk_act, ns_sq, lambda_s, z_gens, name=name)
    validate_field(p, k, orders)
    return Preset(name, p, k, pd)


def preset_to_dict(preset: Preset) -> dict:
    d = preset.datum
    return {
        "name": preset.name,
        "p": preset.p,
        "field_degree": preset.field_degree,
        "lattice": {"rank": d.rank},
        "roots": {
            "simple_roots": [list(a) for a in d.datum.simple_roots],
            "simple_coroots": [list(a) for a in d.datum.simple_coroots],
        },
        "zkappa": {"orders": list(d.zk_orders)},
        "lifts": {
            "weyl_action": [[list(r) for r in m] for m in d.zk_act_simple],
            "ns_squared": [list(v) for v in d.ns_sq],
        },
        "lambda_s": [list(v) for v in d.lambda_s],
        "subgroups": {"z_alpha": [[list(g) for g in gens] for gens in d.z_sub_gens]},
    }

"""Levi Hecke algebras, the embeddings j^+/j^- and their verifications.

A Levi algebra is the Hecke construction run over the subsystem of a subset
Theta of the simple roots, with its parameters expressed in the ambient
q-classes (one shared coefficient ring).  The embeddings send the T-basis
(positive cone) resp. the T*-basis (negative cone) to their ambient
counterparts.
"""

from __future__ import annotations

import itertools

from .hecke import HeckeAlgebra, HElt
from .propweyl import PPW
from .roots import dot


class LeviAlgebra(HeckeAlgebra):
    """H_M for the Levi of type Theta, over the ambient coefficient ring."""

    def __init__(self, ambient: HeckeAlgebra, theta):
        super().__init__(ambient.dat, ambient.field, theta=theta, ring=ambient.ring)
        self.ambient = ambient
        self._lambda0 = {}

    def lambda0(self, sign: str) -> PPW:
        """A central (in W~_M(1)) lattice element with strictly positive
        ('-') or strictly negative ('+') pairings outside Sigma_M."""
        if sign in self._lambda0:
            return self._lambda0[sign]
        dat = self.dat
        theta = self.theta_set
        outside = [
            a for i, a in enumerate(dat.datum.simple_roots) if i not in theta
        ]
        inside = [dat.datum.simple_roots[i] for i in sorted(theta)]
        want = 1 if sign == "-" else -1
        best = None
        for r in range(1, 4 * dat.rank + 1):
            for v in itertools.product(range(-r, r + 1), repeat=dat.rank):
                if all(dot(v, b) == 0 for b in inside) and all(
                    want * dot(v, a) > 0 for a in outside
                ):
                    if best is None or sum(abs(c) for c in v) < sum(
                        abs(c) for c in best
                    ):
                        best = tuple(v)
            if best is not None:
                break
        assert best is not None, "no strictly signed central element"
        x = dat.from_lattice(best)
        for s in sorted(theta):
            assert dat.conj(dat.lift_w(dat.W.simple(s)), x) == x
        self._lambda0[sign] = x
        return x

    def is_signed_support(self, h: HElt, sign: str) -> bool:
        return all(
            self.dat.is_M_signed(x, self.theta_set, sign) for x in h.terms
        )

    def j_embed(self, sign: str, h: HElt) -> HElt:
        """j_M^+ (T-basis on the positive cone) or j_M^- (T*-basis on the
        negative cone) into the ambient algebra."""
        amb = self.ambient
        if sign == "+":
            if not self.is_signed_support(h, "+"):
                raise ValueError("support is not M-positive")
            out = amb.zero
            for x, c in h.terms.items():
                out = out + amb.T(x).scale(c)
            return out
        coeffs = self.expand(h, "Tstar")
        out = amb.zero
        for x, c in coeffs.items():
            if not self.dat.is_M_signed(x, self.theta_set, "-"):
                raise ValueError("support is not M-negative")
            out = out + amb.t_star(x).scale(c)
        return out


def verify_levi(levi: LeviAlgebra, kind: str, seed: int = 0, max_pairing: int = 2):
    """Levi-specific verification sweeps; returns check records."""
    runner = {
        "q-compat": _verify_q_compat,
        "bruhat-cone": _verify_bruhat_cone,
        "localization": _verify_localization,
        "split-length": _verify_split_length,
        "j-homomorphism": _verify_j_hom,
        "star-factorization": _verify_star_factorization,
    }[kind]
    return runner(levi, seed, max_pairing)


def all_levi_kinds():
    return [
        "q-compat",
        "bruhat-cone",
        "localization",
        "split-length",
        "j-homomorphism",
        "star-factorization",
    ]


def _check(relation, instance, ok):
    return {
        "relation": relation,
        "instance": instance,
        "status": "pass" if ok else "fail",
    }


def _signed_samples(levi: LeviAlgebra, sign: str, seed: int, count: int):
    import random

    dat = levi.dat
    rng = random.Random(seed)
    out = []
    wm = sorted(levi.wm)
    tries = 0
    while len(out) < count and tries < 4000:
        tries += 1
        x = PPW(
            tuple(rng.randrange(o) for o in dat.zk_orders),
            tuple(rng.randrange(-2, 3) for _ in range(dat.rank)),
            rng.choice(wm),
        )
        if dat.is_M_signed(x, levi.theta_set, sign):
            out.append(x)
    return out


def _verify_q_compat(levi, seed, max_pairing):
    """q_{xy}^{-1} q_x q_y = q_{M,xy}^{-1} q_{M,x} q_{M,y} on signed pairs."""
    amb = levi.ambient
    checks = []
    for sign in ("+", "-"):
        xs = _signed_samples(levi, sign, seed, 12)
        for a, b in zip(xs, xs[1:]):
            ab = levi.dat.mul(a, b)
            lhs = tuple(
                x + y - z
                for x, y, z in zip(
                    amb.sub.q_exponents(a), amb.sub.q_exponents(b), amb.sub.q_exponents(ab)
                )
            )
            rhs = tuple(
                x + y - z
                for x, y, z in zip(
                    levi.sub.q_exponents(a),
                    levi.sub.q_exponents(b),
                    levi.sub.q_exponents(ab),
                )
            )
            checks.append(
                _check("q-compat", f"{sign} {a} {b}", lhs == rhs)
            )
    return checks


def _verify_bruhat_cone(levi, seed, max_pairing):
    """M-signed elements are downward closed in the Bruhat order of W~_M(1)."""
    dat = levi.dat
    checks = []
    wm = sorted(levi.wm)
    ball = []
    rng = range(-1, 2)
    for lam in itertools.product(rng, repeat=dat.rank):
        for w in wm:
            ball.append(PPW((0,) * dat.nz, lam, w))
    for sign in ("+", "-"):
        signed = [x for x in ball if dat.is_M_signed(x, levi.theta_set, sign)]
        count = 0
        ok = True
        for b in signed:
            if levi.sub.length(b) > 3:
                continue
            for a in ball:
                if levi.sub.bruhat_leq_1(a, b):
                    count += 1
                    if not dat.is_M_signed(a, levi.theta_set, sign):
                        ok = False
        checks.append(_check("bruhat-cone", f"sign {sign} ({count} pairs)", ok))
    return checks


def _verify_localization(levi, seed, max_pairing):
    """E^M(lambda_0^-) is central in H_M and invertible."""
    dat = levi.dat
    checks = []
    lam0 = levi.lambda0("-")
    e0 = levi.E(lam0)
    checks.append(
        _check("localization", "E(lambda_0^-) is a unit monomial basis element",
               len(e0.terms) == 1 and levi.sub.length(lam0) == 0)
    )
    gens = [g for _, g in levi.generator_list()]
    ok = True
    for g in gens:
        if levi.mul(e0, levi.T(g)) != levi.mul(levi.T(g), e0):
            ok = False
    checks.append(_check("localization", "centrality on generators", ok))
    inv = levi.inv_basis(lam0)
    checks.append(
        _check(
            "localization",
            "invertibility",
            levi.mul(e0, inv.scale(levi.q_half(lam0))) == levi.one
            or levi.mul(e0, inv) == levi.one,
        )
    )
    return checks


def _verify_split_length(levi, seed, max_pairing):
    """l(n_{w1 w2} lam) = l(n_{w1}) + l(n_{w2} lam) for w1 in W^M, w2 in W_M,
    lam M-negative; and T*_{n_{w1}} E_-(n_{w2} lam) = E_-(n_{w1 w2} lam)."""
    dat, amb = levi.dat, levi.ambient
    W = dat.W
    checks = []
    reps = W.min_coset_reps(levi.theta_set)
    wms = sorted(levi.wm)
    negs = [
        x
        for x in _signed_samples(levi, "-", seed, 20)
        if x.w == 0
    ][:6]
    if not negs:
        negs = [dat.one]
    for w1 in reps:
        for w2 in wms:
            for lam in negs:
                prod_w = W.mul(w1, w2)
                x_big = dat.mul(dat.lift_w(prod_w), lam)
                x_small = dat.mul(dat.lift_w(w2), lam)
                ok_len = amb.sub.length(x_big) == W.length[w1] + amb.sub.length(x_small)
                lhs = amb.mul(amb.t_star(dat.lift_w(w1)), amb.E_minus(x_small))
                rhs = amb.E_minus(x_big)
                checks.append(
                    _check(
                        "split-length",
                        f"w1={w1} w2={w2} lam={lam.lam}{lam.t}",
                        ok_len and lhs == rhs,
                    )
                )
    return checks


def _verify_j_hom(levi, seed, max_pairing):
    """j_M^± are algebra homomorphisms matching E and E_- on their cones."""
    dat, amb = levi.dat, levi.ambient
    checks = []
    for sign in ("+", "-"):
        xs = _signed_samples(levi, sign, seed + 1, 10)
        for a, b in zip(xs, xs[1:]):
            ha, hb = levi.T(a), levi.T(b)
            lhs = levi.j_embed(sign, levi.mul(ha, hb))
            rhs = amb.mul(levi.j_embed(sign, ha), levi.j_embed(sign, hb))
            checks.append(
                _check("j-homomorphism", f"{sign} mult {a} {b}", lhs == rhs)
            )
        for a in xs[:6]:
            if sign == "-":
                ok = levi.j_embed(sign, levi.E(a)) == amb.E(a) and levi.j_embed(
                    sign, levi.E_minus(a)
                ) == amb.E_minus(a)
            else:
                ok = levi.j_embed(sign, levi.E(a)) == amb.E(a) and levi.j_embed(
                    sign, levi.E_minus(a)
                ) == amb.E_minus(a)
            checks.append(_check("j-homomorphism", f"{sign} E-compat {a}", ok))
    return checks


def _verify_star_factorization(levi, seed, max_pairing):
    """T* is multiplicative along length-additive factorizations."""
    import random

    dat, amb = levi.dat, levi.ambient
    rng = random.Random(seed)
    checks = []
    for _ in range(10):
        x = PPW(
            tuple(rng.randrange(o) for o in dat.zk_orders),
            tuple(rng.randrange(-1, 2) for _ in range(dat.rank)),
            rng.randrange(dat.W.size),
        )
        y = PPW((0,) * dat.nz, (0,) * dat.rank, rng.randrange(dat.W.size))
        xy = dat.mul(x, y)
        if amb.sub.length(xy) != amb.sub.length(x) + amb.sub.length(y):
            continue
        lhs = amb.t_star(xy)
        rhs = amb.mul(amb.t_star(x), amb.t_star(y))
        checks.append(_check("star-factorization", f"{x} {y}", lhs == rhs))
    return checks


def run_all_levi(amb: HeckeAlgebra, seed: int = 0):
    """Levi sweeps over every proper standard Levi (plus the torus)."""
    out = []
    nsimple = amb.dat.datum.nsimple
    thetas = []
    for r in range(nsimple):
        for theta in itertools.combinations(range(nsimple), r):
            thetas.append(frozenset(theta))
    for theta in thetas:
        levi = LeviAlgebra(amb, theta)
        for kind in all_levi_kinds():
            for rec in verify_levi(levi, kind, seed=seed):
                rec["instance"] = f"theta={sorted(theta)} " + rec["instance"]
                out.append(rec)
    return out

"""The Hecke algebra over the half-power Laurent ring.

One ``HeckeAlgebra`` instance serves both the ambient algebra and the Levi
algebras: a Levi is the same construction run over a subsystem, with its
parameters mapped into the ambient q-classes (so all algebras share one
coefficient ring).  Elements are sparse T-basis combinations with Laurent
coefficients; the localized elements theta and T^{-1} may carry negative
exponents, everything landing back in the algebra is integrality-checked.

The multiplication implements the braid relations together with the
quadratic relation T_n^2 = q_s T_{n^2} + c_n T_n; the torsion-corrected
right-hand side (with n^2 in Z_kappa) is forced by consistency with the
T* and inverse formulas.
"""

from __future__ import annotations

from .gf import GF
from .laurent import Laurent, LaurentRing
from .propweyl import PPW, ProPDatum
from .roots import _root_sign, dot, vneg


class HElt:
    """Sparse element: dict PPW -> Laurent, no zero coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    def __add__(self, other):
        if other.alg is not self.alg:
            raise ValueError("elements of different algebras")
        out = dict(self.terms)
        for x, c in other.terms.items():
            s = out.get(x)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(x, None)
            else:
                out[x] = s
        return HElt(self.alg, out)

    def __neg__(self):
        return HElt(self.alg, {x: -c for x, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HElt):
            return self.alg.mul(self, other)
        return self.scale(other)

    def scale(self, c: Laurent):
        if c.is_zero():
            return self.alg.zero
        return HElt(self.alg, {x: v * c for x, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, HElt) and self.terms == other.terms

    def is_integral(self):
        return all(c.is_integral() for c in self.terms.values())

    def at_q_zero(self):
        """dict PPW -> field scalar under q_s^{1/2} -> 0."""
        out = {}
        for x, c in self.terms.items():
            v = c.at_q_zero()
            if v:
                out[x] = v
        return out

    def support_sorted(self):
        return sorted(self.terms, key=lambda x: (self.alg.sub.length(x), x))

    def __repr__(self):
        bits = [f"({c})*T[{x}]" for x, c in sorted(self.terms.items())]
        return " + ".join(bits) if bits else "0"


class HeckeAlgebra:
    """T-basis Hecke algebra of a subsystem, over the ambient Laurent ring."""

    def __init__(self, dat: ProPDatum, field: GF, theta=None, ring: LaurentRing | None = None):
        self.dat = dat
        self.field = field
        self.theta_set = (
            frozenset(range(dat.datum.nsimple)) if theta is None else frozenset(theta)
        )
        self.sub = dat.subsystem(self.theta_set)
        self.ring = ring if ring is not None else LaurentRing(field, max(dat.nclasses, 1))
        self.zero = HElt(self, {})
        self.one = HElt(self, {dat.one: self.ring.one})
        self.wm = set(dat.W.subgroup_elements(self.theta_set))
        self._q_saff = [self.ring.monomial(self.sub.q_exponents(e.lift)) for e in self.sub.saff]
        self._c_saff = [self._c_for_entry(e) for e in self.sub.saff]
        self._leftword = {}
        self._mulq = {}
        self._theta_cache = {}
        self._E_cache = {}
        self._Eo_cache = {}
        self._Em_cache = {}
        self._tstar_cache = {}
        self._inv_cache = {}
        self._antidom = None

    # --- constructors ---
    def T(self, x: PPW) -> HElt:
        assert x.w in self.wm, "element outside the subsystem"
        return HElt(self, {x: self.ring.one})

    def scalar(self, c) -> HElt:
        if isinstance(c, int):
            c = self.ring.scalar(self.field.from_int(c))
        if c.is_zero():
            return self.zero
        return HElt(self, {self.dat.one: c})

    def from_group_algebra(self, coeffs: dict) -> HElt:
        """Z_kappa group-algebra element: dict torsion-tuple -> field scalar."""
        out = {}
        for t, c in coeffs.items():
            if c:
                out[self.dat.from_torsion(t)] = self.ring.scalar(c)
        return HElt(self, out)

    # --- c elements ---
    def _c_for_entry(self, entry):
        gens = self.dat.z_subgroup(entry.root, entry.k)
        elems = self.dat.subgroup_elements(gens)
        scalar = self.field.neg(self.field.inv(self.field.from_int(len(elems))))
        return (scalar, elems)

    def c_of_entry(self, i: int) -> HElt:
        scalar, elems = self._c_saff[i]
        return self.from_group_algebra({t: scalar for t in elems})

    def c_elem(self, s: int, k: int) -> HElt:
        """c_{n_s, k}: support Z_{(alpha,k),kappa}, mod-p normalized."""
        alpha = self.dat.datum.simple_roots[s]
        gens = self.dat.z_subgroup(alpha, k)
        elems = self.dat.subgroup_elements(gens)
        scalar = self.field.neg(self.field.inv(self.field.from_int(len(elems))))
        return self.from_group_algebra({t: scalar for t in elems})

    def q_of(self, x: PPW) -> Laurent:
        return self.ring.monomial(self.sub.q_exponents(x))

    def q_half(self, x: PPW, negate=False) -> Laurent:
        e = self.sub.q_exponents(x)
        h = tuple(v // 2 for v in e)
        assert all(v % 2 == 0 for v in e)
        return self.ring.monomial(tuple(-v for v in h) if negate else h)

    # --- multiplication ---
    def _left_word(self, y: PPW):
        if y not in self._leftword:
            self._leftword[y] = self.sub.left_word(y)
        return self._leftword[y]

    def mul(self, h1: HElt, h2: HElt) -> HElt:
        if h1.alg is not self or h2.alg is not self:
            raise ValueError("elements of different algebras")
        out = self.zero
        for y, cy in h2.terms.items():
            part = self._mul_right_basis(h1, y)
            out = out + part.scale(cy)
        return out

    def _mul_right_basis(self, h: HElt, y: PPW) -> HElt:
        word, u = self._left_word(y)
        cur = h
        for i in word:
            cur = self._mul_saff(cur, i)
        if u != self.dat.one:
            cur = HElt(
                self, {self.dat.mul(x, u): c for x, c in cur.terms.items()}
            )
        return cur

    def _mul_saff(self, h: HElt, i: int) -> HElt:
        dat = self.dat
        entry = self.sub.saff[i]
        lift = entry.lift
        lift_inv = dat.inv(lift)
        qv = self._q_saff[i]
        scalar, elems = self._c_saff[i]
        out: dict = {}

        def add(x, c):
            s = out.get(x)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(x, None)
            else:
                out[x] = s

        for x, cx in h.terms.items():
            key = (x, i)
            res = self._mulq.get(key)
            if res is None:
                xs = dat.mul(x, lift)
                if self.sub.length(xs) > self.sub.length(x):
                    res = ((xs, self.ring.one),)
                else:
                    items = [(xs, qv)]
                    cc = self.ring.scalar(scalar)
                    for t in elems:
                        z = dat.mul(x, dat.conj(lift_inv, dat.from_torsion(t)))
                        items.append((z, cc))
                    res = tuple(items)
                self._mulq[key] = res
            for z, c in res:
                add(z, cx * c)
        return HElt(self, out)

    # --- inverses and the star basis ---
    def inv_basis(self, x: PPW) -> HElt:
        """T_x^{-1} in the localization."""
        if x in self._inv_cache:
            return self._inv_cache[x]
        dat = self.dat
        u, word = self.sub.decompose(x)
        out = self.one
        for i in reversed(word):
            entry = self.sub.saff[i]
            lift = entry.lift
            sq = dat.mul(lift, lift)
            sq_inv = dat.inv(sq)
            n_inv = dat.inv(lift)
            qinv = self._q_saff[i].inv_monomial()
            scalar, elems = self._c_saff[i]
            terms = {n_inv: qinv}
            cc = self.ring.scalar(self.field.neg(scalar)) * qinv
            for t in elems:
                z = dat.mul(dat.from_torsion(t), sq_inv)
                prev = terms.get(z)
                add = cc
                terms[z] = add if prev is None else prev + add
            step = HElt(self, {k: v for k, v in terms.items() if not v.is_zero()})
            out = self.mul(out, step)
        if u != dat.one:
            out = self.mul(out, self.T(dat.inv(u)))
        self._inv_cache[x] = out
        return out

    def t_star(self, x: PPW) -> HElt:
        """T*_x = q_x T_{x^{-1}}^{-1}."""
        if x not in self._tstar_cache:
            res = self.inv_basis(self.dat.inv(x)).scale(self.q_of(x))
            assert res.is_integral(), "T* left the algebra: datum inconsistency"
            self._tstar_cache[x] = res
        return self._tstar_cache[x]

    # --- theta and the Bernstein bases ---
    def strictly_antidominant(self):
        """A lattice vector pairing < 0 with every subsystem positive root."""
        if self._antidom is None:
            if not self.sub.positive:
                self._antidom = (0,) * self.dat.rank
            else:
                import itertools

                best = None
                for r in range(1, self.dat.rank * 3 + 1):
                    for v in itertools.product(range(-r, r + 1), repeat=self.dat.rank):
                        if all(dot(v, a) < 0 for a in self.sub.positive):
                            cand = tuple(v)
                            if best is None or sum(abs(c) for c in cand) < sum(
                                abs(c) for c in best
                            ):
                                best = cand
                    if best is not None:
                        break
                assert best is not None
                self._antidom = best
        return self._antidom

    def is_antidominant(self, lam) -> bool:
        return all(dot(lam, a) <= 0 for a in self.sub.positive)

    def theta(self, lam_elt: PPW) -> HElt:
        """theta(lambda) = q_lambda^{-1/2} E(lambda), computed from the
        anti-dominant decomposition; lives in the localization."""
        assert lam_elt.w == 0, "theta is defined on Lambda(1)"
        if lam_elt in self._theta_cache:
            return self._theta_cache[lam_elt]
        dat = self.dat
        lam0 = self.strictly_antidominant()
        n = 0
        lam = lam_elt.lam
        while not self.is_antidominant(lam):
            lam = tuple(a + b for a, b in zip(lam, lam0))
            n += 1
        lam1 = dat.mul(lam_elt, dat._ppw_pow(dat.from_lattice(lam0), n))
        lam2 = dat._ppw_pow(dat.from_lattice(lam0), n)
        h = self.T(lam1).scale(self.q_half(lam1, negate=True))
        if n:
            h = self.mul(h, self.inv_basis(lam2).scale(self.q_half(lam2)))
        self._theta_cache[lam_elt] = h
        return h

    def E(self, x: PPW) -> HElt:
        """E(x) = E_{-Delta}(x) = q_x^{1/2} q_{n_w}^{-1/2} theta(lambda) T_{n_w}."""
        if x in self._E_cache:
            return self._E_cache[x]
        dat = self.dat
        lam_part = PPW(x.t, x.lam, 0)
        nw = dat.lift_w(x.w)
        h = self.mul(self.theta(lam_part), self.T(nw))
        h = h.scale(self.q_half(x) * self.q_half(nw, negate=True))
        assert h.is_integral(), "E(x) not integral: datum inconsistency"
        self._E_cache[x] = h
        return h

    def E_oriented(self, v: int, x: PPW) -> HElt:
        """E_{Delta'}(x) for the orientation Delta' = v(-Delta) (v in W_M)."""
        key = (v, x)
        if key in self._Eo_cache:
            return self._Eo_cache[key]
        dat, W = self.dat, self.dat.W
        lam_part = PPW(x.t, x.lam, 0)
        nw = dat.lift_w(x.w)
        h = self.mul(self._E_oriented_lattice(v, lam_part), self._E_oriented_weyl(v, x.w))
        h = h.scale(
            self.q_half(x) * self.q_half(lam_part, negate=True) * self.q_half(nw, negate=True)
        )
        assert h.is_integral(), "E_{Delta'}(x) not integral"
        self._Eo_cache[key] = h
        return h

    def _E_oriented_lattice(self, v: int, lam_elt: PPW) -> HElt:
        # dominant w.r.t. Delta' = v(-Delta): pairings with v(Sigma^-) >= 0
        dat, W = self.dat, self.dat.W
        lam0 = tuple(W.act(v, self.strictly_antidominant()))

        def dom(lam):
            return all(dot(lam, W.act_root(v, vneg(a))) >= 0 for a in self.sub.positive)

        lam = lam_elt.lam
        n = 0
        while not dom(lam):
            lam = tuple(a + b for a, b in zip(lam, lam0))
            n += 1
        lam1 = dat.mul(lam_elt, dat._ppw_pow(dat.from_lattice(lam0), n))
        lam2 = dat._ppw_pow(dat.from_lattice(lam0), n)
        h = self.T(lam1).scale(self.q_half(lam1, negate=True))
        if n:
            h = self.mul(h, self.inv_basis(lam2).scale(self.q_half(lam2)))
        # q_lambda^{1/2} theta'(lambda) = E_{Delta'}(lambda)
        return h.scale(self.q_half(lam_elt))

    def _E_oriented_weyl(self, v: int, w: int) -> HElt:
        """E_{Delta'}(n_w) along a reduced word, twisting the orientation."""
        dat, W = self.dat, self.dat.W
        out = self.one
        vv = v
        ww = w
        while ww != 0:
            s = next(
                s
                for s in sorted(self.theta_set)
                if W.length[W.s_mult[s][ww]] < W.length[ww]
            )
            # first letter s of a reduced word of ww; alpha_s is negative for
            # the system attached to Delta' = v(-Delta) iff v^{-1}(alpha_s) > 0,
            # and then E_{Delta'}(n_s) = T_{n_s}, else T*_{n_s}
            alpha = dat.datum.simple_roots[s]
            ns = dat.lift_w(W.simple(s))
            if _root_sign(W.act_root(W.inverse[vv], alpha)) > 0:
                step = self.T(ns)
            else:
                step = self.T(ns) - self.c_of_entry(self._saff_index_of_simple(s))
            out = self.mul(out, step)
            vv = W.mul(W.simple(s), vv)
            ww = W.s_mult[s][ww]
        return out

    def _saff_index_of_simple(self, s: int) -> int:
        for i, e in enumerate(self.sub.saff):
            if e.k == 0 and e.root == self.dat.datum.simple_roots[s]:
                return i
        raise KeyError(s)

    def E_minus(self, x: PPW) -> HElt:
        """E_-(n_w lambda) = q_{n_w lambda}^{1/2} q_{n_w}^{-1/2} T*_{n_w} theta(lambda)."""
        if x in self._Em_cache:
            return self._Em_cache[x]
        dat = self.dat
        nw = dat.lift_w(x.w)
        lam_part = dat.conj(dat.inv(nw), PPW(x.t, x.lam, 0))
        h = self.mul(self.t_star(nw), self.theta(lam_part))
        h = h.scale(self.q_half(x) * self.q_half(nw, negate=True))
        assert h.is_integral(), "E_-(x) not integral"
        self._Em_cache[x] = h
        return h

    # --- basis conversions ---
    def expand(self, h: HElt, basis: str, v: int = 0) -> dict:
        """Coefficients of h in the given basis: 'T', 'Tstar', 'E', 'Eminus',
        or 'Eorient' with orientation twist v.  Triangular elimination."""
        builders = {
            "T": self.T,
            "Tstar": self.t_star,
            "E": self.E,
            "Eminus": self.E_minus,
            "Eorient": lambda x: self.E_oriented(v, x),
        }
        build = builders[basis]
        res = h
        out = {}
        guard = 0
        while not res.is_zero():
            guard += 1
            if guard > 100000:
                raise AssertionError("expansion did not terminate")
            x = max(res.terms, key=lambda z: (self.sub.length(z), z))
            c = res.terms[x]
            out[x] = c
            res = res - build(x).scale(c)
        return out

    def from_expansion(self, coeffs: dict, basis: str, v: int = 0) -> HElt:
        builders = {
            "T": self.T,
            "Tstar": self.t_star,
            "E": self.E,
            "Eminus": self.E_minus,
            "Eorient": lambda x: self.E_oriented(v, x),
        }
        build = builders[basis]
        out = self.zero
        for x, c in coeffs.items():
            out = out + build(x).scale(c)
        return out

    # --- generators (for module constructions) ---
    def generator_list(self):
        """Named generators: torsion, affine simple lifts, length-zero units."""
        dat = self.dat
        gens = []
        for i, o in enumerate(dat.zk_orders):
            t = tuple(1 if j == i else 0 for j in range(dat.nz))
            gens.append((f"t{i}", dat.from_torsion(t)))
        for i, e in enumerate(self.sub.saff):
            gens.append((f"n_{e.name}", e.lift))
        for j, u in enumerate(self.sub.omega_generators()):
            gens.append((f"u{j}", u))
            gens.append((f"u{j}_inv", dat.inv(u)))
        return gens

    # --- serialization ---
    def serialize(self, h: HElt):
        out = []
        for x in h.support_sorted():
            c = h.terms[x]
            out.append(
                {
                    "torsion": list(x.t),
                    "lattice": list(x.lam),
                    "weyl_word": list(self.dat.W.word[x.w]),
                    "coeff": c.serialize(),
                }
            )
        return out

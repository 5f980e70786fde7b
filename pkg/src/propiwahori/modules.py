"""Finite-dimensional right modules: parabolic induction in both
realizations, the extension to a bigger Levi, supersingularity, the
classification objects I(P, sigma, Q), and a Meataxe.

All modules are ``Representation`` instances over a ``HeckeAlgebra`` (the
ambient algebra or a Levi).  Parabolic induction is computed in the Hom
realization: a functional is stored by its values on the T*_{n_v},
v in W^M, and elements act after reduction through the E_- basis and the
negative-cone embedding.
"""

from __future__ import annotations

import itertools
import random

from . import linalg
from .hecke import HeckeAlgebra
from .levi import LeviAlgebra
from .propweyl import PPW
from .rep import (
    Representation,
    hom_space,
    is_isomorphic,
    qzero_of,
)
from .roots import dot


class FieldTooSmall(Exception):
    """Raised when a computation needs eigenvalues outside the field."""


def levi_algebra(amb: HeckeAlgebra, theta) -> LeviAlgebra:
    if not hasattr(amb, "_levi_cache"):
        amb._levi_cache = {}
    key = frozenset(theta)
    if key not in amb._levi_cache:
        amb._levi_cache[key] = LeviAlgebra(amb, key)
    return amb._levi_cache[key]


# ---------------------------------------------------------------------------
# parabolic induction (Hom realization)
# ---------------------------------------------------------------------------
class InducedModule(Representation):
    """I_P(sigma) = Hom_{H_M^-}(H, sigma) on the coordinates
    phi -> (phi(T*_{n_v}))_{v in W^M}."""

    def __init__(self, levi: LeviAlgebra, sigma: Representation, tag=""):
        self.levi = levi
        self.sigma = sigma
        amb = levi.ambient
        dat = amb.dat
        self.reps = dat.W.min_coset_reps(levi.theta_set)
        self.block = sigma.dim
        dim = len(self.reps) * self.block
        self.rep_index = {v: i for i, v in enumerate(self.reps)}
        F = sigma.F
        self._lam0 = levi.lambda0("-")
        self._lam0_mat = sigma.apply_elt(qzero_of(levi).E(self._lam0))
        self._lam0_inv = linalg.inverse(F, self._lam0_mat)
        assert self._lam0_inv is not None, "E(lambda_0^-) must act invertibly"
        self._reduce_cache = {}
        mats = {}
        for name, gen in amb.generator_list():
            mats[name] = self._action_matrix(amb, gen)
        super().__init__(amb, mats, dim, tag=tag or f"I({sigma.tag})")

    def _wm_split(self, w):
        W = self.levi.dat.W
        for v in self.reps:
            w2 = W.mul(W.inverse[v], w)
            if w2 in self.levi.wm:
                return v, w2
        raise AssertionError("coset split failed")

    def _reduce_Eminus(self, x: PPW):
        """phi(E_-(x)) as (v, matrix): the value is y_v . matrix."""
        if x in self._reduce_cache:
            return self._reduce_cache[x]
        levi, dat = self.levi, self.levi.dat
        sigma = self.sigma
        F = sigma.F
        v, w2 = self._wm_split(x.w)
        nw = dat.lift_w(x.w)
        lam_part = dat.conj(dat.inv(nw), PPW(x.t, x.lam, 0))
        out = None
        if dat.is_M_signed(lam_part, levi.theta_set, "-"):
            inner = dat.mul(dat.lift_w(w2), lam_part)
            out = (v, sigma.apply_elt(qzero_of(levi).E_minus(inner)))
        else:
            amb = levi.ambient
            n = 1
            while not dat.is_M_signed(
                dat.mul(lam_part, dat._ppw_pow(self._lam0, n)), levi.theta_set, "-"
            ):
                n += 1
            shift = dat._ppw_pow(self._lam0, n)
            shifted = dat.mul(x, shift)
            adds = amb.sub.length(shifted) == amb.sub.length(x) + amb.sub.length(shift)
            if not adds:
                out = (v, linalg.zeros(F, sigma.dim, sigma.dim))
            else:
                v2, mat2 = self._reduce_Eminus(shifted)
                assert v2 == v
                inv_n = self._lam0_inv
                for _ in range(n - 1):
                    inv_n = linalg.mat_mul(F, inv_n, self._lam0_inv)
                out = (v, linalg.mat_mul(F, mat2, inv_n))
        self._reduce_cache[x] = out
        return out

    def evaluate(self, coords, h0: dict):
        """phi(h) for the functional with the given coordinate row vector and
        h a q=0 element in the T basis; returns a sigma-valued row."""
        amb = self.levi.ambient
        F = self.sigma.F
        q0 = qzero_of(amb)
        em = q0.expand_E_minus(h0)
        out = [F.zero] * self.block
        for x, c in em.items():
            v_src, m = self._reduce_Eminus(x)
            i0 = self.rep_index[v_src] * self.block
            for i in range(self.block):
                if coords[i0 + i]:
                    for j in range(self.block):
                        if m[i][j]:
                            out[j] = F.add(out[j], F.mul(F.mul(coords[i0 + i], c), m[i][j]))
        return out

    def _action_matrix(self, amb, gen: PPW):
        """(phi . g)_v = phi(T_g T*_{n_v}), reduced through E_-."""
        dat = self.levi.dat
        F = self.sigma.F
        q0 = qzero_of(amb)
        n = len(self.reps) * self.block
        mat = [[F.zero] * n for _ in range(n)]
        for col_v in self.reps:
            h = q0.mul({gen: F.one}, q0.t_star(dat.lift_w(col_v)))
            coeffs = q0.expand_E_minus(h)
            for x, c in coeffs.items():
                v_src, m = self._reduce_Eminus(x)
                i0 = self.rep_index[v_src] * self.block
                j0 = self.rep_index[col_v] * self.block
                for i in range(self.block):
                    row = m[i]
                    for j in range(self.block):
                        if row[j]:
                            mat[i0 + i][j0 + j] = F.add(
                                mat[i0 + i][j0 + j], F.mul(c, row[j])
                            )
        return mat


def induce(levi: LeviAlgebra, sigma: Representation, tag="") -> InducedModule:
    mod = InducedModule(levi, sigma, tag=tag)
    assert mod.dim == len(mod.reps) * sigma.dim
    return mod


def sigma_A(levi: LeviAlgebra, sigma: Representation, lam_elt: PPW):
    """The A-module structure: sigma(E^M(lam)) on M-negative lam, else 0."""
    if levi.dat.is_M_signed(lam_elt, levi.theta_set, "-"):
        return sigma.apply_elt(qzero_of(levi).E(lam_elt))
    return linalg.zeros(sigma.F, sigma.dim, sigma.dim)


def conjugate_levi_theta(amb: HeckeAlgebra, theta):
    """Delta_{M'} for M' = (w_Delta w_{Delta_M})-conjugate of M."""
    dat = amb.dat
    W = dat.W
    w_top = W.mul(W.w0, W.longest_element(theta))
    out = set()
    for t in theta:
        img = W.act_root(w_top, dat.datum.simple_roots[t])
        out.add(dat.datum.simple_roots.index(img))
    return frozenset(out)


def tensor_induce(levi: LeviAlgebra, sigma: Representation, induced=None):
    """The tensor realization sigma' (x)_{H_{M'}^+} H, materialized on the
    basis (w_Delta w_{Delta_M} slot) . T*_{n_w}, w in {}^{M'}W.

    Returns (rep, B): B is the base change from the Hom realization; its
    invertibility is the computational content of tensor = Hom.
    """
    amb = levi.ambient
    dat = amb.dat
    W = dat.W
    F = sigma.F
    I = induced if induced is not None else induce(levi, sigma)
    w_top = W.mul(W.w0, W.longest_element(levi.theta_set))
    mprime = conjugate_levi_theta(amb, levi.theta_set)
    mprime_reps = sorted(
        (W.inverse[v] for v in W.min_coset_reps(mprime)),
        key=lambda v: (W.length[v], W.word[v]),
    )
    slot = I.rep_index[w_top] * I.block
    q0 = qzero_of(amb)
    rows = []
    for w in mprime_reps:
        act = I.apply_elt(q0.t_star(dat.lift_w(w)))
        for i in range(I.block):
            base = [F.zero] * I.dim
            base[slot + i] = F.one
            rows.append(linalg.vec_mat(F, base, act))
    B = rows
    if linalg.rank(F, B) != I.dim:
        raise AssertionError("slot translates do not span: tensor != Hom here")
    Binv = linalg.inverse(F, B)
    mats = {
        name: linalg.mat_mul(F, linalg.mat_mul(F, B, m), Binv)
        for name, m in I.mats.items()
    }
    return Representation(amb, mats, I.dim, tag=f"tensor({sigma.tag})"), B


# ---------------------------------------------------------------------------
# extension e(sigma)
# ---------------------------------------------------------------------------
def orthogonal(dat, theta1, theta2) -> bool:
    return all(
        dot(dat.datum.coroot(dat.datum.simple_roots[a]), dat.datum.simple_roots[b]) == 0
        for a in theta1
        for b in theta2
    )


def lambda_prime_gens(dat, theta):
    """Generators of Lambda'_{M}(1) for the Levi of type theta."""
    gens = []
    for s in sorted(theta):
        gens.extend(dat.from_torsion(t) for t in dat.lambda_prime_s_torsion_gens(s))
        gens.append(dat.mu_inv_lift(s, -1))
    return gens


def extension_precondition(levi1: LeviAlgebra, sigma: Representation, theta2) -> bool:
    """sigma(E^{M1}(lam)) = 1 for lam in Lambda'_{M2}(1)."""
    dat = levi1.dat
    F = sigma.F
    ident = linalg.identity(F, sigma.dim)
    q0 = qzero_of(levi1)
    return all(
        sigma.apply_elt(q0.E(g)) == ident for g in lambda_prime_gens(dat, theta2)
    )


def _root_in_theta(dat, root, theta):
    coeffs = dat.datum.express_in_simples(root)
    return all(c == 0 for j, c in enumerate(coeffs) if j not in theta)


def extend(
    levi1: LeviAlgebra, sigma: Representation, theta2, big: LeviAlgebra
) -> Representation:
    """The extension e(sigma) to the Levi of type theta1 + theta2.

    Exists exactly when sigma is trivial on Lambda'_{M2}(1); the generator
    values are forced: zero on the theta2 affine lifts, sigma on the theta1
    side, and sigma(E^{M1}(...)) on length-zero units through the ideal
    reduction."""
    dat = levi1.dat
    F = sigma.F
    theta1 = levi1.theta_set
    theta2 = frozenset(theta2)
    if not orthogonal(dat, theta1, theta2):
        raise ValueError("extension requires an orthogonal decomposition")
    if not extension_precondition(levi1, sigma, theta2):
        raise ValueError("sigma is not trivial on Lambda'_{M2}(1)")
    assert big.theta_set == theta1 | theta2
    W = dat.W
    w1_elems = W.subgroup_elements(theta1)
    w2_elems = set(W.subgroup_elements(theta2))
    q0_small = qzero_of(levi1)

    def split_w(w):
        for w1 in w1_elems:
            w2 = W.mul(W.inverse[w1], w)
            if w2 in w2_elems:
                return w1, w2
        raise AssertionError("Weyl element not in W_Q")

    def value_of_unit(u: PPW):
        w1, w2 = split_w(u.w)
        lam_part = dat.mul(u, dat.inv(dat.mul(dat.lift_w(w1), dat.lift_w(w2))))
        inner = dat.mul(PPW(lam_part.t, lam_part.lam, 0), dat.lift_w(w1))
        assert dat.is_M_signed(inner, theta1, "-", within=big.theta_set)
        return sigma.apply_elt(q0_small.E(inner))

    mats = {}
    for name, gen in big.generator_list():
        if name.startswith("t"):
            mats[name] = sigma.matrix_of_basis(gen)
        elif name.startswith("n_"):
            entry = next(e for e in big.sub.saff if f"n_{e.name}" == name)
            if _root_in_theta(dat, entry.root, theta2):
                mats[name] = linalg.zeros(F, sigma.dim, sigma.dim)
            else:
                mats[name] = sigma.matrix_of_basis(entry.lift)
        else:
            mats[name] = value_of_unit(gen)
    rep = Representation(big, mats, sigma.dim, tag=f"e({sigma.tag})")
    assert rep.relations_ok(), "extension matrices violate the relations"
    return rep


def extension_uniqueness_count(
    levi1: LeviAlgebra, sigma: Representation, theta2, big: LeviAlgebra
) -> int:
    """Number of generator-value assignments over the field satisfying the
    three defining constraints (for 1-dimensional sigma): zero on the theta2
    affine lifts, torsion triviality on Lambda'_{M2}(1) cap Z_kappa, and
    restriction to the M1-negative cone equal to sigma; relation-checked."""
    if sigma.dim != 1:
        raise NotImplementedError("uniqueness enumeration is for 1-dim sigma")
    dat = levi1.dat
    F = sigma.F
    theta1 = levi1.theta_set
    theta2 = frozenset(theta2)
    # torsion triviality constraint
    sub2 = dat.subgroup_elements(
        [g for s in sorted(theta2) for g in dat.lambda_prime_s_torsion_gens(s)]
    )
    for t in sub2:
        if sigma.matrix_of_basis(dat.from_torsion(t))[0][0] != F.one:
            return 0
    unknown, fixed = [], {}
    for name, gen in big.generator_list():
        if name.startswith("t"):
            fixed[name] = sigma.matrix_of_basis(gen)[0][0]
        elif name.startswith("n_"):
            entry = next(e for e in big.sub.saff if f"n_{e.name}" == name)
            if _root_in_theta(dat, entry.root, theta2):
                fixed[name] = F.zero
            else:
                fixed[name] = sigma.matrix_of_basis(entry.lift)[0][0]
        else:
            unknown.append(name)
    # restriction sample: the H_{M1}^- embedding is through the star basis,
    # so compare T* values on M1-negative elements
    samples = [
        x
        for _, x in levi1.generator_list()
        if dat.is_M_signed(x, theta1, "-", within=big.theta_set)
    ]
    q0_big = qzero_of(big)
    q0_small = qzero_of(levi1)
    targets = [sigma.apply_elt(q0_small.t_star(x))[0][0] for x in samples]
    count = 0
    for assignment in itertools.product(range(F.q), repeat=len(unknown)):
        mats = {n: [[v]] for n, v in fixed.items()}
        for n, v in zip(unknown, assignment):
            mats[n] = [[v]]
        rep = Representation(big, mats, 1)
        if not rep.relations_ok():
            continue
        if all(
            rep.apply_elt(q0_big.t_star(x))[0][0] == t
            for x, t in zip(samples, targets)
        ):
            count += 1
    return count


# ---------------------------------------------------------------------------
# supersingularity
# ---------------------------------------------------------------------------
def lam_ball(dat, radius=1):
    return [
        dat.from_lattice(v)
        for v in itertools.product(range(-radius, radius + 1), repeat=dat.rank)
    ]


def joint_eigenlines(rep: Representation, mats):
    """One vector per joint eigencharacter space of the commuting matrices;
    raises FieldTooSmall when the spectrum leaves the field."""
    F = rep.F
    rng = random.Random(11)
    spaces = [[list(r) for r in linalg.identity(F, rep.dim)]]
    for m in mats:
        new_spaces = []
        for basis in spaces:
            imgs = [linalg.vec_mat(F, v, m) for v in basis]
            cols = [list(c) for c in zip(*basis)]
            rows = [linalg.solve(F, cols, list(img)) for img in imgs]
            assert all(r is not None for r in rows), "A-action not stable"
            mp = linalg.minpoly_matrix(F, rows) if len(rows) > 0 else [F.one]
            factors = linalg.factor_squarefree_irreducible(F, mp, rng)
            if any(len(f) > 2 for f in factors):
                raise FieldTooSmall("A-spectrum outside the field")
            for f in factors:
                ev = F.neg(f[0])
                shifted = [
                    [F.sub(rows[i][j], ev if i == j else F.zero) for j in range(len(basis))]
                    for i in range(len(basis))
                ]
                ker = linalg.nullspace(F, [list(c) for c in zip(*shifted)])
                if ker:
                    newb = []
                    for kv in ker:
                        vec = [F.zero] * rep.dim
                        for c, bv in zip(kv, basis):
                            if c:
                                vec = [F.add(x, F.mul(c, y)) for x, y in zip(vec, bv)]
                        newb.append(vec)
                    new_spaces.append(newb)
        spaces = new_spaces
    return [sp[0] for sp in spaces]


def z_orbit_elements(dat, lam_elt: PPW, theta=None):
    """The conjugation orbit of a Lambda(1)-element under W~_M(1)."""
    if theta is None:
        theta = range(dat.datum.nsimple)
    seen = set()
    stack = [lam_elt]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        for s in theta:
            stack.append(dat.conj(dat.lift_w(dat.W.simple(s)), x))
    return sorted(seen)


def z_central(H: HeckeAlgebra, radius=1):
    """The sums z_O = sum_{lam in O} E(lam) over orbits of positive length
    meeting a ball, including a few torsion twists."""
    dat = H.dat
    q0 = qzero_of(H)
    F = H.field
    tors = [(0,) * dat.nz]
    for i in range(min(dat.nz, 2)):
        tors.append(tuple(1 if j == i else 0 for j in range(dat.nz)))
    seen = set()
    out = []
    for x in lam_ball(dat, radius):
        for t in tors:
            elt = PPW(dat._t_norm(t), x.lam, 0)
            if elt in seen:
                continue
            orbit = z_orbit_elements(dat, elt, theta=sorted(H.theta_set))
            seen.update(orbit)
            if H.sub.length(orbit[0]) == 0:
                continue
            total = {}
            for y in orbit:
                for z, c in q0.E(y).items():
                    s = F.add(total.get(z, F.zero), c)
                    if s:
                        total[z] = s
                    else:
                        total.pop(z, None)
            out.append((tuple(orbit[0].lam), tuple(orbit[0].t), total))
    return out


def is_supersingular(H: HeckeAlgebra, rep: Representation, radius=1):
    """Supersingularity via the support of simple A-submodules, cross-checked
    against annihilation by the central orbit sums.  Returns (bool, diag)."""
    dat = H.dat
    F = rep.F
    ball = lam_ball(dat, radius)
    lines = joint_eigenlines(rep, [rep.a_action(x) for x in ball])
    assert lines, "no A-eigenline found"
    central, noncentral = [], []
    for x in ball:
        (central if all(dot(x.lam, a) == 0 for a in H.sub.positive) else noncentral).append(x)
    supports = []
    for line in lines:
        full = all(
            any(linalg.vec_mat(F, line, rep.a_action(x))) for x in central
        ) and not any(
            any(linalg.vec_mat(F, line, rep.a_action(x))) for x in noncentral
        )
        supports.append(full)
    crit3 = all(supports)
    crit4 = any(supports)
    zero = linalg.zeros(F, rep.dim, rep.dim)
    crit2 = all(rep.apply_elt(total) == zero for _, _, total in z_central(H, radius))
    return crit2, {"crit2": crit2, "crit3": crit3, "crit4": crit4, "lines": len(lines)}


def delta_sigma(levi: LeviAlgebra, sigma: Representation):
    """Delta(sigma) = {alpha : <Delta_M, alpha-check> = 0, sigma(E^M(.)) = 1
    on Lambda'_{s_alpha}(1)} union Delta_M."""
    dat = levi.dat
    F = sigma.F
    out = set(levi.theta_set)
    ident = linalg.identity(F, sigma.dim)
    q0 = qzero_of(levi)
    for s in range(dat.datum.nsimple):
        if s in out:
            continue
        ac = dat.datum.coroot(dat.datum.simple_roots[s])
        if any(dot(ac, dat.datum.simple_roots[t]) != 0 for t in levi.theta_set):
            continue
        gens = [dat.from_torsion(t) for t in dat.lambda_prime_s_torsion_gens(s)]
        gens.append(dat.mu_inv_lift(s, -1))
        if all(sigma.apply_elt(q0.E(g)) == ident for g in gens):
            out.add(s)
    return frozenset(out)


# ---------------------------------------------------------------------------
# the classification objects
# ---------------------------------------------------------------------------
def embed_induced(
    levi_small: LeviAlgebra,
    ext_small: Representation,
    I_small: InducedModule,
    I_big: InducedModule,
):
    """I_{Q'}(e_{Q'}(sigma)) -> I_Q(e_Q(sigma)) on coordinates:
    y_v(eps phi) = y'_{v1} . e_{Q'}(T^{Q',*}_{n_{w2}}) for v = v1 w2."""
    dat = levi_small.dat
    W = dat.W
    F = ext_small.F
    q0s = qzero_of(levi_small)
    mat = [[F.zero] * I_big.dim for _ in range(I_small.dim)]
    for v in I_big.reps:
        v1 = w2 = None
        for cand in I_small.reps:
            w2c = W.mul(W.inverse[cand], v)
            if w2c in levi_small.wm:
                v1, w2 = cand, w2c
                break
        assert v1 is not None
        val = ext_small.apply_elt(q0s.t_star(dat.lift_w(w2)))
        i0 = I_small.rep_index[v1] * I_small.block
        j0 = I_big.rep_index[v] * I_big.block
        for i in range(I_small.block):
            for j in range(I_big.block):
                if val[i][j]:
                    mat[i0 + i][j0 + j] = val[i][j]
    return mat


class Triple:
    """(P, sigma, Q) with theta_P <= theta_Q <= Delta(sigma)."""

    def __init__(self, theta_P, sigma: Representation, theta_Q, sigma_id=""):
        self.theta_P = frozenset(theta_P)
        self.sigma = sigma
        self.theta_Q = frozenset(theta_Q)
        self.sigma_id = sigma_id

    def __repr__(self):
        return (
            f"Triple(P={sorted(self.theta_P)}, Q={sorted(self.theta_Q)}, "
            f"{self.sigma_id})"
        )


def extension_to(amb, levi_P, sigma, theta_Q):
    levi_Q = levi_algebra(amb, theta_Q)
    if frozenset(theta_Q) == levi_P.theta_set:
        return levi_Q, sigma
    return levi_Q, extend(levi_P, sigma, frozenset(theta_Q) - levi_P.theta_set, levi_Q)


def i_triple(amb: HeckeAlgebra, triple: Triple, delta_sig=None, with_parts=False):
    """I(P, sigma, Q) on the basis {(v, i): Delta_v cap Delta(sigma) = Delta_Q},
    as the verified quotient of I_Q(e_Q(sigma))."""
    dat = amb.dat
    W = dat.W
    F = amb.field
    levi_P = levi_algebra(amb, triple.theta_P)
    if delta_sig is None:
        delta_sig = delta_sigma(levi_P, triple.sigma)
    if not (triple.theta_P <= triple.theta_Q <= delta_sig):
        raise ValueError("invalid triple")
    levi_Q, eq = extension_to(amb, levi_P, triple.sigma, triple.theta_Q)
    I_Q = induce(levi_Q, eq, tag=f"I_Q({triple.sigma_id})")
    sub_rows = []
    extra = sorted(delta_sig - triple.theta_Q)
    for r in range(1, len(extra) + 1):
        for add in itertools.combinations(extra, r):
            theta_Qp = triple.theta_Q | set(add)
            levi_Qp, eqp = extension_to(amb, levi_P, triple.sigma, theta_Qp)
            I_Qp = induce(levi_Qp, eqp)
            sub_rows.extend(embed_induced(levi_Qp, eqp, I_Qp, I_Q))
    keep = [v for v in I_Q.reps if W.delta_w(v) & delta_sig == triple.theta_Q]
    keep_idx = []
    for v in keep:
        base = I_Q.rep_index[v] * I_Q.block
        keep_idx.extend(range(base, base + I_Q.block))
    if not sub_rows:
        assert len(keep_idx) == I_Q.dim
        out = Representation(amb, dict(I_Q.mats), I_Q.dim, tag=f"I({triple.sigma_id})")
        return (out, I_Q, None) if with_parts else out
    basis, piv = linalg.rref(F, sub_rows)
    basis = [list(b) for b in basis[: len(piv)]]
    assert len(basis) + len(keep_idx) == I_Q.dim, "submodule dimension mismatch"
    full = [list(r) for r in basis]
    for i in keep_idx:
        e = [F.zero] * I_Q.dim
        e[i] = F.one
        full.append(e)
    assert linalg.rank(F, full) == I_Q.dim, "quotient coordinates collide"
    fullinv = linalg.inverse(F, full)
    k = len(basis)
    mats = {}
    for name, m in I_Q.mats.items():
        conj = linalg.mat_mul(F, linalg.mat_mul(F, full, m), fullinv)
        for i in range(k):
            for j in range(k, I_Q.dim):
                assert conj[i][j] == F.zero, "submodule is not H-stable"
        mats[name] = [row[k:] for row in conj[k:]]
    out = Representation(amb, mats, I_Q.dim - k, tag=f"I({triple.sigma_id})")
    assert out.dim == len(keep) * triple.sigma.dim, "I(P,sigma,Q) dimension mismatch"
    return (out, I_Q, basis) if with_parts else out


# ---------------------------------------------------------------------------
# Meataxe
# ---------------------------------------------------------------------------
def _random_algebra_element(rep: Representation, rng):
    F = rep.F
    names = sorted(rep.mats)
    out = linalg.zeros(F, rep.dim, rep.dim)
    for _ in range(rng.randrange(2, 5)):
        m = linalg.identity(F, rep.dim)
        for nm in (rng.choice(names) for _ in range(rng.randrange(1, 4))):
            m = linalg.mat_mul(F, m, rep.mats[nm])
        out = linalg.mat_add(F, out, linalg.mat_scale(F, m, rng.randrange(1, F.q)))
    return out


def find_submodule(rep: Representation, seed=0, tries=60):
    """A proper nonzero invariant row space, or None (certified for small
    dimensions by the Norton test plus a deterministic eigen-sweep)."""
    F = rep.F
    if rep.dim <= 1:
        return None
    rng = random.Random(seed)
    mats = list(rep.mats.values())
    certified_irreducible = False
    for trial in range(tries):
        n = _random_algebra_element(rep, rng)
        mp = linalg.minpoly_matrix(F, n)
        factors = linalg.factor_squarefree_irreducible(F, mp, rng)
        for f in factors:
            fn = linalg.poly_eval_matrix(F, list(f), n)
            ker = linalg.nullspace(F, [list(c) for c in zip(*fn)])
            for v in ker[:3]:
                span, _ = linalg.spin(F, [list(v)], mats)
                if 0 < len(span) < rep.dim:
                    return span
            if ker and len(ker) == len(f) - 1:
                full = all(
                    len(linalg.spin(F, [list(v)], mats)[0]) == rep.dim for v in ker
                )
                if full:
                    tmats = [[list(col) for col in zip(*m)] for m in mats]
                    fnt = [list(col) for col in zip(*fn)]
                    kert = linalg.nullspace(F, [list(c) for c in zip(*fnt)])
                    if kert:
                        spant, _ = linalg.spin(F, [list(kert[0])], tmats)
                        if len(spant) == rep.dim:
                            certified_irreducible = True
                            break
                        perp = linalg.nullspace(F, [list(r) for r in spant])
                        span2, _ = linalg.spin(F, [list(perp[0])], mats)
                        if 0 < len(span2) < rep.dim:
                            return span2
        if certified_irreducible:
            return None
    # deterministic fallback: eigen-sweep over sums of generator products
    for subset in range(1, min(2 ** len(mats), 64)):
        m = linalg.zeros(F, rep.dim, rep.dim)
        for b, g in enumerate(mats):
            if subset >> b & 1:
                m = linalg.mat_add(F, m, g)
        mp = linalg.minpoly_matrix(F, m)
        for f in linalg.factor_squarefree_irreducible(F, mp, random.Random(seed)):
            if len(f) != 2:
                continue
            fn = linalg.poly_eval_matrix(F, list(f), m)
            for v in linalg.nullspace(F, [list(c) for c in zip(*fn)]):
                span, _ = linalg.spin(F, [list(v)], mats)
                if 0 < len(span) < rep.dim:
                    return span
    return None


def is_irreducible(rep: Representation, seed=0) -> bool:
    return find_submodule(rep, seed=seed) is None


def is_absolutely_irreducible(rep: Representation, seed=0) -> bool:
    return is_irreducible(rep, seed=seed) and len(hom_space(rep, rep)) == 1


def sub_quotient(rep: Representation, span):
    """(submodule, quotient) for an invariant row-space basis."""
    F = rep.F
    k = len(span)
    full = [list(r) for r in span]
    for i in range(rep.dim):
        e = [F.zero] * rep.dim
        e[i] = F.one
        if linalg.rank(F, full + [e]) > len(full):
            full.append(e)
    fullinv = linalg.inverse(F, full)
    sub_mats, quo_mats = {}, {}
    for name, m in rep.mats.items():
        conj = linalg.mat_mul(F, linalg.mat_mul(F, full, m), fullinv)
        for i in range(k):
            for j in range(k, rep.dim):
                assert conj[i][j] == F.zero, "span is not invariant"
        sub_mats[name] = [row[:k] for row in conj[:k]]
        quo_mats[name] = [row[k:] for row in conj[k:]]
    return (
        Representation(rep.H, sub_mats, k, tag=rep.tag + ".sub"),
        Representation(rep.H, quo_mats, rep.dim - k, tag=rep.tag + ".quo"),
    )


def composition_series(rep: Representation, seed=0):
    """Composition factors as a list of irreducible Representations."""
    if rep.dim == 0:
        return []
    span = find_submodule(rep, seed=seed)
    if span is None:
        return [rep]
    sub, quo = sub_quotient(rep, span)
    return composition_series(sub, seed=seed + 1) + composition_series(quo, seed=seed + 1)


# ---------------------------------------------------------------------------
# supersingular inventory and the classification driver
# ---------------------------------------------------------------------------
def supersingular_search(
    amb: HeckeAlgebra, theta, torsion_values, free_values, seed=0, dim_bound=None
):
    """Simple supersingular H_M-modules with the given central character:
    composition factors of the Theta = Delta_M standard module of H_M,
    filtered by the supersingularity criteria (which are asserted to agree)."""
    from .stdmod import StdModule, ThetaCharacter

    levi = levi_algebra(amb, theta)
    char = ThetaCharacter(levi, frozenset(theta), 0, torsion_values, free_values)
    M = StdModule(char)
    out = []
    for factor in composition_series(M.rep, seed=seed):
        if dim_bound is not None and factor.dim > dim_bound:
            continue
        ok, diag = is_supersingular(levi, factor, radius=1)
        assert (
            diag["crit2"] == diag["crit3"] == diag["crit4"]
        ), "supersingularity criteria disagree"
        if ok and not any(is_isomorphic(factor, other) for other in out):
            out.append(factor)
    return out


def classify(amb: HeckeAlgebra, inventory, seed=0, hom_diagnostics=True):
    """All triples over the inventory, with irreducibility certificates and
    the pairwise hom matrix.  `inventory`: list of (theta_P, sigma, sigma_id)."""
    results = []
    modules = []
    for theta_P, sigma, sigma_id in inventory:
        levi_P = levi_algebra(amb, theta_P)
        dsig = delta_sigma(levi_P, sigma)
        extra = sorted(dsig - frozenset(theta_P))
        for r in range(len(extra) + 1):
            for add in itertools.combinations(extra, r):
                theta_Q = frozenset(theta_P) | set(add)
                triple = Triple(theta_P, sigma, theta_Q, sigma_id=sigma_id)
                mod = i_triple(amb, triple, delta_sig=dsig)
                irr = is_irreducible(mod, seed=seed)
                results.append(
                    {
                        "delta_P": sorted(theta_P),
                        "sigma_id": sigma_id,
                        "delta_Q": sorted(theta_Q),
                        "delta_sigma": sorted(dsig),
                        "dim": mod.dim,
                        "irreducible": irr,
                    }
                )
                modules.append(mod)
    hom_matrix = None
    if hom_diagnostics:
        hom_matrix = [
            [len(hom_space(m1, m2)) for m2 in modules] for m1 in modules
        ]
    return results, modules, hom_matrix

"""Matrix representations of a Hecke algebra at q = 0.

A ``Representation`` stores one matrix per named generator (torsion
generators, affine simple lifts, length-zero units) of its algebra; the
action of an arbitrary basis element T_x is the product along the canonical
decomposition x = u * n_{s_1} ... n_{s_l}.  ``QZero`` is the cached q = 0
view of an algebra: structure constants, specialized Bernstein basis and
its triangular expansion.
"""

from __future__ import annotations

import itertools

from . import linalg
from .hecke import HeckeAlgebra
from .propweyl import PPW


def qzero_of(H: HeckeAlgebra) -> "QZero":
    if not hasattr(H, "_qzero_view"):
        H._qzero_view = QZero(H)
    return H._qzero_view


class QZero:
    """q = 0 view: elements are dicts PPW -> field scalar."""

    def __init__(self, H: HeckeAlgebra):
        self.H = H
        self.F = H.field
        self._mul_cache = {}
        self._E_cache = {}
        self._Em_cache = {}
        self._Ts_cache = {}

    def E(self, x: PPW) -> dict:
        if x not in self._E_cache:
            self._E_cache[x] = self.H.E(x).at_q_zero()
        return self._E_cache[x]

    def E_minus(self, x: PPW) -> dict:
        if x not in self._Em_cache:
            self._Em_cache[x] = self.H.E_minus(x).at_q_zero()
        return self._Em_cache[x]

    def t_star(self, x: PPW) -> dict:
        if x not in self._Ts_cache:
            self._Ts_cache[x] = self.H.t_star(x).at_q_zero()
        return self._Ts_cache[x]

    def mul_basis(self, x: PPW, y: PPW) -> dict:
        key = (x, y)
        if key not in self._mul_cache:
            self._mul_cache[key] = self.H.mul(self.H.T(x), self.H.T(y)).at_q_zero()
        return self._mul_cache[key]

    def mul(self, a: dict, b: dict) -> dict:
        F = self.F
        out = {}
        for x, cx in a.items():
            for y, cy in b.items():
                c = F.mul(cx, cy)
                for z, cz in self.mul_basis(x, y).items():
                    s = F.add(out.get(z, F.zero), F.mul(c, cz))
                    if s:
                        out[z] = s
                    else:
                        out.pop(z, None)
        return out

    def _expand(self, a: dict, build) -> dict:
        F = self.F
        res = dict(a)
        out = {}
        sub = self.H.sub
        while res:
            x = max(res, key=lambda z: (sub.length(z), z))
            c = res[x]
            out[x] = c
            for z, cz in build(x).items():
                s = F.sub(res.get(z, F.zero), F.mul(c, cz))
                if s:
                    res[z] = s
                else:
                    res.pop(z, None)
        return out

    def expand_E(self, a: dict) -> dict:
        return self._expand(a, self.E)

    def expand_E_minus(self, a: dict) -> dict:
        return self._expand(a, self.E_minus)


class Representation:
    """A right module over the q = 0 algebra, given by generator matrices."""

    def __init__(self, H: HeckeAlgebra, mats: dict, dim: int, tag: str = ""):
        self.H = H
        self.dat = H.dat
        self.F = H.field
        self.q0 = qzero_of(H)
        self.mats = mats
        self.dim = dim
        self.tag = tag
        self._basis_cache = {}

    def matrix_of_basis(self, x: PPW):
        """rho(T_x) along the canonical decomposition of x."""
        if x in self._basis_cache:
            return self._basis_cache[x]
        u, word = self.H.sub.decompose(x)
        mat = self._omega_matrix(u)
        for i in word:
            name = f"n_{self.H.sub.saff[i].name}"
            mat = linalg.mat_mul(self.F, mat, self.mats[name])
        self._basis_cache[x] = mat
        return mat

    def _torsion_matrix(self, t):
        F = self.F
        mat = linalg.identity(F, self.dim)
        for i, e in enumerate(t):
            base = self.mats[f"t{i}"]
            for _ in range(e % self.dat.zk_orders[i]):
                mat = linalg.mat_mul(F, mat, base)
        return mat

    def _omega_matrix(self, u: PPW):
        dat, F = self.dat, self.F
        if u == dat.one:
            return linalg.identity(F, self.dim)
        if u.w == 0 and not any(u.lam):
            return self._torsion_matrix(u.t)
        t, combo = self.H.sub.omega_decompose(u)
        mat = self._torsion_matrix(t)
        for j, cj in enumerate(combo):
            key = f"u{j}" if cj >= 0 else f"u{j}_inv"
            for _ in range(abs(cj)):
                mat = linalg.mat_mul(F, mat, self.mats[key])
        return mat

    def apply_elt(self, h0: dict):
        """Matrix of a q = 0 element given as a T-basis dict."""
        F = self.F
        out = linalg.zeros(F, self.dim, self.dim)
        for x, c in h0.items():
            out = linalg.mat_add(
                F, out, linalg.mat_scale(F, self.matrix_of_basis(x), c)
            )
        return out

    def a_action(self, lam_elt: PPW):
        return self.apply_elt(self.q0.E(lam_elt))

    def generator_names(self):
        return sorted(self.mats)

    def verify_relations(self):
        """rho(T_x) rho(T_y) = rho(T_x T_y) on all generator pairs."""
        F = self.F
        gens = self.H.generator_list()
        checks = []
        for (n1, g1), (n2, g2) in itertools.product(gens, repeat=2):
            prod = self.q0.mul_basis(g1, g2)
            lhs = linalg.mat_mul(F, self.mats[n1], self.mats[n2])
            rhs = self.apply_elt(prod)
            checks.append((f"{n1}*{n2}", lhs == rhs))
        return checks

    def relations_ok(self) -> bool:
        return all(ok for _, ok in self.verify_relations())


def hom_space(m1: Representation, m2: Representation):
    """Basis of the space of equivariant maps m1 -> m2 (as matrices)."""
    F = m1.F
    names = sorted(set(m1.mats) & set(m2.mats))
    rows = []
    d1, d2 = m1.dim, m2.dim
    for name in names:
        a, b = m1.mats[name], m2.mats[name]
        for i in range(d1):
            for j in range(d2):
                row = [F.zero] * (d1 * d2)
                for k in range(d1):
                    row[k * d2 + j] = F.add(row[k * d2 + j], a[i][k])
                for k in range(d2):
                    row[i * d2 + k] = F.sub(row[i * d2 + k], b[k][j])
                rows.append(row)
    basis = linalg.nullspace(F, rows) if rows else []
    return [
        [list(vec[i * d2 : (i + 1) * d2]) for i in range(d1)] for vec in basis
    ]


def hom_dim(m1: Representation, m2: Representation) -> int:
    return len(hom_space(m1, m2))


def contains_invertible(F, homs, dim):
    import random

    for h in homs:
        if linalg.det(F, h) != F.zero:
            return h
    rng = random.Random(17)
    for _ in range(300):
        combo = linalg.zeros(F, dim, dim)
        for h in homs:
            c = rng.randrange(F.q)
            if c:
                combo = linalg.mat_add(F, combo, linalg.mat_scale(F, h, c))
        if linalg.det(F, combo) != F.zero:
            return combo
    return None


def is_isomorphic(m1: Representation, m2: Representation) -> bool:
    if m1.dim != m2.dim:
        return False
    homs = hom_space(m1, m2)
    if not homs:
        return False
    return contains_invertible(m1.F, homs, m1.dim) is not None

"""Based reduced root data and finite/affine Weyl group combinatorics.

Roots are stored as vectors in the dual lattice (the pairing with the
cocharacter lattice Z^r is the dot product), coroots as vectors in the
lattice itself.  Weyl group elements are indexed ints; the group is
enumerated once and products, actions, reduced words and inversion data
are precomputed tables.
"""

from __future__ import annotations

import fractions
from dataclasses import dataclass


def dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vneg(a):
    return tuple(-x for x in a)


def vscale(a, c):
    return tuple(c * x for x in a)


@dataclass(frozen=True)
class AffineRoot:
    """(alpha, k): the affine functional x -> <x, alpha> + k."""

    root: tuple
    k: int

    def is_positive(self) -> bool:
        # Sigma_aff^+ = Sigma^+ x Z_{>=0}  union  Sigma x Z_{>0}
        if self.k > 0:
            return True
        if self.k < 0:
            return False
        return _root_sign(self.root) > 0


def _root_sign(root) -> int:
    for x in root:
        if x > 0:
            return 1
        if x < 0:
            return -1
    return 0


class RootDatum:
    """A based reduced root datum on the lattice Z^rank."""

    def __init__(self, rank: int, simple_roots, simple_coroots, name: str = ""):
        self.rank = rank
        self.name = name
        self.simple_roots = [tuple(a) for a in simple_roots]
        self.simple_coroots = [tuple(a) for a in simple_coroots]
        self.nsimple = len(self.simple_roots)
        self._close_roots()
        self._validate()

    def _close_roots(self):
        roots = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            nxt = []
            for beta in frontier:
                for a, ac in zip(self.simple_roots, self.simple_coroots):
                    img = vsub(beta, vscale(a, dot(ac, beta)))
                    if img not in roots:
                        roots.add(img)
                        nxt.append(img)
            frontier = nxt
        allroots = set()
        for r in roots:
            allroots.add(r)
            allroots.add(vneg(r))
        self.positive_roots = sorted(r for r in allroots if _root_sign(r) > 0)
        self.roots = sorted(allroots)
        # coroot for every root, transported along simple reflections
        self._coroot = {}
        for a, ac in zip(self.simple_roots, self.simple_coroots):
            self._coroot[a] = ac
            self._coroot[vneg(a)] = vneg(ac)
        changed = True
        while changed:
            changed = False
            for beta in list(self._coroot):
                bc = self._coroot[beta]
                for a, ac in zip(self.simple_roots, self.simple_coroots):
                    img = vsub(beta, vscale(a, dot(ac, beta)))
                    imgc = vsub(bc, vscale(ac, dot(bc, a)))
                    if img not in self._coroot:
                        self._coroot[img] = imgc
                        changed = True

    def _validate(self):
        for beta in self.positive_roots:
            coeffs = self.express_in_simples(beta)
            if coeffs is None or any(c < 0 for c in coeffs):
                raise ValueError(f"{beta} is not a nonnegative simple combination")
        for a, ac in zip(self.simple_roots, self.simple_coroots):
            if dot(ac, a) != 2:
                raise ValueError("simple pairing <alpha^, alpha> != 2")
        for beta in self.roots:
            if dot(self._coroot[beta], beta) != 2:
                raise ValueError("coroot pairing broken")
        rs = set(self.roots)
        for beta in self.roots:
            if vscale(beta, 2) in rs:
                raise ValueError("root system is not reduced")

    def express_in_simples(self, beta):
        """Integer coordinates of beta in the simple roots, or None."""
        rows = [
            [fractions.Fraction(a[j]) for a in self.simple_roots]
            + [fractions.Fraction(beta[j])]
            for j in range(self.rank)
        ]
        n = self.nsimple
        piv, r = [], 0
        for c in range(n):
            pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            pv = rows[r][c]
            rows[r] = [x / pv for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            piv.append(c)
            r += 1
        for i in range(r, len(rows)):
            if rows[i][n]:
                return None
        sol = [fractions.Fraction(0)] * n
        for i, c in enumerate(piv):
            sol[c] = rows[i][n]
        if any(s.denominator != 1 for s in sol):
            return None
        return [int(s) for s in sol]

    def coroot(self, beta):
        return self._coroot[tuple(beta)]

    def reflect_vector(self, alpha_idx: int, v):
        a = self.simple_roots[alpha_idx]
        ac = self.simple_coroots[alpha_idx]
        return vsub(v, vscale(ac, dot(v, a)))

    def reflect_root(self, alpha_idx: int, beta):
        a = self.simple_roots[alpha_idx]
        ac = self.simple_coroots[alpha_idx]
        return vsub(beta, vscale(a, dot(ac, beta)))

    def components(self):
        """Connected components of the Dynkin diagram, as simple index lists."""
        n = self.nsimple
        adj = {i: set() for i in range(n)}
        for i in range(n):
            for j in range(n):
                if i != j and dot(self.simple_coroots[i], self.simple_roots[j]):
                    adj[i].add(j)
        seen, comps = set(), []
        for i in range(n):
            if i in seen:
                continue
            comp, stack = [], [i]
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                comp.append(x)
                stack.extend(adj[x] - seen)
            comps.append(sorted(comp))
        return comps

    def highest_root(self, comp):
        """Highest root of the component given by simple indices."""
        cand = None
        for beta in self.positive_roots:
            coeffs = self.express_in_simples(beta)
            if coeffs is None:
                continue
            if all(coeffs[i] == 0 for i in range(self.nsimple) if i not in comp):
                if cand is None or sum(coeffs) > cand[1]:
                    cand = (beta, sum(coeffs))
        return cand[0]

    def __repr__(self):
        return f"RootDatum({self.name or self.rank})"


class WeylGroup:
    """The finite Weyl group of a root datum, fully tabulated."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self._enumerate()

    def _enumerate(self):
        d = self.datum
        n = d.nsimple
        rank = d.rank
        ident = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))

        def matmul(m1, m2):
            return tuple(
                tuple(sum(m1[i][k] * m2[k][j] for k in range(rank)) for j in range(rank))
                for i in range(rank)
            )

        gens = []
        for s in range(n):
            cols = [
                d.reflect_vector(s, tuple(1 if i == j else 0 for i in range(rank)))
                for j in range(rank)
            ]
            gens.append(tuple(tuple(cols[j][i] for j in range(rank)) for i in range(rank)))

        index = {ident: 0}
        mats = [ident]
        bfs_words = [()]
        frontier = [0]
        while frontier:
            nxt = []
            for wi in frontier:
                for s in range(n):
                    m = matmul(mats[wi], gens[s])
                    if m not in index:
                        index[m] = len(mats)
                        mats.append(m)
                        bfs_words.append(bfs_words[wi] + (s,))
                        nxt.append(index[m])
            frontier = nxt
        self.size = len(mats)
        self._mats = mats
        self.length = [len(w) for w in bfs_words]
        self.mult_s = [
            [index[matmul(mats[wi], gens[s])] for s in range(n)] for wi in range(self.size)
        ]
        self.s_mult = [
            [index[matmul(gens[s], mats[wi])] for wi in range(self.size)] for s in range(n)
        ]
        self.inverse = [0] * self.size
        for wi in range(self.size):
            ii = 0
            for s in reversed(bfs_words[wi]):
                ii = self.mult_s[ii][s]
            self.inverse[wi] = ii
        self.word = self._lex_min_words()
        self.root_index = {r: i for i, r in enumerate(d.roots)}
        self.root_action = []
        for wi in range(self.size):
            row = []
            for r in d.roots:
                root = r
                for s in reversed(self.word[wi]):
                    root = d.reflect_root(s, root)
                row.append(self.root_index[root])
            self.root_action.append(row)
        self.w0 = max(range(self.size), key=lambda wi: self.length[wi])
        self._reflection_cache = {}

    def _lex_min_words(self):
        n = self.datum.nsimple
        words = [None] * self.size
        words[0] = ()
        for wi in sorted(range(self.size), key=lambda x: self.length[x]):
            if wi == 0:
                continue
            best = None
            for s in range(n):
                prev = self.s_mult[s][wi]
                if self.length[prev] == self.length[wi] - 1:
                    cand = (s,) + words[prev]
                    if best is None or cand < best:
                        best = cand
            words[wi] = best
        return words

    # --- public API ---
    def mul(self, a: int, b: int) -> int:
        for s in self.word[b]:
            a = self.mult_s[a][s]
        return a

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def act(self, wi: int, v):
        m = self._mats[wi]
        v = tuple(v)
        rank = self.datum.rank
        return tuple(sum(m[i][j] * v[j] for j in range(rank)) for i in range(rank))

    def act_root(self, wi: int, root):
        return self.datum.roots[self.root_action[wi][self.root_index[tuple(root)]]]

    def from_word(self, word) -> int:
        a = 0
        for s in word:
            a = self.mult_s[a][s]
        return a

    def simple(self, s: int) -> int:
        return self.mult_s[0][s]

    def reflection(self, root) -> int:
        """The reflection s_beta as a group element."""
        beta = tuple(root)
        if beta in self._reflection_cache:
            return self._reflection_cache[beta]
        bc = self.datum.coroot(beta)
        rank = self.datum.rank
        basis = [tuple(1 if i == j else 0 for i in range(rank)) for j in range(rank)]
        images = [vsub(e, vscale(bc, dot(e, beta))) for e in basis]
        target = None
        for wi in range(self.size):
            if all(self.act(wi, e) == img for e, img in zip(basis, images)):
                target = wi
                break
        self._reflection_cache[beta] = target
        return target

    def descents_right(self, wi: int):
        return [
            s
            for s in range(self.datum.nsimple)
            if self.length[self.mult_s[wi][s]] < self.length[wi]
        ]

    def bruhat_leq(self, a: int, b: int) -> bool:
        """Subword criterion on the canonical reduced word of b."""
        if self.length[a] > self.length[b]:
            return False
        word_b = self.word[b]
        for i, s in enumerate(word_b):
            if a == 0:
                return True
            sa = self.s_mult[s][a]
            if self.length[sa] < self.length[a]:
                a = sa
        return a == 0

    def delta_w(self, wi: int):
        """{alpha in Delta | w(alpha) > 0} as a frozenset of simple indices."""
        return frozenset(
            s
            for s, a in enumerate(self.datum.simple_roots)
            if _root_sign(self.act_root(wi, a)) > 0
        )

    def subgroup_elements(self, theta):
        theta = sorted(theta)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for wi in frontier:
                for s in theta:
                    x = self.mult_s[wi][s]
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
            frontier = nxt
        return sorted(seen)

    def longest_element(self, theta) -> int:
        elems = self.subgroup_elements(theta)
        return max(elems, key=lambda wi: self.length[wi])

    def min_coset_reps(self, theta):
        """W^Theta = {w | w(Theta) > 0}: minimal-length reps of W/W_Theta."""
        out = [
            wi
            for wi in range(self.size)
            if all(
                _root_sign(self.act_root(wi, self.datum.simple_roots[s])) > 0
                for s in theta
            )
        ]
        return sorted(out, key=lambda wi: (self.length[wi], self.word[wi]))

    def dominance_facet(self, v):
        """(w, Theta): w^{-1}(v) dominant, Theta its stabilizer type, w the
        minimal coset representative (w(Theta) positive)."""
        v = tuple(v)
        for wi in sorted(range(self.size), key=lambda x: (self.length[x], self.word[x])):
            x = self.act(self.inverse[wi], v)
            if all(dot(x, a) >= 0 for a in self.datum.simple_roots):
                theta = frozenset(
                    s for s, a in enumerate(self.datum.simple_roots) if dot(x, a) == 0
                )
                if all(
                    _root_sign(self.act_root(wi, self.datum.simple_roots[s])) > 0
                    for s in theta
                ):
                    return wi, theta
        raise AssertionError("no chamber found")


def length_formula(datum: RootDatum, W: WeylGroup, lam, wi: int, positive=None) -> int:
    """l(lambda * n_w) from the closed formula over the given positive roots."""
    if positive is None:
        positive = datum.positive_roots
    total = 0
    winv = W.inverse[wi]
    for alpha in positive:
        pairing = dot(lam, alpha)
        if _root_sign(W.act_root(winv, alpha)) > 0:
            total += abs(pairing)
        else:
            total += abs(pairing - 1)
    return total


def length_by_inversions(datum: RootDatum, W: WeylGroup, lam, wi: int, positive=None) -> int:
    """#(Sigma_aff^+ intersect (lambda w)(Sigma_aff^-)), by bounded enumeration.

    An affine root (beta, k) with |k| > max|<lambda, alpha>| + 1 cannot change
    positivity under lambda*w, so the enumeration below is exhaustive.
    """
    if positive is None:
        positive = datum.positive_roots
    bound = max((abs(dot(lam, a)) for a in positive), default=0) + 1
    count = 0
    for alpha in positive:
        for k in range(-bound, bound + 1):
            for beta in (alpha, vneg(alpha)):
                ar = AffineRoot(beta, k)
                if ar.is_positive():
                    continue
                wbeta = W.act_root(wi, beta)
                img = AffineRoot(wbeta, k - dot(lam, wbeta))
                if img.is_positive():
                    count += 1
    return count

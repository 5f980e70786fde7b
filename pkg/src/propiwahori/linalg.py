"""Dense exact linear algebra over small finite fields.

Matrices are lists of row lists of int-encoded field elements; all routines
take the ``GF`` instance explicitly.  Sizes here are tiny (dimensions are
bounded by |W| times small module dimensions), so the plain O(n^3)
eliminations are more than enough.
"""

from __future__ import annotations

from .gf import GF


def zeros(F: GF, n: int, m: int):
    return [[F.zero] * m for _ in range(n)]


def identity(F: GF, n: int):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def mat_add(F: GF, a, b):
    return [[F.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(F: GF, a, b):
    return [[F.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(F: GF, a, c):
    return [[F.mul(x, c) for x in row] for row in a]


def mat_mul(F: GF, a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    bt = list(zip(*b))
    out = []
    for i in range(n):
        ai = a[i]
        row = []
        for j in range(m):
            bj = bt[j]
            acc = F.zero
            for x in range(k):
                v = ai[x]
                if v:
                    acc = F.add(acc, F.mul(v, bj[x]))
            row.append(acc)
        out.append(row)
    return out


def vec_mat(F: GF, v, a):
    m = len(a[0]) if a else 0
    out = [F.zero] * m
    for i, c in enumerate(v):
        if c:
            row = a[i]
            for j in range(m):
                if row[j]:
                    out[j] = F.add(out[j], F.mul(c, row[j]))
    return out


def mat_eq(a, b):
    return a == b


def rref(F: GF, mat):
    """Reduced row echelon form; returns (rref, pivot columns)."""
    a = [row[:] for row in mat]
    n = len(a)
    m = len(a[0]) if a else 0
    piv = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = F.inv(a[r][c])
        a[r] = [F.mul(x, inv) for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == n:
            break
    return a, piv


def rank(F: GF, mat) -> int:
    return len(rref(F, mat)[1])


def nullspace(F: GF, mat):
    """Basis of {x : mat . x = 0} (column vectors, returned as row tuples)."""
    a, piv = rref(F, mat)
    m = len(mat[0]) if mat else 0
    free = [c for c in range(m) if c not in piv]
    basis = []
    for fc in free:
        v = [F.zero] * m
        v[fc] = F.one
        for r, pc in enumerate(piv):
            v[pc] = F.neg(a[r][fc])
        basis.append(tuple(v))
    return basis


def row_space_basis(F: GF, rows):
    a, piv = rref(F, rows)
    return [tuple(a[i]) for i in range(len(piv))]


def in_row_space(F: GF, basis_rref, piv, v):
    v = list(v)
    for r, c in enumerate(piv):
        if v[c]:
            f = v[c]
            v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, basis_rref[r])]
    return not any(v)


def solve(F: GF, a, b):
    """One solution x of a.x = b, or None."""
    n = len(a)
    m = len(a[0]) if a else 0
    aug = [row[:] + [bv] for row, bv in zip(a, b)]
    r, piv = rref(F, aug)
    for i in range(len(r)):
        if all(x == F.zero for x in r[i][:m]) and r[i][m]:
            return None
    x = [F.zero] * m
    for i, c in enumerate(piv):
        if c < m:
            x[c] = r[i][m]
    return x


def inverse(F: GF, a):
    n = len(a)
    aug = [row[:] + ident_row for row, ident_row in zip(a, identity(F, n))]
    r, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in r]


def det(F: GF, mat):
    a = [row[:] for row in mat]
    n = len(a)
    d = F.one
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c]), None)
        if pr is None:
            return F.zero
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            d = F.neg(d)
        d = F.mul(d, a[c][c])
        inv = F.inv(a[c][c])
        for i in range(c + 1, n):
            if a[i][c]:
                f = F.mul(a[i][c], inv)
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[c])]
    return d


def spin(F: GF, vectors, mats):
    """Smallest subspace containing `vectors` stable under right action of
    the matrices; returns an rref basis (rows)."""
    basis, piv = rref(F, [list(v) for v in vectors])
    basis = [row for row in basis[: len(piv)]]
    frontier = list(basis)
    while frontier:
        nxt = []
        for v in frontier:
            for m in mats:
                img = vec_mat(F, v, m)
                if not in_row_space(F, basis, piv, img):
                    rows = basis + [list(img)]
                    basis, piv = rref(F, rows)
                    basis = basis[: len(piv)]
                    nxt.append(img)
        frontier = nxt
    return basis, piv


# --- polynomials over GF (dense coefficient lists, low degree first) ---
def poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(F, a, b):
    n = max(len(a), len(b))
    return poly_trim([F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_divmod(F, a, b):
    a = a[:]
    q = [F.zero] * max(0, len(a) - len(b) + 1)
    inv = F.inv(b[-1])
    while len(a) >= len(b):
        c = F.mul(a[-1], inv)
        d = len(a) - len(b)
        q[d] = c
        for i in range(len(b)):
            a[d + i] = F.sub(a[d + i], F.mul(c, b[i]))
        poly_trim(a)
        if not a:
            break
    return poly_trim(q), poly_trim(a)


def poly_gcd(F, a, b):
    a, b = a[:], b[:]
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    if a:
        inv = F.inv(a[-1])
        a = [F.mul(x, inv) for x in a]
    return a


def poly_powmod(F, a, e, mod):
    result = [F.one]
    base = poly_divmod(F, a, mod)[1]
    while e:
        if e & 1:
            result = poly_divmod(F, poly_mul(F, result, base), mod)[1]
        base = poly_divmod(F, poly_mul(F, base, base), mod)[1]
        e >>= 1
    return result


def poly_eval_matrix(F, p, mat):
    n = len(mat)
    out = mat_scale(F, identity(F, n), p[0] if p else F.zero)
    power = identity(F, n)
    for c in p[1:]:
        power = mat_mul(F, power, mat)
        if c:
            out = mat_add(F, out, mat_scale(F, power, c))
    return out


def factor_squarefree_irreducible(F: GF, p, rng):
    """Irreducible factors (with multiplicity dropped) of a monic polynomial,
    by distinct-degree splitting plus Cantor-Zassenhaus."""
    p = p[:]
    inv = F.inv(p[-1])
    p = [F.mul(x, inv) for x in p]
    # make squarefree
    dp = poly_trim([F.mul(F.from_int(i), p[i]) for i in range(1, len(p))])
    if dp:
        g = poly_gcd(F, p, dp)
        if len(g) > 1:
            p = poly_divmod(F, p, g)[0]
            return sorted(
                set(
                    tuple(f)
                    for f in factor_squarefree_irreducible(F, p, rng)
                    + factor_squarefree_irreducible(F, g, rng)
                )
            )
    else:
        # p is a polynomial in x^char: take char-th root
        char = F.p
        root = [p[i] for i in range(0, len(p), char)]
        # coefficients need the inverse Frobenius, x -> x^(q/char)
        e = F.q // char
        root = [F.pow(c, e) if c else 0 for c in root]
        return factor_squarefree_irreducible(F, root, rng)

    out = []
    stack = [p]
    x = [0, 1]
    while stack:
        f = stack.pop()
        if len(f) <= 1:
            continue
        if len(f) == 2:
            inv = F.inv(f[-1])
            out.append(tuple(F.mul(c, inv) for c in f))
            continue
        # distinct degree
        d = 1
        rest = f
        split = False
        while 2 * d <= len(rest) - 1 and not split:
            xq = poly_powmod(F, x, F.q**d, rest)
            g = poly_gcd(F, poly_add(F, xq, [0, F.neg(F.one)]), rest)
            if 1 < len(g) <= len(rest):
                if len(g) < len(rest):
                    stack.append(g)
                    stack.append(poly_divmod(F, rest, g)[0])
                    split = True
                    break
                # all factors have degree d: equal degree splitting
                if len(rest) - 1 == d:
                    out.append(tuple(rest))
                    split = True
                    break
                while True:
                    r = [rng.randrange(F.q) for _ in range(len(rest) - 1)]
                    r = poly_trim(r)
                    if len(r) < 2:
                        continue
                    if F.q % 2:
                        h = poly_powmod(F, r, (F.q**d - 1) // 2, rest)
                        h = poly_add(F, h, [F.neg(F.one)])
                    else:
                        h = r
                        acc = r
                        for _ in range(d * F.k - 1):
                            acc = poly_powmod(F, poly_mul(F, acc, acc), 1, rest)
                            h = poly_add(F, h, acc)
                    g2 = poly_gcd(F, h, rest)
                    if 1 < len(g2) < len(rest):
                        stack.append(g2)
                        stack.append(poly_divmod(F, rest, g2)[0])
                        split = True
                        break
                break
            d += 1
        if not split:
            inv = F.inv(rest[-1])
            out.append(tuple(F.mul(c, inv) for c in rest))
    return sorted(set(out))


def minpoly_matrix(F: GF, mat, rng=None):
    """Minimal polynomial: lcm of the minimal polynomials on basis vectors."""
    n = len(mat)
    mp = [F.one]
    for i in range(n):
        v = [F.zero] * n
        v[i] = F.one
        # krylov space of v
        rows = [v[:]]
        cur = v
        while True:
            cur = vec_mat(F, cur, mat)
            a, piv = rref(F, rows + [cur])
            if len(piv) == len(rows):
                break
            rows.append(cur)
        # linear dependence: last krylov vector in span of previous
        k = len(rows)
        cols = list(zip(*rows))
        target = vec_mat(F, rows[-1], mat)
        sol = solve(F, [list(c) for c in cols], list(target))
        poly = [F.neg(c) for c in sol] + [F.one]
        mp = poly_lcm(F, mp, poly)
        if len(mp) == n + 1:
            break
    return mp


def poly_lcm(F, a, b):
    g = poly_gcd(F, a, b)
    q = poly_divmod(F, poly_mul(F, a, b), g)[0]
    inv = F.inv(q[-1])
    return [F.mul(x, inv) for x in q]

"""Arithmetic in small finite fields F_{p^k}.

Elements are plain ints in ``range(p**k)`` encoding polynomial coordinates
base p (least significant digit = constant term).  All operations go through
a ``GF`` instance; for the field sizes used here (q <= a few thousand) the
multiplicative structure is precomputed via discrete logs, so products and
inverses are table lookups.
"""

from __future__ import annotations

from functools import lru_cache


def _poly_from_int(a: int, p: int) -> list[int]:
    out = []
    while a:
        out.append(a % p)
        a //= p
    return out


def _int_from_poly(cs, p: int) -> int:
    a = 0
    for c in reversed(cs):
        a = a * p + (c % p)
    return a


def _polymulmod(f, g, mod, p):
    # dense coefficient lists, reduced modulo `mod` (monic)
    res = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                res[i + j] = (res[i + j] + a * b) % p
    d = len(mod) - 1
    while len(res) > d:
        lead = res.pop()
        if lead:
            for i in range(d):
                res[-d + i] = (res[-d + i] - lead * mod[i]) % p
    return res


def _is_irreducible(mod, p):
    # x^(p^i) mod f, checking gcd conditions via the Rabin test
    k = len(mod) - 1
    x = [0, 1]

    def powx(e):
        base = x[:]
        result = [1]
        while e:
            if e & 1:
                result = _polymulmod(result, base, mod, p)
            base = _polymulmod(base, base, mod, p)
            e >>= 1
        return result

    xq = powx(p**k)
    # x^(p^k) == x mod f
    t = xq[:]
    if len(t) < 2:
        t += [0] * (2 - len(t))
    t[1] = (t[1] - 1) % p
    if any(t):
        return False
    for r in {k // d for d in _prime_divisors(k)}:
        xr = powx(p**r)
        t = xr[:]
        if len(t) < 2:
            t += [0] * (2 - len(t))
        t[1] = (t[1] - 1) % p
        g = _polygcd(t, mod, p)
        if len(g) - 1 > 0:
            return False
    return True


def _prime_divisors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _polygcd(f, g, p):
    f, g = [c % p for c in f], [c % p for c in g]
    while any(g):
        f, g = g, _polymod(f, g, p)
    while f and f[-1] == 0:
        f.pop()
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [(c * inv) % p for c in f]
    return f


def _polymod(f, g, p):
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    gg = [c % p for c in g]
    while gg and gg[-1] == 0:
        gg.pop()
    inv = pow(gg[-1], p - 2, p)
    while len(f) >= len(gg):
        coef = (f[-1] * inv) % p
        shift = len(f) - len(gg)
        for i, c in enumerate(gg):
            f[shift + i] = (f[shift + i] - coef * c) % p
        while f and f[-1] == 0:
            f.pop()
    return f


def find_irreducible(p: int, k: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree k over F_p."""
    if k == 1:
        return [0, 1]
    bound = p**k
    for tail in range(bound):
        mod = _poly_from_int(tail, p)
        mod += [0] * (k - len(mod)) + [1]
        if _is_irreducible(mod, p):
            return mod
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class GF:
    """The field F_{p^k} with int-encoded elements."""

    def __init__(self, p: int, k: int = 1):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = find_irreducible(p, k)
        self.zero = 0
        self.one = 1
        self._build_tables()

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        # find a generator of the multiplicative group by trial
        elems = list(range(1, q))
        target = q - 1
        gen = None
        for cand in elems:
            seen = set()
            x = 1
            for _ in range(target):
                x = self._mul_raw(x, cand)
                seen.add(x)
            if len(seen) == target:
                gen = cand
                break
        assert gen is not None
        self.generator = gen
        self._exp = [1] * (2 * target)
        self._log = [0] * q
        x = 1
        for i in range(target):
            self._exp[i] = x
            self._log[x] = i
            x = self._mul_raw(x, gen)
        for i in range(target, 2 * target):
            self._exp[i] = self._exp[i - target]

    def _mul_raw(self, a: int, b: int) -> int:
        p = self.p
        f = _poly_from_int(a, p)
        g = _poly_from_int(b, p)
        if not f or not g:
            return 0
        return _int_from_poly(_polymulmod(f, g, self.modulus, p), p)

    # --- basic ops ---
    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return (a + b) % p
        out, mult = 0, 1
        while a or b:
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.k == 1:
            return (-a) % p
        out, mult = 0, 1
        while a:
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the rational integer n in the prime field."""
        return n % self.p

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        d = self._log[a]
        return (self.q - 1) // _gcd(d, self.q - 1)

    def element_of_order(self, n: int) -> int:
        """A fixed element of multiplicative order n (n must divide q-1)."""
        if (self.q - 1) % n:
            raise ValueError(f"no element of order {n} in F_{self.q}")
        return self._exp[(self.q - 1) // n]

    def elements(self):
        return range(self.q)

    def __repr__(self):
        return f"GF({self.p},{self.k})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=None)
def get_field(p: int, k: int = 1) -> GF:
    return GF(p, k)

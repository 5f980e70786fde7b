"""Laurent polynomials in half-integer powers of the parameters q_s.

There is one parameter per conjugacy class of simple affine reflections.
Exponent vectors are stored as tuples of ints counting half-steps, so the
stored value n means q_s^(n/2); this keeps all arithmetic integral.
Coefficients live in a ``GF`` field.
"""

from __future__ import annotations

from .gf import GF


class LaurentRing:
    """F_{p^k}[q_1^{±1/2}, ..., q_m^{±1/2}] with m = number of classes."""

    def __init__(self, field: GF, nclasses: int):
        self.field = field
        self.n = nclasses
        self.zero = Laurent(self, {})
        zexp = (0,) * nclasses
        self.one = Laurent(self, {zexp: field.one})

    def scalar(self, c: int) -> "Laurent":
        if c == 0:
            return self.zero
        return Laurent(self, {(0,) * self.n: c})

    def from_int(self, n: int) -> "Laurent":
        return self.scalar(self.field.from_int(n))

    def monomial(self, half_exps, c: int | None = None) -> "Laurent":
        """q^(half_exps/2) with optional scalar coefficient."""
        if c is None:
            c = self.field.one
        if c == 0:
            return self.zero
        return Laurent(self, {tuple(half_exps): c})

    def q_class(self, i: int, halves: int = 2) -> "Laurent":
        e = [0] * self.n
        e[i] = halves
        return self.monomial(e)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentRing)
            and self.field == other.field
            and self.n == other.n
        )

    def __hash__(self):
        return hash((self.field, self.n))

    def __repr__(self):
        return f"LaurentRing({self.field}, {self.n})"


class Laurent:
    """Immutable sparse Laurent polynomial; no stored zero terms."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: LaurentRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # --- constructors / predicates ---
    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        z = (0,) * self.ring.n
        return len(self.terms) == 1 and self.terms.get(z) == self.ring.field.one

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_integral(self) -> bool:
        """True iff every exponent entry is >= 0 (element of F[q_s^{1/2}])."""
        return all(all(e >= 0 for e in exps) for exps in self.terms)

    # --- ring ops ---
    def __add__(self, other: "Laurent") -> "Laurent":
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        f = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = f.add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Laurent(self.ring, out)

    def __neg__(self) -> "Laurent":
        f = self.ring.field
        return Laurent(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other: "Laurent") -> "Laurent":
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        f = self.ring.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = f.add(out.get(e, 0), f.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Laurent(self.ring, out)

    def scale(self, c: int) -> "Laurent":
        f = self.ring.field
        if c == 0:
            return self.ring.zero
        return Laurent(self.ring, {e: f.mul(v, c) for e, v in self.terms.items()})

    def mul_monomial(self, half_exps, c: int | None = None) -> "Laurent":
        f = self.ring.field
        if c is None:
            c = f.one
        if c == 0:
            return self.ring.zero
        he = tuple(half_exps)
        return Laurent(
            self.ring,
            {
                tuple(a + b for a, b in zip(e, he)): f.mul(v, c)
                for e, v in self.terms.items()
            },
        )

    def inv_monomial(self) -> "Laurent":
        """Inverse, defined only for monomials."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible here")
        ((e, c),) = self.terms.items()
        f = self.ring.field
        return Laurent(self.ring, {tuple(-x for x in e): f.inv(c)})

    # --- specialization ---
    def at_q_zero(self) -> int:
        """Field scalar obtained from q_s^{1/2} -> 0; needs integrality."""
        z = (0,) * self.ring.n
        out = self.ring.field.zero
        for e, c in self.terms.items():
            if any(x < 0 for x in e):
                raise ValueError("negative exponent: element not integral")
            if e == z:
                out = self.ring.field.add(out, c)
        return out

    # --- plumbing ---
    def __eq__(self, other):
        return (
            isinstance(other, Laurent)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"q{i}^({x}/2)" for i, x in enumerate(e) if x
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    def serialize(self):
        return [[list(e), c] for e, c in sorted(self.terms.items())]

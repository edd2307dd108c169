"""Exact arithmetic in Z[zeta_p] for odd prime p.

Values are integer coefficient vectors of length p-1 over the power basis
1, zeta, ..., zeta^(p-2); the relation zeta^(p-1) = -(1 + zeta + ... +
zeta^(p-2)) keeps the representation canonical, so equality of coefficient
tuples is equality of algebraic numbers.  Used for character sums, where
floating point would be unacceptable.
"""

from __future__ import annotations


class CycInt:
    __slots__ = ("p", "coeffs")

    def __init__(self, p, coeffs):
        if p < 3:
            raise ValueError("p must be an odd prime")
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != p - 1:
            raise ValueError(f"need {p - 1} coefficients for Z[zeta_{p}]")
        self.p = p
        self.coeffs = coeffs

    @classmethod
    def zero(cls, p):
        return cls(p, (0,) * (p - 1))

    @classmethod
    def one(cls, p):
        return cls(p, (1,) + (0,) * (p - 2))

    @classmethod
    def integer(cls, p, k):
        return cls(p, (int(k),) + (0,) * (p - 2))

    @classmethod
    def zeta_power(cls, p, k):
        return cls.from_exponent_counts(p, {int(k) % p: 1})

    @classmethod
    def from_exponent_counts(cls, p, counts):
        """Sum of counts[e] copies of zeta^e, exponents taken mod p."""
        acc = [0] * p
        for e, c in counts.items():
            acc[int(e) % p] += int(c)
        top = acc[p - 1]
        return cls(p, tuple(acc[k] - top for k in range(p - 1)))

    def _check(self, other):
        if not isinstance(other, CycInt):
            raise TypeError("expected a CycInt")
        if other.p != self.p:
            raise ValueError("mixed cyclotomic orders")

    def __add__(self, other):
        self._check(other)
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CycInt(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.p, tuple(a * other for a in self.coeffs))
        self._check(other)
        p = self.p
        acc = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        acc[(i + j) % p] += a * b
        top = acc[p - 1]
        return CycInt(p, tuple(acc[k] - top for k in range(p - 1)))

    __rmul__ = __mul__

    def conj(self):
        """Complex conjugation zeta -> zeta^(-1)."""
        p = self.p
        acc = [0] * p
        for k, a in enumerate(self.coeffs):
            acc[(-k) % p] += a
        top = acc[p - 1]
        return CycInt(p, tuple(acc[k] - top for k in range(p - 1)))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.equals_integer(other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def equals_integer(self, k):
        return self.coeffs[0] == int(k) and all(c == 0 for c in self.coeffs[1:])

    def norm_squared(self):
        """self * conj(self); real and nonnegative, but returned as a CycInt."""
        return self * self.conj()

    def __repr__(self):
        return f"CycInt(p={self.p}, {self.coeffs})"

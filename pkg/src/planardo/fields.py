"""Finite field towers F_p <= F_q <= F_{q^n} with deterministic construction.

A field context represents F_{p^(m*n)} as F_p[x]/(modulus) where the modulus is
the lexicographically smallest monic irreducible of degree m*n (coefficients
compared low-degree-first) and the multiplicative generator is the smallest
element of full order in the same coefficient order.  Both are therefore
functions of (p, m, n) alone, so element encodings are reproducible across
runs and machines.

Elements are stored as integer codes: code = sum(coeff[i] * p**i) over the
power basis 1, x, x^2, ...  Small fields get exp/dlog tables (p^(m*n) <= 2^20)
and full addition/multiplication tables (p^(m*n) <= 2048); all kernel methods
accept plain ints or numpy arrays of codes and return the matching kind, which
is what the sweep engines build on.
"""

from __future__ import annotations

import functools
import itertools
import math
import os

import numpy as np

SIZE_CAP_ENV = "PLANARDO_SIZE_CAP"
DEFAULT_SIZE_CAP = 1 << 24
DLOG_CAP = 1 << 20
OP_TABLE_CAP = 2048


class FieldSizeError(ValueError):
    """Requested field exceeds the configured size cap."""


def _is_prime(v):
    if v < 2:
        return False
    for d in range(2, math.isqrt(v) + 1):
        if v % d == 0:
            return False
    return True


def _factorize(v):
    """Prime factors of v (ascending, distinct)."""
    out = []
    d = 2
    while d * d <= v:
        if v % d == 0:
            out.append(d)
            while v % d == 0:
                v //= d
        d += 1
    if v > 1:
        out.append(v)
    return out


# -- polynomial helpers over F_p; coefficient lists are low-degree-first --

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, f, p):
    a = list(a)
    inv_lead = pow(f[-1], -1, p)
    while len(a) >= len(f):
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(f)
        if c:
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fi) % p
        a.pop()
    return _ptrim(a)


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(f, p):
    """Monic f of degree d is irreducible iff x^(p^d) == x mod f and
    gcd(x^(p^(d/l)) - x, f) == 1 for every prime l dividing d."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    frob = [x]  # frob[k] = x^(p^k) mod f
    for _ in range(d):
        frob.append(_ppowmod(frob[-1], p, f, p))
    if frob[d] != x:
        return False
    for l in _factorize(d):
        sub = [(c - x_c) % p for c, x_c in itertools.zip_longest(frob[d // l], x, fillvalue=0)]
        g = _pgcd(f, _ptrim(sub), p)
        if len(g) != 1:
            return False
    return True


def lex_irreducible(p, d, index=0):
    """The (index+1)-th monic irreducible of degree d over F_p in lexicographic
    order on (c_0, ..., c_{d-1}).  Returned low-degree-first including the
    leading 1."""
    seen = 0
    for tail in itertools.product(range(p), repeat=d):
        f = list(tail) + [1]
        if _is_irreducible(f, p):
            if seen == index:
                return tuple(f)
            seen += 1
    raise ValueError(f"no irreducible of degree {d} over F_{p} at index {index}")


class FieldElem:
    """An element of a FieldCtx; thin wrapper over an integer code."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx, code):
        self.ctx = ctx
        self.code = int(code)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ValueError("elements from different field contexts")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.ctx.scalar(other).code
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.sub(self.code, c))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.sub(c, self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if c == 0:
            raise ZeroDivisionError("division by zero field element")
        return FieldElem(self.ctx, self.ctx.mul(self.code, self.ctx.inv(c)))

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if self.code == 0:
            raise ZeroDivisionError("division by zero field element")
        return FieldElem(self.ctx, self.ctx.mul(c, self.ctx.inv(self.code)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, e):
        return FieldElem(self.ctx, self.ctx.pow_int(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx is other.ctx and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == self.ctx.scalar(other).code
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.code))

    def __bool__(self):
        return self.code != 0

    def coeffs(self):
        return self.ctx.code_coeffs(self.code)

    def frob(self, i=1):
        """q-power Frobenius: self**(q**i)."""
        return FieldElem(self.ctx, self.ctx.frob(self.code, i))

    def trace(self, sub_order=None):
        return FieldElem(self.ctx, self.ctx.trace_to(self.code, sub_order))

    def norm(self, sub_order=None):
        return FieldElem(self.ctx, self.ctx.norm_to(self.code, sub_order))

    def dlog(self):
        return self.ctx.dlog(self.code)

    def is_nonzero_square(self, sub_order):
        return bool(self.ctx.is_nonzero_square(self.code, sub_order))

    def __repr__(self):
        if self.code == 0:
            return f"<0 in F_{self.ctx.size}>"
        if self.ctx.has_dlog:
            return f"<g^{self.ctx.dlog(self.code)}={self.coeffs()} in F_{self.ctx.size}>"
        return f"<{self.coeffs()} in F_{self.ctx.size}>"


class FieldCtx:
    """F_{p^(m*n)} with its tower structure F_p <= F_q=F_{p^m} <= F_{q^n}."""

    def __init__(self, p, m, n, modulus, build_tables=True):
        self.p = p
        self.m = m
        self.n = n
        self.degree = m * n
        self.q = p ** m
        self.size = p ** self.degree
        self.modulus = tuple(modulus)
        self._ppows = [p ** i for i in range(self.degree + 1)]
        # gamma^(degree+t) mod modulus for t in [0, degree-2]: reduction rows
        self._red = []
        row = [(-c) % p for c in self.modulus[:-1]]
        for _ in range(max(self.degree - 1, 0)):
            self._red.append(list(row))
            row = self._shift_reduce(row)
        self.generator = None
        self._exp = None
        self._dlog = None
        self._add_flat = None
        self._mul_flat = None
        self._neg_t = None
        self._inv_t = None
        self._frob_tables = {}
        self._abs_tr = None
        self._sub_cache = {}
        self._find_generator()
        if build_tables:
            self._build_tables()

    # -- bootstrap scalar arithmetic straight on codes --

    def code_coeffs(self, code):
        p = self.p
        return tuple((code // self._ppows[i]) % p for i in range(self.degree))

    def coeffs_code(self, coeffs):
        if len(coeffs) > self.degree:
            raise ValueError("coefficient vector longer than field degree")
        return sum((int(c) % self.p) * self._ppows[i] for i, c in enumerate(coeffs))

    def _shift_reduce(self, row):
        # multiply the coefficient row by gamma and reduce once
        d, p = self.degree, self.p
        lead = row[-1]
        out = [0] + row[:-1]
        if lead:
            for i in range(d):
                out[i] = (out[i] + lead * ((-self.modulus[i]) % p)) % p
        return out

    def _code_add(self, x, y):
        p, out = self.p, 0
        for i in range(self.degree):
            pi = self._ppows[i]
            out += (((x // pi) + (y // pi)) % p) * pi
        return out

    def _code_neg(self, x):
        p, out = self.p, 0
        for i in range(self.degree):
            pi = self._ppows[i]
            out += ((-(x // pi)) % p) * pi
        return out

    def _code_mul(self, x, y):
        d, p = self.degree, self.p
        a = self.code_coeffs(x)
        b = self.code_coeffs(y)
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = [c % p for c in conv[:d]]
        for t in range(d - 1):
            c = conv[d + t] % p
            if c:
                red = self._red[t]
                for i in range(d):
                    out[i] = (out[i] + c * red[i]) % p
        return sum(out[i] * self._ppows[i] for i in range(d))

    def _code_pow(self, x, e):
        result = 1
        base = x
        while e:
            if e & 1:
                result = self._code_mul(result, base)
            base = self._code_mul(base, base)
            e >>= 1
        return result

    def _find_generator(self):
        unit_order = self.size - 1
        primes = _factorize(unit_order)
        for coeffs in itertools.product(range(self.p), repeat=self.degree):
            code = self.coeffs_code(coeffs)
            if code == 0:
                continue
            if all(self._code_pow(code, unit_order // l) != 1 for l in primes):
                self.generator = FieldElem(self, code)
                return
        raise RuntimeError("no generator found (modulus not irreducible?)")

    def _build_tables(self):
        Q = self.size
        if Q > DLOG_CAP:
            return
        exp = np.zeros(Q - 1, dtype=np.int64)
        g = self.generator.code
        acc = 1
        for e in range(Q - 1):
            exp[e] = acc
            acc = self._code_mul(acc, g)
        if acc != 1:
            raise RuntimeError("generator order mismatch")
        dlog = np.full(Q, -1, dtype=np.int64)
        dlog[exp] = np.arange(Q - 1)
        self._exp = exp
        self._dlog = dlog
        codes = np.arange(Q, dtype=np.int64)
        self._neg_t = self._digit_neg(codes)
        inv_t = np.zeros(Q, dtype=np.int64)
        inv_t[exp] = exp[(-np.arange(Q - 1)) % (Q - 1)]
        self._inv_t = inv_t
        if Q <= OP_TABLE_CAP:
            self._add_flat = self._digit_add(
                codes[:, None], codes[None, :]).astype(np.int32).ravel()
            esum = (np.arange(Q - 1)[:, None] + np.arange(Q - 1)[None, :]) % (Q - 1)
            mul = np.zeros((Q, Q), dtype=np.int32)
            mul[np.ix_(exp, exp)] = exp[esum]
            self._mul_flat = mul.ravel()

    def _digit_add(self, X, Y):
        p, out = self.p, 0
        for i in range(self.degree):
            pi = self._ppows[i]
            out = out + (((X // pi) + (Y // pi)) % p) * pi
        return out

    def _digit_neg(self, X):
        p, out = self.p, 0
        for i in range(self.degree):
            pi = self._ppows[i]
            out = out + ((-(X // pi)) % p) * pi
        return out

    # -- uniform kernels: int in -> int out, ndarray in -> ndarray out --

    @staticmethod
    def _both_scalar(x, y):
        return isinstance(x, (int, np.integer)) and isinstance(y, (int, np.integer))

    def add(self, x, y):
        if self._both_scalar(x, y):
            if self._add_flat is not None:
                return int(self._add_flat[int(x) * self.size + int(y)])
            return self._code_add(int(x), int(y))
        if self._add_flat is not None:
            return self._add_flat[np.asarray(x, dtype=np.int64) * self.size + y].astype(np.int64)
        return self._digit_add(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))

    def neg(self, x):
        if isinstance(x, (int, np.integer)):
            if self._neg_t is not None:
                return int(self._neg_t[int(x)])
            return self._code_neg(int(x))
        if self._neg_t is not None:
            return self._neg_t[x]
        return self._digit_neg(np.asarray(x, dtype=np.int64))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self._both_scalar(x, y):
            if self._mul_flat is not None:
                return int(self._mul_flat[int(x) * self.size + int(y)])
            if self._exp is not None:
                if x == 0 or y == 0:
                    return 0
                return int(self._exp[(int(self._dlog[x]) + int(self._dlog[y])) % (self.size - 1)])
            return self._code_mul(int(x), int(y))
        if self._mul_flat is not None:
            return self._mul_flat[np.asarray(x, dtype=np.int64) * self.size + y].astype(np.int64)
        X = np.asarray(x, dtype=np.int64)
        Y = np.asarray(y, dtype=np.int64)
        self._require_dlog()
        out = self._exp[(self._dlog[X] + self._dlog[Y]) % (self.size - 1)]
        return np.where((X == 0) | (Y == 0), 0, out)

    def inv(self, x):
        if isinstance(x, (int, np.integer)):
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            if self._inv_t is not None:
                return int(self._inv_t[int(x)])
            return self._code_pow(int(x), self.size - 2)
        if np.any(np.asarray(x) == 0):
            raise ZeroDivisionError("inverse of zero")
        if self._inv_t is None:
            self._require_dlog()
        return self._inv_t[x]

    def pow_int(self, x, e):
        """x**e with e any integer; 0**e is 0 for e > 0, 1 for e == 0."""
        e = int(e)
        if isinstance(x, (int, np.integer)):
            x = int(x)
            if e == 0:
                return 1
            if x == 0:
                if e < 0:
                    raise ZeroDivisionError("negative power of zero")
                return 0
            if self._exp is not None:
                return int(self._exp[(int(self._dlog[x]) * e) % (self.size - 1)])
            return self._code_pow(x, e % (self.size - 1))
        X = np.asarray(x, dtype=np.int64)
        if e == 0:
            return np.ones_like(X)
        self._require_dlog()
        if e < 0 and np.any(X == 0):
            raise ZeroDivisionError("negative power of zero")
        out = self._exp[(self._dlog[X] * e) % (self.size - 1)]
        return np.where(X == 0, 0, out)

    def _require_dlog(self):
        if self._exp is None:
            raise FieldSizeError(
                f"field of size {self.size} exceeds the dlog table cap {DLOG_CAP}; "
                "vectorized kernels unavailable")

    def _frob_table(self, j):
        """Permutation table for x -> x^(p^j)."""
        j %= self.degree
        t = self._frob_tables.get(j)
        if t is None:
            self._require_dlog()
            Q = self.size
            t = np.zeros(Q, dtype=np.int64)
            t[self._exp] = self._exp[(np.arange(Q - 1) * pow(self.p, j, Q - 1)) % (Q - 1)]
            self._frob_tables[j] = t
        return t

    def frob_p(self, x, j=1):
        """x**(p**j)."""
        j %= self.degree
        if j == 0:
            return int(x) if isinstance(x, (int, np.integer)) else np.asarray(x, dtype=np.int64)
        if isinstance(x, (int, np.integer)):
            if self._exp is not None:
                return int(self._frob_table(j)[int(x)])
            if x == 0:
                return 0
            return self._code_pow(int(x), pow(self.p, j, self.size - 1))
        return self._frob_table(j)[x]

    def frob(self, x, i=1):
        """q-power Frobenius x**(q**i); i is reduced mod n."""
        return self.frob_p(x, (self.m * (i % self.n)) % self.degree)

    def _sub_degree(self, sub_order):
        if sub_order is None:
            return self.m
        e = 0
        v = 1
        while v < sub_order:
            v *= self.p
            e += 1
        if v != sub_order or e == 0 or self.degree % e != 0:
            raise ValueError(
                f"{sub_order} is not the order of a subfield of F_{self.p}^{self.degree}")
        return e

    def trace_to(self, x, sub_order=None):
        """Relative trace onto the subfield of the given order (default F_q)."""
        e = self._sub_degree(sub_order)
        acc = x
        y = x
        for _ in range(self.degree // e - 1):
            y = self.frob_p(y, e)
            acc = self.add(acc, y)
        return acc

    def norm_to(self, x, sub_order=None):
        """Relative norm onto the subfield of the given order (default F_q)."""
        e = self._sub_degree(sub_order)
        acc = x
        y = x
        for _ in range(self.degree // e - 1):
            y = self.frob_p(y, e)
            acc = self.mul(acc, y)
        return acc

    def abs_trace_int(self, x):
        """Absolute trace down to F_p as a plain int (or int array) in [0, p)."""
        if self._abs_tr is None:
            if self._exp is not None:
                codes = np.arange(self.size, dtype=np.int64)
                self._abs_tr = self.trace_to(codes, self.p)
            else:
                return self.trace_to(x, self.p)
        if isinstance(x, (int, np.integer)):
            return int(self._abs_tr[int(x)])
        return self._abs_tr[x]

    def _subfield(self, sub_order):
        e = self._sub_degree(sub_order)
        info = self._sub_cache.get(e)
        if info is None:
            self._require_dlog()
            step = (self.size - 1) // (sub_order - 1)
            units = self._exp[np.arange(sub_order - 1) * step]
            member = np.zeros(self.size, dtype=bool)
            member[units] = True
            member[0] = True
            info = {"order": sub_order, "step": step, "units": units, "member": member}
            self._sub_cache[e] = info
        return info

    def in_subfield(self, x, sub_order):
        self._sub_degree(sub_order)
        if isinstance(x, (int, np.integer)) and self._exp is None:
            return self.pow_int(int(x), sub_order) == int(x)
        info = self._subfield(sub_order)
        if isinstance(x, (int, np.integer)):
            return bool(info["member"][int(x)])
        return info["member"][x]

    def is_nonzero_square(self, x, sub_order):
        """Whether x is a nonzero square of the subfield of the given order.

        Raises ValueError when x does not lie in that subfield."""
        if isinstance(x, (int, np.integer)) and self._exp is None:
            x = int(x)
            if not self.in_subfield(x, sub_order):
                raise ValueError(f"element not in the subfield of order {sub_order}")
            return x != 0 and self.pow_int(x, (sub_order - 1) // 2) == 1
        info = self._subfield(sub_order)
        step2 = 2 * info["step"]
        if isinstance(x, (int, np.integer)):
            x = int(x)
            if not info["member"][x]:
                raise ValueError(f"element not in the subfield of order {sub_order}")
            if x == 0:
                return False
            return int(self._dlog[x]) % step2 == 0
        X = np.asarray(x, dtype=np.int64)
        if not np.all(info["member"][X]):
            raise ValueError(f"element not in the subfield of order {sub_order}")
        return (X != 0) & (self._dlog[X] % step2 == 0)

    def subfield_units(self, sub_order):
        """Unit codes of the subfield, in generator-exponent order."""
        return self._subfield(sub_order)["units"].copy()

    # -- element constructors and iteration --

    def elem(self, code):
        code = int(code)
        if not 0 <= code < self.size:
            raise ValueError(f"element code {code} out of range for F_{self.size}")
        return FieldElem(self, code)

    def scalar(self, k):
        return FieldElem(self, int(k) % self.p)

    def zero(self):
        return FieldElem(self, 0)

    def one(self):
        return FieldElem(self, 1)

    def gen(self):
        return FieldElem(self, self.generator.code)

    def from_coeffs(self, coeffs):
        return FieldElem(self, self.coeffs_code(coeffs))

    def from_exp(self, e):
        if self._exp is not None:
            return FieldElem(self, int(self._exp[e % (self.size - 1)]))
        return FieldElem(self, self._code_pow(self.generator.code, e % (self.size - 1)))

    def dlog(self, x):
        x = int(x.code if isinstance(x, FieldElem) else x)
        if x == 0:
            raise ValueError("dlog of zero")
        self._require_dlog()
        return int(self._dlog[x])

    @property
    def has_dlog(self):
        return self._exp is not None

    def unit_exp_codes(self):
        """All unit codes as an array indexed by generator exponent."""
        self._require_dlog()
        return self._exp.copy()

    def elements(self):
        return (FieldElem(self, c) for c in range(self.size))

    def units(self):
        """Units in generator-exponent order g^0, g^1, ..."""
        if self._exp is not None:
            return (FieldElem(self, int(c)) for c in self._exp)
        return (self.from_exp(e) for e in range(self.size - 1))

    def fingerprint(self):
        return {
            "p": self.p,
            "m": self.m,
            "n": self.n,
            "modulus": list(self.modulus),
            "generator": list(self.generator.coeffs()),
            "encoding": "generator-exponent",
        }

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, n={self.n}, size={self.size})"


def _effective_cap(size_cap):
    if size_cap is not None:
        return int(size_cap)
    env = os.environ.get(SIZE_CAP_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_SIZE_CAP


@functools.lru_cache(maxsize=32)
def _cached_ctx(p, m, n, modulus):
    return FieldCtx(p, m, n, modulus)


def build_field(p, m, n, *, modulus=None, size_cap=None, cache=True):
    """Construct the tower F_p <= F_{p^m} <= F_{p^(m*n)}.

    The modulus defaults to the lexicographically smallest monic irreducible of
    degree m*n; pass an explicit low-degree-first coefficient tuple to pin a
    different model of the same field.  The size cap (default 2^24) may be
    overridden by the PLANARDO_SIZE_CAP environment variable or the size_cap
    argument."""
    p, m, n = int(p), int(m), int(n)
    if p < 3 or not _is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    size = p ** (m * n)
    cap = _effective_cap(size_cap)
    if size > cap:
        raise FieldSizeError(f"field size {size} exceeds cap {cap}")
    if modulus is None:
        modulus = lex_irreducible(p, m * n)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m * n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m*n, low-degree-first")
        if not _is_irreducible(list(modulus), p):
            raise ValueError("modulus is not irreducible")
    if cache:
        return _cached_ctx(p, m, n, modulus)
    return FieldCtx(p, m, n, modulus)

"""Dembowski-Ostrom polynomials over F_{q^n} and their planarity oracles.

A DO polynomial is f(x) = sum a[i][j] x^(q^i + q^j) over 0 <= j <= i < n.
Its difference map x -> f(x+c) - f(x) - f(c) is the linearized polynomial
Lambda_c, so f is planar (every nonzero-shift difference map bijective) iff
Lambda_c has trivial kernel for all c != 0, iff the F_q-valued quadratic form
x -> Tr(c f(x)) is nondegenerate for all c != 0.  Both readings are
implemented as oracles: a brute-force kernel scan and a Gram-determinant
check; they must agree everywhere and cross-validate each other in tests.

Exponent pairs are canonical: distinct coefficient arrays give distinct
functions (all exponents q^i + q^j are distinct and below q^n for odd q), so
coefficient equality is function equality.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .cyclotomic import CycInt
from .fields import FieldElem


@dataclass
class PlanarityVerdict:
    planar: bool
    witness: FieldElem | None
    oracle: str


def _code_of(ctx, v):
    if isinstance(v, FieldElem):
        if v.ctx is not ctx:
            raise ValueError("element from a different field context")
        return v.code
    return int(v)


class LinearizedPoly:
    """L(x) = sum c[i] x^(q^i), Frobenius powers i in [0, n)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        coeffs = [_code_of(ctx, c) for c in coeffs]
        if len(coeffs) > ctx.n:
            raise ValueError("too many linearized coefficients")
        coeffs += [0] * (ctx.n - len(coeffs))
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    def __call__(self, x):
        ctx = self.ctx
        xin = x.code if isinstance(x, FieldElem) else x
        acc = 0
        for i, c in enumerate(self.coeffs):
            if c:
                acc = ctx.add(acc, ctx.mul(c, ctx.frob(xin, i)))
        if isinstance(x, FieldElem):
            return FieldElem(ctx, acc)
        if isinstance(xin, np.ndarray) and not isinstance(acc, np.ndarray):
            acc = np.full(xin.shape, acc, dtype=np.int64)
        return acc

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_permutation(self):
        """Trivial-kernel test; a linearized map is bijective iff only 0 maps to 0."""
        ctx = self.ctx
        if self.is_zero():
            return False
        if ctx.has_dlog:
            vals = self(ctx.unit_exp_codes())
            return not np.any(vals == 0)
        return all(bool(self(x)) for x in ctx.units())

    def square(self):
        """The DO polynomial L(x)^2."""
        ctx = self.ctx
        terms = {}
        for i, ci in enumerate(self.coeffs):
            if ci:
                terms[(i, i)] = ctx.mul(ci, ci)
        two = ctx.scalar(2).code
        for i in range(ctx.n):
            for j in range(i):
                cij = ctx.mul(self.coeffs[i], self.coeffs[j])
                if cij:
                    terms[(i, j)] = ctx.mul(two, cij)
        return DOPoly.from_terms(ctx, terms)

    def __eq__(self, other):
        return (isinstance(other, LinearizedPoly) and other.ctx is self.ctx
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        return f"LinearizedPoly({self.coeffs})"


class DOPoly:
    """Lower-triangular coefficient array a[i][j] for x^(q^i + q^j)."""

    __slots__ = ("ctx", "coeff")

    def __init__(self, ctx, coeff):
        n = ctx.n
        if len(coeff) != n or any(len(row) != i + 1 for i, row in enumerate(coeff)):
            raise ValueError("coefficients must form a lower-triangular n x n array")
        self.ctx = ctx
        self.coeff = tuple(tuple(_code_of(ctx, c) for c in row) for row in coeff)

    @classmethod
    def from_terms(cls, ctx, terms):
        """Build from {(i, j): coefficient} with 0 <= j <= i < n."""
        n = ctx.n
        rows = [[0] * (i + 1) for i in range(n)]
        for (i, j), c in terms.items():
            if not 0 <= j <= i < n:
                raise ValueError(f"bad exponent pair (q^{i} + q^{j}) for n={n}")
            rows[i][j] = ctx.add(rows[i][j], _code_of(ctx, c))
        return cls(ctx, rows)

    def terms(self):
        for i, row in enumerate(self.coeff):
            for j, c in enumerate(row):
                if c:
                    yield i, j, c

    def coefficient(self, i, j):
        return FieldElem(self.ctx, self.coeff[i][j])

    def is_zero(self):
        return not any(True for _ in self.terms())

    def __call__(self, x):
        ctx = self.ctx
        xin = x.code if isinstance(x, FieldElem) else x
        xq = {0: xin}
        for i in range(1, ctx.n):
            xq[i] = ctx.frob(xq[i - 1], 1)
        acc = 0
        for i, j, c in self.terms():
            acc = ctx.add(acc, ctx.mul(c, ctx.mul(xq[i], xq[j])))
        if isinstance(x, FieldElem):
            return FieldElem(ctx, acc)
        if isinstance(xin, np.ndarray) and not isinstance(acc, np.ndarray):
            acc = np.full(xin.shape, acc, dtype=np.int64)
        return acc

    def scale(self, c):
        c = _code_of(self.ctx, c)
        return DOPoly(self.ctx, [[self.ctx.mul(c, v) for v in row] for row in self.coeff])

    def difference_map(self, c):
        """x -> f(x+c) - f(x) as (linear part, constant part f(c)); c != 0."""
        ctx = self.ctx
        cc = _code_of(ctx, c)
        if cc == 0:
            raise ValueError("difference direction c must be nonzero")
        lam = [0] * ctx.n
        for i, j, a in self.terms():
            lam[i] = ctx.add(lam[i], ctx.mul(a, ctx.frob(cc, j)))
            lam[j] = ctx.add(lam[j], ctx.mul(a, ctx.frob(cc, i)))
        return LinearizedPoly(ctx, lam), FieldElem(ctx, self(cc))

    def reduce_under_trace(self, c):
        """Coefficients b_k with Tr(c f(x)) = Tr(sum_k b_k x^(q^k + 1)):
        each term a[i][j] folds to index k = i - j via b_k += (c a[i][j])^(q^(n-j))."""
        ctx = self.ctx
        cc = _code_of(ctx, c)
        b = [0] * ctx.n
        for i, j, a in self.terms():
            k = i - j
            b[k] = ctx.add(b[k], ctx.frob(ctx.mul(cc, a), (ctx.n - j) % ctx.n))
        return [FieldElem(ctx, v) for v in b]

    def __eq__(self, other):
        return (isinstance(other, DOPoly) and other.ctx is self.ctx
                and other.coeff == self.coeff)

    def __hash__(self):
        return hash((id(self.ctx), self.coeff))

    def __repr__(self):
        parts = [f"a[{i}][{j}]={c}" for i, j, c in self.terms()]
        return f"DOPoly(n={self.ctx.n}, {', '.join(parts) or '0'})"


# -- composition with linearized maps (equivalence transport) --

def compose_outer(L0, f):
    """L0(f(x)) as a DO polynomial."""
    ctx = f.ctx
    terms = {}
    for u, d in enumerate(L0.coeffs):
        if not d:
            continue
        for i, j, a in f.terms():
            hi, lo = (i + u) % ctx.n, (j + u) % ctx.n
            if hi < lo:
                hi, lo = lo, hi
            c = ctx.mul(d, ctx.frob(a, u))
            terms[(hi, lo)] = ctx.add(terms.get((hi, lo), 0), c)
    return DOPoly.from_terms(ctx, terms)


def compose_inner(f, L1):
    """f(L1(x)) as a DO polynomial."""
    ctx = f.ctx
    terms = {}
    for i, j, a in f.terms():
        for k, ck in enumerate(L1.coeffs):
            if not ck:
                continue
            cki = ctx.frob(ck, i)
            for l, cl in enumerate(L1.coeffs):
                if not cl:
                    continue
                hi, lo = (k + i) % ctx.n, (l + j) % ctx.n
                if hi < lo:
                    hi, lo = lo, hi
                c = ctx.mul(a, ctx.mul(cki, ctx.frob(cl, j)))
                terms[(hi, lo)] = ctx.add(terms.get((hi, lo), 0), c)
    return DOPoly.from_terms(ctx, terms)


# -- brute-force oracle: kernel scan of every difference map --

def is_planar_bruteforce(f):
    """Planar iff Lambda_c(x) != 0 for all units c, x.  O(q^2n)."""
    ctx = f.ctx
    if f.is_zero():
        return PlanarityVerdict(False, FieldElem(ctx, 1), "bruteforce")
    if not ctx.has_dlog:
        for c in ctx.units():
            lam, _ = f.difference_map(c)
            if not lam.is_permutation():
                return PlanarityVerdict(False, c, "bruteforce")
        return PlanarityVerdict(True, None, "bruteforce")
    C = ctx.unit_exp_codes()
    X = ctx.unit_exp_codes()
    # lam[i](c) for all c at once; then a (c, x) grid per Frobenius power
    lam = [0] * ctx.n
    for i, j, a in f.terms():
        lam[i] = ctx.add(lam[i], ctx.mul(a, ctx.frob(C, j)))
        lam[j] = ctx.add(lam[j], ctx.mul(a, ctx.frob(C, i)))
    # chunk rows to bound the grid size
    rows_per = max(1, (1 << 22) // max(len(X), 1))
    xq = [ctx.frob(X, i) for i in range(ctx.n)]
    for start in range(0, len(C), rows_per):
        sl = slice(start, start + rows_per)
        acc = 0
        for i in range(ctx.n):
            li = lam[i][sl] if isinstance(lam[i], np.ndarray) else lam[i]
            li = np.asarray(li, dtype=np.int64).reshape(-1, 1)
            acc = ctx.add(acc, ctx.mul(li, xq[i][None, :]))
        bad = np.any(acc == 0, axis=1)
        if np.any(bad):
            e = start + int(np.argmax(bad))
            return PlanarityVerdict(False, FieldElem(ctx, int(C[e])), "bruteforce")
    return PlanarityVerdict(True, None, "bruteforce")


# -- quadratic-form oracle: Gram determinant for every c --

class GramMatrix:
    """Symmetric n x n matrix of the form Tr(c f(x)) over F_q in the power basis."""

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx, entries):
        self.ctx = ctx
        self.entries = tuple(tuple(int(v) for v in row) for row in entries)

    def det(self):
        d = _det_sym(self.ctx, [list(r) for r in self.entries])
        return FieldElem(self.ctx, int(d))

    def is_nondegenerate(self):
        return bool(self.det())

    def __repr__(self):
        return f"GramMatrix({self.entries})"


def _power_basis(ctx):
    gamma = ctx.coeffs_code((0, 1)) if ctx.degree >= 2 else 1
    return [ctx.pow_int(gamma, t) for t in range(ctx.n)]


def gram_matrix(f, c):
    """Gram matrix of Q(x) = Tr_{q^n/q}(c f(x)) w.r.t. the power basis, built
    literally by polarization: B[i][j] = (Q(e_i+e_j) - Q(e_i) - Q(e_j)) / 2."""
    ctx = f.ctx
    cc = _code_of(ctx, c)
    if cc == 0:
        raise ValueError("c must be nonzero")
    e = _power_basis(ctx)

    def Q(x):
        return ctx.trace_to(ctx.mul(cc, f(x)), ctx.q)

    n = ctx.n
    qe = [Q(e[i]) for i in range(n)]
    inv2 = ctx.inv(ctx.scalar(2).code)
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = qe[i]
        for j in range(i):
            pol = ctx.sub(ctx.sub(Q(ctx.add(e[i], e[j])), qe[i]), qe[j])
            m[i][j] = m[j][i] = ctx.mul(pol, inv2)
    return GramMatrix(ctx, m)


def _det_sym(ctx, m):
    """Determinant for n <= 4 by direct expansion; entries may be ints or
    broadcastable arrays of codes."""
    n = len(m)
    mul, sub, add = ctx.mul, ctx.sub, ctx.add
    if n == 1:
        return m[0][0]
    if n == 2:
        return sub(mul(m[0][0], m[1][1]), mul(m[0][1], m[1][0]))
    if n == 3:
        return _det3(ctx, m)
    if n == 4:
        total = 0
        sign = 1
        for col in range(4):
            minor = [[m[r][c] for c in range(4) if c != col] for r in (1, 2, 3)]
            term = mul(m[0][col], _det3(ctx, minor))
            total = add(total, term) if sign > 0 else sub(total, term)
            sign = -sign
        return total
    return _det_gauss(ctx, m)


def _det3(ctx, m):
    mul, sub, add = ctx.mul, ctx.sub, ctx.add
    t0 = sub(mul(m[1][1], m[2][2]), mul(m[1][2], m[2][1]))
    t1 = sub(mul(m[1][0], m[2][2]), mul(m[1][2], m[2][0]))
    t2 = sub(mul(m[1][0], m[2][1]), mul(m[1][1], m[2][0]))
    return add(sub(mul(m[0][0], t0), mul(m[0][1], t1)), mul(m[0][2], t2))


def _det_gauss(ctx, m):
    # scalar Gaussian elimination; only reached for n > 4
    n = len(m)
    m = [[int(v) for v in row] for row in m]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = ctx.neg(det)
        det = ctx.mul(det, m[col][col])
        inv = ctx.inv(m[col][col])
        for r in range(col + 1, n):
            if m[r][col]:
                factor = ctx.mul(m[r][col], inv)
                for c2 in range(col, n):
                    m[r][c2] = ctx.sub(m[r][c2], ctx.mul(factor, m[col][c2]))
    return det


def _basis_constants(ctx):
    """kappa_diag[k][i] = e_i^(q^k + 1) and
    kappa_off[k][i][j] = e_i^(q^k) e_j + e_i e_j^(q^k), cached per context."""
    cache = ctx.__dict__.setdefault("_do_cache", {})
    got = cache.get("basis_constants")
    if got is not None:
        return got
    n = ctx.n
    e = _power_basis(ctx)
    eq = [[ctx.frob(e[i], k) for i in range(n)] for k in range(n)]
    diag = [[ctx.mul(eq[k][i], e[i]) for i in range(n)] for k in range(n)]
    off = [[[ctx.add(ctx.mul(eq[k][i], e[j]), ctx.mul(e[i], eq[k][j]))
             for j in range(n)] for i in range(n)] for k in range(n)]
    cache["basis_constants"] = (diag, off)
    return diag, off


def _gram_det_from_reduced(ctx, bks):
    """det of the Gram matrix of Tr(sum_k b_k x^(q^k+1)); b_k values may be
    scalars or arrays, broadcast together."""
    n = ctx.n
    diag, off = _basis_constants(ctx)
    inv2 = ctx.inv(ctx.scalar(2).code)
    m = [[None] * n for _ in range(n)]
    for i in range(n):
        acc = 0
        for k in range(n):
            if isinstance(bks[k], np.ndarray) or bks[k]:
                acc = ctx.add(acc, ctx.mul(bks[k], diag[k][i]))
        m[i][i] = ctx.trace_to(acc, ctx.q)
        for j in range(i):
            acc = 0
            for k in range(n):
                if isinstance(bks[k], np.ndarray) or bks[k]:
                    acc = ctx.add(acc, ctx.mul(bks[k], off[k][i][j]))
            m[i][j] = m[j][i] = ctx.mul(ctx.trace_to(acc, ctx.q), inv2)
    return _det_sym(ctx, m)


def is_planar_quadform(f):
    """Planar iff det(Gram(Tr(c f))) != 0 for every unit c.  O(q^n * n^3);
    witness is the first degenerate c in generator-exponent order."""
    ctx = f.ctx
    if not ctx.has_dlog or ctx.n > 4:
        for c in ctx.units():
            if not gram_matrix(f, c.code).is_nondegenerate():
                return PlanarityVerdict(False, c, "quadform")
        return PlanarityVerdict(True, None, "quadform")
    C = ctx.unit_exp_codes()
    bks = [0] * ctx.n
    for i, j, a in f.terms():
        k = i - j
        s = (ctx.n - j) % ctx.n
        fa = ctx.frob(a, s)
        bks[k] = ctx.add(bks[k], ctx.mul(fa, ctx.frob(C, s)))
    det = _gram_det_from_reduced(ctx, bks)
    if not isinstance(det, np.ndarray):
        det = np.full(C.shape, det, dtype=np.int64)
    bad = det == 0
    if np.any(bad):
        return PlanarityVerdict(False, FieldElem(ctx, int(C[int(np.argmax(bad))])), "quadform")
    return PlanarityVerdict(True, None, "quadform")


def planar_mask_for_pairs(ctx, template, a_codes, b_codes):
    """Vectorized quadform oracle over many (a, b) pairs of one family shape.

    template rows are (i, j, src) with src 'a', 'b' or a constant code; the
    return value is a boolean planar mask aligned with a_codes/b_codes.  The
    c loop compacts the still-alive pair set after each round, so non-planar
    pairs cost only a few rounds."""
    ctx._require_dlog()
    n = ctx.n
    a_codes = np.asarray(a_codes, dtype=np.int64)
    b_codes = np.asarray(b_codes, dtype=np.int64)
    npairs = len(a_codes)
    pre = []
    for i, j, src in template:
        coeff = {"a": a_codes, "b": b_codes}.get(src)
        if coeff is None:
            coeff = int(src)
        s = (n - j) % n
        pre.append((i - j, s, ctx.frob(coeff, s)))
    alive = np.arange(npairs)
    exp = ctx.unit_exp_codes()
    for e in range(ctx.size - 1):
        c = int(exp[e])
        bks = [0] * n
        for k, s, ft in pre:
            fc = ctx.frob(c, s)
            term = ctx.mul(ft[alive] if isinstance(ft, np.ndarray) else ft, fc)
            bks[k] = ctx.add(bks[k], term)
        det = _gram_det_from_reduced(ctx, bks)
        if not isinstance(det, np.ndarray):
            if det == 0:
                alive = alive[:0]
        else:
            alive = alive[np.broadcast_to(det != 0, alive.shape)]
        if alive.size == 0:
            break
    mask = np.zeros(npairs, dtype=bool)
    mask[alive] = True
    return mask


# -- character sums --

def char_sum(f, b):
    """S = sum over t in F_{q^n} of zeta_p^AbsTr(f(t) - b t), exactly."""
    ctx = f.ctx
    bb = _code_of(ctx, b)
    p = ctx.p
    if ctx.has_dlog:
        T = np.arange(ctx.size, dtype=np.int64)
        vals = ctx.abs_trace_int(ctx.sub(f(T), ctx.mul(bb, T)))
        counts = np.bincount(vals, minlength=p)
        return CycInt.from_exponent_counts(p, {e: int(counts[e]) for e in range(p)})
    counts = {}
    for t in range(ctx.size):
        v = ctx.abs_trace_int(ctx.sub(f(t), ctx.mul(bb, t)))
        counts[v] = counts.get(v, 0) + 1
    return CycInt.from_exponent_counts(p, counts)


def bent_check(f):
    """True iff |S_b|^2 == q^n exactly for every b in F_{q^n}."""
    ctx = f.ctx
    target = ctx.size
    for b in range(ctx.size):
        s = char_sum(f, b)
        if not s.norm_squared().equals_integer(target):
            return False
    return True


# -- squares of linearized maps --

def _sqrt_candidates(ctx, code):
    if code == 0:
        return [0]
    if ctx.has_dlog:
        e = ctx.dlog(code)
        if e % 2:
            return []
        r = ctx.from_exp(e // 2).code
        return [r, ctx.neg(r)]
    return [x for x in range(ctx.size) if ctx.mul(x, x) == code]


def linearized_square_decompose(f):
    """If f == L^2 for a linearized L, return the canonical such L, else None.

    Coefficient matching: c_i^2 = a[i][i] and 2 c_i c_j = a[i][j]; the first
    nonzero c_i is pinned to the lexicographically smaller square root so the
    answer is unique (L and -L square identically)."""
    ctx = f.ctx
    n = ctx.n
    roots = []
    for i in range(n):
        cand = _sqrt_candidates(ctx, f.coeff[i][i])
        if not cand:
            return None
        roots.append(sorted(set(cand), key=ctx.code_coeffs))
    support = [i for i in range(n) if f.coeff[i][i]]
    two = ctx.scalar(2).code

    def matches(coeffs):
        for i in range(n):
            for j in range(i):
                if f.coeff[i][j] != ctx.mul(two, ctx.mul(coeffs[i], coeffs[j])):
                    return False
        return True

    if not support:
        L = LinearizedPoly(ctx, [0] * n)
        return L if f == L.square() else None
    first, rest = support[0], support[1:]
    for picks in itertools.product(*(roots[i] for i in rest)):
        coeffs = [0] * n
        coeffs[first] = roots[first][0]
        for i, v in zip(rest, picks):
            coeffs[i] = v
        if matches(coeffs):
            return LinearizedPoly(ctx, coeffs)
    return None


def quartic_square_equiv_probe(ctx, a, b):
    """Search for linearized permutations L0, L1 = alpha x^(q^2) + beta x with
    L0(f(x)) = L1(x)^2 for f = x^(q^3+q) + a x^(q^2+1) + b x^2 over F_{q^4},
    prime q.  Degree matching forces L0 = u x^(q^2) + v x with u = alpha^2 /
    b^(q^2), v = beta^2 / b, and the cross coefficients force u + v = 0 and
    u a^(q^2) + v a = 2 alpha beta; u + v = 0 makes L0(1) = 0, i.e. L0 is
    never a permutation, so the expected answer is False."""
    if ctx.n != 4:
        raise ValueError("probe requires an F_{q^4} context (n = 4)")
    if ctx.m != 1:
        raise ValueError("probe requires prime q (m = 1)")
    ac = _code_of(ctx, a)
    bc = _code_of(ctx, b)
    if ac == 0 or bc == 0:
        raise ValueError("family coefficients a, b must be nonzero")
    ctx._require_dlog()
    Q = ctx.size
    codes = np.arange(Q, dtype=np.int64)
    alpha = np.repeat(codes, Q)
    beta = np.tile(codes, Q)
    keep = (alpha != 0) | (beta != 0)
    alpha, beta = alpha[keep], beta[keep]
    inv_bq2 = ctx.inv(ctx.frob(bc, 2))
    inv_b = ctx.inv(bc)
    u = ctx.mul(ctx.mul(alpha, alpha), inv_bq2)
    v = ctx.mul(ctx.mul(beta, beta), inv_b)
    aq2 = ctx.frob(ac, 2)
    two = ctx.scalar(2).code
    eq1 = ctx.add(u, v) == 0
    lhs = ctx.add(ctx.mul(u, aq2), ctx.mul(v, ac))
    rhs = ctx.mul(two, ctx.mul(alpha, beta))
    cand = eq1 & (ctx.sub(lhs, rhs) == 0)
    for idx in np.nonzero(cand)[0]:
        L0 = LinearizedPoly(ctx, [int(v[idx]), 0, int(u[idx]), 0])
        L1 = LinearizedPoly(ctx, [int(beta[idx]), 0, int(alpha[idx]), 0])
        if L0.is_permutation() and L1.is_permutation():
            return True
    return False


# -- text form used by the CLI --

_MONO_RE = re.compile(r"^x(?:\^(?:\{(?P<brace>[^}]*)\}|(?P<plain>\S+)))?$")


def _parse_mono(text, n):
    m = _MONO_RE.match(text)
    if not m:
        raise ValueError(f"bad monomial {text!r}")
    expo = m.group("brace") or m.group("plain")
    if expo is None:
        raise ValueError("bare x is linear, not a DO monomial")
    expo = expo.replace(" ", "")
    parts = []
    for piece in expo.split("+"):
        if piece == "":
            raise ValueError(f"bad exponent in {text!r}")
        reps = 1
        if piece.startswith("2"):
            reps, piece = 2, piece[1:]
        if piece == "":
            if reps == 2:
                # "2" alone means q^0 + q^0
                parts.extend([0, 0])
                continue
            raise ValueError(f"bad exponent in {text!r}")
        if piece == "1":
            parts.extend([0] * reps)
        elif piece == "q":
            parts.extend([1] * reps)
        elif piece.startswith("q^"):
            parts.extend([int(piece[2:])] * reps)
        else:
            raise ValueError(f"bad exponent piece {piece!r} in {text!r}")
    if len(parts) != 2:
        raise ValueError(f"exponent of {text!r} must be a sum of two q-powers")
    i, j = max(parts), min(parts)
    if not 0 <= j <= i < n:
        raise ValueError(f"exponent pair (q^{i} + q^{j}) out of range for n={n}")
    return i, j


def _split_signed_terms(text):
    """Split on top-level + and - only; braces and brackets protect their
    contents."""
    out = []
    sign, cur, depth = 1, [], 0
    for ch in text:
        if ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced braces in polynomial")
        if depth == 0 and ch in "+-":
            if "".join(cur).strip():
                out.append((sign, "".join(cur).strip()))
            sign = 1 if ch == "+" else -1
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ValueError("unbalanced braces in polynomial")
    if "".join(cur).strip():
        out.append((sign, "".join(cur).strip()))
    if not out:
        raise ValueError("empty polynomial")
    return out


def parse_element(ctx, text):
    """Parse one field element: 'g^K' (generator exponent), 'g', a plain
    integer embedded mod p, or a '[c0,c1,...]' coordinate vector.  Returns
    the element code."""
    text = text.strip()
    neg = text.startswith("-")
    if neg:
        text = text[1:].strip()
    if text == "g":
        code = ctx.generator.code
    elif text.startswith("g^"):
        code = ctx.from_exp(int(text[2:])).code
    elif text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"bad coordinate vector {text!r}")
        vec = [int(s) for s in text[1:-1].split(",") if s.strip() != ""]
        code = ctx.coeffs_code(vec)
    else:
        code = ctx.scalar(int(text)).code
    return ctx.neg(code) if neg else code


def parse_do_terms(ctx, text, placeholders=()):
    """Parse 'coef*x^{q^i+q^j} + ...' into [(i, j, src)]; src is a code or a
    placeholder name.  Coefficients: g^K (generator exponent), plain integers
    (embedded mod p), [c0,c1,...] coordinate vectors, or placeholder names."""
    terms = []
    for sign, body in _split_signed_terms(text.strip()):
        if "*" in body:
            coef_text, mono_text = (s.strip() for s in body.split("*", 1))
        else:
            coef_text, mono_text = None, body
        i, j = _parse_mono(mono_text, ctx.n)
        if coef_text is None:
            src = 1
        elif coef_text in placeholders:
            src = coef_text
            if sign < 0:
                raise ValueError("placeholders cannot carry a minus sign")
        else:
            src = parse_element(ctx, coef_text)
        if sign < 0 and not isinstance(src, str):
            src = ctx.neg(src)
        terms.append((i, j, src))
    return terms


def parse_do_poly(ctx, text):
    terms = parse_do_terms(ctx, text)
    acc = {}
    for i, j, src in terms:
        acc[(i, j)] = ctx.add(acc.get((i, j), 0), src)
    return DOPoly.from_terms(ctx, acc)

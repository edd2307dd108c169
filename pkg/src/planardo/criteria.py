"""Closed-form planarity criteria for Dembowski-Ostrom trinomial families.

Families over cubic extensions (iff criteria):
  cubic1: f = x^(q^2+1) + a x^(q+1) + b x^2 planar iff a = b^(q+1) with
          N(b) != 1, or N(a) - 2 a b^(q^2) + 1 = 0 with N(a)^2 != 1.
  cubic2: f = x^(q+1) + a x^(2q) + b x^2 planar iff 4ab = 1 with N(2a) != -1,
          or 4ab != 1 with N(a) + N(b) + ab = 0.
Family over quartic extensions (sufficient only; an unsatisfied verdict is
"no-claim", never "non-planar"):
  quartic: f = x^(q^3+q) + a x^(q^2+1) + b x^2, trace and norm taken from
           F_{q^4} to F_{q^2}.

Every criterion is written over vectorized field kernels, so the same code
serves single (a, b) verdicts and whole sweep grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dopoly import DOPoly
from .fields import FieldElem

CUBIC1_BRANCH1 = "a=b^(q+1)"
CUBIC1_BRANCH2 = "N(a)-2ab^(q^2)+1=0"
CUBIC2_BRANCH1 = "4ab=1"
CUBIC2_BRANCH2 = "N(a)+N(b)+ab=0"
QUARTIC_BRANCH1 = "tr-nonzero"
QUARTIC_BRANCH2 = "tr-zero"

FAMILY_TEMPLATES = {
    # rows are (i, j, src) for coefficient of x^(q^i + q^j)
    "cubic1": (3, ((2, 0, 1), (1, 0, "a"), (0, 0, "b"))),
    "cubic2": (3, ((1, 0, 1), (1, 1, "a"), (0, 0, "b"))),
    "quartic": (4, ((3, 1, 1), (2, 0, "a"), (0, 0, "b"))),
}


@dataclass
class CriterionVerdict:
    satisfied: bool
    branches: tuple[str, ...] = ()
    witness: FieldElem | None = None


def family_poly(ctx, family, a, b):
    n, rows = FAMILY_TEMPLATES[family]
    if ctx.n != n:
        raise ValueError(f"family {family} needs n={n}, context has n={ctx.n}")
    sub = {"a": a.code if isinstance(a, FieldElem) else int(a),
           "b": b.code if isinstance(b, FieldElem) else int(b)}
    return DOPoly.from_terms(ctx, {(i, j): sub.get(src, src) for i, j, src in rows})


def _pair_codes(a, b):
    if not isinstance(a, FieldElem) or not isinstance(b, FieldElem):
        raise ValueError("coefficients must be field elements")
    if a.ctx is not b.ctx:
        raise ValueError("coefficients from different field contexts")
    if a.code == 0 or b.code == 0:
        raise ValueError("family coefficients a, b must be nonzero")
    return a.ctx, a.code, b.code


# -- nondegeneracy formula for a x^(q+1) + b x^2 (n = 2 or 3) --

def binomial_det_value(a, b):
    """Closed-form Gram determinant scale for f = a x^(q+1) + b x^2:
    Tr(a)^2 - 4 N(b) when n = 2; 4 N(b) + N(a) - Tr(a^2 b^(q^2)) when n = 3.
    The quadratic form Tr(f) is nondegenerate iff this value is nonzero."""
    ctx, ac, bc = _pair_codes(a, b)
    return FieldElem(ctx, _binomial_det_codes(ctx, ac, bc))


def _binomial_det_codes(ctx, A, B):
    four = ctx.scalar(4).code
    if ctx.n == 2:
        tra = ctx.trace_to(A)
        return ctx.sub(ctx.mul(tra, tra), ctx.mul(four, ctx.norm_to(B)))
    if ctx.n == 3:
        t = ctx.trace_to(ctx.mul(ctx.mul(A, A), ctx.frob(B, 2)))
        return ctx.sub(ctx.add(ctx.mul(four, ctx.norm_to(B)), ctx.norm_to(A)), t)
    raise ValueError(f"formula defined for n in {{2, 3}}, context has n={ctx.n}")


def binomial_nondegenerate(a, b):
    return bool(binomial_det_value(a, b))


# -- surjectivity of alpha -> (Tr(alpha), N(alpha)) on F_{q^3}^* --

def trace_norm_surjective(ctx):
    """Whether every (r, s) in F_q x F_q^* is hit; returns (ok, counts) with
    counts keyed by (trace code, norm code)."""
    if ctx.n != 3:
        raise ValueError("trace/norm coverage is a cubic-extension statement")
    units = ctx.unit_exp_codes() if ctx.has_dlog else np.array(
        [u.code for u in ctx.units()], dtype=np.int64)
    tr = ctx.trace_to(units)
    nm = ctx.norm_to(units)
    counts = {}
    for t, s in zip(tr.tolist(), nm.tolist()):
        counts[(t, s)] = counts.get((t, s), 0) + 1
    sub = sorted(int(c) for c in ctx.subfield_units(ctx.q)) if ctx.has_dlog else \
        sorted({ctx.norm_to(int(u)) for u in units})
    field_q = [0] + sub
    ok = all((r, s) in counts for r in field_q for s in sub)
    return ok, counts


# -- no-root criterion for Tr(A x^(q-1) + B x^(1-q)) + r on F_{q^3}^* --

def tr_form_has_no_root(A, B, r):
    """Closed form: no unit x zeroes Tr(A x^(q-1) + B x^(1-q)) + r iff
    r A B = N(A) + N(B) with r != 0 (cross-multiplied so no division)."""
    ctx, Ac, Bc = _pair_codes(A, B)
    rc = r.code if isinstance(r, FieldElem) else int(r)
    if ctx.n != 3:
        raise ValueError("statement lives over cubic extensions")
    if not ctx.in_subfield(rc, ctx.q):
        raise ValueError("r must lie in F_q")
    if rc == 0:
        return False
    lhs = ctx.mul(rc, ctx.mul(Ac, Bc))
    return lhs == ctx.add(ctx.norm_to(Ac), ctx.norm_to(Bc))


def tr_form_has_no_root_scan(A, B, r):
    """Brute-force twin of tr_form_has_no_root: scan every unit."""
    ctx, Ac, Bc = _pair_codes(A, B)
    rc = r.code if isinstance(r, FieldElem) else int(r)
    if ctx.n != 3:
        raise ValueError("statement lives over cubic extensions")
    if not ctx.in_subfield(rc, ctx.q):
        raise ValueError("r must lie in F_q")
    q = ctx.q
    if ctx.has_dlog:
        X = ctx.unit_exp_codes()
        v = ctx.add(ctx.mul(Ac, ctx.pow_int(X, q - 1)), ctx.mul(Bc, ctx.pow_int(X, 1 - q)))
        return not np.any(ctx.add(ctx.trace_to(v), rc) == 0)
    for x in ctx.units():
        v = ctx.add(ctx.mul(Ac, ctx.pow_int(x.code, q - 1)),
                    ctx.mul(Bc, ctx.pow_int(x.code, 1 - q)))
        if ctx.add(ctx.trace_to(v), rc) == 0:
            return False
    return True


# -- cubic families (iff) --

def cubic1_masks(ctx, A, B):
    """Vector masks (satisfied, branch1, branch2) for cubic1 over unit codes."""
    one = 1
    q = ctx.q
    na = ctx.norm_to(A)
    m1 = np.asarray(A == ctx.pow_int(B, q + 1)) & np.asarray(ctx.norm_to(B) != one)
    two = ctx.scalar(2).code
    val = ctx.add(ctx.sub(na, ctx.mul(two, ctx.mul(A, ctx.frob(B, 2)))), one)
    m2 = np.asarray(val == 0) & np.asarray(ctx.mul(na, na) != one)
    return m1 | m2, m1, m2


def cubic2_masks(ctx, A, B):
    """Vector masks (satisfied, branch1, branch2) for cubic2 over unit codes."""
    one = 1
    four = ctx.scalar(4).code
    two = ctx.scalar(2).code
    ab = ctx.mul(A, B)
    front = np.asarray(ctx.mul(four, ab) == one)
    m1 = front & np.asarray(ctx.norm_to(ctx.mul(two, A)) != ctx.neg(one))
    m2 = ~front & np.asarray(ctx.add(ctx.add(ctx.norm_to(A), ctx.norm_to(B)), ab) == 0)
    return m1 | m2, m1, m2


def _verdict_from_masks(ctx, masks, tags, witness=None):
    sat, m1, m2 = masks
    branches = tuple(t for t, m in zip(tags, (m1, m2)) if bool(np.asarray(m).reshape(-1)[0]))
    return CriterionVerdict(bool(np.asarray(sat).reshape(-1)[0]), branches, witness)


def cubic1_criterion(a, b):
    ctx, ac, bc = _pair_codes(a, b)
    if ctx.n != 3:
        raise ValueError("cubic1 lives over n=3")
    masks = cubic1_masks(ctx, np.array([ac]), np.array([bc]))
    return _verdict_from_masks(ctx, masks, (CUBIC1_BRANCH1, CUBIC1_BRANCH2))


def cubic2_criterion(a, b):
    ctx, ac, bc = _pair_codes(a, b)
    if ctx.n != 3:
        raise ValueError("cubic2 lives over n=3")
    masks = cubic2_masks(ctx, np.array([ac]), np.array([bc]))
    return _verdict_from_masks(ctx, masks, (CUBIC2_BRANCH1, CUBIC2_BRANCH2))


# -- quartic family (sufficient only) --

def quartic_masks(ctx, A, B):
    """Vector masks for the quartic sufficient conditions over unit codes.

    Returns (satisfied, case1, case2, theta_exp); theta_exp holds, for case-2
    hits, the top-field generator exponent of the first workable theta in
    generator-exponent order, else -1."""
    q = ctx.q
    q2 = q * q
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    tra = ctx.trace_to(A, q2)
    na = ctx.norm_to(A, q2)
    nb = ctx.norm_to(B, q2)
    four = ctx.scalar(4).code

    t_nz = np.asarray(tra != 0)
    tra_safe = np.where(t_nz, tra, 1)
    cond_nb = np.asarray(nb == ctx.sub(na, ctx.pow_int(tra_safe, 1 - q)))
    val = ctx.sub(1, ctx.mul(four, ctx.pow_int(tra_safe, -1 - q)))
    val = np.where(t_nz, val, 0)
    sq_q = ctx.is_nonzero_square(val, q)
    sq_q2 = ctx.is_nonzero_square(ctx.mul(nb, tra), q2)
    case1 = t_nz & cond_nb & sq_q & sq_q2

    target = 1 if ((q - 1) // 2) % 2 == 0 else ctx.neg(1)
    theta_exp = np.full(A.shape, -1, dtype=np.int64)
    t_z = ~t_nz
    if np.any(t_z):
        for th in ctx.subfield_units(q2):
            th = int(th)
            if ctx.pow_int(th, (q2 - 1) // 2) != target:
                continue
            rhs = ctx.sub(na, ctx.pow_int(th, 1 - q))
            hit = t_z & np.asarray(nb == rhs) & \
                ctx.is_nonzero_square(ctx.mul(nb, th), q2) & (theta_exp < 0)
            theta_exp[hit] = ctx.dlog(th)
    case2 = theta_exp >= 0
    return case1 | case2, case1, case2, theta_exp


def quartic_criterion(a, b):
    """Sufficient-condition verdict for the quartic family; satisfied means
    planar is guaranteed, unsatisfied means no claim either way."""
    ctx, ac, bc = _pair_codes(a, b)
    if ctx.n != 4:
        raise ValueError("quartic family lives over n=4")
    sat, c1, c2, theta = quartic_masks(ctx, np.array([ac]), np.array([bc]))
    branches = ()
    witness = None
    if bool(c1[0]):
        branches = (QUARTIC_BRANCH1,)
    elif bool(c2[0]):
        branches = (QUARTIC_BRANCH2,)
        witness = ctx.from_exp(int(theta[0]))
    return CriterionVerdict(bool(sat[0]), branches, witness)


# -- planar monomials x^(q^k+1) --

def monomial_planar_criterion(k, n):
    """x^(q^k+1) is planar over F_{q^n} when n / gcd(k, n) is odd (stated as
    a sufficient condition; the converse is observed, not asserted)."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    return (n // math.gcd(k, n)) % 2 == 1

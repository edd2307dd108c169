"""Field construction, kernels, and derived constants.

The modulus/generator minimality checks use small polynomial helpers written
here from scratch, so the library is judged against an independent oracle
rather than its own code paths.
"""

import itertools
import random

import numpy as np
import pytest

from planardo import FieldElem, FieldSizeError, build_field, lex_irreducible


# -- independent mod-p polynomial helpers (low-degree-first coefficient lists) --

def poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_mod(a, mod, p):
    a = list(a)
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) >= len(mod):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(mod)
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mi) % p
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        if len(a) < len(mod) and all(x == 0 for x in a):
            return [0]
    return a


def is_irreducible_trial_division(f, p):
    """Trial division by every monic polynomial of degree 1..deg/2."""
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            if poly_mod(f, g, p) == [0]:
                return False
    return True


def brute_order(ctx, code):
    e, acc = 1, code
    while acc != 1:
        acc = ctx.mul(acc, code)
        e += 1
        assert e <= ctx.size
    return e


def test_construction_is_deterministic():
    a = build_field(3, 1, 3, cache=False)
    b = build_field(3, 1, 3, cache=False)
    assert a.modulus == b.modulus
    assert a.generator.code == b.generator.code
    assert a.fingerprint() == b.fingerprint()


def test_f27_modulus_is_lex_smallest_irreducible():
    ctx = build_field(3, 1, 3)
    assert ctx.modulus == (1, 0, 2, 1)
    target = list(ctx.modulus)
    assert is_irreducible_trial_division(target, 3)
    for tail in itertools.product(range(3), repeat=3):
        cand = list(tail) + [1]
        if cand == target:
            break
        assert not is_irreducible_trial_division(cand, 3), cand
    else:
        pytest.fail("modulus not reached in lex enumeration")


def test_f9_modulus_and_generator():
    ctx = build_field(3, 1, 2)
    assert ctx.modulus == (1, 0, 1)
    assert tuple(ctx.generator.coeffs()) == (1, 1)


def test_f27_generator_is_lex_smallest_full_order():
    """The generator is the first full-order element when candidates are
    ordered by their low-degree-first coefficient tuple."""
    ctx = build_field(3, 1, 3)
    g = ctx.generator
    assert g.code == 18
    assert tuple(g.coeffs()) == (0, 0, 2)
    assert brute_order(ctx, g.code) == 26
    for cand in itertools.product(range(3), repeat=3):
        if cand == tuple(g.coeffs()):
            break
        code = cand[0] + 3 * cand[1] + 9 * cand[2]
        if code:
            assert brute_order(ctx, code) < 26, cand
    else:
        pytest.fail("generator not reached in lex enumeration")


@pytest.mark.parametrize("p,m,n", [(3, 1, 3), (3, 2, 3), (5, 1, 2), (7, 1, 3)])
def test_scalar_kernels_against_reference(p, m, n):
    """add/mul/neg/inv/pow agree with direct coefficient-vector arithmetic."""
    ctx = build_field(p, m, n)
    mod = list(ctx.modulus)
    rng = random.Random(p * 100 + m * 10 + n)

    def code_to_poly(c):
        out = []
        for _ in range(ctx.degree):
            out.append(c % p)
            c //= p
        return out

    def poly_to_code(v):
        c = 0
        for x in reversed(v):
            c = c * p + x % p
        return c

    for _ in range(60):
        x = rng.randrange(ctx.size)
        y = rng.randrange(ctx.size)
        px, py = code_to_poly(x), code_to_poly(y)
        assert ctx.add(x, y) == poly_to_code([(a + b) % p for a, b in zip(px, py)])
        ref = poly_mod(poly_mul(px, py, p), mod, p) if x and y else [0]
        assert ctx.mul(x, y) == poly_to_code(ref + [0] * ctx.degree)
        assert ctx.add(x, ctx.neg(x)) == 0
        if x:
            assert ctx.mul(x, ctx.inv(x)) == 1
        assert ctx.pow_int(x, 3) == ctx.mul(x, ctx.mul(x, x))


def test_vector_kernels_match_scalar():
    ctx = build_field(3, 2, 3)
    rng = random.Random(11)
    X = np.array([rng.randrange(ctx.size) for _ in range(40)], dtype=np.int64)
    Y = np.array([rng.randrange(ctx.size) for _ in range(40)], dtype=np.int64)
    for name in ("add", "sub", "mul"):
        fn = getattr(ctx, name)
        vec = fn(X, Y)
        for k in range(40):
            assert int(vec[k]) == fn(int(X[k]), int(Y[k]))
    F = ctx.frob(X, 2)
    T = ctx.trace_to(X)
    N = ctx.norm_to(np.where(X == 0, 1, X))
    for k in range(40):
        assert int(F[k]) == ctx.frob(int(X[k]), 2)
        assert int(T[k]) == ctx.trace_to(int(X[k]))


def test_frobenius_is_field_automorphism_fixing_base():
    ctx = build_field(3, 2, 3)
    rng = random.Random(5)
    for _ in range(50):
        x = rng.randrange(ctx.size)
        y = rng.randrange(ctx.size)
        assert ctx.frob(ctx.add(x, y)) == ctx.add(ctx.frob(x), ctx.frob(y))
        assert ctx.frob(ctx.mul(x, y)) == ctx.mul(ctx.frob(x), ctx.frob(y))
    for s in ctx.subfield_units(ctx.q):
        assert ctx.frob(int(s)) == int(s)
    x = rng.randrange(1, ctx.size)
    assert ctx.frob(ctx.frob(x, 1), 2) == ctx.frob(x, 3) == x  # q-Frobenius has order n


def test_trace_properties_and_fibers():
    ctx = build_field(3, 1, 3)
    q, n = ctx.q, ctx.n
    fibers = {}
    for x in range(ctx.size):
        t = ctx.trace_to(x)
        assert ctx.in_subfield(t, q)
        assert ctx.trace_to(ctx.frob(x)) == t
        fibers[t] = fibers.get(t, 0) + 1
    assert sorted(fibers) == [0, 1, 2]
    assert all(v == q ** (n - 1) for v in fibers.values())
    x, y = 14, 23
    assert ctx.trace_to(ctx.add(x, y)) == ctx.add(ctx.trace_to(x), ctx.trace_to(y))


def test_norm_properties_and_fibers():
    ctx = build_field(3, 1, 3)
    fibers = {}
    for x in range(1, ctx.size):
        nx = ctx.norm_to(x)
        assert ctx.in_subfield(nx, ctx.q)
        assert nx != 0
        fibers[nx] = fibers.get(nx, 0) + 1
    # norm is onto F_q^* with fibers of size (q^n-1)/(q-1) = 13
    assert fibers == {1: 13, 2: 13}
    assert ctx.norm_to(ctx.mul(14, 23)) == ctx.mul(ctx.norm_to(14), ctx.norm_to(23))
    assert ctx.norm_to(ctx.generator.code) == ctx.neg(1)  # N(g) = g^13 = -1


def test_subfield_membership_and_counts():
    ctx = build_field(3, 2, 3)  # F_729 over F_9
    units9 = ctx.subfield_units(9)
    assert len(units9) == 8
    units3 = ctx.subfield_units(3)
    assert len(units3) == 2
    for s in units9:
        assert ctx.in_subfield(int(s), 9)
        assert ctx.pow_int(int(s), 9) == int(s)
    assert ctx.in_subfield(0, 9)
    assert len(ctx.subfield_units(27)) == 26  # F_27 sits inside F_729 too
    with pytest.raises(ValueError):
        ctx.subfield_units(81)  # 81 = 3^4 and 4 does not divide 6


def test_nonzero_square_detection():
    ctx = build_field(3, 1, 2)  # F_9
    squares = {ctx.mul(x, x) for x in range(1, 9)}
    for x in range(9):
        assert ctx.is_nonzero_square(x, 9) == (x in squares)
    # 2 = -1 is not a square in F_3 but becomes one in F_9
    assert not ctx.is_nonzero_square(2, 3)
    assert ctx.is_nonzero_square(2, 9)
    with pytest.raises(ValueError):
        ctx.is_nonzero_square(ctx.generator.code, 3)  # g lies outside F_3


def test_alternate_modulus_gives_same_field_up_to_isomorphism():
    """Model independence: isomorphism-invariant counts match across moduli."""
    default = build_field(3, 1, 3)
    other_mod = lex_irreducible(3, 3, 1)
    other = build_field(3, 1, 3, modulus=other_mod, cache=False)
    assert other.modulus != default.modulus
    for ctx in (default, other):
        counts = {}
        for x in range(1, 27):
            counts[ctx.trace_to(x), ctx.norm_to(x)] = \
                counts.get((ctx.trace_to(x), ctx.norm_to(x)), 0) + 1
        assert len(counts) == 6 and sum(counts.values()) == 26
        assert brute_order(ctx, ctx.generator.code) == 26


def test_element_operator_sugar():
    ctx = build_field(3, 1, 3)
    g = ctx.gen()
    assert (g + g).code == ctx.add(18, 18)
    assert (g * g).code == ctx.from_exp(2).code
    assert (g / g).code == 1
    assert (g ** 26).code == 1
    assert (-g + g).code == 0
    assert g + 1 == ctx.elem(ctx.add(18, 1))
    assert g.frob(1) == g ** 3
    assert g.norm() == ctx.elem(ctx.neg(1))
    assert list(ctx.from_exp(0).coeffs()) == [1, 0, 0]


def test_validation_errors():
    with pytest.raises(ValueError):
        build_field(4, 1, 3)
    with pytest.raises(ValueError):
        build_field(2, 1, 3)
    with pytest.raises(ValueError):
        build_field(3, 0, 3)
    with pytest.raises(FieldSizeError):
        build_field(3, 1, 40)
    with pytest.raises(ValueError):
        build_field(3, 1, 2, modulus=(1, 0, 2, 1))  # degree mismatch
    with pytest.raises(ValueError):
        build_field(3, 1, 2, modulus=(2, 0, 1))  # x^2 + 2 = (x+1)(x+2) reducible


def test_size_cap_env_var(monkeypatch):
    monkeypatch.setenv("PLANARDO_SIZE_CAP", "100")
    with pytest.raises(FieldSizeError):
        build_field(3, 1, 5, cache=False)
    monkeypatch.delenv("PLANARDO_SIZE_CAP")
    build_field(3, 1, 5, cache=False)
    with pytest.raises(FieldSizeError):
        build_field(3, 1, 5, size_cap=100, cache=False)


def test_large_field_scalar_fallbacks():
    """Above the dlog-table cap, scalar arithmetic still works."""
    ctx = build_field(3, 1, 13, cache=False)  # 3^13 = 1594323 > 2^20
    assert not ctx.has_dlog
    x = 123456
    assert ctx.mul(x, ctx.inv(x)) == 1
    assert ctx.pow_int(x, ctx.size - 1) == 1
    t = ctx.trace_to(x)
    assert ctx.in_subfield(t, 3)
    assert ctx.frob(ctx.frob(x, 1), 12) == x
    assert ctx.is_nonzero_square(ctx.mul(x, x), ctx.size)

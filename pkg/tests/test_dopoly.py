"""DO polynomial arithmetic, planarity oracles, character sums, parsing."""

import random

import numpy as np
import pytest

from planardo import (
    CycInt,
    DOPoly,
    LinearizedPoly,
    bent_check,
    build_field,
    char_sum,
    compose_inner,
    compose_outer,
    gram_matrix,
    is_planar_bruteforce,
    is_planar_quadform,
    linearized_square_decompose,
    parse_do_poly,
    parse_do_terms,
    parse_element,
    planar_mask_for_pairs,
    quartic_square_equiv_probe,
)


def random_do_poly(ctx, rng, density=0.7):
    terms = {}
    for i in range(ctx.n):
        for j in range(i + 1):
            if rng.random() < density:
                terms[(i, j)] = rng.randrange(ctx.size)
    return DOPoly.from_terms(ctx, terms)


def test_evaluation_matches_direct_powers():
    ctx = build_field(3, 1, 3)
    rng = random.Random(3)
    q = ctx.q
    for _ in range(20):
        f = random_do_poly(ctx, rng)
        for _ in range(10):
            x = rng.randrange(ctx.size)
            want = 0
            for i, j, c in f.terms():
                want = ctx.add(want, ctx.mul(c, ctx.pow_int(x, q ** i + q ** j)))
            assert f(x) == want


def test_difference_map_identity_exhaustive():
    ctx = build_field(3, 1, 3)
    rng = random.Random(8)
    for _ in range(5):
        f = random_do_poly(ctx, rng)
        for c in range(1, ctx.size):
            lam, fc = f.difference_map(c)
            for x in range(ctx.size):
                lhs = ctx.sub(f(ctx.add(x, c)), f(x))
                assert lhs == ctx.add(lam(x), fc.code)
    with pytest.raises(ValueError):
        f.difference_map(0)


def test_linearized_permutation_detection():
    ctx = build_field(3, 1, 3)
    # x^q permutes; x^q - x kills F_q
    assert LinearizedPoly(ctx, [0, 1, 0]).is_permutation()
    assert not LinearizedPoly(ctx, [ctx.neg(1), 1, 0]).is_permutation()
    # a x^q + x is singular exactly when N(a) = (-1)^n = -1
    g = ctx.generator.code
    a_sing = g            # N(g) = g^13 = -1
    a_perm = ctx.mul(g, g)  # N(g^2) = g^26 = 1
    assert not LinearizedPoly(ctx, [1, a_sing, 0]).is_permutation()
    assert LinearizedPoly(ctx, [1, a_perm, 0]).is_permutation()


def test_trace_reduction_pointwise():
    ctx = build_field(3, 1, 3)
    rng = random.Random(21)
    q = ctx.q
    for _ in range(8):
        f = random_do_poly(ctx, rng)
        c = rng.randrange(1, ctx.size)
        bks = f.reduce_under_trace(c)
        for x in range(ctx.size):
            lhs = ctx.trace_to(ctx.mul(c, f(x)))
            rhs = 0
            for k, bk in enumerate(bks):
                rhs = ctx.add(rhs, ctx.trace_to(ctx.mul(bk.code, ctx.pow_int(x, q ** k + 1))))
            assert lhs == rhs


def test_trace_reduction_trinomial_coefficients():
    # f = x^(q^2+1) + a x^(q+1) + b x^2 reduces to b_2 = c, b_1 = c a, b_0 = c b
    ctx = build_field(3, 1, 3)
    g = ctx.generator.code
    a, b = ctx.from_exp(4).code, ctx.from_exp(1).code
    f = DOPoly.from_terms(ctx, {(2, 0): 1, (1, 0): a, (0, 0): b})
    for c in (1, g, ctx.from_exp(7).code):
        b0, b1, b2 = f.reduce_under_trace(c)
        assert b2.code == c
        assert b1.code == ctx.mul(c, a)
        assert b0.code == ctx.mul(c, b)


def test_gram_determinant_matches_binomial_formulas():
    """det of the polarized Gram matrix is a fixed nonzero multiple of the
    closed form (the factor is the squared basis discriminant), so the two
    vanish together; n = 2 and 3, full unit grid."""
    for n in (2, 3):
        ctx = build_field(3, 1, n)
        four = ctx.scalar(4).code
        kappa = None
        for a in range(1, ctx.size):
            for b in range(1, ctx.size):
                f = DOPoly.from_terms(ctx, {(1, 0): a, (0, 0): b})
                det = gram_matrix(f, 1).det().code
                tra, na, nb = ctx.trace_to(a), ctx.norm_to(a), ctx.norm_to(b)
                if n == 2:
                    formula = ctx.sub(ctx.mul(tra, tra), ctx.mul(four, nb))
                else:
                    t = ctx.trace_to(ctx.mul(ctx.mul(a, a), ctx.frob(b, 2)))
                    formula = ctx.sub(ctx.add(ctx.mul(four, nb), na), t)
                assert (det == 0) == (formula == 0)
                if formula != 0:
                    ratio = ctx.mul(det, ctx.inv(formula))
                    if kappa is None:
                        kappa = ratio
                    assert ratio == kappa
        assert kappa is not None and ctx.in_subfield(kappa, ctx.q)


def test_oracles_agree_on_random_polys():
    rng = random.Random(99)
    for p, m, n in ((3, 1, 2), (3, 1, 3), (3, 1, 4), (5, 1, 2)):
        ctx = build_field(p, m, n)
        for _ in range(25):
            f = random_do_poly(ctx, rng)
            v1 = is_planar_bruteforce(f)
            v2 = is_planar_quadform(f)
            assert v1.planar == v2.planar, (p, m, n, f.terms())


def test_known_planar_monomials():
    ctx = build_field(3, 1, 3)
    assert is_planar_quadform(DOPoly.from_terms(ctx, {(0, 0): 1})).planar       # x^2
    assert is_planar_quadform(DOPoly.from_terms(ctx, {(1, 0): 1})).planar       # x^(q+1)
    assert is_planar_quadform(DOPoly.from_terms(ctx, {(2, 0): 1})).planar       # x^(q^2+1)
    ctx2 = build_field(3, 1, 2)
    assert not is_planar_quadform(DOPoly.from_terms(ctx2, {(1, 0): 1})).planar  # n even
    assert is_planar_bruteforce(DOPoly.from_terms(ctx2, {(0, 0): 1})).planar


def test_nonplanar_witness_is_genuine():
    ctx = build_field(3, 1, 3)
    f = DOPoly.from_terms(ctx, {(2, 0): 1, (1, 0): 1, (0, 0): 1})
    v = is_planar_quadform(f)
    assert not v.planar
    c = v.witness.code
    # the witness c yields a degenerate difference map: not a bijection
    lam, _ = f.difference_map(c)
    assert not lam.is_permutation()


def test_zero_and_scaled_polys():
    ctx = build_field(3, 1, 3)
    zero = DOPoly.from_terms(ctx, {})
    assert zero.is_zero()
    assert not is_planar_bruteforce(zero).planar
    f = DOPoly.from_terms(ctx, {(1, 0): 1})
    g = ctx.generator.code
    assert is_planar_quadform(f.scale(g)).planar
    assert f.scale(0).is_zero()


def test_char_sum_frozen_example():
    ctx = build_field(3, 1, 1)
    f = DOPoly.from_terms(ctx, {(0, 0): 1})  # x^2 over F_3
    s = char_sum(f, 0)
    assert s == CycInt(3, (1, 2))            # 1 + 2 zeta
    assert s.norm_squared().equals_integer(3)


def test_bent_check_tracks_planarity():
    ctx = build_field(3, 1, 3)
    planar = DOPoly.from_terms(ctx, {(1, 0): 1})
    assert bent_check(planar)
    not_planar = DOPoly.from_terms(ctx, {(2, 0): 1, (1, 0): 1, (0, 0): 1})
    assert not bent_check(not_planar)


def test_char_sum_magnitudes_on_planar_poly():
    ctx = build_field(3, 1, 2)
    f = DOPoly.from_terms(ctx, {(0, 0): 1})
    size = CycInt.integer(3, ctx.size)
    for b in range(ctx.size):
        assert char_sum(f, b).norm_squared() == size


def test_pair_mask_matches_scalar_oracle():
    ctx = build_field(3, 1, 3)
    nu = ctx.size - 1
    exp = ctx.unit_exp_codes()
    A = np.repeat(exp, nu)
    B = np.tile(exp, nu)
    template = ((2, 0, 1), (1, 0, "a"), (0, 0, "b"))
    mask = planar_mask_for_pairs(ctx, template, A, B)
    for k in range(0, nu * nu, 37):
        f = DOPoly.from_terms(ctx, {(2, 0): 1, (1, 0): int(A[k]), (0, 0): int(B[k])})
        assert bool(mask[k]) == is_planar_quadform(f).planar
    assert int(mask.sum()) == 13


def test_composition_with_linear_permutations_preserves_planarity():
    ctx = build_field(3, 1, 3)
    rng = random.Random(31)
    f = DOPoly.from_terms(ctx, {(1, 0): 1})
    for _ in range(10):
        coeffs = [rng.randrange(ctx.size) for _ in range(3)]
        L = LinearizedPoly(ctx, coeffs)
        if not L.is_permutation():
            continue
        assert is_planar_quadform(compose_outer(L, f)).planar
        assert is_planar_quadform(compose_inner(f, L)).planar
    # composing with a singular map destroys planarity
    sing = LinearizedPoly(ctx, [ctx.neg(1), 1, 0])
    assert not sing.is_permutation()
    assert not is_planar_quadform(compose_inner(f, sing)).planar


def test_linearized_square_roundtrip():
    ctx = build_field(3, 1, 3)
    rng = random.Random(41)
    found = 0
    for _ in range(30):
        L = LinearizedPoly(ctx, [rng.randrange(ctx.size) for _ in range(3)])
        sq = L.square()
        got = linearized_square_decompose(sq)
        if all(c == 0 for c in L.coeffs):
            assert got is None or all(c == 0 for c in got.coeffs)
            continue
        assert got is not None
        assert got.square() == sq
        # decomposition recovers L up to global sign
        neg = tuple(ctx.neg(c) for c in L.coeffs)
        assert got.coeffs in (L.coeffs, neg)
        found += 1
    assert found >= 25


def test_quartic_family_has_no_square_decomposition():
    ctx = build_field(3, 1, 4)
    f = DOPoly.from_terms(ctx, {(3, 1): 1, (2, 0): 1, (0, 0): 1})
    assert linearized_square_decompose(f) is None


def test_square_equiv_probe_preconditions_and_result():
    ctx = build_field(3, 1, 4)
    g = ctx.generator.code
    assert quartic_square_equiv_probe(ctx, g, g) is False
    with pytest.raises(ValueError):
        quartic_square_equiv_probe(ctx, 0, g)
    ctx3 = build_field(3, 1, 3)
    with pytest.raises(ValueError):
        quartic_square_equiv_probe(ctx3, 1, 1)
    ctx9 = build_field(3, 2, 2)
    with pytest.raises(ValueError):
        quartic_square_equiv_probe(ctx9, 1, 1)


def test_parse_do_poly_golden():
    ctx = build_field(3, 1, 3)
    f = parse_do_poly(ctx, "x^{q^2+1} + g^4*x^{q+1} + g*x^2")
    want = {(2, 0): 1, (1, 0): ctx.from_exp(4).code, (0, 0): ctx.generator.code}
    assert {(i, j): c for i, j, c in f.terms()} == want
    # x^{q+1} braces protect the plus sign; minus folds into the coefficient
    h = parse_do_poly(ctx, "x^{q+1} - x^2")
    assert {(i, j): c for i, j, c in h.terms()} == {(1, 0): 1, (0, 0): ctx.neg(1)}
    v = parse_do_poly(ctx, "[0,0,2]*x^2 + 2*x^{2q}")
    assert {(i, j): c for i, j, c in v.terms()} == {(0, 0): 18, (1, 1): 2}


def test_parse_terms_with_placeholders():
    ctx = build_field(3, 1, 3)
    rows = parse_do_terms(ctx, "x^{q^2+1} + a*x^{q+1} + b*x^2", placeholders=("a", "b"))
    assert rows == [(2, 0, 1), (1, 0, "a"), (0, 0, "b")]
    with pytest.raises(ValueError):
        parse_do_terms(ctx, "x^2 - a*x^{q+1}", placeholders=("a",))


def test_parse_errors():
    ctx = build_field(3, 1, 3)
    for bad in ("x^{q^5+1}", "x^{q+q", "y^2", "", "x^3"):
        with pytest.raises(ValueError):
            parse_do_poly(ctx, bad)


def test_parse_element_forms():
    ctx = build_field(3, 1, 3)
    assert parse_element(ctx, "0") == 0
    assert parse_element(ctx, "g") == 18
    assert parse_element(ctx, "g^4") == ctx.from_exp(4).code
    assert parse_element(ctx, "[1,0,2]") == 1 + 0 * 3 + 2 * 9
    assert parse_element(ctx, "-1") == ctx.neg(1)
    assert parse_element(ctx, "5") == ctx.scalar(5).code
    with pytest.raises(ValueError):
        parse_element(ctx, "[1,0")

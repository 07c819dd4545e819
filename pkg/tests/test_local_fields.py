import random

import pytest

from stabforge.errors import IndeterminateAtPrecision, NonUnit
from stabforge.localfield import (
    FieldElem,
    FieldTower,
    RationalValuation,
    change_rings,
    epsilon_alpha,
    euler_phi_prime_power,
    q_alpha_coeffs,
    unramified_poly,
)


def expand_q_alpha_by_hand(p, alpha):
    # oracle: multiply out ((X+1)^{p^alpha} - 1) / ((X+1)^{p^{alpha-1}} - 1)
    # as the sum of (X+1)^{p^{alpha-1} k} for k < p, using plain poly arithmetic
    import math

    e = euler_phi_prime_power(p, alpha)
    out = [0] * (e + 1)
    for k in range(p):
        m = p ** (alpha - 1) * k
        for i in range(min(m, e) + 1):
            out[i] += math.comb(m, i)
    return out


def test_q_alpha_examples():
    assert q_alpha_coeffs(3, 1) == (3, 3, 1)  # X^2 + 3X + 3
    assert q_alpha_coeffs(2, 3) == (2, 4, 6, 4, 1)  # (X+1)^4 + 1
    a = q_alpha_coeffs(3, 2)
    assert a[0] == 3 and a[-1] == 1
    assert a[4] % 9 == (-3) % 9


def test_q_alpha_eisenstein_and_oracle():
    for p, alpha in [(2, 2), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)]:
        a = q_alpha_coeffs(p, alpha)
        assert list(a) == expand_q_alpha_by_hand(p, alpha)
        assert a[0] == p and a[-1] == 1
        assert all(c % p == 0 for c in a[:-1])


def test_lemma_196_213_grid():
    # a^(2)_{(p-2)p+1} = -p mod p^2 and a^(2)_{pr+j} = 0 mod p^2
    # for 0 <= r < p-2, 0 < j < p
    for p in (3, 5, 7):
        a = q_alpha_coeffs(p, 2)
        assert a[(p - 2) * p + 1] % p**2 == (-p) % p**2
        for r in range(p - 2):
            for j in range(1, p):
                assert a[p * r + j] % p**2 == 0


def test_unramified_poly_deterministic():
    assert unramified_poly(2, 1) == (1, 1)
    g = unramified_poly(2, 2)
    assert g == (1, 1, 1)  # X^2 + X + 1, the only choice
    for p, f in [(2, 3), (3, 2), (5, 2), (2, 6), (3, 3)]:
        g = unramified_poly(p, f)
        assert len(g) == f + 1 and g[-1] == 1


def test_defining_relation_holds():
    for p, alpha, f in [(2, 3, 1), (3, 2, 1), (3, 1, 2), (5, 1, 1), (2, 2, 2)]:
        t = FieldTower(p, f, alpha, 4)
        pi = t.pi()
        q = t.q_coeffs
        acc = t.zero()
        for c in reversed(q):
            acc = acc * pi + t.from_int(c)
        assert acc.is_zero


def test_epsilon_identity_grid():
    # p * epsilon_alpha = pi^phi(p^alpha), computed through the power chain
    cases = [(2, a) for a in range(1, 5)] + [(3, a) for a in range(1, 5)] + [(5, a) for a in range(1, 5)]
    for p, alpha in cases:
        prec = 3
        t = FieldTower(p, 1, alpha, prec)
        eps = epsilon_alpha(t)
        assert eps.is_unit
        assert t.pi() ** t.e == eps.scale(p)


def test_epsilon_small_values():
    t = FieldTower(2, 1, 1, 4)
    assert epsilon_alpha(t) == t.from_int(-1)


def test_epsilon_expansion_alpha2():
    # the published series for -eps_2 has a carry slip at pi^6; the digit there
    # is 0, cross-checked against an independent model over Z[x]/(Phi_9) and a
    # resultant computation (see the acceptance notes).  For p = 3 the
    # Teichmueller representative of 2 is exactly -1, so this reads
    # 1 + pi^3 - pi^4 - pi^5 - pi^7 + pi^8 + pi^9.
    t = FieldTower.for_pi_prec(3, 1, 2, 10)
    minus_eps = -epsilon_alpha(t)
    digits = [d[0] for d in minus_eps.pi_digit_expansion(10)]
    assert digits == [1, 0, 0, 1, 2, 2, 0, 2, 1, 1]
    recon = FieldElem.from_pi_digits(t, [(d,) for d in digits])
    assert recon.congruent(minus_eps, 10)


def test_epsilon_expansion_alpha2_independent_model():
    # brute-force oracle: arithmetic in Z[z]/(z^6 + z^3 + 1, 3^12) with
    # pi = z - 1 and division by pi via the explicit Galois cofactor
    K, M, e = 12, 3**12, 6
    phi = [1, 0, 0, 1, 0, 0, 1]

    def mul(x, y):
        acc = [0] * (2 * e - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    acc[i + j] += xi * yj
        for i in range(2 * e - 2, e - 1, -1):
            c = acc[i]
            if c:
                acc[i] = 0
                for k in range(e):
                    acc[i - e + k] -= c * phi[k]
        return [c % M for c in acc[:e]]

    one = [1, 0, 0, 0, 0, 0]
    zpows = [one]
    for _ in range(8):
        zpows.append(mul(zpows[-1], [0, 1, 0, 0, 0, 0]))
    pi = [(a - b) % M for a, b in zip(zpows[1], one)]
    cof = one
    for a in (2, 4, 5, 7, 8):
        cof = mul(cof, [(u - v) % M for u, v in zip(zpows[a], one)])
    assert mul(pi, cof) == [3, 0, 0, 0, 0, 0]

    def centered(c):
        return c if c <= M // 2 else c - M

    def div_pi(y):
        t = [centered(c) for c in mul(y, cof)]
        assert all(c % 3 == 0 for c in t)
        return [(c // 3) % M for c in t]

    p6 = one
    for _ in range(6):
        p6 = mul(p6, pi)
    meps = [(-(centered(c) // 3)) % M for c in p6]
    digits, y = [], meps
    for _ in range(10):
        r = sum(centered(c) for c in y) % 3
        digits.append(r)
        if r == 1:
            y = [(c - o) % M for c, o in zip(y, one)]
        elif r == 2:
            y = [(c + o) % M for c, o in zip(y, one)]
        y = div_pi(y)
    assert digits == [1, 0, 0, 1, 2, 2, 0, 2, 1, 1]


def test_epsilon_expansion_alpha3():
    # image of the alpha=2 series under change of rings; the published alpha=3
    # series inherits the same slip at pi^18 (true digit 0)
    t = FieldTower.for_pi_prec(3, 1, 3, 28)
    minus_eps = -epsilon_alpha(t)
    digits = [d[0] for d in minus_eps.pi_digit_expansion(28)]
    expected = [0] * 28
    for i, c in [(0, 1), (9, 1), (12, 2), (15, 2), (21, 2), (24, 1), (27, 1)]:
        expected[i] = c
    assert digits == expected


def test_prop_111_p2_expansions():
    # epsilon_alpha = 1 + Z^2 + Z^4 + Z^5 + Z^6 mod pi^(2^alpha), Z = pi^(2^(alpha-3))
    for alpha in (3, 4):
        t = FieldTower.for_pi_prec(2, 1, alpha, 2**alpha)
        eps = epsilon_alpha(t)
        z = 2 ** (alpha - 3)
        pi = t.pi()
        rhs = t.one() + pi ** (2 * z) + pi ** (4 * z) + pi ** (5 * z) + pi ** (6 * z)
        assert eps.congruent(rhs, 2**alpha)


def test_prop_293_two_expansion():
    # 2 = pi^phi + pi^(phi + 2^(alpha-2)) mod pi^(2^alpha)
    for alpha in (2, 3, 4):
        t = FieldTower.for_pi_prec(2, 1, alpha, 2**alpha)
        phi = t.e
        pi = t.pi()
        rhs = pi**phi + pi ** (phi + 2 ** (alpha - 2))
        assert t.from_int(2).congruent(rhs, 2**alpha)


def test_prop_290_p_expansion():
    # p = -pi^phi + ((p-1)/2) pi^(p^alpha) mod pi^(p^alpha + 1)
    for p in (3, 5):
        alpha = 2
        t = FieldTower.for_pi_prec(p, 1, alpha, p**alpha + 1)
        pi = t.pi()
        rhs = -(pi**t.e) + (pi ** (p**alpha)).scale((p - 1) // 2)
        assert t.from_int(p).congruent(rhs, p**alpha + 1)


def test_digit_expansion_of_p_and_one():
    t = FieldTower.for_pi_prec(3, 1, 2, 10)
    digits = [d[0] for d in t.from_int(3).pi_digit_expansion(10)]
    # 3 = -pi^6 + pi^9 mod pi^10, and teich(2) = -1
    assert digits == [0, 0, 0, 0, 0, 0, 2, 0, 0, 1]
    assert [d[0] for d in t.one().pi_digit_expansion(5)] == [1, 0, 0, 0, 0]
    t22 = FieldTower.for_pi_prec(2, 1, 2, 4)
    assert [d[0] for d in t22.from_int(2).pi_digit_expansion(4)] == [0, 0, 1, 1]


def test_digit_round_trip_randomized():
    rng = random.Random(5)
    for p, alpha, f in [(3, 2, 1), (2, 3, 1), (3, 1, 2)]:
        t = FieldTower.for_pi_prec(p, f, alpha, 12)
        for _ in range(10):
            grid = [[rng.randrange(p**2) for _ in range(f)] for _ in range(t.e)]
            x = t.from_grid(grid)
            if x.is_zero:
                continue
            digits = x.pi_digit_expansion(12)
            recon = FieldElem.from_pi_digits(t, digits)
            assert recon.congruent(x, 12)


def test_galois_basics():
    t = FieldTower(2, 1, 2, 4)
    z = t.zeta()  # zeta_4
    assert z.galois_act(1, 0) == z
    assert z.galois_act(-1, 0) == -z  # zeta_4^(-1) = -zeta_4
    t2 = FieldTower(2, 2, 0, 4)
    w = t2.omega()
    assert w.galois_act(1, 1) == w * w  # Frobenius squares the torsion


def test_omega_trace_minus_one():
    # 1 + w + w^2 = 0 for the cube root of unity in W(F_4)
    t = FieldTower(2, 2, 0, 5)
    w = t.omega()
    assert (t.one() + w + w * w).is_zero
    assert w.trace([(1, 1)]) == t.from_int(-1)


def test_trace_surjectivity_witness():
    # some unit of W(F_4) has odd trace over Z_2
    t = FieldTower(2, 2, 0, 4)
    found = False
    for a in range(2):
        for b in range(2):
            x = t.from_grid([[a, b], [0, 0]] if t.e > 1 else [[a, b]])
            if x.is_zero:
                continue
            tr = x.trace([(1, 1)])
            if tr.grid[0][0] % 2 == 1:
                found = True
    assert found


def test_trace_of_one_is_order():
    t = FieldTower(3, 2, 1, 4)
    full = [(2, 0), (1, 1)]  # generators of (Z/3)^x x Z/2
    n = len(t.galois_closure(full))
    assert t.one().trace(full) == t.from_int(n)


def test_norm_of_pi_is_p():
    # N(zeta_p - 1) = p over Q_p for p = 3, 5
    for p in (3, 5):
        t = FieldTower(p, 1, 1, 5)
        s = primitive_root(p)
        nrm = t.pi().norm([(s, 0)])
        assert nrm == t.from_int(p)


def primitive_root(p):
    for g in range(2, p):
        seen, x = set(), 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    raise AssertionError


def test_norm_one_level_down():
    # N over Gal(Q_3(zeta_9)/Q_3(zeta_3)) of 1 - zeta_9^k is 1 - zeta_3^k,
    # where zeta_3 sits inside level 2 as zeta_9^3
    p, r = 3, 1
    t = FieldTower.for_pi_prec(p, 1, r + 1, 14)
    z9 = t.zeta()
    k = 1
    x = t.one() - z9**k
    s = 1 + p**r  # generates the subgroup fixing zeta_3
    nrm = x.norm([(s, 0)])
    z3 = z9**p
    assert nrm == t.one() - z3**k


def test_norm_eq_272_congruence():
    # N_{C_2}(1 + (1+i)(1+i)) = 1 mod 4 with a_1 = a_2 = 1
    t = FieldTower(2, 1, 2, 4)
    i = t.zeta()
    x = t.one() + (t.one() + i) * (t.one() + i)
    nrm = x.norm([(-1, 0)])
    diff = nrm - t.one()
    assert diff.pi_valuation_at_least(2 * t.e)  # v >= 1: mod 4 needs v >= 2... checked below
    assert (nrm - t.one()).valuation() >= RationalValuation(2, 1)


def test_norm_multiplicative_and_invariant():
    rng = random.Random(9)
    t = FieldTower(3, 2, 1, 4)
    gens = [(2, 1)]
    for _ in range(8):
        x = t.from_grid([[rng.randrange(20) for _ in range(2)] for _ in range(t.e)])
        y = t.from_grid([[rng.randrange(20) for _ in range(2)] for _ in range(t.e)])
        assert (x * y).norm(gens) == x.norm(gens) * y.norm(gens)
        nx = x.norm(gens)
        assert nx.galois_act(2, 1) == nx


def test_change_rings():
    # i_alpha(pi_alpha) = pi_{alpha+1}^p mod (p pi_{alpha+1}) for p = 3, alpha = 2
    src = FieldTower.for_pi_prec(3, 1, 2, 30)
    dst = FieldTower(3, 1, 3, src.prec)
    img = change_rings(src.pi(), dst)
    diff = img - dst.pi() ** 3
    # v(p pi) = 1 + 1/18 = 19/18
    assert diff.is_zero or RationalValuation(19, 18) <= diff.valuation()
    assert change_rings(src.from_int(3), dst) == dst.from_int(3)


def test_change_rings_epsilon_congruence():
    # i_alpha(epsilon_alpha) = epsilon_{alpha+1} mod pi^(p^(alpha+1)+1)
    for p, alpha in [(3, 2), (2, 3)]:
        n_pi = p ** (alpha + 1) + 1
        dst = FieldTower.for_pi_prec(p, 1, alpha + 1, n_pi)
        src = FieldTower(p, 1, alpha, dst.prec)
        img = change_rings(epsilon_alpha(src), dst)
        assert img.congruent(epsilon_alpha(dst), n_pi)


def test_change_rings_ring_hom_randomized():
    rng = random.Random(3)
    src = FieldTower(3, 1, 1, 4)
    dst = FieldTower(3, 1, 2, 4)
    for _ in range(8):
        x = src.from_grid([[rng.randrange(30)] for _ in range(src.e)])
        y = src.from_grid([[rng.randrange(30)] for _ in range(src.e)])
        assert change_rings(x * y, dst) == change_rings(x, dst) * change_rings(y, dst)
        assert change_rings(x + y, dst) == change_rings(x, dst) + change_rings(y, dst)


def test_valuations():
    t = FieldTower(3, 1, 2, 4)
    assert t.pi().valuation() == RationalValuation(1, 6)
    assert t.from_int(3).valuation() == RationalValuation(1, 1)
    t2 = FieldTower(2, 1, 2, 4)
    assert (t2.one() + t2.zeta()).valuation() == RationalValuation(1, 2)
    with pytest.raises(IndeterminateAtPrecision):
        t.zero().valuation()


def test_invert_units():
    rng = random.Random(1)
    for p, alpha, f in [(3, 2, 1), (2, 2, 2)]:
        t = FieldTower(p, f, alpha, 5)
        for _ in range(6):
            x = t.from_grid([[rng.randrange(p**3) for _ in range(f)] for _ in range(t.e)])
            if not x.is_unit:
                continue
            assert x * x.invert() == t.one()
    with pytest.raises(NonUnit):
        FieldTower(3, 1, 1, 4).pi().invert()

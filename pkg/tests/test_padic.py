import random

import pytest
from hypothesis import given, strategies as st

from stabforge.errors import InsufficientPrecision, NonUnit, NotASquare
from stabforge.padic import (
    PadicInt,
    format_literal,
    from_integer,
    hensel_sqrt,
    parse_literal,
    residue_datum,
    teichmuller_lift,
    unit_decompose,
)


def test_from_integer_examples():
    assert from_integer(-7, 2, 4).digits == (1, 0, 0, 1)  # -7 = 9 mod 16
    assert from_integer(0, 3, 5).digits == (0, 0, 0, 0, 0)
    assert from_integer(5, 5, 3).digits == (0, 1, 0)


def test_mul_and_invert_examples():
    minus_one = from_integer(-1, 7, 6)
    assert minus_one * minus_one == from_integer(1, 7, 6)
    three = from_integer(3, 2, 4)
    assert three.invert().val == 11  # 3 * 11 = 33 = 1 mod 16
    with pytest.raises(NonUnit):
        from_integer(2, 2, 8).invert()


def test_precision_drops_to_min():
    a = from_integer(10, 3, 6)
    b = from_integer(4, 3, 2)
    assert (a * b).prec == 2
    assert (a + b).prec == 2


@given(
    st.integers(min_value=-(10**6), max_value=10**6),
    st.integers(min_value=-(10**6), max_value=10**6),
    st.integers(min_value=-(10**6), max_value=10**6),
    st.sampled_from([2, 3, 5, 7]),
)
def test_ring_axioms(a, b, c, p):
    n = 8
    x, y, z = (from_integer(t, p, n) for t in (a, b, c))
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x


def test_teichmuller_examples():
    assert teichmuller_lift(2, 3, 6) == from_integer(-1, 3, 6)
    assert teichmuller_lift(1, 5, 6) == from_integer(1, 5, 6)
    w = teichmuller_lift(2, 5, 8)
    assert w.val % 5 == 2
    assert w**4 == from_integer(1, 5, 8)
    # independent oracle: iterate x -> x^5 to its fixed point
    x = 2
    for _ in range(20):
        x = pow(x, 5, 5**8)
    assert w.val == x


def test_teichmuller_every_precision():
    for p in (2, 3, 5, 7):
        for c in range(1, p):
            for n in range(1, 8):
                w = teichmuller_lift(c, p, n)
                assert w ** (p - 1) == from_integer(1, p, n)
                assert w.val % p == c


def test_hensel_sqrt_minus_seven():
    u = from_integer(-7, 2, 12)
    r = hensel_sqrt(u)
    assert r * r == u


def test_hensel_sqrt_branches_and_failures():
    assert hensel_sqrt(from_integer(4, 3, 6)).val == 2
    with pytest.raises(NotASquare):
        hensel_sqrt(from_integer(2, 5, 6))
    with pytest.raises(NotASquare):
        hensel_sqrt(from_integer(3, 2, 6))
    with pytest.raises(NonUnit):
        hensel_sqrt(from_integer(5, 5, 4))


def test_hensel_sqrt_randomized_roundtrip():
    rng = random.Random(7)
    for p in (2, 3, 5, 7, 11):
        for _ in range(25):
            n = rng.randint(3, 14)
            x = from_integer(rng.randrange(1, p**n), p, n)
            if not x.is_unit:
                continue
            sq = x * x
            r = hensel_sqrt(sq)
            assert r * r == sq
            # deterministic: smallest canonical representative
            assert r.val <= (-r).val


def test_unit_decompose():
    t, pr = unit_decompose(from_integer(5, 3, 6))
    assert t == from_integer(-1, 3, 6) and pr == from_integer(-5, 3, 6)
    t, pr = unit_decompose(from_integer(3, 2, 6))
    assert t == from_integer(-1, 2, 6) and pr == from_integer(-3, 2, 6)
    u = from_integer(7, 5, 8)
    t, pr = unit_decompose(u)
    assert t == teichmuller_lift(2, 5, 8)
    assert pr.val % 5 == 1
    assert t * pr == u
    assert t ** 4 == from_integer(1, 5, 8)


def test_unit_decompose_roundtrip_randomized():
    rng = random.Random(11)
    for p in (2, 3, 5, 7):
        for _ in range(30):
            n = rng.randint(2, 10)
            u = from_integer(rng.randrange(p**n), p, n)
            if not u.is_unit:
                continue
            t, pr = unit_decompose(u)
            assert t * pr == u
            if p == 2:
                assert t in (from_integer(1, 2, n), from_integer(-1, 2, n))
                assert pr.val % 4 == 1
            else:
                assert t ** (p - 1) == from_integer(1, p, n)
                assert pr.val % p == 1


def test_residue_datum():
    assert residue_datum(from_integer(-1, 2, 5), 8) == 7
    assert residue_datum(from_integer(4, 3, 4), 9) == 4
    with pytest.raises(InsufficientPrecision):
        residue_datum(from_integer(-1, 2, 2), 8)


def test_exact_div_by_p():
    x = from_integer(18, 3, 5)
    assert x.exact_div_by_p() == from_integer(6, 3, 4)
    with pytest.raises(NonUnit):
        from_integer(5, 3, 5).exact_div_by_p()


def test_literal_roundtrip():
    x = from_integer(35, 3, 6)
    assert parse_literal(format_literal(x)) == x
    assert parse_literal("p:2 [1,0,0,1]") == from_integer(9, 2, 4)

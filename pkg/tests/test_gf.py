import itertools

import pytest

from delpezzo.gf import (
    FieldSizeError,
    UniPoly,
    embed,
    field,
    is_prime,
    monic_irreducibles,
)


def test_prime_field_basics():
    f5 = field(5)
    assert f5.order == 5
    assert f5.modulus == (0, 1)  # x itself
    a, b = f5.from_int(3), f5.from_int(4)
    assert f5.to_int(f5.add(a, b)) == 2
    assert f5.to_int(f5.mul(a, b)) == 2
    assert f5.mul(a, f5.inv(a)) == f5.one()


def test_nonprime_characteristic_rejected():
    with pytest.raises(ValueError):
        field(4)
    with pytest.raises(ValueError):
        field(1)


def test_least_modulus_for_gf4():
    assert field(2, 2).modulus == (1, 1, 1)  # 1 + x + x^2


def test_gf4_multiplication():
    f4 = field(2, 2)
    x, x1 = (0, 1), (1, 1)
    assert f4.mul(x, x1) == f4.one()


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        field(3).inv((0,))


@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 2), (5, 2), (7, 1)])
def test_field_axioms_exhaustive_small(p, k):
    fs = field(p, k)
    elements = list(fs.elements())
    one, zero = fs.one(), fs.zero()
    for a in elements:
        assert fs.add(a, zero) == a
        assert fs.mul(a, one) == a
        assert fs.add(a, fs.neg(a)) == zero
        if a != zero:
            assert fs.mul(a, fs.inv(a)) == one
    # frobenius is additive and multiplicative; frobenius^k is the identity
    sample = elements[:: max(1, len(elements) // 12)]
    for a, b in itertools.product(sample, repeat=2):
        assert fs.frobenius(fs.add(a, b)) == fs.add(fs.frobenius(a), fs.frobenius(b))
        assert fs.frobenius(fs.mul(a, b)) == fs.mul(fs.frobenius(a), fs.frobenius(b))
    for a in elements:
        x = a
        for _ in range(k):
            x = fs.frobenius(x)
        assert x == a


def test_frobenius_fixes_exactly_prime_subfield_in_gf4():
    f4 = field(2, 2)
    fixed = [e for e in f4.elements() if f4.frobenius(e) == e]
    assert fixed == [f4.zero(), f4.one()]


def test_embedding_is_ring_hom_on_all_pairs_small():
    # exhaustive pair checks for every source field up to size 16, with the
    # largest destination of size 256
    for (p, a, b) in [(2, 1, 2), (2, 2, 4), (3, 1, 2), (2, 1, 4), (2, 4, 8)]:
        src, dst = field(p, a), field(p, b)
        emb = embed(src, dst)
        els = list(src.elements())
        assert emb(src.one()) == dst.one()
        for x, y in itertools.product(els, repeat=2):
            assert emb(src.add(x, y)) == dst.add(emb(x), emb(y))
            assert emb(src.mul(x, y)) == dst.mul(emb(x), emb(y))
        # injectivity
        assert len({emb(x) for x in els}) == len(els)


def test_embedding_image_lies_in_the_right_subfield():
    f4, f16 = field(2, 2), field(2, 4)
    emb = embed(f4, f16)
    for e in f4.elements():
        img = emb(e)
        assert f16.pow(img, 4) == img  # the GF(4) locus of GF(16)


def test_embedding_commutes_with_source_frobenius_power():
    f4, f16 = field(2, 2), field(2, 4)
    emb = embed(f4, f16)
    for a in f4.elements():
        lhs = emb(f4.frobenius(f4.frobenius(a)))
        x = emb(a)
        rhs = f16.frobenius(f16.frobenius(x))
        assert lhs == rhs


def test_embedding_composition_from_prime_field():
    f2, f4, f16 = field(2, 1), field(2, 2), field(2, 4)
    via = lambda e: embed(f4, f16)(embed(f2, f4)(e))
    direct = embed(f2, f16)
    for e in f2.elements():
        assert via(e) == direct(e)


def test_embedding_requires_divisible_degree():
    with pytest.raises(ValueError):
        embed(field(2, 2), field(2, 3))
    with pytest.raises(ValueError):
        embed(field(2, 1), field(3, 1))


def test_identity_embedding():
    f8 = field(2, 3)
    emb = embed(f8, f8)
    assert all(emb(e) == e for e in f8.elements())


def test_monic_irreducibles_over_f2():
    f2 = field(2)
    assert [f.format() for f in monic_irreducibles(f2, 1)] == ["0,1", "1,1"]
    assert [f.format() for f in monic_irreducibles(f2, 2)] == ["1,1,1"]
    assert len(monic_irreducibles(f2, 3)) == 2  # (2^3 - 2) / 3


@pytest.mark.parametrize("p,k,m", [(2, 1, 4), (3, 1, 3), (2, 2, 2), (5, 1, 2)])
def test_field_splitting_identity(p, k, m):
    fs = field(p, k)
    q = fs.order
    total = sum(
        s * len(monic_irreducibles(fs, s)) for s in range(1, m + 1) if m % s == 0
    )
    assert total == q**m


def test_irreducibles_cap():
    with pytest.raises(FieldSizeError):
        monic_irreducibles(field(2), 4, cap=10)


def test_unipoly_parse_format_roundtrip_and_eval():
    f3 = field(3)
    poly = UniPoly.parse(f3, "1,2,0,1")  # 1 + 2u + u^3
    assert poly.degree == 3
    assert poly.format() == "1,2,0,1"
    # evaluate at u = 2: 1 + 4 + 8 = 13 = 1 mod 3
    assert poly.evaluate(f3.from_int(2)) == f3.from_int(1)


def test_unipoly_gcd_and_irreducibility():
    f2 = field(2)
    u2u1 = UniPoly.from_ints(f2, [1, 1, 1])
    assert u2u1.is_irreducible()
    square = u2u1.mul(u2u1)
    assert not square.is_irreducible()
    assert square.gcd(u2u1).coeffs == u2u1.coeffs


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]

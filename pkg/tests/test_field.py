import random
from fractions import Fraction
from math import isqrt

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from k3gen.field import KElem, make_field


def test_make_field_conventions():
    k303 = make_field(303)
    assert (k303.D, k303.omega_kind, k303.n_tor) == (-303, 1, 2)
    k1 = make_field(1)
    assert (k1.D, k1.omega_kind, k1.n_tor) == (-4, 0, 4)
    k5 = make_field(5)
    assert (k5.D, k5.omega_kind) == (-20, 0)
    w = k5.omega()
    assert w * w == k5.from_rational(-5)


@pytest.mark.parametrize("d", [4, 8, 9, 12, 18, 25, 0, -3])
def test_make_field_rejects_bad_d(d):
    with pytest.raises(ValueError):
        make_field(d)


def test_omega_satisfies_minimal_polynomial():
    for d in (1, 2, 3, 5, 11, 15, 303, 4547):
        ctx = make_field(d)
        w = ctx.omega()
        t, n = ctx.omega_trace, ctx.omega_norm
        assert w * w - t * w + n == ctx.zero()


def test_mul_d303():
    k = make_field(303)
    w = k.omega()
    assert w * w == w - 76


def test_norm_examples(k11):
    x = (6 - 2 * k11.omega()) / 36  # (5 - sqrt(-11))/36
    assert x.norm() == Fraction(1, 36)
    assert (1 - x).norm() == Fraction(3, 4)
    assert k11.zero().norm() == 0
    assert (1 - x) == (31 * k11.one() + (2 * k11.omega() - 1)) / 36


def test_conj(k11, k303):
    w = k303.omega()
    assert w.conj() == 1 - w
    q = k303.from_rational(Fraction(3, 7))
    assert q.conj() == q
    b2 = k11.omega() - 1  # (-1+sqrt(-11))/2
    assert b2.conj() == -k11.omega()  # (-1-sqrt(-11))/2
    assert b2.conj().conj() == b2


def test_arith_identities(k5):
    x = k5.elem(3, -2, 7)
    assert x + 0 == x
    assert x / x == k5.one()
    with pytest.raises(ZeroDivisionError):
        x / k5.zero()


def test_embed_golden():
    k303 = make_field(303)
    with mp.workprec(300):
        z = k303.omega().embed(256)
        # sqrt(303)/2 to 70 digits via a pure-integer oracle
        digits = 70
        ref = isqrt(303 * 10 ** (2 * digits)) * Fraction(1, 2 * 10 ** digits)
        assert abs(z.real - 0.5) < mp.mpf(2) ** -250
        err = abs(z.imag - mp.mpf(ref.numerator) / ref.denominator)
        assert err < mp.mpf(10) ** -(digits - 2)
    assert make_field(5).from_rational(Fraction(1, 2)).embed(64) == 0.5


def test_embed_conjugation(k11):
    x = k11.elem(3, 5, 7)
    with mp.workprec(160):
        assert abs(x.conj().embed(128) - mp.conj(x.embed(128))) < mp.mpf(2) ** -120


def test_embed_respects_operations(k5):
    rng = random.Random(11)
    with mp.workprec(200):
        for _ in range(25):
            x = k5.elem(rng.randrange(-9, 9), rng.randrange(-9, 9), rng.randrange(1, 9))
            y = k5.elem(rng.randrange(-9, 9), rng.randrange(-9, 9), rng.randrange(1, 9))
            assert abs((x * y).embed(192) - x.embed(192) * y.embed(192)) < mp.mpf(2) ** -180
            assert abs((x + y).embed(192) - (x.embed(192) + y.embed(192))) < mp.mpf(2) ** -180


def test_norm_multiplicative_bulk(k303):
    rng = random.Random(303)
    for _ in range(1000):
        x = k303.elem(rng.randrange(-50, 50), rng.randrange(-50, 50), rng.randrange(1, 20))
        y = k303.elem(rng.randrange(-50, 50), rng.randrange(-50, 50), rng.randrange(1, 20))
        assert (x * y).norm() == x.norm() * y.norm()


@given(a=st.integers(-10**6, 10**6), b=st.integers(-10**6, 10**6),
       den=st.integers(1, 10**4))
@settings(max_examples=200, deadline=None)
def test_canonicalization_idempotent(a, b, den):
    k = make_field(11)
    x = KElem(k, a, b, den)
    again = KElem(k, x.a, x.b, x.den)
    assert (again.a, again.b, again.den) == (x.a, x.b, x.den)
    from math import gcd
    assert gcd(gcd(abs(x.a), abs(x.b)), x.den) == 1


def test_json_round_trip(k303):
    x = k303.elem(-253, 7, 6144)
    assert KElem.from_json(k303, x.to_json()) == x

"""Prime splitting, ideal lattices, and the class group of Q(sqrt(-d)).

Ideals are 2D lattices over Z in the basis (1, omega), kept in Hermite
form [[a, 0], [b, c]] (the lattice Z*a + Z*(b + c*omega)).  The class
group is realized on reduced binary quadratic forms of discriminant D
with composition via united (concordant) forms; discrete logs are solved
by plain enumeration, which is all a desk-scale h needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional

from .field import FieldCtx, KElem
from .linal import hnf, left_kernel, smith_divisors


class NotAnSUnit(ValueError):
    pass


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # strip factors of 2 from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi on the odd part
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def _sqrt_mod_prime(a: int, p: int) -> Optional[int]:
    a %= p
    if p == 2:
        return a
    if kronecker(a, p) != 1 and a != 0:
        return None
    # p is small here; scan
    for r in range(p):
        if (r * r - a) % p == 0:
            return r
    return None


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of Z[omega]: (p) when inert, (p, omega - root) otherwise."""

    p: int
    kind: str  # "split" | "inert" | "ramified"
    root: Optional[int]
    norm: int

    def conjugate(self, ctx: FieldCtx) -> "PrimeIdeal":
        if self.kind != "split":
            return self
        r = (ctx.omega_trace - self.root) % self.p
        return PrimeIdeal(self.p, "split", r, self.norm)

    def ramification(self) -> int:
        return 2 if self.kind == "ramified" else 1

    def label(self) -> str:
        if self.kind == "inert":
            return f"({self.p})"
        return f"({self.p},w-{self.root})"


def split_prime(ctx: FieldCtx, p: int) -> list[PrimeIdeal]:
    """The primes of Z[omega] above a rational prime p."""
    sym = kronecker(ctx.D, p)
    t, n = ctx.omega_trace, ctx.omega_norm
    if sym == -1:
        return [PrimeIdeal(p, "inert", None, p * p)]
    # root of x^2 - t x + n mod p
    if p == 2:
        r = next(r for r in (0, 1) if (r * r - t * r + n) % 2 == 0)
    else:
        inv2 = pow(2, -1, p)
        s = _sqrt_mod_prime((t * t - 4 * n) % p, p)
        r = ((t + s) * inv2) % p
    if sym == 0:
        return [PrimeIdeal(p, "ramified", r, p)]
    fst = PrimeIdeal(p, "split", r, p)
    return [fst, fst.conjugate(ctx)]


def primes_above(ctx: FieldCtx, rational_primes) -> list[PrimeIdeal]:
    out = []
    for p in rational_primes:
        out.extend(split_prime(ctx, p))
    return out


# ---------------------------------------------------------------------------
# ideal lattices


@dataclass(frozen=True)
class IdealLat:
    """Integral ideal Z*a + Z*(b + c*omega) in Hermite form."""

    a: int
    b: int
    c: int

    def norm(self) -> int:
        return self.a * self.c

    def basis_elems(self, ctx: FieldCtx) -> tuple[KElem, KElem]:
        return ctx.elem(self.a, 0), ctx.elem(self.b, self.c)


def lattice_from_vectors(vecs) -> IdealLat:
    """Hermite form of the Z-span of (u, v) pairs meaning u + v*omega."""
    rows = [[v, u] for (u, v) in vecs]  # pivot on the omega coordinate first
    H = [r for r in hnf(rows) if any(r)]
    if len(H) != 2:
        raise ValueError("lattice is not full rank")
    c, b = H[0]
    z, a = H[1]
    assert z == 0
    return IdealLat(abs(a), b % abs(a) if a else b, abs(c))


def ideal_of(ctx: FieldCtx, *gens: KElem) -> IdealLat:
    """The integral O-ideal generated by integral elements."""
    vecs = []
    w = ctx.omega()
    for g in gens:
        if g.den != 1:
            raise ValueError("generators must be integral")
        gw = g * w
        vecs.append((g.a, g.b))
        vecs.append((gw.a, gw.b))
    return lattice_from_vectors(vecs)


def prime_to_ideal(ctx: FieldCtx, P: PrimeIdeal) -> IdealLat:
    if P.kind == "inert":
        return IdealLat(P.p, 0, P.p)
    return IdealLat(P.p, (-P.root) % P.p, 1)


def ideal_mul(ctx: FieldCtx, I: IdealLat, J: IdealLat) -> IdealLat:
    gi = I.basis_elems(ctx)
    gj = J.basis_elems(ctx)
    prods = [x * y for x in gi for y in gj]
    return ideal_of(ctx, *prods)


def ideal_pow(ctx: FieldCtx, I: IdealLat, e: int) -> IdealLat:
    R = IdealLat(1, 0, 1)
    for _ in range(e):
        R = ideal_mul(ctx, R, I)
    return R


def ideal_conj(ctx: FieldCtx, I: IdealLat) -> IdealLat:
    g1, g2 = I.basis_elems(ctx)
    return ideal_of(ctx, g1.conj(), g2.conj())


def _floor_div_sqrt(p: int, s: int, q: int) -> int:
    """floor((p + sqrt(s)) / q) for integers p, s >= 0, q > 0."""
    return (p + isqrt(s)) // q


def bqf_vectors_below(A: int, B: int, C: int, bound: Fraction):
    """All (alpha, beta) != 0 with A a^2 + B ab + C b^2 <= bound, up to sign.

    The form must be positive definite; bounds are exact (no floats).
    """
    disc = 4 * A * C - B * B
    if A <= 0 or disc <= 0:
        raise ValueError("form is not positive definite")
    bound = Fraction(bound)
    bn, bd = bound.numerator, bound.denominator
    if bn < 0:
        return
    # beta^2 <= 4A*bound/disc
    num = 4 * A * bn
    bmax = isqrt(num * bd * disc) // (bd * disc)
    for beta in range(0, bmax + 1):
        # A alpha^2 + B beta alpha + (C beta^2 - bound) <= 0
        s = Fraction(4 * A * bound - disc * beta * beta)
        if s < 0:
            continue
        sn, sd = s.numerator, s.denominator
        # alpha in [(-B beta - sqrt(s))/2A, (-B beta + sqrt(s))/2A]
        root_floor = isqrt(sn * sd) // sd  # floor(sqrt(s))
        hi = (-B * beta + root_floor) // (2 * A)
        lo = -((B * beta + root_floor) // (2 * A))
        for alpha in range(lo, hi + 1):
            v = A * alpha * alpha + B * alpha * beta + C * beta * beta
            if 0 < Fraction(v) <= bound:
                if beta > 0 or alpha > 0:
                    yield alpha, beta, v


def is_principal(ctx: FieldCtx, I: IdealLat) -> Optional[KElem]:
    """A generator g with (g) = I, or None.

    Lattice points of norm N(I) are found by exact enumeration under the
    norm form; any point of norm N(I) generates, and none of smaller norm
    exists, so the search is also a correctness certificate.
    """
    v1, v2 = I.basis_elems(ctx)
    A = v1.norm()
    C = v2.norm()
    B = (v1 * v2.conj()).trace()
    assert A.denominator == C.denominator == B.denominator == 1
    nI = I.norm()
    for alpha, beta, val in bqf_vectors_below(int(A), int(B), int(C), nI):
        if val == nI:
            return v1 * alpha + v2 * beta
    return None


def element_valuation(ctx: FieldCtx, x: KElem, P: PrimeIdeal) -> int:
    """v_P(x) for nonzero x."""
    if x.is_zero():
        raise ValueError("valuation of zero")
    p = P.p

    def vp(m: int) -> int:
        m = abs(m)
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        return k

    def integral_val(u: int, v: int) -> int:
        s = vp(gcd(u, v)) if (u or v) else 0
        u //= p ** s
        v //= p ** s
        if P.kind == "inert":
            return s
        on_p = (u + v * P.root) % p == 0
        if P.kind == "ramified":
            nrm = u * u + ctx.omega_trace * u * v + ctx.omega_norm * v * v
            return 2 * s + (vp(nrm) if on_p else 0)
        nrm = u * u + ctx.omega_trace * u * v + ctx.omega_norm * v * v
        return s + (vp(nrm) if on_p else 0)

    vden = vp(x.den) * P.ramification()
    return integral_val(x.a, x.b) - vden


def factor_element(ctx: FieldCtx, x: KElem, S: list[PrimeIdeal]) -> list[int]:
    """Valuations of (x) over S; raises NotAnSUnit if support leaks outside S."""
    if x.is_zero():
        raise ValueError("cannot factor zero")
    vals = [element_valuation(ctx, x, P) for P in S]
    nx = x.norm()
    check = Fraction(1)
    for P, v in zip(S, vals):
        check *= Fraction(P.norm) ** v
    if check != abs(nx):
        raise NotAnSUnit(f"{x!r} is not an S-unit for the given S")
    return vals


# ---------------------------------------------------------------------------
# class group on reduced binary quadratic forms


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    while True:
        if -a < b <= a <= c and (b >= 0 or (a != c and abs(b) != a)):
            return a, b, c
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        # normalize b into (-a, a]
        r = (a - b) // (2 * a)
        b2 = b + 2 * r * a
        c2 = a * r * r + b * r + c
        b, c = b2, c2


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """All primitive reduced forms of discriminant D < 0 (brute force)."""
    out = []
    amax = isqrt(-D // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
    return sorted(out)


def principal_form(D: int) -> tuple[int, int, int]:
    k = D % 2
    return (1, k, (k * k - D) // 4)


def _form_value_coprime(form, m: int):
    """(x, y) with gcd(form(x,y), m) = 1 and gcd(x, y) = 1."""
    a, b, c = form
    for r in range(1, 40):
        for x in range(-r, r + 1):
            for y in range(-r, r + 1):
                if gcd(x, y) != 1:
                    continue
                v = a * x * x + b * x * y + c * y * y
                if v != 0 and gcd(v, m) == 1:
                    return x, y, v
    raise RuntimeError("no coprime value found (form not primitive?)")


def _transform(form, x, y):
    """Equivalent form with leading coefficient form(x, y), gcd(x,y)=1."""
    a, b, c = form
    g, s_, t_ = _xgcd(x, y)
    assert g == 1
    # unimodular M = [[x, -t_], [y, s_]], det = x s_ + y t_ = 1
    r, s = -t_, s_
    a2 = a * x * x + b * x * y + c * y * y
    b2 = 2 * a * x * r + b * (x * s + y * r) + 2 * c * y * s
    c2 = a * r * r + b * r * s + c * s * s
    return a2, b2, c2


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(f1, f2, D: int) -> tuple[int, int, int]:
    """Gauss composition of primitive forms of discriminant D, reduced output."""
    a1 = f1[0]
    x, y, v = _form_value_coprime(f2, a1)
    _, b2, _ = _transform(f2, x, y)
    a2 = v
    # B = b1 mod 2a1, B = b2 mod 2a2 (solvable: b1 = b2 = D mod 2)
    b1 = f1[1]
    g, u, _ = _xgcd(2 * a1, 2 * a2)
    assert (b2 - b1) % g == 0
    lcm = 2 * a1 * a2 // g
    B = (b1 + 2 * a1 * ((b2 - b1) // g) * u) % (2 * lcm)
    A = a1 * a2
    C = (B * B - D) // (4 * A)
    assert (B * B - D) % (4 * A) == 0
    return reduce_form(A, B, C)


def form_pow(f, e: int, D: int):
    r = principal_form(D)
    b = f
    if e < 0:
        b = reduce_form(b[0], -b[1], b[2])
        e = -e
    while e:
        if e & 1:
            r = compose(r, b, D)
        b = compose(b, b, D)
        e >>= 1
    return r


def ideal_to_form(ctx: FieldCtx, I: IdealLat) -> tuple[int, int, int]:
    """Reduced form of the ideal class of I."""
    a, b, c = I.a, I.b, I.c
    if c != 1:
        # I = c * (primitive part)
        a, b, c = a // c, b // c, 1
    t, n = ctx.omega_trace, ctx.omega_norm
    bb = 2 * b + t
    cc = (b * b + t * b + n) // a
    assert (b * b + t * b + n) % a == 0
    return reduce_form(a, bb, cc)


class ClassGroup:
    """The class group realized on reduced forms, with an exhaustive dlog table."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.D = ctx.D
        self.forms = reduced_forms(ctx.D)
        self.h = len(self.forms)
        self.identity = principal_form(ctx.D)
        self.generators: list[tuple[int, int, int]] = []
        self.relations: list[list[int]] = []
        self._dlog: dict[tuple[int, int, int], tuple[int, ...]] = {self.identity: ()}
        self._build()
        self.structure = smith_divisors(self.relations) if self.relations else []

    def _build(self):
        for f in self.forms:
            if f in self._dlog:
                continue
            idx = len(self.generators)
            self.generators.append(f)
            self._dlog = {g: v + (0,) for g, v in self._dlog.items()}
            self.relations = [row + [0] for row in self.relations]
            old = dict(self._dlog)
            # relative order: least r > 0 with f^r inside the old subgroup
            power = f
            r = 1
            while power not in old:
                power = compose(power, f, self.D)
                r += 1
            rel_vec = old[power]
            self._dlog = {}
            for g, vec in old.items():
                acc = g
                for j in range(r):
                    nv = list(vec)
                    nv[idx] = j
                    self._dlog[acc] = tuple(nv)
                    acc = compose(acc, f, self.D)
            row = [-v for v in rel_vec]
            row[idx] = r
            self.relations.append(row)

    def dlog_form(self, form) -> tuple[int, ...]:
        return self._dlog[reduce_form(*form)]

    def dlog_ideal(self, I: IdealLat) -> tuple[int, ...]:
        return self.dlog_form(ideal_to_form(self.ctx, I))

    def dlog_prime(self, P: PrimeIdeal) -> tuple[int, ...]:
        return self.dlog_ideal(prime_to_ideal(self.ctx, P))

    def compose(self, f, g):
        return compose(f, g, self.D)

    def exponent_kernel(self, primes: list[PrimeIdeal]) -> list[list[int]]:
        """Basis of {f in Z^S : prod P_i^{f_i} is principal}."""
        s = len(self.generators)
        if s == 0:
            n = len(primes)
            return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        W = [list(self.dlog_prime(P)) for P in primes]
        rows = W + self.relations
        ker = left_kernel(rows)
        proj = [v[: len(primes)] for v in ker]
        proj = [r for r in hnf(proj) if any(r)]
        return proj


def class_group(ctx: FieldCtx) -> ClassGroup:
    return ClassGroup(ctx)

"""Exact arithmetic in an imaginary quadratic field k = Q(sqrt(-d)).

Elements are stored as (a + b*omega)/den with integer a, b, den in lowest
terms, where omega is the standard integral generator:

    omega = sqrt(D/4)        if D == 0 (mod 4),
    omega = (1 + sqrt(D))/2  if D == 1 (mod 4),

D the field discriminant.  All arithmetic is exact over Z; the only
floating-point surface is ``embed``, which maps into mpmath complex numbers
at a requested precision with Im(sqrt(-d)) > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath as mp


@dataclass(frozen=True)
class FieldCtx:
    """The fixed imaginary quadratic field Q(sqrt(-d)) and its ring Z[omega]."""

    d: int
    D: int
    omega_kind: int  # 0: omega = sqrt(D/4), 1: omega = (1+sqrt(D))/2
    n_tor: int       # order of the unit group of Z[omega]
    conductor: int   # |D|

    @property
    def omega_trace(self) -> int:
        return 0 if self.omega_kind == 0 else 1

    @property
    def omega_norm(self) -> int:
        return self.d if self.omega_kind == 0 else (1 + self.conductor) // 4

    def omega(self) -> "KElem":
        return KElem(self, 0, 1, 1)

    def one(self) -> "KElem":
        return KElem(self, 1, 0, 1)

    def zero(self) -> "KElem":
        return KElem(self, 0, 0, 1)

    def root_of_unity(self) -> "KElem":
        """A generator of the torsion units: i for d=1, -omega^2 for d=3, else -1."""
        if self.d == 1:
            return self.omega()
        if self.d == 3:
            # omega = (1+sqrt(-3))/2 is a primitive 6th root of unity
            return self.omega()
        return KElem(self, -1, 0, 1)

    def from_rational(self, q) -> "KElem":
        q = Fraction(q)
        return KElem(self, q.numerator, 0, q.denominator)

    def elem(self, a, b=0, den=1) -> "KElem":
        return KElem(self, a, b, den)


def _squarefree(d: int) -> bool:
    if d <= 0:
        return False
    m, p = d, 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        if m % p == 0:
            m //= p
        p += 1 if p == 2 else 2
    return True


def make_field(d: int) -> FieldCtx:
    """Build the context for Q(sqrt(-d)); rejects d that is not squarefree."""
    if not _squarefree(d):
        raise ValueError(f"d = {d} is not a squarefree positive integer")
    if d % 4 == 3:
        D = -d
        kind = 1
    else:
        D = -4 * d
        kind = 0
    n_tor = 4 if d == 1 else (6 if d == 3 else 2)
    return FieldCtx(d=d, D=D, omega_kind=kind, n_tor=n_tor, conductor=-D)


class KElem:
    """An element (a + b*omega)/den of k in canonical reduced form.

    Canonical means gcd(a, b, den) = 1 and den >= 1; equality and hashing
    are structural, so KElem can key formal sums.
    """

    __slots__ = ("ctx", "a", "b", "den")

    def __init__(self, ctx: FieldCtx, a: int, b: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            a, b, den = -a, -b, -den
        g = gcd(gcd(abs(a), abs(b)), den)
        if g > 1:
            a, b, den = a // g, b // g, den // g
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *args):
        raise AttributeError("KElem is immutable")

    # -- structure ---------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, KElem)
            and self.ctx == other.ctx
            and self.a == other.a
            and self.b == other.b
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.a, self.b, self.den, self.ctx.d))

    def sort_key(self):
        return (self.den, self.a, self.b)

    def __repr__(self):
        if self.b == 0:
            s = f"{self.a}"
        elif self.a == 0:
            s = f"{self.b}*w"
        else:
            s = f"{self.a}{self.b:+d}*w"
        return s if self.den == 1 else f"({s})/{self.den}"

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0 and self.den == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.a, self.den)

    def height(self) -> int:
        return max(abs(self.a), abs(self.b)) + self.den

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, KElem):
            if other.ctx != self.ctx:
                raise ValueError("mixed field contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return KElem(
            self.ctx,
            self.a * o.den + o.a * self.den,
            self.b * o.den + o.b * self.den,
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return KElem(self.ctx, -self.a, -self.b, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n = self.ctx.omega_trace, self.ctx.omega_norm
        # omega^2 = t*omega - n
        a = self.a * o.a - n * self.b * o.b
        b = self.a * o.b + self.b * o.a + t * self.b * o.b
        return KElem(self.ctx, a, b, self.den * o.den)

    __rmul__ = __mul__

    def conj(self) -> "KElem":
        t = self.ctx.omega_trace
        return KElem(self.ctx, self.a + t * self.b, -self.b, self.den)

    def norm(self) -> Fraction:
        t, n = self.ctx.omega_trace, self.ctx.omega_norm
        return Fraction(self.a * self.a + t * self.a * self.b + n * self.b * self.b,
                        self.den * self.den)

    def trace(self) -> Fraction:
        t = self.ctx.omega_trace
        return Fraction(2 * self.a + t * self.b, self.den)

    def inverse(self) -> "KElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        nm = self.norm()
        # 1/x = conj(x)/N(x); conj(x) has the same den, so fold exactly
        num = nm.numerator
        return KElem(self.ctx, c.a * nm.denominator * self.den,
                     c.b * nm.denominator * self.den, num * self.den * self.den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.ctx.one()
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    # -- numerics ----------------------------------------------------------

    def embed(self, prec: int = 64):
        """Complex value at `prec` bits, with Im(omega) > 0."""
        if prec < 64:
            raise ValueError("prec must be at least 64 bits")
        with mp.workprec(prec + 16):
            s = mp.sqrt(self.ctx.conductor) / 2
            re = mp.mpf(self.ctx.omega_trace) / 2
            w = mp.mpc(re, s)
            val = (self.a + self.b * w) / self.den
        return val

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "den": str(self.den)}

    @staticmethod
    def from_json(ctx: FieldCtx, obj: dict) -> "KElem":
        return KElem(ctx, int(obj["a"]), int(obj["b"]), int(obj["den"]))


def arith(x: KElem, y: KElem, op: str) -> KElem:
    """Dispatch form of the field operations (add, sub, mul, div)."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def norm(x: KElem) -> Fraction:
    return x.norm()


def conj(x: KElem) -> KElem:
    return x.conj()


def embed(x: KElem, prec: int = 64):
    return x.embed(prec)

"""The twisted wedge square of k* in explicit S-unit coordinates.

Relative to a basis (u; c_1..c_t) with u of torsion order n, every element
of the subgroup generated in the twisted wedge square has coordinates

    a   in Z/m        the multiple of (-1)^~(-1)   (m = 1 when 4 | n, else 2)
    b_i in Z/n        the multiple of u ^~ c_i
    b_ij in Z (i<j)   the multiple of c_i ^~ c_j

computed by bilinear expansion with the rewriting rules
c_i^~c_j = -c_j^~c_i, c_i^~c_i = (-1)^~c_i, c_i^~u = -(u^~c_i), and
u^~u = (-1)^~(-1) when n/2 is odd, 0 when n/2 is even.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .field import FieldCtx, KElem
from .ideals import NotAnSUnit
from .linal import denominator_of_solution, kernel_mod, solve_left
from .sunits import SUnitBasis


@dataclass
class WedgeElem:
    basis: SUnitBasis
    a: int
    b: tuple[int, ...]
    c: tuple[int, ...]  # strictly upper triangular, row-major (i < j)

    def __post_init__(self):
        n = self.basis.torsion_order()
        m = self.m
        object.__setattr__(self, "a", self.a % m if m else 0)
        object.__setattr__(self, "b", tuple(x % n for x in self.b))
        object.__setattr__(self, "c", tuple(self.c))

    @property
    def m(self) -> int:
        return 1 if self.basis.torsion_order() % 4 == 0 else 2

    def _check(self, other: "WedgeElem"):
        if self.basis is not other.basis:
            raise ValueError("wedge coordinates from different bases are incomparable")

    def __add__(self, other: "WedgeElem") -> "WedgeElem":
        self._check(other)
        return WedgeElem(self.basis, self.a + other.a,
                         tuple(x + y for x, y in zip(self.b, other.b)),
                         tuple(x + y for x, y in zip(self.c, other.c)))

    def __neg__(self) -> "WedgeElem":
        return WedgeElem(self.basis, -self.a, tuple(-x for x in self.b),
                         tuple(-x for x in self.c))

    def __sub__(self, other: "WedgeElem") -> "WedgeElem":
        return self + (-other)

    def __rmul__(self, k: int) -> "WedgeElem":
        return WedgeElem(self.basis, k * self.a, tuple(k * x for x in self.b),
                         tuple(k * x for x in self.c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WedgeElem):
            return NotImplemented
        self._check(other)
        return (self.a, self.b, self.c) == (other.a, other.b, other.c)

    def is_zero(self) -> bool:
        return self.a == 0 and not any(self.b) and not any(self.c)

    def coords(self) -> list[int]:
        return [self.a, *self.b, *self.c]

    def moduli(self) -> list[int]:
        n = self.basis.torsion_order()
        t = self.basis.t
        return [self.m] + [n] * t + [0] * (t * (t - 1) // 2)

    def to_json(self) -> dict:
        t = self.basis.t
        cmap = {}
        idx = 0
        for i in range(t):
            for j in range(i + 1, t):
                if self.c[idx]:
                    cmap[f"{i},{j}"] = self.c[idx]
                idx += 1
        return {"a": self.a, "b": list(self.b), "c": cmap, "basis": self.basis.label}


def zero_wedge(basis: SUnitBasis) -> WedgeElem:
    t = basis.t
    return WedgeElem(basis, 0, (0,) * t, (0,) * (t * (t - 1) // 2))


def _pair_from_exponents(basis: SUnitBasis, ex: int, v: list[int],
                         ey: int, w: list[int]) -> WedgeElem:
    n = basis.torsion_order()
    t = basis.t
    half = n // 2
    lam = 1 if half % 2 == 1 else 0
    a = ex * ey * lam
    b = [ex * w[i] - ey * v[i] + half * v[i] * w[i] for i in range(t)]
    c = []
    for i in range(t):
        for j in range(i + 1, t):
            c.append(v[i] * w[j] - v[j] * w[i])
    return WedgeElem(basis, a, tuple(b), tuple(c))


def wedge_pair(x: KElem, y: KElem, basis: SUnitBasis) -> WedgeElem:
    """Coordinates of x ^~ y; both arguments must be S-units for the basis."""
    ex, v = basis.decompose(x)
    ey, w = basis.decompose(y)
    return _pair_from_exponents(basis, ex, v, ey, w)


def delta2(formal_sum, basis: SUnitBasis) -> WedgeElem:
    """Sum of n_x * (1-x) ^~ x over the support; linear in the formal sum."""
    total = zero_wedge(basis)
    for x, n in formal_sum.items():
        try:
            piece = wedge_pair(1 - x, x, basis)
        except NotAnSUnit as e:
            raise NotAnSUnit(f"support point {x!r}: {e}") from e
        total = total + n * piece
    return total


def kernel_of_delta(points: list[KElem], basis: SUnitBasis) -> list[list[int]]:
    """Z-basis of the integer combinations of [x_i] killed by delta2."""
    if len(set(points)) != len(points):
        raise ValueError("points must be distinct")
    rows = []
    moduli = None
    for x in points:
        w = wedge_pair(1 - x, x, basis)
        rows.append(w.coords())
        moduli = w.moduli()
    return kernel_mod(rows, moduli)


def q_kernel(ctx: FieldCtx) -> list[tuple[int, int]]:
    """Generators (as pairs in Q* x Q*) of the kernel of wedge restriction from Q."""
    if ctx.d == 1:
        return [(-1, -1), (-1, 2)]
    return [(-1, -ctx.d)]


def _rational_sunit_primes(basis: SUnitBasis) -> list[int]:
    """Rational primes p with every prime of k above p inside S."""
    ctx = basis.ctx
    byp: dict[int, list] = {}
    for P in basis.S:
        byp.setdefault(P.p, []).append(P)
    out = []
    for p, lst in sorted(byp.items()):
        kinds = {P.kind for P in lst}
        if "split" in kinds and len(lst) < 2:
            continue
        out.append(p)
    return out


def rational_wedge_generators(basis: SUnitBasis):
    """The pairs spanning the image of the rational S-unit wedge square."""
    ctx = basis.ctx
    gens = [ctx.from_rational(-1)] + [ctx.from_rational(p)
                                      for p in _rational_sunit_primes(basis)]
    pairs = []
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            pairs.append((gens[i], gens[j]))
    return pairs


def rational_exceptional(basis: SUnitBasis, bound: int = 5) -> list[KElem]:
    """Rational x with x and 1-x both S-units, enumerated over the S-rational primes."""
    from fractions import Fraction
    from itertools import product as iproduct

    ctx = basis.ctx
    primes = _rational_sunit_primes(basis)
    out = []
    for signs in (1, -1):
        for exps in iproduct(*[range(-bound, bound + 1) for _ in primes]):
            q = Fraction(signs)
            for p, e in zip(primes, exps):
                q *= Fraction(p) ** e
            if q in (0, 1):
                continue
            x = ctx.from_rational(q)
            if basis.is_sunit(1 - x):
                out.append(x)
    return sorted(out, key=lambda z: z.sort_key())


def q_image_test(w: WedgeElem, basis: SUnitBasis, bound: int = 5):
    """Least divisor e of 2*n_tor with e*w a boundary of a rational Bloch element.

    Returns (e, flat) with (e*w) == delta2(flat) and flat supported on
    rational points, or (None, None) when no divisor of 2*n_tor works
    within the enumerated rational support.
    """
    from .relations import FormalSum

    points = rational_exceptional(basis, bound)
    rows = [wedge_pair(1 - x, x, basis).coords() for x in points]
    moduli = w.moduli()
    n = basis.torsion_order()
    divisors = sorted({e for e in range(1, 2 * n + 1) if (2 * n) % e == 0})
    for e in divisors:
        target = (e * w).coords()
        sol = solve_left(rows, target, moduli)
        if sol is not None:
            return e, FormalSum(list(zip(points, sol)))
    return None, None

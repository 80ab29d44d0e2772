"""S-unit bases, decomposition, and exceptional S-unit enumeration.

An imaginary quadratic field has unit rank 0, so the S-units modulo
torsion are free of rank |S|.  A basis is produced from the kernel of the
exponent map Z^S -> Cl(k): each kernel basis vector gives a principal
ideal, whose generator (a shortest vector of the ideal lattice) is an
S-unit realizing that valuation vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .field import FieldCtx, KElem
from .ideals import (
    ClassGroup,
    IdealLat,
    NotAnSUnit,
    PrimeIdeal,
    class_group,
    factor_element,
    ideal_conj,
    ideal_mul,
    ideal_pow,
    is_principal,
    prime_to_ideal,
)
from .linal import lll_reduce, solve_left


def close_under_conjugation(ctx: FieldCtx, S: list[PrimeIdeal]) -> list[PrimeIdeal]:
    out = list(S)
    for P in S:
        Pc = P.conjugate(ctx)
        if Pc not in out:
            out.append(Pc)
    return out


@dataclass
class SUnitBasis:
    """Root of unity u plus free generators with their valuation matrix over S."""

    ctx: FieldCtx
    u: KElem
    gens: list[KElem]
    S: list[PrimeIdeal]
    val_matrix: list[list[int]]  # t x |S|
    label: str = ""

    def __post_init__(self):
        self._memo: dict[KElem, tuple[int, tuple[int, ...]]] = {}

    @property
    def t(self) -> int:
        return len(self.gens)

    def torsion_order(self) -> int:
        return self.ctx.n_tor

    def decompose(self, x: KElem) -> tuple[int, list[int]]:
        """x = u^e * prod gens_i^{v_i}, exactly; raises NotAnSUnit."""
        if x.is_zero():
            raise NotAnSUnit("zero is not an S-unit")
        hit = self._memo.get(x)
        if hit is not None:
            return hit[0], list(hit[1])
        vals = factor_element(self.ctx, x, self.S)
        if self.t:
            v = solve_left(self.val_matrix, vals)
            if v is None:
                raise NotAnSUnit(f"{x!r} has valuations outside the basis lattice")
        else:
            if any(vals):
                raise NotAnSUnit(f"{x!r} is not a unit")
            v = []
        rest = x
        for g, e in zip(self.gens, v):
            if e:
                rest = rest / g ** e
        n = self.ctx.n_tor
        acc = self.ctx.one()
        for e in range(n):
            if acc == rest:
                self._memo[x] = (e, tuple(v))
                return e, list(v)
            acc = acc * self.u
        raise NotAnSUnit(f"{x!r}: residual {rest!r} is not a root of unity")

    def reconstruct(self, e: int, v: list[int]) -> KElem:
        x = self.u ** (e % self.ctx.n_tor)
        for g, ei in zip(self.gens, v):
            if ei:
                x = x * g ** ei
        return x

    def is_sunit(self, x: KElem) -> bool:
        if x.is_zero():
            return False
        try:
            factor_element(self.ctx, x, self.S)
            return True
        except NotAnSUnit:
            return False


def sunit_basis(ctx: FieldCtx, S: list[PrimeIdeal], cls: ClassGroup | None = None,
                label: str = "") -> SUnitBasis:
    """Generators of the S-units modulo torsion (S is closed under conjugation first)."""
    S = close_under_conjugation(ctx, S)
    if cls is None:
        cls = class_group(ctx)
    gens: list[KElem] = []
    vmat: list[list[int]] = []
    for f in lll_reduce(cls.exponent_kernel(S)):
        I = IdealLat(1, 0, 1)
        J = IdealLat(1, 0, 1)
        for P, e in zip(S, f):
            if e > 0:
                I = ideal_mul(ctx, I, ideal_pow(ctx, prime_to_ideal(ctx, P), e))
            elif e < 0:
                J = ideal_mul(ctx, J, ideal_pow(ctx, prime_to_ideal(ctx, P), -e))
        # I * J^-1 = I * conj(J) / N(J)
        C = ideal_mul(ctx, I, ideal_conj(ctx, J))
        g = is_principal(ctx, C)
        if g is None:
            raise RuntimeError("exponent-kernel vector did not give a principal ideal")
        gen = g / J.norm()
        vals = factor_element(ctx, gen, S)
        assert vals == list(f), (vals, f)
        gens.append(gen)
        vmat.append(list(f))
    return SUnitBasis(ctx=ctx, u=ctx.root_of_unity(), gens=gens, S=S,
                      val_matrix=vmat, label=label or f"S{ctx.d}:{len(S)}")


def sunit_basis_from_gens(ctx: FieldCtx, S: list[PrimeIdeal], gens: list[KElem],
                          label: str = "") -> SUnitBasis:
    """Wrap explicitly given free generators (they must span the S-unit lattice)."""
    S = close_under_conjugation(ctx, S)
    vmat = [factor_element(ctx, g, S) for g in gens]
    basis = SUnitBasis(ctx=ctx, u=ctx.root_of_unity(), gens=list(gens), S=S,
                       val_matrix=vmat, label=label or f"S{ctx.d}:given")
    for g in gens:
        basis.decompose(g)
    return basis


def decompose(x: KElem, basis: SUnitBasis) -> tuple[int, list[int]]:
    return basis.decompose(x)


@dataclass(frozen=True)
class ExceptionalSUnit:
    x: KElem
    ex: tuple[int, tuple[int, ...]]
    ex1m: tuple[int, tuple[int, ...]]


def _norm_factors_over(nrm: Fraction, primes: list[int]) -> bool:
    num = abs(nrm.numerator)
    den = nrm.denominator
    for p in primes:
        while num % p == 0:
            num //= p
        while den % p == 0:
            den //= p
    return num == 1 and den == 1


def exceptional_sunits(basis: SUnitBasis, bound: int) -> list[ExceptionalSUnit]:
    """All x = u^e prod c_i^{v_i}, |v_i| <= bound, with 1-x also an S-unit.

    The output is closed under x -> 1-x and x -> conj(x) (their exponents may
    exceed the box) and sorted lexicographically in (e, v) for reproducibility.
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    ctx = basis.ctx
    n = ctx.n_tor
    t = basis.t
    rational_primes = sorted({P.p for P in basis.S})
    found: dict[KElem, ExceptionalSUnit] = {}

    def admit(x: KElem):
        if x.is_zero() or x.is_one() or x in found:
            return
        one_minus = 1 - x
        if not _norm_factors_over(one_minus.norm(), rational_primes):
            return
        try:
            ex = basis.decompose(x)
            ex1m = basis.decompose(one_minus)
        except NotAnSUnit:
            return
        found[x] = ExceptionalSUnit(x=x, ex=(ex[0], tuple(ex[1])),
                                    ex1m=(ex1m[0], tuple(ex1m[1])))

    # sweep the exponent box with incremental partial products
    pow_table = [[g ** e for e in range(-bound, bound + 1)] for g in basis.gens]
    roots = [basis.u ** e for e in range(n)]

    def sweep(i: int, partial: KElem):
        if i == t:
            for e in range(n):
                admit(roots[e] * partial)
            return
        for col in pow_table[i]:
            sweep(i + 1, partial * col)

    sweep(0, ctx.one())

    # close under the commuting involutions x -> 1-x and x -> conj(x)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for exc in frontier:
            for y in (1 - exc.x, exc.x.conj(), (1 - exc.x).conj()):
                if y not in found and not y.is_zero() and not y.is_one():
                    before = len(found)
                    admit(y)
                    if len(found) > before:
                        nxt.append(found[y])
        frontier = nxt

    return sorted(found.values(), key=lambda s: (s.ex[0], s.ex[1]))

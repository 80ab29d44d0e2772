"""Formal sums on k minus {0,1}, the five/two-term relations, and certificates.

A certificate expresses a target formal sum as an explicit integer
combination of five-term relations

    [x] - [y] + [y/x] - [(1-y)/(1-x)] + [(1-1/y)/(1-1/x)]

and two-term relations [x] + [1/x], [x] + [1-x].  Searching for one is an
integer row-space membership problem over a finite support set U closed
under the six-fold symmetries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .field import FieldCtx, KElem
from .linal import denominator_of_solution, hnf, solve_left


class FormalSum:
    """Finite integer combination of points of k minus {0, 1}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for x, n in items:
                if n == 0:
                    continue
                if x.is_zero() or x.is_one():
                    raise ValueError(f"support point {x!r} lies outside k-flat")
                data[x] = data.get(x, 0) + n
        object.__setattr__(self, "terms", {x: n for x, n in data.items() if n})

    def __setattr__(self, *a):
        raise AttributeError("FormalSum is immutable")

    def items(self):
        return self.terms.items()

    def support(self):
        return set(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, x: KElem) -> int:
        return self.terms.get(x, 0)

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = dict(self.terms)
        for x, n in other.terms.items():
            out[x] = out.get(x, 0) + n
        return FormalSum(out)

    def __neg__(self):
        return FormalSum({x: -n for x, n in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int) -> "FormalSum":
        return FormalSum({x: k * n for x, n in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def conj(self) -> "FormalSum":
        return FormalSum({x.conj(): n for x, n in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for x, n in self:
            bits.append(f"{'+' if n >= 0 and bits else ''}{n}[{x!r}]")
        return "".join(bits)

    def to_json(self) -> list:
        return [[n, x.to_json()] for x, n in self]

    @staticmethod
    def from_json(ctx: FieldCtx, data) -> "FormalSum":
        return FormalSum([(KElem.from_json(ctx, obj), n) for n, obj in data])


def single(x: KElem) -> FormalSum:
    return FormalSum({x: 1})


def five_term(x: KElem, y: KElem) -> FormalSum:
    """[x]-[y]+[y/x]-[(1-y)/(1-x)]+[(1-1/y)/(1-1/x)]; needs x != y in k-flat."""
    if x == y:
        raise ValueError("five-term relation needs x != y")
    return FormalSum([
        (x, 1),
        (y, -1),
        (y / x, 1),
        ((1 - y) / (1 - x), -1),
        ((1 - 1 / y) / (1 - 1 / x), 1),
    ])


def five_term_points(x: KElem, y: KElem) -> list[KElem]:
    """The five formula values of the relation, before any cancellation."""
    return [x, y, y / x, (1 - y) / (1 - x), (1 - 1 / y) / (1 - 1 / x)]


def two_term(kind: str, x: KElem) -> FormalSum:
    if kind == "inverse":
        return FormalSum([(x, 1), (1 / x, 1)])
    if kind == "one-minus":
        return FormalSum([(x, 1), (1 - x, 1)])
    raise ValueError(f"unknown two-term kind {kind!r}")


def six_orbit(x: KElem) -> set[KElem]:
    """{x, 1-x, 1/x, 1-1/x, 1/(1-x), x/(x-1)} deduplicated."""
    return {x, 1 - x, 1 / x, 1 - 1 / x, 1 / (1 - x), x / (x - 1)}


_ORBIT_SIGNS = (
    (lambda x: x, 1),
    (lambda x: 1 - 1 / x, 1),
    (lambda x: 1 / (1 - x), 1),
    (lambda x: 1 - x, -1),
    (lambda x: 1 / x, -1),
    (lambda x: x / (x - 1), -1),
)


def orbit_normalize(x: KElem) -> tuple[KElem, int]:
    """Least orbit element under the canonical order, with its sign versus [x]."""
    best = None
    for f, s in _ORBIT_SIGNS:
        y = f(x)
        if best is None or y.sort_key() < best[0].sort_key():
            best = (y, s)
    return best


def normalize_sum(fs: FormalSum) -> FormalSum:
    """Rewrite each term on its canonical six-orbit representative."""
    out = {}
    for x, n in fs.items():
        y, s = orbit_normalize(x)
        out[y] = out.get(y, 0) + s * n
    return FormalSum(out)


def orbit_closure(points: Iterable[KElem]) -> set[KElem]:
    out = set()
    for x in points:
        out |= six_orbit(x)
    return out


@dataclass(frozen=True)
class RelationRow:
    """A relation together with its expansion into primitive five/two terms."""

    sum: FormalSum
    five: tuple
    two: tuple


def _primitive_rows_for(u: KElem) -> list[RelationRow]:
    """The five per-point symmetry relations, each with a primitive decomposition."""
    inv = 1 / u
    one_minus_inv = 1 - inv
    rows = []
    # [u] + [1-u]
    rows.append(RelationRow(two_term("one-minus", u), (), ((("one-minus", u), 1),)))
    # [u] + [1/u]
    rows.append(RelationRow(two_term("inverse", u), (), ((("inverse", u), 1),)))
    # [u] - [1-1/u] = ([u]+[1/u]) - ([1/u]+[1-1/u])
    rows.append(RelationRow(
        FormalSum([(u, 1), (one_minus_inv, -1)]),
        (),
        ((("inverse", u), 1), (("one-minus", inv), -1)),
    ))
    # [u] + [-u/(1-u)] = [u] + [1/(1-1/u)]
    rows.append(RelationRow(
        FormalSum([(u, 1), (u / (u - 1), 1)]),
        (),
        ((("inverse", u), 1), (("one-minus", inv), -1), (("inverse", one_minus_inv), 1)),
    ))
    # [u] - [1/(1-u)] = ([u]+[1-u]) - ([1-u]+[1/(1-u)])
    rows.append(RelationRow(
        FormalSum([(u, 1), (1 / (1 - u), -1)]),
        (),
        ((("one-minus", u), 1), (("inverse", 1 - u), -1)),
    ))
    return rows


def relation_matrix(target: FormalSum, U: set[KElem]):
    """The certificate matrix: target row, then 5-term rows, then symmetry rows.

    U must be closed under the six-fold symmetries and contain the support
    of the target.  Returns (matrix, rows) where rows[0] is the target and
    rows[i] for i >= 1 carry primitive decompositions.
    """
    U = set(U)
    if orbit_closure(U) != U:
        raise ValueError("U is not closed under the six-fold symmetries")
    if not target.support() <= U:
        raise ValueError("target support must lie inside U")
    cols = sorted(U, key=lambda x: x.sort_key())
    colidx = {x: i for i, x in enumerate(cols)}

    def vec(fs: FormalSum):
        row = [0] * len(cols)
        for x, n in fs.items():
            row[colidx[x]] = n
        return row

    rows: list[RelationRow] = [RelationRow(target, (), ())]
    for x in cols:
        for y in cols:
            if x == y:
                continue
            ft = five_term(x, y)
            if ft.support() <= U:
                rows.append(RelationRow(ft, (((x, y), 1),), ()))
    for u in cols:
        rows.extend(_primitive_rows_for(u))
    matrix = [vec(r.sum) for r in rows]
    return matrix, rows


@dataclass
class RelationCertificate:
    five_terms: list  # (x, y, multiplier)
    two_terms: list   # (kind, x, multiplier)
    target: FormalSum

    def to_json(self) -> dict:
        return {
            "five": [{"x": x.to_json(), "y": y.to_json(), "mult": m}
                     for x, y, m in self.five_terms],
            "two": [{"kind": k, "x": x.to_json(), "mult": m}
                    for k, x, m in self.two_terms],
            "target": self.target.to_json(),
        }

    @staticmethod
    def from_json(ctx: FieldCtx, data) -> "RelationCertificate":
        five = [(KElem.from_json(ctx, e["x"]), KElem.from_json(ctx, e["y"]), int(e["mult"]))
                for e in data["five"]]
        two = [(e["kind"], KElem.from_json(ctx, e["x"]), int(e["mult"]))
               for e in data["two"]]
        return RelationCertificate(five, two, FormalSum.from_json(ctx, data["target"]))


def verify_certificate(cert: RelationCertificate) -> bool:
    total = FormalSum()
    for x, y, m in cert.five_terms:
        total = total + m * five_term(x, y)
    for kind, x, m in cert.two_terms:
        total = total + m * two_term(kind, x)
    return total == cert.target


def _assemble_certificate(rows, coeffs, target: FormalSum) -> RelationCertificate:
    five: dict = {}
    two: dict = {}
    for row, m in zip(rows[1:], coeffs):
        if m == 0:
            continue
        for (xy, mult) in row.five:
            five[xy] = five.get(xy, 0) + m * mult
        for (kx, mult) in row.two:
            two[kx] = two.get(kx, 0) + m * mult
    cert = RelationCertificate(
        five_terms=[(x, y, m) for (x, y), m in five.items() if m],
        two_terms=[(kind, x, m) for (kind, x), m in two.items() if m],
        target=target,
    )
    return cert


def express_as_relations(target: FormalSum, U: set[KElem], budget: int = 0):
    """Certificate that the target is a combination of relations, if one is found.

    Returns (certificate, None) on success.  On failure returns
    (None, obstruction) where obstruction is the least g > 1 with g*target
    expressible (None when the target is not even rationally expressible);
    budget > 0 allows that many rounds of support growth by six-orbit
    closure of pairwise products/quotients, smallest height first.
    """
    U = orbit_closure(U) | orbit_closure(target.support())
    for round_no in range(budget + 1):
        matrix, rows = relation_matrix(target, U)
        rel = matrix[1:]
        tgt = matrix[0]
        sol = solve_left(rel, tgt)
        if sol is not None:
            cert = _assemble_certificate(rows, sol, target)
            assert verify_certificate(cert)
            return cert, None
        if round_no == budget:
            g = denominator_of_solution(rel, tgt)
            return None, g
        U = _grow_support(U)
    return None, None


def _grow_support(U: set[KElem]) -> set[KElem]:
    """Adjoin the six-orbit of the smallest-height new product/quotient."""
    candidates = set()
    lst = sorted(U, key=lambda x: x.sort_key())
    for a in lst:
        for b in lst:
            for c in (a * b, a / b):
                if not c.is_zero() and not c.is_one() and c not in U:
                    candidates.add(c)
    if not candidates:
        return U
    best = min(candidates, key=lambda x: (x.height(), x.sort_key()))
    return U | six_orbit(best)


def divide(beta: FormalSum, M: int, candidates: list[FormalSum],
           budget: int = 0, dsig_fn=None, tol=None):
    """Find alpha among the candidates with M*alpha = beta in the Bloch group.

    Candidates are prefiltered numerically through dsig_fn (when provided):
    |M*D(alpha) - D(beta)| must fall below tol.  The algebraic step then
    certifies M*alpha - beta as a sum of relations.
    """
    if M < 1:
        raise ValueError("M must be a positive integer")
    if M == 1:
        return beta, RelationCertificate([], [], FormalSum())
    pool = candidates
    if dsig_fn is not None:
        target_val = dsig_fn(beta)
        pool = [a for a in candidates if abs(M * dsig_fn(a) - target_val) < tol]
    for alpha in pool:
        diff = M * alpha - beta
        U = orbit_closure(diff.support())
        cert, _ = express_as_relations(diff, U, budget=budget)
        if cert is not None:
            return alpha, cert
    return None, None

"""Voronoi reduction for binary Hermitian forms over Z[omega].

Forms [[a, b], [conj(b), c]] with rational a, c and b in k are handled
entirely in exact arithmetic: minimal vectors come from a Fincke-Pohst
enumeration of the associated rank-4 rational quadratic form on Z^4,
perfection is a rank certificate over Q, and the classical Voronoi flip
walks from cone to cone across facets.  Floating point enters only for
volumes.

A vector of O^2 is a pair (x, y) of integral field elements; q(v) is the
rank-one Hermitian form v conj(v)^t whose ray is the ideal vertex of the
tessellation at the cusp x/y.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import isqrt
from typing import Optional

import mpmath as mp

from .dilog import PrecisionCfg, DEFAULT_CFG, bloch_wigner
from .field import FieldCtx, KElem
from .ideals import IdealLat, class_group, ideal_of, ideal_mul, ideal_conj, is_principal
from .relations import FormalSum

Vec = tuple[KElem, KElem]


@dataclass(frozen=True)
class HermForm:
    a: Fraction
    b: KElem
    c: Fraction

    def eval(self, v: Vec) -> Fraction:
        x, y = v
        val = self.a * x.norm() + self.c * y.norm() + (self.b * x.conj() * y).trace()
        return val

    def det(self) -> Fraction:
        return self.a * self.c - self.b.norm()

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.det() > 0

    def scale(self, s: Fraction) -> "HermForm":
        s = Fraction(s)
        return HermForm(self.a * s, self.b * s, self.c * s)

    def add(self, other: "HermForm") -> "HermForm":
        return HermForm(self.a + other.a, self.b + other.b, self.c + other.c)

    def coords(self) -> tuple:
        return (self.a, Fraction(self.b.a, self.b.den), Fraction(self.b.b, self.b.den), self.c)


def eval_form(A: HermForm, v: Vec) -> Fraction:
    return A.eval(v)


def q_of(ctx: FieldCtx, v: Vec) -> HermForm:
    x, y = v
    return HermForm(x.norm(), x * y.conj(), y.norm())


def q_coords(ctx: FieldCtx, v: Vec) -> tuple:
    return q_of(ctx, v).coords()


def phi_coords(ctx: FieldCtx, v: Vec) -> tuple:
    """Row of the evaluation functional: dot(phi(v), (a,b0,b1,c)) = A[v]."""
    x, y = v
    t, n = ctx.omega_trace, ctx.omega_norm
    s = x.conj() * y
    assert s.den == 1
    s0, s1 = s.a, s.b
    return (x.norm(), Fraction(2 * s0 + t * s1), Fraction(t * s0 + (t * t - 2 * n) * s1),
            y.norm())


def norm_form(ctx: FieldCtx) -> HermForm:
    """Nm(x) + Nm(y) + Nm(x - y): the classical seed with 3 minimal vector classes."""
    return HermForm(Fraction(2), ctx.from_rational(-1), Fraction(2))


# ---------------------------------------------------------------------------
# exact shortest-vector enumeration


def _gram(ctx: FieldCtx, A: HermForm):
    basis = [
        (ctx.one(), ctx.zero()),
        (ctx.omega(), ctx.zero()),
        (ctx.zero(), ctx.one()),
        (ctx.zero(), ctx.omega()),
    ]
    vals = [A.eval(e) for e in basis]
    G = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        G[i][i] = vals[i]
    for i in range(4):
        for j in range(i + 1, 4):
            s = (basis[i][0] + basis[j][0], basis[i][1] + basis[j][1])
            G[i][j] = G[j][i] = (A.eval(s) - vals[i] - vals[j]) / 2
    return G


def _ldl(G):
    n = len(G)
    d = [Fraction(0)] * n
    L = [[Fraction(0)] * n for _ in range(n)]
    M = [row[:] for row in G]
    for i in range(n):
        d[i] = M[i][i]
        if d[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i, n):
            L[i][j] = M[i][j] / d[i]
        for r in range(i + 1, n):
            for s in range(i + 1, n):
                M[r][s] -= M[i][s] * M[r][i] / d[i]
    return d, L


def _floor_sqrt(f: Fraction) -> int:
    if f < 0:
        return -1
    return isqrt(f.numerator * f.denominator) // f.denominator


def short_z4(G, bound: Fraction):
    """All z in Z^4, z != 0, with z^t G z <= bound, up to sign."""
    d, L = _ldl(G)
    bound = Fraction(bound)
    out = []
    z = [0, 0, 0, 0]

    def rec(i, rem):
        # sum_{j<=i} d_j (z_j + sum_{k>j} L_jk z_k)^2 <= bound
        if i < 0:
            if any(z):
                out.append(tuple(z))
            return
        center = -sum(L[i][k] * z[k] for k in range(i + 1, 4))
        radius2 = rem / d[i]
        r = _floor_sqrt(radius2)
        # exact integer window around the rational center
        lo = center - r - 1
        hi = center + r + 1
        lo_i = -((-lo.numerator) // lo.denominator) if isinstance(lo, Fraction) else lo
        hi_i = hi.numerator // hi.denominator if isinstance(hi, Fraction) else hi
        for zi in range(lo_i, hi_i + 1):
            diff = zi - center
            used = d[i] * diff * diff
            if used <= rem:
                z[i] = zi
                rec(i - 1, rem - used)
        z[i] = 0

    rec(3, bound)
    # dedup up to sign: keep the representative whose first nonzero entry is positive
    seen = set()
    res = []
    for zt in out:
        neg = tuple(-x for x in zt)
        key = zt if zt > neg else neg
        if key not in seen:
            seen.add(key)
            res.append(key)
    return res


def _vec_of_z(ctx: FieldCtx, z) -> Vec:
    return (ctx.elem(z[0], z[1]), ctx.elem(z[2], z[3]))


@dataclass
class MinVecSet:
    min: Fraction
    vecs: list[Vec]  # up to sign


def minimal_vectors(A: HermForm, ctx: FieldCtx) -> MinVecSet:
    if not A.is_positive_definite():
        raise ValueError("form is not positive definite")
    G = _gram(ctx, A)
    seed = min(A.eval(v) for v in _seed_vectors(ctx))
    zs = short_z4(G, seed)
    vals = {z: A.eval(_vec_of_z(ctx, z)) for z in zs}
    m = min(vals.values())
    vecs = sorted((_vec_of_z(ctx, z) for z, val in vals.items() if val == m),
                  key=_vec_key)
    return MinVecSet(min=m, vecs=vecs)


def _seed_vectors(ctx: FieldCtx):
    one, zero, w = ctx.one(), ctx.zero(), ctx.omega()
    return [(one, zero), (zero, one), (one, one), (one, -one), (w, one), (one, w)]


def _vec_key(v: Vec):
    return (v[0].sort_key(), v[1].sort_key())


# ---------------------------------------------------------------------------
# cusps, units, and canonical lifts


def unit_group(ctx: FieldCtx) -> list[KElem]:
    u = ctx.root_of_unity()
    units = []
    acc = ctx.one()
    for _ in range(ctx.n_tor):
        units.append(acc)
        acc = acc * u
    return units


def cusp_rep(ctx: FieldCtx, v: Vec) -> Vec:
    """Canonical representative of the O*-orbit of a vector of O^2."""
    cands = []
    for u in unit_group(ctx):
        cands.append((u * v[0], u * v[1]))
    return min(cands, key=_vec_key)


def same_cusp(v: Vec, w: Vec) -> bool:
    # equal image in P^1(k): cross product vanishes
    return (v[0] * w[1] - v[1] * w[0]).is_zero()


def minvec_classes(ctx: FieldCtx, vecs: list[Vec]) -> list[Vec]:
    """One representative per unit orbit (vecs are already up to sign)."""
    out = {}
    for v in vecs:
        out[cusp_rep(ctx, v)] = True
    return sorted(out, key=_vec_key)


def cusp_key(v: Vec):
    """Canonical token of the image of v in P^1(k)."""
    x, y = v
    if y.is_zero():
        return (1, 0, 0)
    t = x / y
    return (t.a, t.b, t.den)


class CuspLifter:
    """Canonical lifts of cusps per the class-group orbit decomposition.

    Within each GL2(O)-orbit (one per ideal class) the lift of a cusp is
    unique up to units, because the content ideal of a vector is
    GL2(O)-invariant; lifts are normalized to a fixed content ideal per
    class and a canonical unit multiple.
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.cls = class_group(ctx)
        self.rep_ideals = [self._form_to_ideal(f) for f in self.cls.forms]
        self._cache: dict = {}

    def _form_to_ideal(self, form) -> IdealLat:
        a, b, _ = form
        t = self.ctx.omega_trace
        return IdealLat(a, ((-b - t) // 2) % a, 1)

    def lift(self, v: Vec) -> Vec:
        key = cusp_key(v)
        if key in self._cache:
            return self._cache[key]
        ctx = self.ctx
        x, y = v
        den = x.den * y.den
        x, y = x * den, y * den
        g = [e for e in (x, y) if not e.is_zero()]
        I = ideal_of(ctx, *g)
        cls_vec = self.cls.dlog_ideal(I)
        rep = next(J for J, f in zip(self.rep_ideals, self.cls.forms)
                   if self.cls.dlog_form(f) == cls_vec)
        # lambda with lambda*I = rep: (rep * conj(I))/N(I) is principal
        C = ideal_mul(ctx, rep, ideal_conj(ctx, I))
        gen = is_principal(ctx, C)
        if gen is None:
            raise RuntimeError("class-group bookkeeping failed in cusp lift")
        lam = gen / I.norm()
        lifted = cusp_rep(ctx, (lam * x, lam * y))
        self._cache[key] = lifted
        return lifted


# ---------------------------------------------------------------------------
# perfection and the Voronoi flip


def perfection_rank(ctx: FieldCtx, vecs: list[Vec]) -> int:
    rows = [list(q_coords(ctx, v)) for v in vecs]
    return _rank_q(rows)


def _rank_q(rows) -> int:
    rows = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / pr[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def is_perfect(A: HermForm, ctx: FieldCtx) -> tuple[bool, int]:
    mv = minimal_vectors(A, ctx)
    r = perfection_rank(ctx, mv.vecs)
    return r == 4, r


def _orthogonal_direction(ctx: FieldCtx, vecs: list[Vec]) -> Optional[HermForm]:
    """A nonzero form B with B[v] = 0 for all given vectors, if one exists."""
    rows = [[Fraction(x) for x in phi_coords(ctx, v)] for v in vecs]
    piv = {}
    rank = 0
    for c in range(4):
        p = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / pr[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        piv[c] = rank
        rank += 1
    free = [c for c in range(4) if c not in piv]
    if not free:
        return None
    sol = [Fraction(0)] * 4
    sol[free[0]] = Fraction(1)
    for c, r in piv.items():
        sol[c] = -rows[r][free[0]] / rows[r][c]
    a, b0, b1, c = sol
    return HermForm(a, ctx.zero() + b0 + b1 * ctx.omega(), c)


def _ray_stop(ctx: FieldCtx, A: HermForm, B: HermForm, m: Fraction, cap: int = 400):
    """Least t > 0 where a vector outside Min(A) reaches value m along A + tB.

    Requires B[v] >= 0 on Min(A).  Returns (t, form); None when the ray
    degenerates without an event (caller then tries -B).
    """
    t = Fraction(1)
    t_lo = Fraction(0)
    t_hi = None
    for _ in range(cap):
        C = A.add(B.scale(t))
        if not C.is_positive_definite():
            t_hi = t
            t = (t_lo + t_hi) / 2
            continue
        G = _gram(ctx, C)
        zs = short_z4(G, m)
        below = []
        new_at_m = []
        for z in zs:
            v = _vec_of_z(ctx, z)
            val = C.eval(v)
            if val < m:
                below.append(v)
            elif val == m and B.eval(v) != 0:
                new_at_m.append(v)
        if below:
            crossings = []
            for v in below:
                bv = B.eval(v)
                av = A.eval(v)
                assert bv < 0 and av > m
                crossings.append((m - av) / bv)
            t = min(crossings)
            t_hi = None
            continue
        if new_at_m:
            return t, C
        t_lo = t
        t = t * 2 if t_hi is None else (t_lo + t_hi) / 2
    return None


def perfection_walk(ctx: FieldCtx, A: HermForm, cap: int = 20) -> HermForm:
    """Walk from a positive definite form to a perfect one (minimum kept at 1)."""
    mv = minimal_vectors(A, ctx)
    A = A.scale(1 / mv.min)
    for _ in range(cap):
        mv = minimal_vectors(A, ctx)
        if perfection_rank(ctx, mv.vecs) == 4:
            return A
        B = _orthogonal_direction(ctx, mv.vecs)
        res = _ray_stop(ctx, A, B, Fraction(1))
        if res is None:
            res = _ray_stop(ctx, A, B.scale(-1), Fraction(1))
        if res is None:
            raise RuntimeError("perfection walk stalled")
        A = res[1]
    raise RuntimeError("perfection walk did not converge")


def facets_of(ctx: FieldCtx, gens: list[Vec]):
    """Facets of cone{q(v)} as (generator index set, inward form B).

    B vanishes on the facet and is positive on the remaining generators.
    """
    k = len(gens)
    qrows = [q_coords(ctx, v) for v in gens]
    found = {}
    from itertools import combinations

    for triple in combinations(range(k), 3):
        rows = [qrows[i] for i in triple]
        if _rank_q(rows) != 3:
            continue
        B = _orthogonal_direction(ctx, [gens[i] for i in triple])
        if B is None:
            continue
        vals = [B.eval(v) for v in gens]
        pos = sum(1 for v in vals if v > 0)
        neg = sum(1 for v in vals if v < 0)
        if pos and neg:
            continue
        if neg:
            B = B.scale(-1)
            vals = [-v for v in vals]
        idx = frozenset(i for i, v in enumerate(vals) if v == 0)
        if idx not in found:
            found[idx] = B
    return sorted(found.items(), key=lambda kv: sorted(kv[0]))


def voronoi_neighbor(ctx: FieldCtx, A: HermForm, B: HermForm) -> HermForm:
    res = _ray_stop(ctx, A, B, Fraction(1))
    if res is None:
        raise RuntimeError("facet flip found no neighbor (cone not bounded?)")
    return res[1]


# ---------------------------------------------------------------------------
# GL2(O) matrices and isometry search


Mat = tuple[tuple[KElem, KElem], tuple[KElem, KElem]]


def mat_apply(g: Mat, v: Vec) -> Vec:
    return (g[0][0] * v[0] + g[0][1] * v[1], g[1][0] * v[0] + g[1][1] * v[1])


def mat_mul(g: Mat, h: Mat) -> Mat:
    return (
        (g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]),
        (g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]),
    )


def mat_det(g: Mat) -> KElem:
    return g[0][0] * g[1][1] - g[0][1] * g[1][0]


def herm_transform(A: HermForm, g: Mat) -> HermForm:
    """conj(g)^t A g, i.e. the pullback with (gA)[v] = A[g v]."""
    col1 = (g[0][0], g[1][0])
    col2 = (g[0][1], g[1][1])
    na = A.eval(col1)
    nc = A.eval(col2)
    x1, y1 = col1
    x2, y2 = col2
    nb_k = (A.a * x1.conj() * x2 + A.b * x1.conj() * y2
            + A.b.conj() * y1.conj() * x2 + A.c * y1.conj() * y2)
    return HermForm(na, nb_k, nc)


def _is_integral(x: KElem) -> bool:
    return x.den == 1


def _is_unit(ctx: FieldCtx, x: KElem) -> bool:
    return x.den == 1 and x.norm() == 1


def isometries(ctx: FieldCtx, src: list[Vec], dst: list[Vec],
               src_form: Optional[HermForm] = None,
               dst_form: Optional[HermForm] = None,
               first_only: bool = False) -> list[Mat]:
    """Elements of GL2(O) mapping the src cell onto the dst cell.

    With forms given, the criterion is pullback(dst_form) == src_form
    (which forces the minimal-vector permutation); otherwise it is
    equality of the image cusp sets.  All unit multiples of dst vectors
    are candidate images, so with src == dst the returned list is the full
    stabilizer in GL2(O), scalar unit matrices included.
    """
    units = unit_group(ctx)
    if len(src) < 2:
        raise ValueError("need at least two cusps")
    v1, v2 = src[0], src[1]
    d_src = v1[0] * v2[1] - v1[1] * v2[0]
    nd_src = d_src.norm()
    # inverse of (v1 | v2) times determinant: adjugate [[y2, -x2], [-y1, x1]]
    adj = ((v2[1], -v2[0]), (-v1[1], v1[0]))
    dst_full = [(u * w[0], u * w[1]) for w in dst for u in units]
    dst_keys = sorted(cusp_key(w) for w in dst)
    out = []
    for w1 in dst_full:
        for w2 in dst_full:
            dw = w1[0] * w2[1] - w1[1] * w2[0]
            if dw.is_zero() or dw.norm() != nd_src:
                continue
            # g = (w1 | w2) (v1 | v2)^{-1} = (w1 | w2) adj / d_src
            m00 = w1[0] * adj[0][0] + w2[0] * adj[1][0]
            m01 = w1[0] * adj[0][1] + w2[0] * adj[1][1]
            m10 = w1[1] * adj[0][0] + w2[1] * adj[1][0]
            m11 = w1[1] * adj[0][1] + w2[1] * adj[1][1]
            entries = [m00 / d_src, m01 / d_src, m10 / d_src, m11 / d_src]
            if not all(_is_integral(e) for e in entries):
                continue
            g: Mat = ((entries[0], entries[1]), (entries[2], entries[3]))
            if not _is_unit(ctx, mat_det(g)):
                continue
            if dst_form is not None:
                if herm_transform(dst_form, g) != src_form:
                    continue
            else:
                images = sorted(cusp_key(mat_apply(g, v)) for v in src)
                if images != dst_keys:
                    continue
            out.append(g)
            if first_only:
                return out
    return out


# ---------------------------------------------------------------------------
# the cell complex


@dataclass
class Cell:
    dim: int
    vertices: list[Vec]          # unit-orbit representatives of the cusp lifts
    stab_order: int              # order of the stabilizer in PGL2(O)
    stab_plus_order: Optional[int] = None   # 2-cells: orientation-preserving part
    form: Optional[HermForm] = None         # 3-cells: the perfect form
    facet_vertex_sets: list = dfield(default_factory=list)  # 3-cells
    stab_mats: list = dfield(default_factory=list)


@dataclass
class CellComplex:
    ctx: FieldCtx
    sigma3: list[Cell]
    sigma2: list[Cell]
    sigma1: list[Cell]
    incidence: list  # (i3, facet_index, i2, flag_orbit_count)

    def census(self) -> dict:
        shapes: dict[str, int] = {}
        for c in self.sigma3:
            shapes[shape_name(len(c.vertices), len(c.facet_vertex_sets))] = \
                shapes.get(shape_name(len(c.vertices), len(c.facet_vertex_sets)), 0) + 1
        return {
            "d": self.ctx.d,
            "orbits3": len(self.sigma3),
            "orbits2": len(self.sigma2),
            "orbits1": len(self.sigma1),
            "shapes": shapes,
            "stabilizers3": sorted(c.stab_order for c in self.sigma3),
        }


def shape_name(nv: int, nf: int) -> str:
    return {
        (4, 4): "tetrahedron",
        (5, 5): "square pyramid",
        (6, 5): "triangular prism",
        (6, 8): "octahedron",
        (8, 6): "cube",
        (10, 8): "hexagonal cap",
        (12, 14): "cuboctahedron",
    }.get((nv, nf), f"polytope(v{nv},f{nf})")


def _cell_invariant(ctx: FieldCtx, verts: list[Vec]):
    dets = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            dij = verts[i][0] * verts[j][1] - verts[i][1] * verts[j][0]
            dets.append(dij.norm())
    return (len(verts), tuple(sorted(dets)))


def _form_invariant(ctx: FieldCtx, A: HermForm, vecs: list[Vec]):
    vals = []
    for i in range(len(vecs)):
        for j in range(len(vecs)):
            x = (A.a * vecs[i][0].conj() * vecs[j][0]
                 + A.b * vecs[i][0].conj() * vecs[j][1]
                 + A.b.conj() * vecs[i][1].conj() * vecs[j][0]
                 + A.c * vecs[i][1].conj() * vecs[j][1])
            vals.append(x.norm())
    return (len(vecs), tuple(sorted(vals)))


def enumerate_perfect(ctx: FieldCtx, cap_factor: int = 10) -> CellComplex:
    """Discover all perfect forms up to GL2(O) and assemble the cell complex."""
    lifter = CuspLifter(ctx)
    A0 = perfection_walk(ctx, norm_form(ctx))
    reps: list[dict] = []
    frontier = [A0]
    seen_keys: dict = {}

    def vertex_lifts(vecs):
        cusps = {}
        for v in vecs:
            cusps.setdefault(cusp_key(v), v)
        return sorted((lifter.lift(v) for v in cusps.values()), key=_vec_key)

    def classify(A: HermForm, mvecs) -> Optional[int]:
        key = _form_invariant(ctx, A, mvecs)
        for idx in seen_keys.get(key, []):
            R = reps[idx]
            if isometries(ctx, R["minvecs"], mvecs, R["form"], A, first_only=True):
                return idx
        return None

    flips = 0
    while frontier:
        A = frontier.pop()
        mvecs = minvec_classes(ctx, minimal_vectors(A, ctx).vecs)
        if classify(A, mvecs) is not None:
            continue
        verts = vertex_lifts(mvecs)
        key = _form_invariant(ctx, A, mvecs)
        facets = facets_of(ctx, verts)
        reps.append({"form": A, "verts": verts, "minvecs": mvecs, "facets": facets})
        seen_keys.setdefault(key, []).append(len(reps) - 1)
        for _, B in facets:
            flips += 1
            if flips > cap_factor * max(10, len(reps)) * 14:
                raise RuntimeError("perfect-form discovery exceeded its iteration cap")
            frontier.append(voronoi_neighbor(ctx, A, B))

    return _build_complex(ctx, reps)


def _build_complex(ctx: FieldCtx, reps: list[dict]) -> CellComplex:
    n_tor = ctx.n_tor
    sigma3 = []
    for R in reps:
        stab = isometries(ctx, R["minvecs"], R["minvecs"], R["form"], R["form"])
        cell = Cell(
            dim=3,
            vertices=R["verts"],
            stab_order=len(stab) // n_tor,
            form=R["form"],
            facet_vertex_sets=[sorted(idx) for idx, _ in R["facets"]],
            stab_mats=stab,
        )
        sigma3.append(cell)

    # classify 2-cells (facets) into GL2(O)-orbits
    sigma2: list[Cell] = []
    orbit_keys: dict = {}
    incidence = []
    for i3, cell in enumerate(sigma3):
        # partition this polytope's facets into stabilizer orbits
        facet_sets = [frozenset(fs) for fs in cell.facet_vertex_sets]
        perm_orbits = _facet_orbits_under(ctx, cell, facet_sets)
        for orbit in perm_orbits:
            fidx = orbit[0]
            fverts = [cell.vertices[i] for i in sorted(facet_sets[fidx])]
            key = _cell_invariant(ctx, fverts)
            target = None
            for j2 in orbit_keys.get(key, []):
                if isometries(ctx, sigma2[j2].vertices, fverts, first_only=True):
                    target = j2
                    break
            if target is None:
                stab = isometries(ctx, fverts, fverts)
                plus = _orientation_preserving_count(ctx, fverts, stab, cell, facet_sets[fidx])
                sigma2.append(Cell(dim=2, vertices=fverts,
                                   stab_order=len(stab) // n_tor,
                                   stab_plus_order=plus // n_tor,
                                   stab_mats=stab))
                orbit_keys.setdefault(key, []).append(len(sigma2) - 1)
                target = len(sigma2) - 1
            incidence.append((i3, sorted(orbit), target))

    # 1-cells: edges of the facet polygons
    sigma1: list[Cell] = []
    edge_keys: dict = {}
    for cell in sigma3:
        for e in _edges_of(cell):
            everts = [cell.vertices[i] for i in e]
            key = _cell_invariant(ctx, everts)
            if not any(isometries(ctx, sigma1[j].vertices, everts, first_only=True)
                       for j in edge_keys.get(key, [])):
                stab = isometries(ctx, everts, everts)
                sigma1.append(Cell(dim=1, vertices=everts,
                                   stab_order=len(stab) // n_tor,
                                   stab_mats=stab))
                edge_keys.setdefault(key, []).append(len(sigma1) - 1)

    return CellComplex(ctx=ctx, sigma3=sigma3, sigma2=sigma2, sigma1=sigma1,
                       incidence=incidence)


def _facet_orbits_under(ctx: FieldCtx, cell: Cell, facet_sets):
    """Orbits of the polytope's facets under its own stabilizer."""
    verts = cell.vertices
    vert_index = {cusp_key(v): i for i, v in enumerate(verts)}
    perms = []
    for g in cell.stab_mats:
        perm = [vert_index[cusp_key(mat_apply(g, v))] for v in verts]
        perms.append(perm)
    orbits = []
    assigned = set()
    for fi, fs in enumerate(facet_sets):
        if fi in assigned:
            continue
        orb = set()
        stack = [fi]
        while stack:
            cur = stack.pop()
            if cur in orb:
                continue
            orb.add(cur)
            for perm in perms:
                img = frozenset(perm[i] for i in facet_sets[cur])
                nxt = facet_sets.index(img)
                if nxt not in orb:
                    stack.append(nxt)
        orbits.append(sorted(orb))
        assigned |= orb
    return orbits


def _edges_of(cell: Cell):
    """Vertex index pairs of the polytope's edges (facet pairwise intersections)."""
    fs = [frozenset(f) for f in cell.facet_vertex_sets]
    edges = set()
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            common = fs[i] & fs[j]
            if len(common) == 2:
                edges.add(tuple(sorted(common)))
    return sorted(edges)


def _polygon_cycle(cell: Cell, facet: frozenset):
    """The facet's vertices in cyclic order, walked along its edges."""
    edges = [e for e in _edges_of(cell) if set(e) <= facet]
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(facet)
    cycle = [start]
    prev = None
    while True:
        nxts = [x for x in adj[cycle[-1]] if x != prev]
        prev = cycle[-1]
        cycle.append(nxts[0])
        if cycle[-1] == start:
            return cycle[:-1]


def _orientation_preserving_count(ctx: FieldCtx, fverts, stab, cell: Cell,
                                  facet: frozenset) -> int:
    """How many stabilizer elements of the 2-cell preserve its cyclic orientation."""
    cycle = _polygon_cycle(cell, facet)
    local = {cusp_key(cell.vertices[i]): pos for pos, i in enumerate(cycle)}
    count = 0
    n = len(cycle)
    for g in stab:
        imgs = [local[cusp_key(mat_apply(g, cell.vertices[i]))] for i in cycle]
        # rotations advance cyclic positions by +1 per step; reflections by -1
        if all((imgs[(k + 1) % n] - imgs[k]) % n == 1 for k in range(n)):
            count += 1
    return count


# ---------------------------------------------------------------------------
# cross-ratios, subdivision, volumes


def cr3(c0: Vec, c1: Vec, c2: Vec, c3: Vec) -> KElem:
    """Cross-ratio of four cusps, normalized by cr3((1,0),(0,1),(1,1),(x,1)) = x."""
    def det(u, v):
        return u[0] * v[1] - u[1] * v[0]

    keys = {cusp_key(c) for c in (c0, c1, c2, c3)}
    if len(keys) != 4:
        raise ValueError("cross-ratio needs pairwise distinct cusps")
    num = det(c0, c2) * det(c1, c3)
    den = det(c0, c3) * det(c1, c2)
    return num / den


def cr2(p0: Vec, p1: Vec, p2: Vec, basis):
    """GL2(O)-invariant alternating wedge value cr2((1,0),(0,1),(a,b)) = a ^~ b."""
    from .ideals import NotAnSUnit
    from .wedge import wedge_pair

    def det(u, v):
        return u[0] * v[1] - u[1] * v[0]

    d01 = det(p0, p1)
    if d01.is_zero() or det(p0, p2).is_zero() or det(p1, p2).is_zero():
        raise ValueError("cr2 needs pairwise distinct points in P^1")
    a = det(p2, p1) / d01
    b = det(p0, p2) / d01
    try:
        return wedge_pair(a, b, basis)
    except NotAnSUnit as e:
        raise NotAnSUnit(f"cr2 value needs primes outside S: {e}") from e


def subdivide(cell: Cell, apex: int = 0) -> list[tuple[Vec, Vec, Vec, Vec]]:
    """Positively oriented ideal tetrahedra partitioning the 3-cell.

    Cones from a chosen vertex (default: the least) over fan triangulations
    of the faces that do not contain it; no new vertices are introduced.
    """
    verts = cell.vertices
    if len(verts) == 4:
        tets = [tuple(verts)]
    else:
        apex_i = apex % len(verts)
        tets = []
        for fs in cell.facet_vertex_sets:
            if apex_i in fs:
                continue
            cyc = _polygon_cycle(cell, frozenset(fs))
            base = min(range(len(cyc)), key=lambda k: cyc[k])
            for k in range(1, len(cyc) - 1):
                tri = (cyc[(base + 0) % len(cyc)], cyc[(base + k) % len(cyc)],
                       cyc[(base + k + 1) % len(cyc)])
                tets.append((verts[apex_i], verts[tri[0]], verts[tri[1]], verts[tri[2]]))
    return [_orient_positive(t) for t in tets]


def _orient_positive(tet):
    r = cr3(*tet)
    if r.b == 0:
        raise ValueError("flat tetrahedron in subdivision")
    if r.b < 0:
        tet = (tet[0], tet[1], tet[3], tet[2])
        r = cr3(*tet)
        assert r.b > 0
    return tet


def cell_volume(cell: Cell, cfg: PrecisionCfg = DEFAULT_CFG):
    total = mp.mpf(0)
    with mp.workprec(cfg.bits + cfg.guard):
        for tet in subdivide(cell):
            r = cr3(*tet)
            total += bloch_wigner(r.embed(cfg.bits + cfg.guard), cfg)
        return +total


def tessellation_volume(cc: CellComplex, cfg: PrecisionCfg = DEFAULT_CFG):
    """Sum of vol(P)/|stab(P)| over the 3-cell orbits (the Humbert side)."""
    with mp.workprec(cfg.bits + cfg.guard):
        total = mp.mpf(0)
        for cell in cc.sigma3:
            total += cell_volume(cell, cfg) / cell.stab_order
        return +total


# ---------------------------------------------------------------------------
# the geometric Bloch element


@dataclass
class BetaGeoResult:
    beta: FormalSum
    twice: FormalSum
    beta_q: Optional[FormalSum]
    basis: object                  # SUnitBasis carrying the delta2 coordinates
    dsig_over_2pi: object
    zeta_target: object            # -12 * zeta_k'(-1)
    beta_prime: FormalSum
    m_lcm: int
    e_min: Optional[int]
    e_flat: Optional[FormalSum]
    tilde_beta: Optional[FormalSum]  # the half-weight variant when 4 divides no stabilizer


def _support_basis(ctx: FieldCtx, sums: list[FormalSum], extra_primes=()):
    """An S-unit basis large enough to evaluate delta2 on all given sums."""
    from sympy import factorint

    from .ideals import primes_above
    from .sunits import sunit_basis

    primes = set(extra_primes)
    for fs in sums:
        for x, _ in fs.items():
            for val in (x.norm(), (1 - x).norm()):
                primes |= set(factorint(val.numerator).keys())
                primes |= set(factorint(val.denominator).keys())
    primes.discard(1)
    return sunit_basis(ctx, primes_above(ctx, sorted(primes)))


def _cell_bloch_terms(cell: Cell, apex: int = 0) -> FormalSum:
    out = FormalSum()
    for tet in subdivide(cell, apex):
        out = out + FormalSum({cr3(*tet): 1})
    return out


def beta_geo(ctx: FieldCtx, cc: CellComplex, cfg: PrecisionCfg = DEFAULT_CFG,
             with_diagnostics: bool = True, apex=0) -> BetaGeoResult:
    """The tessellation-built generator candidate, with exact kernel verification.

    For generic fields the conjugation trick assembles twice the element and
    halves it termwise; an order-2 boundary obstruction, if one appears, is
    repaired by a rational correction with trivial regulator.  The special
    fields d in {1, 2, 3} take the direct route of the worked analysis.
    """
    from .wedge import delta2, q_image_test
    from .zeta import zeta_report

    apexes = list(apex) if isinstance(apex, (list, tuple)) else [apex] * len(cc.sigma3)
    per_cell = [(_cell_bloch_terms(cell, ap), cell.stab_order)
                for cell, ap in zip(cc.sigma3, apexes)]
    m_lcm = 1
    for _, s in per_cell:
        m_lcm = m_lcm * s // __import__("math").gcd(m_lcm, s)

    twice = FormalSum()
    for terms, stab in per_cell:
        twice = twice + (24 // stab) * (terms - terms.conj())

    beta_q: Optional[FormalSum] = None
    if ctx.d in (1, 3):
        beta = FormalSum()
        for terms, stab in per_cell:
            beta = beta + (24 // stab) * terms
        beta_q = FormalSum()
    elif ctx.d == 2:
        direct = FormalSum()
        for terms, stab in per_cell:
            direct = direct + (24 // stab) * terms
        basis2 = _support_basis(ctx, [direct], extra_primes=(2,))
        w = delta2(direct, basis2)
        if w.is_zero():
            beta_q = FormalSum()
            beta = direct
        else:
            two = FormalSum({ctx.from_rational(2): 1})
            if not (w - delta2(two, basis2)).is_zero():
                raise RuntimeError("d=2 boundary is neither 0 nor the boundary of [2]")
            beta_q = two
            beta = direct + two
    else:
        if any(n % 2 for _, n in twice.items()):
            raise RuntimeError("conjugation-trick coefficients are not all even")
        half = FormalSum({x: n // 2 for x, n in twice.items()})
        basis = _support_basis(ctx, [half])
        w = delta2(half, basis)
        if w.is_zero():
            beta = half
        else:
            # order-2 obstruction; absorb it into a rational flat correction
            from .linal import solve_left
            from .wedge import rational_exceptional, wedge_pair
            pts = rational_exceptional(basis)
            rows = [wedge_pair(1 - x, x, basis).coords() for x in pts]
            sol = solve_left(rows, w.coords(), w.moduli())
            if sol is None:
                raise RuntimeError(
                    "halving failed: boundary obstruction is not rational-flat")
            beta = half - FormalSum(list(zip(pts, sol)))

    basis = _support_basis(ctx, [beta])
    assert delta2(beta, basis).is_zero(), "beta_geo must land in the kernel"

    rep = zeta_report(ctx, cfg)
    from .dilog import dsig
    with mp.workprec(cfg.bits + cfg.guard):
        reg = dsig(beta, cfg) / (2 * mp.pi)
        target = -12 * rep.zprime

    beta_prime = FormalSum()
    for terms, stab in per_cell:
        beta_prime = beta_prime + (m_lcm // stab) * terms

    e_min = e_flat = None
    if with_diagnostics:
        bp_basis = _support_basis(ctx, [beta_prime])
        e_min, e_flat = q_image_test(delta2(beta_prime, bp_basis), bp_basis)

    tilde = None
    orders = [c.stab_order for c in cc.sigma3] + [c.stab_order for c in cc.sigma2]
    if all(o % 4 for o in orders) and not any(n % 2 for _, n in beta.items()):
        tilde = FormalSum({x: n // 2 for x, n in beta.items()})
        if not delta2(tilde, basis).is_zero():
            tilde = None

    return BetaGeoResult(
        beta=beta, twice=twice, beta_q=beta_q, basis=basis,
        dsig_over_2pi=+reg, zeta_target=+target,
        beta_prime=beta_prime, m_lcm=m_lcm, e_min=e_min, e_flat=e_flat,
        tilde_beta=tilde,
    )


# ---------------------------------------------------------------------------
# serialization of the complex (tessellation cache)


def _vec_to_json(v: Vec):
    return [v[0].to_json(), v[1].to_json()]


def _vec_from_json(ctx: FieldCtx, obj) -> Vec:
    return (KElem.from_json(ctx, obj[0]), KElem.from_json(ctx, obj[1]))


def _cell_to_json(cell: Cell) -> dict:
    out = {
        "dim": cell.dim,
        "vertices": [_vec_to_json(v) for v in cell.vertices],
        "stab_order": cell.stab_order,
        "stab_plus_order": cell.stab_plus_order,
        "facets": [list(f) for f in cell.facet_vertex_sets],
    }
    if cell.form is not None:
        out["form"] = {
            "a": [str(cell.form.a.numerator), str(cell.form.a.denominator)],
            "b": cell.form.b.to_json(),
            "c": [str(cell.form.c.numerator), str(cell.form.c.denominator)],
        }
    return out


def _cell_from_json(ctx: FieldCtx, obj: dict) -> Cell:
    form = None
    if "form" in obj:
        form = HermForm(
            Fraction(int(obj["form"]["a"][0]), int(obj["form"]["a"][1])),
            KElem.from_json(ctx, obj["form"]["b"]),
            Fraction(int(obj["form"]["c"][0]), int(obj["form"]["c"][1])),
        )
    return Cell(
        dim=obj["dim"],
        vertices=[_vec_from_json(ctx, v) for v in obj["vertices"]],
        stab_order=obj["stab_order"],
        stab_plus_order=obj.get("stab_plus_order"),
        form=form,
        facet_vertex_sets=[list(f) for f in obj.get("facets", [])],
    )


def complex_to_json(cc: CellComplex) -> dict:
    return {
        "d": cc.ctx.d,
        "sigma3": [_cell_to_json(c) for c in cc.sigma3],
        "sigma2": [_cell_to_json(c) for c in cc.sigma2],
        "sigma1": [_cell_to_json(c) for c in cc.sigma1],
        "incidence": [[i3, list(orb), i2] for i3, orb, i2 in cc.incidence],
    }


def complex_from_json(ctx: FieldCtx, obj: dict) -> CellComplex:
    if obj["d"] != ctx.d:
        raise ValueError("cache file is for a different field")
    return CellComplex(
        ctx=ctx,
        sigma3=[_cell_from_json(ctx, c) for c in obj["sigma3"]],
        sigma2=[_cell_from_json(ctx, c) for c in obj["sigma2"]],
        sigma1=[_cell_from_json(ctx, c) for c in obj["sigma1"]],
        incidence=[(r[0], tuple(r[1]), r[2]) for r in obj["incidence"]],
    )

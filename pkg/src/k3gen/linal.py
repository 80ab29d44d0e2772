"""Exact integer linear algebra: Hermite normal form, kernels, row solves.

Matrices are lists of lists of Python ints (rows).  Pivoting is on the
entry of least absolute value in the current column, which keeps
coefficient growth tame at the sizes this package meets.
"""

from __future__ import annotations

from fractions import Fraction


def hnf(matrix, transform=False):
    """Row-style Hermite normal form.

    Returns H, or (H, U) with U unimodular and U*A = H when transform is
    set.  Zero rows of H sink to the bottom; pivots are positive and
    entries above a pivot are reduced into [0, pivot).
    """
    A = [list(map(int, row)) for row in matrix]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    U = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)] if transform else None

    r = 0
    for c in range(ncols):
        # choose pivot row with least |value| in column c at or below r
        piv = None
        for i in range(r, nrows):
            v = A[i][c]
            if v != 0 and (piv is None or abs(v) < abs(A[piv][c])):
                piv = i
        if piv is None:
            continue
        # eliminate below until single nonzero remains
        while True:
            A[r], A[piv] = A[piv], A[r]
            if transform:
                U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, nrows):
                if A[i][c] != 0:
                    q = A[i][c] // A[r][c]
                    if q:
                        A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                        if transform:
                            U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][c] != 0:
                        done = False
            if done:
                break
            piv = None
            for i in range(r, nrows):
                v = A[i][c]
                if v != 0 and (piv is None or abs(v) < abs(A[piv][c])):
                    piv = i
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            if transform:
                U[r] = [-x for x in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                if transform:
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
        if r == nrows:
            break
    return (A, U) if transform else A


def left_kernel(matrix):
    """Basis of {v : v*A = 0} over Z, as a list of integer vectors."""
    nrows = len(matrix)
    if nrows == 0:
        return []
    H, U = hnf(matrix, transform=True)
    ker = [U[i] for i in range(nrows) if not any(H[i])]
    return ker


def kernel_mod(matrix, moduli):
    """Kernel of v -> v*A into prod_j Z/m_j (m_j = 0 meaning plain Z).

    Handles the torsion columns by adjoining slack rows m_j * e_j and
    projecting the plain integer kernel back to the original rows.
    """
    nrows = len(matrix)
    ncols = len(moduli)
    rows = [list(r) for r in matrix]
    slack_cols = [j for j, m in enumerate(moduli) if m]
    for j in slack_cols:
        rows.append([moduli[j] if c == j else 0 for c in range(ncols)])
    ker = left_kernel(rows)
    proj = [v[:nrows] for v in ker]
    proj = [v for v in hnf(proj) if any(v)] if proj else []
    return proj


def solve_left(matrix, target, moduli=None):
    """Find integer v with v*A = target (componentwise mod m_j if given).

    Returns a vector over the rows of A, or None.  With moduli, slack rows
    are appended internally and their coefficients dropped from the answer.
    """
    nrows = len(matrix)
    rows = [list(r) for r in matrix]
    if moduli is not None:
        ncols = len(moduli)
        for j, m in enumerate(moduli):
            if m:
                rows.append([m if c == j else 0 for c in range(ncols)])
    if not rows:
        return [] if not any(target) else None
    H, U = hnf(rows, transform=True)
    x = _solve_in_rowspace(H, target)
    if x is None:
        return None
    v = [0] * len(rows)
    for i, xi in enumerate(x):
        if xi:
            v = [a + xi * b for a, b in zip(v, U[i])]
    return v[:nrows]


def _solve_in_rowspace(H, target):
    """Coefficients over the rows of an HNF matrix reproducing target, or None."""
    t = list(map(int, target))
    ncols = len(t)
    coeffs = []
    pivots = []
    for i, row in enumerate(H):
        pc = next((c for c, v in enumerate(row) if v), None)
        pivots.append(pc)
    for i, row in enumerate(H):
        pc = pivots[i]
        if pc is None:
            coeffs.append(0)
            continue
        q, r = divmod(t[pc], row[pc])
        if r:
            return None
        coeffs.append(q)
        if q:
            t = [a - q * b for a, b in zip(t, row)]
    if any(t):
        return None
    return coeffs


def denominator_of_solution(matrix, target):
    """Least g >= 1 with g*target in the Z-row space, or None if not even in the Q-row space."""
    rows = [[Fraction(x) for x in r] for r in matrix]
    t = [Fraction(x) for x in target]
    ncols = len(t)
    # fraction-free echelon over Q, tracking nothing: reduce target against pivots
    r = 0
    pivcols = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / pr[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivcols.append((r, c))
        r += 1
    coeffs = []
    for i, c in pivcols:
        f = t[c] / rows[i][c]
        if f:
            t = [a - f * b for a, b in zip(t, rows[i])]
        coeffs.append(f)
    if any(t):
        return None
    g = 1
    for f in coeffs:
        g = g * f.denominator // __import__("math").gcd(g, f.denominator)
    return g


def rank(matrix) -> int:
    H = hnf(matrix)
    return sum(1 for row in H if any(row))


def smith_divisors(matrix):
    """Nontrivial elementary divisors of a small integer matrix."""
    A = [list(map(int, r)) for r in matrix]
    if not A or not A[0]:
        return []
    m, n = len(A), len(A[0])
    divisors = []
    top = 0
    while top < min(m, n):
        # find least nonzero entry in the remaining block
        best = None
        for i in range(top, m):
            for j in range(top, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        A[top], A[bi] = A[bi], A[top]
        for row in A:
            row[top], row[bj] = row[bj], row[top]
        clean = True
        for i in range(top + 1, m):
            q = A[i][top] // A[top][top]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[top])]
            if A[i][top]:
                clean = False
        for j in range(top + 1, n):
            q = A[top][j] // A[top][top]
            if q:
                for row in A:
                    row[j] -= q * row[top]
            if A[top][j]:
                clean = False
        if not clean:
            continue
        # entry must divide the rest of the block
        d = abs(A[top][top])
        offender = None
        for i in range(top + 1, m):
            for j in range(top + 1, n):
                if A[i][j] % d:
                    offender = i
                    break
            if offender:
                break
        if offender is not None:
            A[top] = [x + y for x, y in zip(A[top], A[offender])]
            continue
        divisors.append(d)
        top += 1
    return [d for d in divisors if d != 1]


def lll_reduce(basis, delta=Fraction(3, 4)):
    """Integer LLL on row vectors (standard inner product, exact arithmetic).

    Recomputes the Gram-Schmidt data from scratch after every update; fine
    for the handful-of-rows lattices this package reduces.
    """
    b = [list(map(int, row)) for row in basis if any(row)]
    n = len(b)
    if n <= 1:
        return b

    def gso():
        ortho = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                oj, nj = ortho[j]
                if nj:
                    mu[i][j] = sum(Fraction(x) * y for x, y in zip(b[i], oj)) / nj
                v = [a - mu[i][j] * c for a, c in zip(v, oj)]
            ortho.append((v, sum(x * x for x in v)))
        return ortho, mu

    k = 1
    ortho, mu = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                ortho, mu = gso()
        if ortho[k][1] >= (delta - mu[k][k - 1] ** 2) * ortho[k - 1][1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            ortho, mu = gso()
            k = max(k - 1, 1)
    return b

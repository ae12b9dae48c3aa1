"""Exact integer and rational linear algebra on desk-scale matrices.

Everything here works on plain Python ints and fractions.Fraction; no
floating point is ever involved.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

Vec = tuple[int, ...]


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_neg(a):
    return tuple(-x for x in a)


def vec_scale(c, a):
    return tuple(c * x for x in a)


def vec_dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def make_primitive(v: Vec) -> Vec:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = content(v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def fraction_vec_primitive(v) -> Vec:
    """Scale a rational vector to a primitive integer vector with the same orientation."""
    fracs = [Fraction(x) for x in v]
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = tuple(int(f * den) for f in fracs)
    return make_primitive(ints)


# ---------------------------------------------------------------------------
# Integer lattices (Hermite-style row reduction)
# ---------------------------------------------------------------------------

def hermite_basis(rows: list[Vec]) -> list[Vec]:
    """Canonical echelon basis of the integer row span of `rows`.

    Pivots are positive, entries above each pivot are reduced modulo it,
    and pivot columns strictly increase, so equal lattices give equal bases.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    work = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    col = 0
    while work and col < ncols:
        live = [r for r in work if r[col] != 0]
        if not live:
            col += 1
            continue
        # Euclidean reduction until a single row holds the column gcd.
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            for r in live[1:]:
                q = r[col] // piv[col]
                for k in range(ncols):
                    r[k] -= q * piv[k]
            live = [r for r in work if r[col] != 0]
        piv = live[0]
        if piv[col] < 0:
            for k in range(ncols):
                piv[k] = -piv[k]
        work = [r for r in work if (r is not piv and any(r))]
        basis.append(piv)
        col += 1
    # Reduce entries above pivots for canonical form.
    for i in reversed(range(len(basis))):
        p = next(k for k in range(ncols) if basis[i][k] != 0)
        for j in range(i):
            q = basis[j][p] // basis[i][p]
            if q:
                for k in range(ncols):
                    basis[j][k] -= q * basis[i][k]
    return [tuple(r) for r in basis]


class IntegerLattice:
    """Sublattice of Z^r described by a canonical basis."""

    def __init__(self, basis_rows: list[Vec], ambient_rank: int):
        self.ambient_rank = ambient_rank
        self.basis = hermite_basis(list(basis_rows))

    @classmethod
    def standard(cls, r: int) -> "IntegerLattice":
        return cls([tuple(1 if i == j else 0 for j in range(r)) for i in range(r)], r)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, x: Vec):
        """Integer coordinates of x in this basis, or None if x is outside."""
        rem = list(x)
        cs = []
        for row in self.basis:
            p = next(k for k in range(len(row)) if row[k] != 0)
            if rem[p] % row[p] != 0:
                return None
            q = rem[p] // row[p]
            cs.append(q)
            for k in range(len(rem)):
                rem[k] -= q * row[k]
        if any(rem):
            return None
        return tuple(cs)

    def rational_coords(self, x):
        """Rational coordinates of x in this basis, or None if outside the span."""
        rem = [Fraction(v) for v in x]
        cs = []
        for row in self.basis:
            p = next(k for k in range(len(row)) if row[k] != 0)
            q = rem[p] / row[p]
            cs.append(q)
            for k in range(len(rem)):
                rem[k] -= q * row[k]
        if any(rem):
            return None
        return tuple(cs)

    def contains(self, x: Vec) -> bool:
        return self.coords(x) is not None

    def from_coords(self, cs) -> tuple:
        out = [0] * self.ambient_rank
        for c, row in zip(cs, self.basis):
            for k in range(self.ambient_rank):
                out[k] += c * row[k]
        return tuple(out)


def integer_rank(rows: list[Vec]) -> int:
    return len(hermite_basis(list(rows)))


# ---------------------------------------------------------------------------
# Rational Gaussian elimination
# ---------------------------------------------------------------------------

def _rref(rows: list[list[Fraction]]):
    mat = [list(map(Fraction, r)) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, nrows) if mat[k][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for k in range(nrows):
            if k != r and mat[k][c] != 0:
                f = mat[k][c]
                mat[k] = [v - f * w for v, w in zip(mat[k], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def rational_rank(rows) -> int:
    if not rows:
        return 0
    _, pivots = _rref([list(map(Fraction, r)) for r in rows])
    return len(pivots)


def solve_rational(a_rows, b):
    """One exact solution x of A x = b over Q, or None if inconsistent.

    Free variables are set to zero.
    """
    if not a_rows:
        return None
    ncols = len(a_rows[0])
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a_rows, b)]
    mat, pivots = _rref(aug)
    for row in mat:
        if all(v == 0 for v in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * ncols
    r = 0
    for c in pivots:
        if c == ncols:
            return None
        x[c] = mat[r][-1]
        r += 1
    return tuple(x)


def rational_nullspace(rows):
    """Basis of the right nullspace of the matrix over Q."""
    if not rows:
        return []
    ncols = len(rows[0])
    mat, pivots = _rref([list(map(Fraction, r)) for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -mat[r][f]
        basis.append(tuple(v))
    return basis


def affine_dim(points) -> int:
    """Dimension of the affine hull; -1 for the empty set."""
    pts = list(points)
    if not pts:
        return -1
    if len(pts) == 1:
        return 0
    base = pts[0]
    diffs = [tuple(Fraction(x) - Fraction(y) for x, y in zip(p, base)) for p in pts[1:]]
    return rational_rank(diffs)


def in_convex_hull(point, vertices) -> bool:
    """Exact test whether `point` lies in conv(vertices)."""
    verts = list(vertices)
    if not verts:
        return False
    pt = tuple(Fraction(v) for v in point)
    if pt in [tuple(map(Fraction, v)) for v in verts]:
        return True
    d = affine_dim(verts)
    # Caratheodory: some affinely independent subset of size <= d+1 contains pt.
    for size in range(1, d + 2):
        for sub in combinations(verts, size):
            # solve sum mu_i v_i = pt, sum mu_i = 1
            a_rows = []
            b = []
            ncoords = len(pt)
            for k in range(ncoords):
                a_rows.append([Fraction(v[k]) for v in sub])
                b.append(pt[k])
            a_rows.append([Fraction(1)] * size)
            b.append(Fraction(1))
            sol = solve_rational(a_rows, b)
            if sol is not None and all(m >= 0 for m in sol):
                # verify (solve_rational zeroes free vars; recheck exactly)
                ok = all(
                    sum(m * Fraction(v[k]) for m, v in zip(sol, sub)) == pt[k]
                    for k in range(ncoords)
                ) and sum(sol) == 1
                if ok:
                    return True
    return False


def integer_functional_on_span(basis_rows, values):
    """Integer row L with L.x = c * values_i on basis row i, for some c > 0.

    The basis rows must be linearly independent.  Any positive rescaling is
    acceptable to callers (facet normals, degree functionals).
    """
    ncols = len(basis_rows[0])
    a_rows = [list(map(Fraction, row)) for row in basis_rows]  # each row . L^T = value
    sol = solve_rational(a_rows, [Fraction(v) for v in values])
    if sol is None:
        raise ValueError("inconsistent functional specification")
    den = 1
    for f in sol:
        den = den * f.denominator // gcd(den, f.denominator)
    vec = tuple(int(f * den) for f in sol)
    return vec

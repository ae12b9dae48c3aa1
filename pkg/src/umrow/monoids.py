"""Affine monoids with their convex-geometric toolkit.

An affine monoid is a finitely generated submonoid of Z^r, written
additively (the lattice origin plays the role of the multiplicative
identity).  Construction eagerly computes the group completion, the cone
with its facets and extreme rays, and a strictly positive section
functional; afterwards every value is immutable and every operation is a
pure function, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import (
    ContainmentError,
    DeskScaleLimitError,
    NotInteriorDualError,
    DegenerateDecompositionError,
    PositivityRequiredError,
    PreconditionError,
    UmrowError,
)
from .lattice import (
    IntegerLattice,
    affine_dim,
    fraction_vec_primitive,
    in_convex_hull,
    integer_functional_on_span,
    make_primitive,
    rational_nullspace,
    rational_rank,
    vec_dot,
    vec_sub,
    Vec,
)

DESK_RANK_LIMIT = 4
DESK_VERTEX_LIMIT = 12


@dataclass(frozen=True)
class RationalCone:
    """Double description of a rational cone inside Z^r.

    `rays` are primitive integer vectors (w.r.t. Z^r), `facets` primitive
    integer inward normals; both descriptions are validated against each
    other in the test suite.  `span_basis` spans the linear hull, so
    containment tests are meaningful for cones of less than full rank.
    """

    ambient_rank: int
    rank: int
    rays: tuple
    facets: tuple
    span_basis: tuple
    pointed: bool

    def _in_span(self, x) -> bool:
        if self.rank == 0:
            return all(Fraction(v) == 0 for v in x)
        rows = list(self.span_basis)
        return rational_rank(rows + [tuple(Fraction(v) for v in x)]) == len(rows)

    def contains(self, x) -> bool:
        if not self._in_span(x):
            return False
        return all(vec_dot(f, x) >= 0 for f in self.facets)

    def strictly_contains(self, x) -> bool:
        """Relative-interior membership (strict on every facet)."""
        if not self._in_span(x):
            return False
        return all(vec_dot(f, x) > 0 for f in self.facets)


def _facets_in_coords(coords: list[Vec], dim: int):
    """Primitive inward facet normals of cone(coords) in a full-rank coordinate system."""
    if dim == 0:
        return []
    if dim == 1:
        signs = {1 if c[0] > 0 else -1 for c in coords if c[0] != 0}
        if signs == {1}:
            return [(1,)]
        if signs == {-1}:
            return [(-1,)]
        return []  # whole line: no valid inequality
    facets = {}
    for sub in combinations(range(len(coords)), dim - 1):
        rows = [coords[i] for i in sub]
        if rational_rank(rows) != dim - 1:
            continue
        null = rational_nullspace(rows)
        if len(null) != 1:
            continue
        normal = fraction_vec_primitive(null[0])
        vals = [vec_dot(normal, c) for c in coords]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            normal = tuple(-x for x in normal)
            vals = [-v for v in vals]
        else:
            continue
        touching = [coords[i] for i, v in enumerate(vals) if v == 0]
        if rational_rank(touching) == dim - 1:
            facets[normal] = True
    return sorted(facets)


def cone_from_generators(gens: list[Vec], ambient_rank: int) -> RationalCone:
    """Cone of a generator list, with facets and extreme rays, all exact."""
    vectors = [g for g in gens if any(g)]
    if not vectors:
        return RationalCone(ambient_rank, 0, (), (), (), True)
    span = IntegerLattice(vectors, ambient_rank)
    dim = span.rank
    coords = [span.coords(g) for g in vectors]
    facets_c = _facets_in_coords(coords, dim)
    pointed = rational_rank(facets_c) == dim if facets_c else dim == 0

    # extreme rays: generators whose contact facets cut a 1-dimensional face
    rays = {}
    for c, g in zip(coords, vectors):
        zero_at = [f for f in facets_c if vec_dot(f, c) == 0]
        if dim == 1 or rational_rank(zero_at) == dim - 1:
            rays[make_primitive(g)] = True

    facets_ambient = []
    for f in facets_c:
        lam = integer_functional_on_span(span.basis, f)
        facets_ambient.append(make_primitive(lam))
    return RationalCone(
        ambient_rank=ambient_rank,
        rank=dim,
        rays=tuple(sorted(rays)),
        facets=tuple(sorted(set(facets_ambient))),
        span_basis=tuple(span.basis),
        pointed=pointed,
    )


@dataclass(frozen=True)
class SectionPolytope:
    """Polytope cut out of a cone by a hyperplane alpha(x) = level."""

    alpha: Vec
    level: Fraction
    vertices: tuple

    def contains(self, point) -> bool:
        return in_convex_hull(point, self.vertices)

    def dim(self) -> int:
        return affine_dim(self.vertices)


@dataclass(frozen=True)
class PyramidalDecomposition:
    """Split of the section polytope into an apex pyramid and its complement."""

    apex: Vec
    delta: SectionPolytope
    gamma: SectionPolytope
    shared_face: SectionPolytope
    degree_functional: Vec

    def degree_of(self, x) -> int:
        return vec_dot(self.degree_functional, x)


class AffineMonoid:
    """Finitely generated submonoid of Z^r with cached cone and lattice data."""

    def __init__(self, ambient_rank: int, generators):
        gens = []
        seen = set()
        for g in generators:
            t = tuple(int(v) for v in g)
            if len(t) != ambient_rank:
                raise UmrowError("generator length does not match the ambient rank")
            if not any(t):
                raise UmrowError("generators must be nonzero")
            if t in seen:
                raise UmrowError("generators must be pairwise distinct")
            seen.add(t)
            gens.append(t)
        if not gens:
            raise UmrowError("an affine monoid needs at least one generator")
        self.ambient_rank = ambient_rank
        self.generators = tuple(sorted(gens))
        self.gp = IntegerLattice(list(self.generators), ambient_rank)
        self.cone = cone_from_generators(list(self.generators), ambient_rank)
        self._member_cache: dict[Vec, bool] = {}
        if self.is_positive:
            alpha = tuple(sum(col) for col in zip(*self.cone.facets))
            if self.rank == 0 or all(vec_dot(alpha, g) > 0 for g in self.generators):
                self._alpha = alpha
            else:  # pragma: no cover - facet sum is positive for pointed cones
                raise UmrowError("internal: section functional not positive")
        else:
            self._alpha = None

    @property
    def rank(self) -> int:
        return self.gp.rank

    @property
    def is_positive(self) -> bool:
        return self.cone.pointed

    def _require_positive(self, why: str):
        if not self.is_positive:
            raise PositivityRequiredError(why)

    @property
    def section_functional(self) -> Vec:
        self._require_positive("section functional needs a pointed cone")
        return self._alpha

    def contains(self, x) -> bool:
        """Bounded-search membership: is x a Z+-combination of the generators?"""
        x = tuple(int(v) for v in x)
        if not any(x):
            return True
        self._require_positive("membership search is only finite for positive monoids")
        if not self.gp.contains(x) or not self.cone.contains(x):
            return False
        return self._member_search(x)

    def _member_search(self, x: Vec) -> bool:
        cache = self._member_cache
        alpha = self._alpha
        gens = self.generators
        cone = self.cone

        def rec(y: Vec) -> bool:
            if not any(y):
                return True
            hit = cache.get(y)
            if hit is not None:
                return hit
            cache[y] = False  # cycle guard; positive grading forbids real cycles
            out = False
            ay = vec_dot(alpha, y)
            for g in gens:
                if vec_dot(alpha, g) > ay:
                    continue
                z = vec_sub(y, g)
                if not cone.contains(z):
                    continue
                if rec(z):
                    out = True
                    break
            cache[y] = out
            return out

        return rec(x)

    def interior_contains(self, x) -> bool:
        x = tuple(int(v) for v in x)
        self._require_positive("interior test needs a positive monoid")
        if not self.contains(x):
            return False
        return self.cone.strictly_contains(x)

    def members_below(self, alpha_cap) -> list[Vec]:
        """All members m with section value alpha(m) <= alpha_cap, by BFS."""
        self._require_positive("member enumeration needs a positive monoid")
        alpha = self._alpha
        seen = {tuple([0] * self.ambient_rank)}
        frontier = [tuple([0] * self.ambient_rank)]
        while frontier:
            nxt = []
            for m in frontier:
                for g in self.generators:
                    y = tuple(a + b for a, b in zip(m, g))
                    if y in seen or vec_dot(alpha, y) > alpha_cap:
                        continue
                    seen.add(y)
                    nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def __repr__(self):
        return f"AffineMonoid(rank={self.rank}, generators={list(self.generators)})"

    def __eq__(self, other):
        return (
            isinstance(other, AffineMonoid)
            and self.ambient_rank == other.ambient_rank
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.generators))


def free_monoid(r: int) -> AffineMonoid:
    """Z_+^r with the standard basis as generators."""
    return AffineMonoid(r, [tuple(1 if i == j else 0 for j in range(r)) for i in range(r)])


def numeric_monoid(*gens: int) -> AffineMonoid:
    """Submonoid of Z_+ generated by the given positive integers."""
    return AffineMonoid(1, [(g,) for g in gens])


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def monoid_membership(monoid: AffineMonoid, x) -> bool:
    return monoid.contains(x)


def interior(monoid: AffineMonoid, x) -> bool:
    return monoid.interior_contains(x)


def star_submonoid(monoid: AffineMonoid):
    """Membership predicate of int(M) with the identity adjoined."""
    monoid._require_positive("star submonoid needs a positive monoid")

    def predicate(x) -> bool:
        x = tuple(int(v) for v in x)
        if not any(x):
            return True
        return monoid.interior_contains(x)

    return predicate


def _region_points(rays_coords, facets_coords, alpha_coords, cap):
    """Integer points y != 0 with y in cone(rays), alpha(y) <= cap.

    Works in a full-rank coordinate system; the region is the simplex
    spanned by 0 and the alpha-scaled rays, so a bounding box suffices.
    """
    if not rays_coords:
        return []
    dim = len(rays_coords[0])
    verts = []
    for r in rays_coords:
        ar = vec_dot(alpha_coords, r)
        if ar <= 0:
            raise PositivityRequiredError("section functional not positive on a ray")
        verts.append(tuple(Fraction(cap, ar) * v for v in r))
    span_normals = rational_nullspace(rays_coords)
    lo = []
    hi = []
    for k in range(dim):
        vals = [v[k] for v in verts] + [Fraction(0)]
        mn, mx = min(vals), max(vals)
        lo.append(int(mn) if mn == int(mn) else int(mn) - (1 if mn < 0 else 0))
        hi.append(int(mx) if mx == int(mx) else int(mx) + (1 if mx > 0 else 0))
    pts = []

    def scan(prefix, k):
        if k == dim:
            y = tuple(prefix)
            if not any(y):
                return
            if vec_dot(alpha_coords, y) > cap:
                return
            if any(vec_dot(nrm, y) != 0 for nrm in span_normals):
                return
            if all(vec_dot(f, y) >= 0 for f in facets_coords):
                pts.append(y)
            return
        for v in range(lo[k], hi[k] + 1):
            scan(prefix + [v], k + 1)

    scan([], 0)
    pts.sort(key=lambda y: (vec_dot(alpha_coords, y), y))
    return pts


def hilbert_basis(cone: RationalCone, lattice: IntegerLattice) -> list[Vec]:
    """Minimal generating set of cone(C) intersected with the lattice.

    Bounded enumeration below the ray zonotope followed by irreducibility
    filtering; exact at desk scale (rank <= 4).
    """
    if not cone.pointed:
        raise PositivityRequiredError("Hilbert bases exist only for pointed cones")
    if cone.rank > DESK_RANK_LIMIT:
        raise DeskScaleLimitError(f"cone rank {cone.rank} exceeds {DESK_RANK_LIMIT}")
    if cone.rank == 0:
        return []
    rays_l = []
    for ray in cone.rays:
        c = lattice.rational_coords(ray)
        if c is None:
            raise UmrowError("cone ray outside the rational span of the lattice")
        rays_l.append(fraction_vec_primitive(c))
    facets_l = []
    for f in cone.facets:
        facets_l.append(tuple(vec_dot(f, b) for b in lattice.basis))
    alpha_l = tuple(sum(col) for col in zip(*facets_l))
    cap = sum(vec_dot(alpha_l, r) for r in rays_l)
    candidates = _region_points(rays_l, facets_l, alpha_l, cap)

    def in_cone(y) -> bool:
        if any(vec_dot(nrm, y) != 0 for nrm in rational_nullspace(rays_l)):
            return False
        return all(vec_dot(f, y) >= 0 for f in facets_l)

    span_normals = rational_nullspace(rays_l)

    def cone_member(y):
        if not any(y):
            return False
        if any(vec_dot(nrm, y) != 0 for nrm in span_normals):
            return False
        return all(vec_dot(f, y) >= 0 for f in facets_l)

    basis = []
    for y in candidates:
        reducible = False
        for h in basis:
            z = vec_sub(y, h)
            if cone_member(z):
                reducible = True
                break
        if not reducible:
            basis.append(y)
    ambient = [lattice.from_coords(y) for y in basis]
    return sorted(ambient)


def is_normal(monoid: AffineMonoid) -> bool:
    """Integral closedness of M in gp(M): the Hilbert basis lies in M."""
    if monoid.rank > DESK_RANK_LIMIT:
        raise DeskScaleLimitError(f"rank {monoid.rank} exceeds {DESK_RANK_LIMIT}")
    monoid._require_positive("normality is decided via the pointed-cone Hilbert basis")
    basis = hilbert_basis(monoid.cone, monoid.gp)
    return all(monoid.contains(h) for h in basis)


@dataclass(frozen=True)
class SeminormalityResult:
    """Three-valued outcome: True / False (with witness) / None = inconclusive."""

    status: object
    witness: object = None
    witness_face: object = None
    certified: bool = True

    def __bool__(self):
        return self.status is True


def faces_of(monoid: AffineMonoid):
    """Generator subsets cut out by the faces of the cone (deduplicated)."""
    facets = monoid.cone.facets
    seen = {}
    for k in range(len(facets) + 1):
        for sub in combinations(facets, k):
            face_gens = tuple(
                g for g in monoid.generators if all(vec_dot(f, g) == 0 for f in sub)
            )
            seen.setdefault(face_gens, True)
    return sorted(seen, key=lambda gs: (-len(gs), gs))


def is_seminormal(monoid: AffineMonoid, bound_multiplier: int = 8) -> SeminormalityResult:
    """Facewise star-normality check.

    A face passes outright when its monoid is normal.  Otherwise lattice
    points in the relative interior of the face cone are enumerated up to a
    degree bound; a non-member is a definite counterexample, exhaustion
    without a certificate yields the inconclusive status None.
    """
    monoid._require_positive("seminormality check needs a positive monoid")
    if monoid.rank > DESK_RANK_LIMIT:
        raise DeskScaleLimitError(f"rank {monoid.rank} exceeds {DESK_RANK_LIMIT}")
    undecided = False
    for face_gens in faces_of(monoid):
        if not face_gens:
            continue  # the trivial face: the star is {0}, normal
        sub = AffineMonoid(monoid.ambient_rank, face_gens)
        if is_normal(sub):
            continue
        # enumerate gp(sub) in the relative interior of the face cone
        rays_l = []
        skip = False
        for ray in sub.cone.rays:
            c = sub.gp.rational_coords(ray)
            if c is None:
                skip = True
                break
            rays_l.append(fraction_vec_primitive(c))
        if skip:
            undecided = True
            continue
        facets_l = [tuple(vec_dot(f, b) for b in sub.gp.basis) for f in sub.cone.facets]
        alpha_l = tuple(sum(col) for col in zip(*facets_l))
        cap = bound_multiplier * max(
            vec_dot(alpha_l, sub.gp.coords(g)) for g in sub.generators
        )
        found = False
        for y in _region_points(rays_l, facets_l, alpha_l, cap):
            if any(vec_dot(f, y) <= 0 for f in facets_l):
                continue  # boundary of the face cone
            x = sub.gp.from_coords(y)
            if not sub.contains(x):
                return SeminormalityResult(False, witness=x, witness_face=face_gens)
            found = True
        # no counterexample below the bound and the face is not normal
        undecided = True
        del found
    if undecided:
        return SeminormalityResult(None, certified=False)
    return SeminormalityResult(True)


def is_phi_simplicial(monoid: AffineMonoid) -> bool:
    """True iff the cone is simplicial (extreme ray count equals the rank)."""
    monoid._require_positive("phi-simpliciality is defined for positive monoids")
    return len(monoid.cone.rays) == monoid.rank


def default_section(monoid: AffineMonoid) -> SectionPolytope:
    """Canonical section: alpha = facet-normal sum, level = lcm of ray values."""
    alpha = monoid.section_functional
    vals = [vec_dot(alpha, r) for r in monoid.cone.rays]
    level = 1
    for v in vals:
        level = level * v // gcd(level, v)
    return section_polytope(monoid, alpha, Fraction(level))


def section_polytope(monoid: AffineMonoid, alpha, level) -> SectionPolytope:
    """Vertices of the cone section {alpha = level}, one per extreme ray."""
    monoid._require_positive("sections need a pointed cone")
    alpha = tuple(int(v) for v in alpha)
    level = Fraction(level)
    if level <= 0:
        raise NotInteriorDualError("section level must be positive")
    for r in monoid.cone.rays:
        if vec_dot(alpha, r) <= 0:
            raise NotInteriorDualError("functional is not strictly positive on the cone")
    verts = []
    for r in monoid.cone.rays:
        s = level / vec_dot(alpha, r)
        verts.append(tuple(s * v for v in r))
    return SectionPolytope(alpha=alpha, level=level, vertices=tuple(sorted(verts)))


def phi_point(section: SectionPolytope, x):
    """Intersection of the ray through x with the section hyperplane."""
    ax = vec_dot(section.alpha, x)
    if ax <= 0:
        raise NotInteriorDualError("point is not on the positive side of the section")
    s = Fraction(section.level, ax)
    return tuple(s * Fraction(v) for v in x)


def submonoid_of_polytope(monoid: AffineMonoid, polytope_vertices, section=None):
    """Membership predicate of M(Q): members whose ray section lands in Q."""
    sec = section or default_section(monoid)
    for q in polytope_vertices:
        if not in_convex_hull(q, sec.vertices):
            raise ContainmentError("polytope is not contained in the monoid section")
    q_verts = tuple(tuple(Fraction(v) for v in q) for q in polytope_vertices)

    def predicate(x) -> bool:
        x = tuple(int(v) for v in x)
        if not any(x):
            return True
        if not monoid.contains(x):
            return False
        return in_convex_hull(phi_point(sec, x), q_verts)

    return predicate


def extremal_generators(monoid: AffineMonoid) -> list[Vec]:
    """Primitive members over the vertices of the section polytope.

    Defined for normal monoids: each extreme ray carries a free rank-one
    monoid generated by the primitive gp-lattice point on it.
    """
    if not is_normal(monoid):
        raise PreconditionError("normal-monoid-required",
                                "extremal generators are defined for normal monoids")
    out = []
    for ray in monoid.cone.rays:
        coords = monoid.gp.rational_coords(ray)
        prim = fraction_vec_primitive(coords)
        p = monoid.gp.from_coords(prim)
        if monoid.contains(p):
            out.append(p)
    return sorted(out)


def _max_peels(points):
    """Longest apex-peeling sequence of the vertex set (memoized exhaustive search)."""
    pts = [tuple(Fraction(v) for v in p) for p in points]
    cache: dict = {}

    def rec(idxs: frozenset) -> int:
        if not idxs:
            return 0
        hit = cache.get(idxs)
        if hit is not None:
            return hit
        subset = [pts[i] for i in sorted(idxs)]
        dim = affine_dim(subset)
        best = 0
        for i in sorted(idxs):
            rest = idxs - {i}
            rest_pts = [pts[j] for j in sorted(rest)]
            if affine_dim(rest_pts) == dim - 1:
                cand = 1 + rec(rest)
                if cand > best:
                    best = cand
        cache[idxs] = best
        return best

    return rec(frozenset(range(len(pts))))


def complexity(monoid: AffineMonoid) -> int:
    """Complexity k(M): rank minus the longest pyramid-peeling of the section vertices."""
    if monoid.rank > DESK_RANK_LIMIT:
        raise DeskScaleLimitError(f"rank {monoid.rank} exceeds {DESK_RANK_LIMIT}")
    if not is_normal(monoid):
        raise PreconditionError("normal-monoid-required",
                                "complexity is defined for normal positive monoids")
    sec = default_section(monoid)
    if len(sec.vertices) > DESK_VERTEX_LIMIT:
        raise DeskScaleLimitError(
            f"section polytope has {len(sec.vertices)} vertices (> {DESK_VERTEX_LIMIT})"
        )
    return monoid.rank - _max_peels(sec.vertices)


def pyramidal_decomposition(monoid: AffineMonoid, apex) -> PyramidalDecomposition:
    """Split the section polytope strictly between `apex` and the other vertices.

    The separating functional vanishes on the shared face, is positive on
    the apex pyramid and negative on the complement, and is primitive on
    the ambient lattice.
    """
    apex = tuple(int(v) for v in apex)
    if apex not in extremal_generators(monoid):
        raise PreconditionError("apex-not-extremal",
                                "pyramid apex must be an extremal generator")
    sec = default_section(monoid)
    if len(sec.vertices) < 2 or sec.dim() < 1:
        raise DegenerateDecompositionError("section polytope has no room for a split")
    apex_ray = make_primitive(apex)
    v_apex = phi_point(sec, apex)
    others = [w for w in sec.vertices if w != v_apex]

    vanishing = [f for f in monoid.cone.facets if vec_dot(f, apex_ray) == 0]
    if not vanishing:
        raise DegenerateDecompositionError("apex ray lies on no facet")
    nu = tuple(sum(col) for col in zip(*vanishing))
    nu_vals = [sum(Fraction(a) * b for a, b in zip(nu, w)) for w in others]
    if min(nu_vals) <= 0:
        raise DegenerateDecompositionError("apex cannot be strictly separated")
    theta = min(nu_vals) / (2 * sec.level)
    delta_q = tuple(theta * a - n for a, n in zip(sec.alpha, nu))
    delta = fraction_vec_primitive(delta_q)
    if vec_dot(delta, apex_ray) < 0:  # primitive scaling keeps orientation, but be safe
        delta = tuple(-x for x in delta)

    def dval(pt):
        return sum(Fraction(d) * Fraction(x) for d, x in zip(delta, pt))

    # vertices of the shared face: edge crossings between the apex and its neighbours
    h_verts = []
    ray_list = list(monoid.cone.rays)
    for other_ray in ray_list:
        if other_ray == apex_ray:
            continue
        if not _is_edge(monoid.cone, apex_ray, other_ray):
            continue
        p = v_apex
        q = phi_point(sec, other_ray)
        dp, dq = dval(p), dval(q)
        if dp <= 0 or dq >= 0:
            raise DegenerateDecompositionError("separating functional failed on an edge")
        t = dp / (dp - dq)
        h_verts.append(tuple(a + t * (b - a) for a, b in zip(p, q)))
    if not h_verts:
        raise DegenerateDecompositionError("no edges leave the apex")
    h_poly = SectionPolytope(sec.alpha, sec.level, tuple(sorted(h_verts)))
    delta_poly = SectionPolytope(sec.alpha, sec.level,
                                 tuple(sorted(h_verts + [v_apex])))
    gamma_poly = SectionPolytope(sec.alpha, sec.level,
                                 tuple(sorted(h_verts + others)))
    if delta_poly.dim() != sec.dim() or gamma_poly.dim() != sec.dim():
        raise DegenerateDecompositionError("split parts are not equi-dimensional")
    return PyramidalDecomposition(
        apex=apex,
        delta=delta_poly,
        gamma=gamma_poly,
        shared_face=h_poly,
        degree_functional=delta,
    )


def _is_edge(cone: RationalCone, ray_a: Vec, ray_b: Vec) -> bool:
    """Do two extreme rays span a 2-face of the cone?"""
    if cone.rank == 1:
        return False
    if cone.rank == 2:
        return True  # only two extreme rays in a pointed planar cone
    shared = [f for f in cone.facets if vec_dot(f, ray_a) == 0 and vec_dot(f, ray_b) == 0]
    if rational_rank(shared) < cone.rank - 2:
        return False
    for other in cone.rays:
        if other in (ray_a, ray_b):
            continue
        if all(vec_dot(f, other) == 0 for f in shared):
            return False
    return True

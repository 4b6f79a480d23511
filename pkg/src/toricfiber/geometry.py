"""Exact rational polyhedral computations via double description.

The single engine here converts between H- and V-representations of
rational cones; polytopes ride along through homogenization.  All
arithmetic is integer / Fraction exact.  Intended scale: ambient
dimension <= 6-ish and a few dozen constraints, which covers fans and
desk-size lattice polytopes comfortably.
"""

from __future__ import annotations

from .intlinalg import Vec, is_zero, primitivize, vdot


def _project_off(v, pivot, a_pivot, a_v):
    """Integer combination a_pivot * v - a_v * pivot (kills constraint a)."""
    return tuple(a_pivot * x - a_v * y for x, y in zip(v, pivot))


def dual_description(inequalities, equations, dim: int):
    """Extreme rays and lineality of {x : <a,x> >= 0, <e,x> = 0}.

    Returns (rays, lineality_basis) with primitive integer entries.
    Rays are minimal generators modulo the lineality space.
    """
    constraints = []
    for e in equations:
        e = tuple(int(x) for x in e)
        constraints.append(e)
        constraints.append(tuple(-x for x in e))
    constraints += [tuple(int(x) for x in a) for a in inequalities]
    lineality = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays: list[tuple[Vec, int]] = []  # (vector, bitmask of tight constraints)

    for idx, a in enumerate(constraints):
        if is_zero(a):
            rays = [(r, zs | (1 << idx)) for r, zs in rays]
            continue
        pivot_idx = next((i for i, l in enumerate(lineality) if vdot(a, l) != 0), None)
        if pivot_idx is not None:
            pivot = lineality.pop(pivot_idx)
            if vdot(a, pivot) < 0:
                pivot = tuple(-x for x in pivot)
            ap = vdot(a, pivot)
            new_lin = []
            for l in lineality:
                proj = _project_off(l, pivot, ap, vdot(a, l))
                if not is_zero(proj):
                    new_lin.append(primitivize(proj))
            lineality = new_lin
            new_rays = []
            for r, zs in rays:
                av = vdot(a, r)
                rr = primitivize(_project_off(r, pivot, ap, av)) if av else r
                new_rays.append((rr, zs | (1 << idx)))
            # previously processed constraints all vanish on the old lineality,
            # so the pivot satisfies them with equality
            mask = (1 << idx) - 1
            new_rays.append((pivot, mask))
            rays = new_rays
            continue
        pos = [(r, zs) for r, zs in rays if vdot(a, r) > 0]
        neg = [(r, zs) for r, zs in rays if vdot(a, r) < 0]
        zero = [(r, zs | (1 << idx)) for r, zs in rays if vdot(a, r) == 0]
        if not neg:
            rays = pos + zero
            continue
        combined = []
        for p, zp in pos:
            for n, zn in neg:
                common = zp & zn
                adjacent = not any(
                    zs & common == common
                    for r, zs in rays if r is not p and r is not n)
                if not adjacent:
                    continue
                w = _project_off(n, p, vdot(a, p), vdot(a, n))
                if is_zero(w):
                    continue
                combined.append((primitivize(w), common | (1 << idx)))
        rays = pos + zero + combined
    seen = {}
    for r, zs in rays:
        seen.setdefault(r, zs)
    return list(seen.keys()), lineality


def cone_halfspaces(generators, dim: int):
    """H-representation of cone(generators).

    Returns (facet_normals, span_equations): the cone equals
    {x : <n,x> >= 0 for all facets, <e,x> = 0 for all equations}.
    """
    if not generators:
        ident = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
        return [], ident
    normals, eqs = dual_description(generators, [], dim)
    return normals, eqs


def cone_extreme_rays(generators, dim: int):
    """Extreme rays of cone(generators), primitive and deduplicated."""
    gens = [primitivize(g) for g in generators if not is_zero(g)]
    if not gens:
        return []
    normals, eqs = cone_halfspaces(gens, dim)
    rays, lin = dual_description(normals, eqs, dim)
    if lin:
        raise ValueError("cone is not strongly convex")
    return rays


def cone_is_strongly_convex(generators, dim: int) -> bool:
    gens = [g for g in generators if not is_zero(g)]
    if not gens:
        return True
    normals, eqs = cone_halfspaces(gens, dim)
    _, lin = dual_description(normals, eqs, dim)
    return not lin


def intersect_cones(halfspaces_a, halfspaces_b, dim: int):
    """Extreme rays of the intersection of two cones given as H-data."""
    na, ea = halfspaces_a
    nb, eb = halfspaces_b
    rays, lin = dual_description(list(na) + list(nb), list(ea) + list(eb), dim)
    if lin:
        raise ValueError("intersection of strongly convex cones has a line")
    return rays


class HullData:
    """Exact convex hull of lattice points via homogenization.

    facets: list of (inward primitive normal n, offset c) meaning <n,x> >= -c.
    equations: (e, c) pairs with <e,x> = -c on the affine span.
    vertices: the extreme points, lexicographically sorted.
    """

    def __init__(self, points):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise ValueError("empty point set")
        self.ambient = len(pts[0])
        homog = [(1,) + p for p in pts]
        functionals, span_eqs = dual_description(homog, [], self.ambient + 1)
        facets = []
        for f in functionals:
            c, n = f[0], f[1:]
            if is_zero(n):
                continue  # the trivial 1 >= 0 functional
            facets.append((tuple(n), c))
        self.facets = sorted(facets)
        self.equations = sorted((tuple(e[1:]), e[0]) for e in span_eqs)
        vrays, lin = dual_description(functionals, span_eqs, self.ambient + 1)
        if lin or any(r[0] <= 0 for r in vrays):
            raise ValueError("point set does not span a bounded polytope")
        verts = []
        for r in vrays:
            if r[0] != 1:
                raise ValueError("non-lattice vertex in hull of lattice points")
            verts.append(tuple(r[1:]))
        self.vertices = sorted(verts)

    @property
    def dim(self) -> int:
        return self.ambient - len(self.equations)


def halfspaces_to_vertices(inequalities, equations, dim: int):
    """Vertices of the bounded polyhedron {<n,y> >= -c, <e,y> = -c}.

    `inequalities` and `equations` are (vector, offset) pairs.  Raises
    if the polyhedron is unbounded or empty, or has non-lattice vertices.
    """
    homog_ineq = [(c,) + tuple(n) for n, c in inequalities]
    homog_ineq.append((1,) + (0,) * dim)  # t >= 0
    homog_eq = [(c,) + tuple(e) for e, c in equations]
    rays, lin = dual_description(homog_ineq, homog_eq, dim + 1)
    if lin:
        raise ValueError("polyhedron contains a line")
    verts = []
    for r in rays:
        if r[0] == 0:
            raise ValueError("polyhedron is unbounded")
        if r[0] != 1:
            raise ValueError("polyhedron has a non-lattice vertex")
        verts.append(tuple(r[1:]))
    return sorted(verts)

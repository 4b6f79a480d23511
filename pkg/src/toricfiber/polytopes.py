"""Integral polytopes in a dual lattice: hulls, facets, lattice points,
polar duality, normal fans, and subspace restriction charts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fans import Fan, fan_from_cones
from .geometry import HullData, halfspaces_to_vertices
from .intlinalg import (Vec, in_sublattice_coords, kernel_basis,
                        LatticeMap, vdot, vsub)


class Polytope:
    """Convex hull of lattice points, with exact V- and H-representations.

    Facets are (inward primitive normal, offset) pairs meaning
    <normal, x> >= -offset; equations cut out the affine span the same
    way.  Vertices are lexicographically sorted.
    """

    def __init__(self, points):
        hull = HullData(points)
        self.ambient_rank = hull.ambient
        self.vertices: tuple[Vec, ...] = tuple(hull.vertices)
        self.facets: tuple[tuple[Vec, int], ...] = tuple(hull.facets)
        self.equations: tuple[tuple[Vec, int], ...] = tuple(hull.equations)
        self._lattice_points = None

    @property
    def dim(self) -> int:
        return self.ambient_rank - len(self.equations)

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return (f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, "
                f"facets={len(self.facets)})")

    def contains(self, point) -> bool:
        return (all(vdot(e, point) == -c for e, c in self.equations)
                and all(vdot(n, point) >= -c for n, c in self.facets))

    def bounding_box(self):
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient_rank)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient_rank)]
        return lo, hi

    def lattice_points(self) -> list[Vec]:
        """All lattice points, lexicographically ordered.

        Bounding box scan filtered by the H-representation; boxes at
        this scale stay in the tens of thousands.
        """
        if self._lattice_points is None:
            lo, hi = self.bounding_box()
            ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
            ineqs = [(n, c) for n, c in self.facets]
            eqs = list(self.equations)
            pts = []
            for p in itertools.product(*ranges):
                if all(vdot(e, p) == -c for e, c in eqs) and \
                        all(vdot(n, p) >= -c for n, c in ineqs):
                    pts.append(p)
            self._lattice_points = pts
        return list(self._lattice_points)

    def facet_vertex_incidence(self):
        """Per facet, the sorted list of indices of vertices lying on it."""
        out = []
        for n, c in self.facets:
            out.append(tuple(i for i, v in enumerate(self.vertices)
                             if vdot(n, v) == -c))
        return out

    def minimizing_vertices(self, direction) -> list[Vec]:
        best = min(vdot(v, direction) for v in self.vertices)
        return [v for v in self.vertices if vdot(v, direction) == best]

    def face_vertices(self, direction) -> list[Vec]:
        """Vertices of the face on which <., direction> attains its minimum."""
        return self.minimizing_vertices(direction)


def hull(points) -> Polytope:
    return Polytope(points)


def facet_count(p: Polytope) -> int:
    if not p.is_full_dimensional:
        raise ValueError("facet count of a degenerate polytope is ambiguous")
    return len(p.facets)


def lattice_points(p: Polytope) -> list[Vec]:
    return p.lattice_points()


def facet_vertex_incidence(p: Polytope):
    return p.facet_vertex_incidence()


def _origin_interior(p: Polytope) -> bool:
    return p.is_full_dimensional and all(c > 0 for _, c in p.facets)


def dual_polytope(p: Polytope) -> Polytope:
    """Polar dual {y : <y, x> >= -1 for all x in P}.

    Vertices of the dual are the facet normals scaled to offset 1;
    raises when the polar is not a lattice polytope.
    """
    if not _origin_interior(p):
        raise ValueError("polar duality requires the origin in the interior")
    verts = []
    for n, c in p.facets:
        if any(x % c for x in n):
            raise ValueError("polar dual is not a lattice polytope")
        verts.append(tuple(x // c for x in n))
    return Polytope(verts)


def is_reflexive(p: Polytope) -> bool:
    if not _origin_interior(p):
        raise ValueError("reflexivity requires the origin in the interior")
    return all(c == 1 for _, c in p.facets)


def normal_fan(p: Polytope) -> Fan:
    """Inner normal fan: the cone at a vertex collects the inward facet
    normals of the facets through it, so that <., v> is minimized on the
    corresponding face."""
    if not p.is_full_dimensional:
        raise ValueError("normal fan requires a full-dimensional polytope")
    cones = []
    for v in p.vertices:
        cones.append([n for n, c in p.facets if vdot(n, v) == -c])
    return fan_from_cones(p.ambient_rank, cones)


@dataclass(frozen=True)
class SubspaceChart:
    """Affine chart origin + B y identifying a saturated sublattice slice."""

    origin: Vec
    basis: tuple[Vec, ...]

    def to_chart(self, point) -> Vec:
        coords = in_sublattice_coords(list(self.basis), vsub(point, self.origin))
        if coords is None:
            raise ValueError(f"{point} is not on the chart lattice")
        return coords

    def from_chart(self, coords) -> Vec:
        out = list(self.origin)
        for c, b in zip(coords, self.basis, strict=True):
            for i in range(len(out)):
                out[i] += c * b[i]
        return tuple(out)


@dataclass(frozen=True)
class RestrictedPolytope:
    """A polytope cut out inside an orthogonal-complement chart."""

    polytope: Polytope
    chart: SubspaceChart


def orthogonal_complement_basis(vectors, rank: int) -> list[Vec]:
    """Basis of {m : <m, v> = 0 for all given v}, saturated in Z^rank."""
    if not vectors:
        return [tuple(1 if i == j else 0 for j in range(rank))
                for i in range(rank)]
    return kernel_basis(LatticeMap.from_rows([list(v) for v in vectors]))


def restrict_to_subspace(p: Polytope, origin: Vec, basis) -> Polytope:
    """(P - origin) intersected with the span of `basis`, in chart coords."""
    ineqs = []
    for n, c in p.facets:
        coeffs = tuple(vdot(n, b) for b in basis)
        ineqs.append((coeffs, c + vdot(n, origin)))
    eqs = []
    for e, c in p.equations:
        coeffs = tuple(vdot(e, b) for b in basis)
        eqs.append((coeffs, c + vdot(e, origin)))
    verts = halfspaces_to_vertices(ineqs, eqs, len(basis))
    return Polytope(verts)


def restriction_polytope(p: Polytope, tau_idx, ref_fan: Fan) -> RestrictedPolytope:
    """Polytope of the bundle restricted to the orbit closure of a cone.

    Translates by the weight of the lexicographically smallest maximal
    cone containing tau and intersects with the orthogonal complement of
    tau, expressed in a saturated basis of that complement.  Any other
    valid weight gives a lattice translate.
    """
    tau_idx = tuple(sorted(tau_idx))
    if not ref_fan.has_cone(tau_idx):
        raise ValueError("tau is not a cone of the fan")
    tops = sorted(c for c in ref_fan.maximal_cones if ref_fan.is_face(tau_idx, c))
    if not tops:
        raise ValueError("tau is not contained in a maximal cone")
    top_cone = ref_fan.cone(tops[0])
    mins = p.minimizing_vertices(top_cone.relint_point())
    if len(mins) != 1:
        raise ValueError("fan does not refine the normal fan of the polytope")
    origin = mins[0]
    for i in tops[0]:
        ray = ref_fan.rays[i]
        if vdot(origin, ray) != min(vdot(v, ray) for v in p.vertices):
            raise ValueError("fan does not refine the normal fan of the polytope")
    tau_gens = [ref_fan.rays[i] for i in tau_idx]
    basis = tuple(orthogonal_complement_basis(tau_gens, p.ambient_rank))
    poly = restrict_to_subspace(p, origin, basis)
    return RestrictedPolytope(poly, SubspaceChart(origin, basis))


def interior_lattice_points(p: Polytope) -> list[Vec]:
    """Lattice points in the relative interior.

    Convention: a 0-dimensional polytope has no interior points.
    """
    if p.dim == 0:
        return []
    if p.is_full_dimensional:
        return [pt for pt in p.lattice_points()
                if all(vdot(n, pt) > -c for n, c in p.facets)]
    chart = SubspaceChart(p.vertices[0],
                          tuple(orthogonal_complement_basis(
                              [e for e, _ in p.equations], p.ambient_rank)))
    inner = restrict_to_subspace(p, chart.origin, chart.basis)
    return [chart.from_chart(pt) for pt in interior_lattice_points(inner)]


def face_polytope(p: Polytope, vertex_indices) -> Polytope:
    """The face spanned by the given vertices (must be an actual face)."""
    verts = [p.vertices[i] for i in vertex_indices]
    face = Polytope(verts)
    # a face is exactly the subset of P tight on some valid inequalities;
    # verify by checking no other vertex satisfies all of the face's
    # supporting facets with equality
    tight = [(n, c) for n, c in p.facets
             if all(vdot(n, v) == -c for v in verts)]
    for v in p.vertices:
        if v not in verts and all(vdot(n, v) == -c for n, c in tight):
            raise ValueError("vertex set does not span a face")
    return face

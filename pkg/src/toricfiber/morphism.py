"""Toric morphism analysis for a map of fans: image fan, per-orbit fiber
structure (primitive cones, relative stars, indices), the fibration
criterion, and the flattening stratification.

A FanMap validates the defining condition at construction.  Analysis of
maps that are not surjective over R is routed through the factorization
over the image fan; all sigma arguments then refer to image-fan cones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .fans import Cone, Fan, fan_from_cones, zero_fan
from .intlinalg import (INFINITE, LatticeMap, Vec, cokernel_index,
                        column_lattice_hnf, in_sublattice_coords, is_zero,
                        kernel_basis, primitivize, quotient_lattice,
                        saturate_columns, smith_normal_form, vdot, vsub)
from .polytopes import Polytope, RestrictedPolytope
from .surfaces import UNKNOWN, identify_surface

EMPTY = "EMPTY"


def is_map_of_fans(phi: LatticeMap, source: Fan, target: Fan) -> bool:
    """Does every source cone map into some target cone?"""
    if phi.source_rank != source.rank or phi.target_rank != target.rank:
        raise ValueError("lattice ranks do not match the map")
    for idx in source.maximal_cones or [()]:
        images = [phi.apply(source.rays[i]) for i in idx]
        if not any(all(target.cone(t).contains(w) for w in images)
                   for t in (target.maximal_cones or [()])):
            return False
    return True


@dataclass(frozen=True)
class RelativeStar:
    """Fiber-component fan in the quotient lattice preimage(N_sigma)/N_tau.

    `lifts` are ambient source-lattice representatives of the quotient
    basis; pairing lattice points of the orthogonal-complement chart
    against them puts restriction polytopes into the same coordinates.
    """

    fan: Fan
    tau: tuple[int, ...]
    sigma: tuple[int, ...]
    preimage_basis: tuple[Vec, ...] = field(repr=False)
    lifts: tuple[Vec, ...] = field(repr=False)
    _quotient: object = field(repr=False)

    @property
    def rank(self) -> int:
        return self.fan.rank

    def project_vector(self, x: Vec) -> Vec:
        coords = in_sublattice_coords(list(self.preimage_basis), x)
        if coords is None:
            raise ValueError("vector is outside the sigma-preimage lattice")
        return self._quotient.project(coords)

    def dual_coords(self, m: Vec) -> Vec:
        """Coordinates of m (in tau-perp of the dual lattice) dual to `lifts`."""
        return tuple(vdot(b, m) for b in self.lifts)


@dataclass(frozen=True)
class FiberComponent:
    primitive_cone: tuple[int, ...]
    star: RelativeStar
    label: str

    @property
    def dim(self) -> int:
        return self.star.rank


@dataclass(frozen=True)
class FiberReport:
    sigma: tuple[int, ...]
    sigma_prime_set: tuple[tuple[int, ...], ...]
    primitive: tuple[tuple[int, ...], ...]
    index: int
    components: tuple[FiberComponent, ...]
    intersections: dict


@dataclass(frozen=True)
class FibrationCertificate:
    is_fibration: bool
    violations: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    skeleton_onto: bool


@dataclass(frozen=True)
class LightedFace:
    vertex_indices: tuple[int, ...]
    vertices: tuple[Vec, ...]
    dim: int
    primitive: bool


@dataclass(frozen=True)
class LightedPart:
    sigma: tuple[int, ...]
    faces: tuple[LightedFace, ...]
    face_of_cone: dict


class FanMap:
    """A validated map of fans phi: source -> target."""

    def __init__(self, phi: LatticeMap, source: Fan, target: Fan):
        if not is_map_of_fans(phi, source, target):
            raise ValueError("phi does not carry every source cone into a target cone")
        self.phi = phi
        self.source = source
        self.target = target

    # -- image ------------------------------------------------------------

    @cached_property
    def _image_data(self):
        """(image fan, phi in image coords, embedding of image lattice)."""
        snf = smith_normal_form(self.phi.matrix)
        r = snf.rank
        n = self.target.rank
        if r == n:
            return self.target, self.phi, LatticeMap.identity(n)
        basis = [tuple(snf.U[i][j] for i in range(n)) for j in range(r)]
        cones = []
        span_rows = _orthogonal_rows(basis, n)
        for idx in self.target.maximal_cones or [()]:
            cone = self.target.cone(idx)
            normals, eqs = cone.halfspaces
            from .geometry import dual_description
            rays, lin = dual_description(
                list(normals), list(eqs) + span_rows, n)
            gens = []
            for ray in rays:
                coords = in_sublattice_coords(basis, ray)
                if coords is not None and not is_zero(coords):
                    gens.append(coords)
            cones.append(gens)
        phi_img_cols = []
        for col in self.phi.columns():
            coords = in_sublattice_coords(basis, col)
            assert coords is not None
            phi_img_cols.append(coords)
        phi_img = LatticeMap.from_columns(phi_img_cols)
        embed = LatticeMap.from_columns(basis)
        if not any(cones):
            return zero_fan(r), phi_img, embed
        fan = fan_from_cones(r, [c for c in cones if c])
        return fan, phi_img, embed

    def image_fan(self) -> Fan:
        return self._image_data[0]

    @property
    def _phi_img(self) -> LatticeMap:
        return self._image_data[1]

    @property
    def _img_fan(self) -> Fan:
        return self._image_data[0]

    def is_surjective_real(self) -> bool:
        return smith_normal_form(self.phi.matrix).rank == self.target.rank

    def degree(self):
        """[N : phi(N')] when finite, else INFINITE."""
        return cokernel_index(self.phi)

    # -- orbit bookkeeping --------------------------------------------------

    @cached_property
    def _sigma_of(self) -> dict:
        """Source cone -> the image-fan cone whose relint receives its relint."""
        out = {}
        fan = self._img_fan
        for idx in self.source.all_cone_indices:
            w = self._phi_img.apply(self.source.cone(idx).relint_point()) \
                if idx else (0,) * self._phi_img.target_rank
            out[idx] = fan.locate_relint(w)
        return out

    def sigma_of(self, sigma_prime_idx):
        return self._sigma_of[tuple(sorted(sigma_prime_idx))]

    def sigma_prime_of(self, sigma_idx) -> list[tuple[int, ...]]:
        sigma_idx = tuple(sorted(sigma_idx))
        if not self._img_fan.has_cone(sigma_idx):
            raise ValueError("sigma is not a cone of the image fan")
        return [sp for sp, s in self._sigma_of.items() if s == sigma_idx]

    def primitive_cones(self, sigma_idx) -> list[tuple[int, ...]]:
        sigma_idx = tuple(sorted(sigma_idx))
        members = set(self.sigma_prime_of(sigma_idx))
        out = []
        for sp in sorted(members, key=lambda s: (len(s), s)):
            if not any(f in members for f in self.source.proper_faces(sp)):
                out.append(sp)
        return out

    # -- index ---------------------------------------------------------------

    def index_of(self, sigma_idx) -> int:
        """Order of N/N_sigma modulo the image of N'/N'_sigma'.

        Well-definedness across all members of the stratum is asserted.
        """
        sigma_idx = tuple(sorted(sigma_idx))
        sps = self.sigma_prime_of(sigma_idx)
        if not sps:
            raise ValueError("no source cones lie over sigma")
        fan = self._img_fan
        q_sigma = quotient_lattice(
            fan.rank, saturate_columns([fan.rays[i] for i in sigma_idx], fan.rank))
        if q_sigma.rank == 0:
            return 1
        images = set()
        value = None
        for sp in sps:
            q_sp = quotient_lattice(
                self.source.rank,
                saturate_columns([self.source.rays[i] for i in sp], self.source.rank))
            cols = [q_sigma.project(self._phi_img.apply(b))
                    for b in q_sp.quotient_basis]
            images.add(column_lattice_hnf(cols, q_sigma.rank))
            if not cols:
                raise ValueError("stratum member maps with infinite index")
            idx = cokernel_index(LatticeMap.from_columns(cols))
            if idx is INFINITE:
                raise ValueError("stratum member maps with infinite index")
            value = idx if value is None else value
            assert idx == value
        assert len(images) == 1, "index is not well defined across the stratum"
        return value

    # -- relative stars -------------------------------------------------------

    def relative_star(self, tau_idx, sigma_idx) -> RelativeStar:
        tau_idx = tuple(sorted(tau_idx))
        sigma_idx = tuple(sorted(sigma_idx))
        if self.sigma_of(tau_idx) != sigma_idx:
            raise ValueError("tau does not lie over the relative interior of sigma")
        fan = self._img_fan
        n_img, n_src = fan.rank, self.source.rank
        sigma_sat = saturate_columns([fan.rays[i] for i in sigma_idx], n_img)
        q_sigma = quotient_lattice(n_img, sigma_sat)
        # preimage of span(sigma): kernel of projection-after-phi
        if q_sigma.rank == 0:
            pre_basis = [tuple(int(i == j) for j in range(n_src))
                         for i in range(n_src)]
        else:
            proj_cols = [q_sigma.project(col) for col in self._phi_img.columns()]
            pre_basis = kernel_basis(LatticeMap.from_columns(proj_cols))
        tau_sat = saturate_columns(
            [self.source.rays[i] for i in tau_idx], n_src)
        tau_coords = []
        for t in tau_sat:
            c = in_sublattice_coords(pre_basis, t)
            assert c is not None, "tau is not inside the sigma-preimage"
            tau_coords.append(c)
        quot = quotient_lattice(len(pre_basis), tau_coords)
        lifts = tuple(_combine(pre_basis, b) for b in quot.quotient_basis)

        def project(x):
            coords = in_sublattice_coords(pre_basis, x)
            if coords is None:
                raise ValueError("vector is outside the sigma-preimage lattice")
            return quot.project(coords)

        cones = []
        for sp in self.sigma_prime_of(sigma_idx):
            if not self.source.is_face(tau_idx, sp):
                continue
            gens = [project(self.source.rays[i]) for i in sp if i not in tau_idx]
            cones.append([g for g in gens if not is_zero(g)])
        if not any(cones):
            star_fan = zero_fan(quot.rank)
        else:
            star_fan = fan_from_cones(quot.rank, [c for c in cones if c] or [[]])
        return RelativeStar(star_fan, tau_idx, sigma_idx,
                            tuple(pre_basis), lifts, quot)

    def component_label(self, star: RelativeStar) -> str:
        fan = star.fan
        if fan.rank == 0:
            return "point"
        if not fan.is_complete():
            return UNKNOWN
        if fan.rank == 1:
            return "CP1"
        if fan.rank == 2:
            return identify_surface(fan)
        return UNKNOWN

    # -- reports ---------------------------------------------------------------

    def fiber_report(self, sigma_idx) -> FiberReport:
        sigma_idx = tuple(sorted(sigma_idx))
        sps = self.sigma_prime_of(sigma_idx)
        prim = self.primitive_cones(sigma_idx)
        ind = self.index_of(sigma_idx)
        components = []
        for tau in prim:
            star = self.relative_star(tau, sigma_idx)
            components.append(FiberComponent(tau, star, self.component_label(star)))
        intersections = {}
        for size in range(2, len(prim) + 1):
            for subset in itertools.combinations(prim, size):
                union = tuple(sorted(set(itertools.chain.from_iterable(subset))))
                if self.source.has_cone(union):
                    assert union in sps, "generated cone escapes the stratum"
                    intersections[subset] = self.relative_star(union, sigma_idx)
                else:
                    intersections[subset] = EMPTY
        return FiberReport(sigma_idx, tuple(sorted(sps, key=lambda s: (len(s), s))),
                           tuple(prim), ind, tuple(components), intersections)

    def is_fibration(self) -> FibrationCertificate:
        if not self.is_surjective_real():
            raise ValueError("fibration criterion requires a surjective morphism")
        violations = []
        fan = self._img_fan
        for sigma_idx in fan.all_cone_indices:
            sigma_cone = fan.cone(sigma_idx)
            for tau in self.primitive_cones(sigma_idx):
                tau_cone = self.source.cone(tau)
                images = [self._phi_img.apply(self.source.rays[i]) for i in tau]
                if any(is_zero(w) for w in images):
                    violations.append((sigma_idx, tau))
                    continue
                image_cone = Cone.make(images, fan.rank)
                if tau_cone.dim != sigma_cone.dim or \
                        image_cone.dim != tau_cone.dim or \
                        not _same_cone(image_cone, sigma_cone):
                    violations.append((sigma_idx, tau))
        onto = True
        target_rays = set(self._img_fan.rays)
        hit = set()
        for r in self.source.rays:
            w = self._phi_img.apply(r)
            if is_zero(w):
                continue
            p = primitivize(w)
            if p in target_rays:
                hit.add(p)
        skeleton_onto = hit == target_rays
        return FibrationCertificate(not violations, tuple(violations), skeleton_onto)

    def flattening_stratification(self):
        """(sigma, FiberReport) per image-fan cone, checking index divisibility."""
        fan = self._img_fan
        order = sorted(fan.all_cone_indices, key=lambda s: (fan.cone(s).dim, s))
        table = [(sigma, self.fiber_report(sigma)) for sigma in order]
        index = {sigma: rep.index for sigma, rep in table}
        for sigma in index:
            for tau in fan.proper_faces(sigma):
                assert index[tau] % index[sigma] == 0, \
                    "face index fails the divisibility law"
        return table

    def branch_locus(self):
        """Image cones where the covering degree drops (finite-index maps)."""
        deg = self.degree()
        if deg is INFINITE:
            raise ValueError("branch locus applies to finite-index maps")
        return [sigma for sigma, rep in self.flattening_stratification()
                if rep.index < deg]

    # -- dual polytope picture ---------------------------------------------------

    def lighted_part(self, polytope: Polytope, sigma_idx) -> LightedPart:
        """Faces of the polytope lit by sigma, with primitivity flags.

        The source fan must refine the normal fan of the polytope; the
        face attached to a source cone is where all its ray functionals
        are minimized.
        """
        sigma_idx = tuple(sorted(sigma_idx))
        vert_index = {v: i for i, v in enumerate(polytope.vertices)}
        mins = {}
        for i, ray in enumerate(self.source.rays):
            mins[i] = frozenset(vert_index[v]
                                for v in polytope.minimizing_vertices(ray))
        _check_refinement(self.source, polytope)
        all_verts = frozenset(range(len(polytope.vertices)))
        face_sets = {}
        for sp in self.sigma_prime_of(sigma_idx):
            fs = all_verts
            for i in sp:
                fs &= mins[i]
            assert fs, "empty face for a stratum cone"
            face_sets.setdefault(fs, []).append(sp)
        faces = []
        face_of_cone = {}
        for fs, cones in sorted(face_sets.items(), key=lambda kv: sorted(kv[0])):
            primitive = not any(fs < other for other in face_sets)
            verts = tuple(polytope.vertices[i] for i in sorted(fs))
            dim = Polytope(verts).dim
            faces.append(LightedFace(tuple(sorted(fs)), verts, dim, primitive))
            for c in cones:
                face_of_cone[c] = tuple(sorted(fs))
        return LightedPart(sigma_idx, tuple(faces), face_of_cone)

    # -- polytope projection -------------------------------------------------------

    def project_polytope(self, restriction: RestrictedPolytope, tau_idx,
                         sigma_idx):
        """Image of a restriction polytope in the fiber quotient coordinates.

        Returns (polytope, relative_star); the polytope lives in the
        coordinates dual to the relative star's quotient basis.
        """
        star = self.relative_star(tau_idx, sigma_idx)
        chart = restriction.chart
        verts = [star.dual_coords(vsub(chart.from_chart(v), chart.origin))
                 for v in restriction.polytope.vertices]
        return Polytope(verts), star


def _same_cone(a: Cone, b: Cone) -> bool:
    return set(a.generators) == set(b.generators)


def _combine(basis, coords) -> Vec:
    out = [0] * len(basis[0])
    for c, b in zip(coords, basis, strict=True):
        for i in range(len(out)):
            out[i] += c * b[i]
    return tuple(out)


def _orthogonal_rows(basis, rank: int):
    """Equations cutting out the R-span of the basis vectors."""
    from .intlinalg import LatticeMap as LM
    rows = [list(b) for b in basis]
    return [list(k) for k in kernel_basis(LM.from_rows(rows))] if rows else \
        [[int(i == j) for j in range(rank)] for i in range(rank)]


def _check_refinement(fan: Fan, polytope: Polytope):
    for idx in fan.maximal_cones:
        cone = fan.cone(idx)
        mins = polytope.minimizing_vertices(cone.relint_point())
        if len(mins) != 1:
            raise ValueError("fan does not refine the normal fan of the polytope")
        v = mins[0]
        for i in idx:
            ray = fan.rays[i]
            if vdot(v, ray) != min(vdot(w, ray) for w in polytope.vertices):
                raise ValueError("fan does not refine the normal fan of the polytope")

"""Equivariant line bundles as piecewise linear weight systems, their
section bases, and the restriction / regrouping calculus for sections
along orbit closures and fiber components.

Coefficients in sections are exact rationals or opaque string labels;
labels survive regrouping untouched, which is all the symbolic algebra
this module does.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fans import Fan
from .intlinalg import (LatticeMap, Vec, cokernel_index, is_zero,
                        quotient_lattice, saturate_columns,
                        section_of_surjection, vdot, vsub)
from .morphism import FanMap, RelativeStar
from .polytopes import (Polytope, RestrictedPolytope, lattice_points,
                        restriction_polytope)


@dataclass(frozen=True)
class PLFunction:
    """Piecewise linear function as a weight per maximal cone.

    weights[c] is the dual-lattice vector whose restriction to the cone
    with index tuple c realizes the function there.
    """

    fan: Fan
    weights: tuple[tuple[tuple[int, ...], Vec], ...]

    @classmethod
    def from_dict(cls, fan: Fan, weights: dict) -> "PLFunction":
        return cls(fan, tuple(sorted((tuple(sorted(k)), tuple(v))
                                     for k, v in weights.items())))

    def weight(self, cone_idx) -> Vec:
        key = tuple(sorted(cone_idx))
        for k, v in self.weights:
            if k == key:
                return v
        raise KeyError(cone_idx)

    def weight_map(self) -> dict:
        return dict(self.weights)

    def is_compatible(self) -> bool:
        """Weights agree on shared rays of any two maximal cones."""
        items = self.weights
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                (ci, wi), (cj, wj) = items[i], items[j]
                diff = vsub(wi, wj)
                for r in set(ci) & set(cj):
                    if vdot(diff, self.fan.rays[r]) != 0:
                        return False
        return True

    def value(self, v: Vec):
        for idx in self.fan.maximal_cones:
            if self.fan.cone(idx).contains(v):
                return vdot(self.weight(idx), v)
        raise ValueError("point outside the fan support")


def plf_from_polytope(p: Polytope, fan: Fan) -> PLFunction:
    """Support-function weights of a polytope on a refining fan.

    The weight of a maximal cone is the unique vertex minimizing the
    pairing on it; non-uniqueness means the fan does not refine the
    normal fan and is an error.
    """
    weights = {}
    for idx in fan.maximal_cones:
        cone = fan.cone(idx)
        mins = p.minimizing_vertices(cone.relint_point())
        if len(mins) != 1:
            raise ValueError("fan does not refine the normal fan of the polytope")
        w = mins[0]
        for i in idx:
            ray = fan.rays[i]
            if vdot(w, ray) != min(vdot(v, ray) for v in p.vertices):
                raise ValueError("fan does not refine the normal fan of the polytope")
        weights[idx] = w
    return PLFunction.from_dict(fan, weights)


def polytope_from_plf(h: PLFunction) -> Polytope:
    return Polytope([w for _, w in h.weights])


def is_principal(h: PLFunction) -> bool:
    vals = {w for _, w in h.weights}
    return len(vals) == 1


def same_bundle(h1: PLFunction, h2: PLFunction) -> bool:
    """Equal in the Picard group: the weight systems differ by one
    global linear function."""
    if h1.fan is not h2.fan and h1.fan.rays != h2.fan.rays:
        return False
    diffs = {vsub(w1, h2.weight(c)) for c, w1 in h1.weights}
    return len(diffs) == 1


@dataclass(frozen=True)
class SectionBasisElement:
    exponent: Vec


def sections_basis(p: Polytope) -> list[SectionBasisElement]:
    return [SectionBasisElement(m) for m in lattice_points(p)]


@dataclass(frozen=True)
class LaurentSection:
    """Finite sum of characters; coefficients are Fractions or labels."""

    terms: tuple[tuple[Vec, object], ...]

    @classmethod
    def from_dict(cls, terms: dict) -> "LaurentSection":
        return cls(tuple(sorted(((tuple(e), c) for e, c in terms.items()),
                                key=lambda t: t[0])))

    @classmethod
    def generic(cls, p: Polytope, prefix: str = "a") -> "LaurentSection":
        return cls.from_dict({m: f"{prefix}{m}" for m in lattice_points(p)})

    def term_dict(self) -> dict:
        return dict(self.terms)

    def __len__(self):
        return len(self.terms)

    def evaluate(self, point):
        """Exact evaluation at a rational torus point (numeric terms only)."""
        total = Fraction(0)
        for e, c in self.terms:
            if not isinstance(c, (int, Fraction)):
                raise TypeError("cannot evaluate a symbolic coefficient")
            val = Fraction(c)
            for t, k in zip(point, e, strict=True):
                val *= Fraction(t) ** k
            total += val
        return total


def restrict_section_to_orbit_closure(s: LaurentSection, tau_idx, p: Polytope,
                                      fan: Fan):
    """Drop terms outside the restriction polytope and re-express the
    survivors in the orthogonal-complement chart.

    Returns (restricted section, RestrictedPolytope).
    """
    restriction = restriction_polytope(p, tau_idx, fan)
    chart = restriction.chart
    kept = {}
    for e, c in s.terms:
        try:
            y = chart.to_chart(e)
        except ValueError:
            continue
        if restriction.polytope.contains(y):
            kept[y] = c
    return LaurentSection.from_dict(kept), restriction


def pullback_bundle(f: FanMap, p2: Polytope) -> Polytope:
    """Polytope of the pulled-back bundle: the transpose image of p2."""
    _check_refines(f.target, p2)
    mt = f.phi.matrix
    verts = [tuple(sum(mt[i][j] * v[i] for i in range(len(v)))
                   for j in range(f.phi.source_rank)) for v in p2.vertices]
    return Polytope(verts)


def pullback_section_exponent(f: FanMap, m: Vec) -> Vec:
    mt = f.phi.matrix
    return tuple(sum(mt[i][j] * m[i] for i in range(len(m)))
                 for j in range(f.phi.source_rank))


def _check_refines(fan: Fan, p: Polytope):
    for idx in fan.maximal_cones:
        if len(p.minimizing_vertices(fan.cone(idx).relint_point())) != 1:
            raise ValueError("fan does not refine the normal fan of the polytope")


@dataclass(frozen=True)
class FiberSection:
    """Terms of a restricted section grouped by fiber exponent."""

    groups: tuple[tuple[Vec, tuple[tuple[Vec, object], ...]], ...]
    polytope: Polytope
    star: RelativeStar

    def group_dict(self) -> dict:
        return {f: dict(terms) for f, terms in self.groups}

    def group_sizes(self) -> dict:
        return {f: len(terms) for f, terms in self.groups}


def restrict_to_fiber(s: LaurentSection, tau_idx, sigma_idx, m: FanMap,
                      p: Polytope) -> FiberSection:
    """Restriction of a section to an irreducible fiber component.

    Exponents collapse onto the projected polytope; each fiber exponent
    carries the chart exponents (base data) that land on it.
    """
    restricted, restriction = restrict_section_to_orbit_closure(
        s, tau_idx, p, m.source)
    proj, star = m.project_polytope(restriction, tau_idx, sigma_idx)
    fiber_of = _fiber_matrix(star, restriction)
    groups: dict = {}
    for y, c in restricted.terms:
        f = _apply(fiber_of, y)
        groups.setdefault(f, []).append((y, c))
    return FiberSection(
        tuple(sorted((f, tuple(terms)) for f, terms in groups.items())),
        proj, star)


@dataclass(frozen=True)
class FibredForm:
    """Section terms regrouped as base-coefficient polynomials per fiber
    exponent, determined by a splitting xi of the quotient surjection."""

    groups: tuple[tuple[Vec, tuple[tuple[Vec, Vec, object], ...]], ...]
    # each entry: fiber exponent -> ((base exponent, chart exponent, coeff), ...)
    fiber_matrix: tuple[tuple[int, ...], ...]
    base_matrix: tuple[tuple[int, ...], ...]
    quotient_pair: tuple[tuple[int, ...], ...]
    restriction: RestrictedPolytope

    def group_dict(self) -> dict:
        return {f: {b: c for b, _, c in terms} for f, terms in self.groups}

    def base_polynomials(self) -> dict:
        return {f: sorted((b, c) for b, _, c in terms)
                for f, terms in self.groups}

    def evaluate(self, fiber_point, base_point):
        total = Fraction(0)
        for f, terms in self.groups:
            fval = _monomial(fiber_point, f)
            for b, _, c in terms:
                if not isinstance(c, (int, Fraction)):
                    raise TypeError("cannot evaluate a symbolic coefficient")
                total += Fraction(c) * fval * _monomial(base_point, b)
        return total

    def chart_point_for(self, fiber_point, base_point):
        """Torus point in chart coordinates matching (fiber, base) evaluation."""
        a = [list(r) for r in self.fiber_matrix] + \
            [list(r) for r in self.base_matrix]
        n = len(a)
        t = []
        for i in range(n):
            val = Fraction(1)
            for j, u in enumerate(fiber_point):
                val *= Fraction(u) ** self.fiber_matrix[j][i]
            for j, w in enumerate(base_point):
                val *= Fraction(w) ** self.base_matrix[j][i]
            t.append(val)
        return tuple(t)


def quotient_surjection(m: FanMap, tau_idx, sigma_idx):
    """Induced map N'/N'_tau -> N/N_sigma in the SNF quotient bases."""
    fan = m.image_fan()
    q_src = quotient_lattice(
        m.source.rank,
        saturate_columns([m.source.rays[i] for i in tau_idx], m.source.rank))
    q_dst = quotient_lattice(
        fan.rank, saturate_columns([fan.rays[i] for i in sigma_idx], fan.rank))
    phi_img = m._phi_img
    cols = [q_dst.project(phi_img.apply(b)) for b in q_src.quotient_basis]
    return LatticeMap.from_columns(cols), q_src, q_dst


def fibred_form(s: LaurentSection, tau_idx, sigma_idx, m: FanMap,
                p: Polytope, xi: LatticeMap | None = None) -> FibredForm:
    """Regroup a section by fiber exponent with base Laurent coefficients.

    xi must be a section of the induced quotient surjection; by default
    the canonical SNF-based one is used.  Different xi give torically
    equivalent forms (same fiber groups, base parts shifted by a
    character).
    """
    tau_idx = tuple(sorted(tau_idx))
    sigma_idx = tuple(sorted(sigma_idx))
    phi_bar, q_src, q_dst = quotient_surjection(m, tau_idx, sigma_idx)
    if xi is None:
        xi = section_of_surjection(phi_bar)
    else:
        if cokernel_index(phi_bar) != 1:
            raise ValueError("quotient map is not surjective; no section exists")
        comp = phi_bar.compose(xi)
        if comp.matrix != LatticeMap.identity(phi_bar.target_rank).matrix:
            raise ValueError("xi is not a section of the quotient surjection")
    restricted, restriction = restrict_section_to_orbit_closure(
        s, tau_idx, p, m.source)
    proj, star = m.project_polytope(restriction, tau_idx, sigma_idx)
    fiber_mat = _fiber_matrix(star, restriction)
    pair = tuple(tuple(vdot(q, b) for b in restriction.chart.basis)
                 for q in q_src.quotient_basis)
    base_mat = _base_matrix(xi, pair)
    groups: dict = {}
    seen = set()
    for y, c in restricted.terms:
        f = _apply(fiber_mat, y)
        b = _apply(base_mat, y)
        assert (f, b) not in seen, "fibred splitting collided on two terms"
        seen.add((f, b))
        groups.setdefault(f, []).append((b, y, c))
    return FibredForm(
        tuple(sorted((f, tuple(sorted(terms))) for f, terms in groups.items())),
        fiber_mat, base_mat, pair, restriction)


def xi_transition(xi1: LatticeMap, xi2: LatticeMap, form1: FibredForm,
                  form2: FibredForm) -> bool:
    """Check the two fibred forms differ exactly by the character of
    (xi2 - xi1) transposed, term by term, with identical fiber groups."""
    g1 = {f: {chart: (b, c) for b, chart, c in terms} for f, terms in form1.groups}
    g2 = {f: {chart: (b, c) for b, chart, c in terms} for f, terms in form2.groups}
    if g1.keys() != g2.keys():
        return False
    delta = [[x2 - x1 for x1, x2 in zip(r1, r2, strict=True)]
             for r1, r2 in zip(xi1.matrix, xi2.matrix, strict=True)]
    for f in g1:
        if g1[f].keys() != g2[f].keys():
            return False
        for chart, (b1, c1) in g1[f].items():
            b2, c2 = g2[f][chart]
            if c1 != c2:
                return False
            # base exponents are xi^T of the quotient-dual coordinates of
            # the term, so the shift must be delta^T of those coordinates
            coords = _apply(form1.quotient_pair, chart)
            rows = len(delta[0]) if delta else 0
            expected = tuple(sum(delta[k][i] * coords[k]
                                 for k in range(len(delta)))
                             for i in range(rows))
            if vsub(b2, b1) != expected:
                return False
    return True


def _fiber_matrix(star: RelativeStar, restriction: RestrictedPolytope):
    basis = restriction.chart.basis
    return tuple(tuple(vdot(lift, b) for b in basis) for lift in star.lifts)


def _base_matrix(xi: LatticeMap, pair):
    # coords of a chart point in (N'/N'_tau)^* come from pairing with the
    # quotient basis lifts; xi^T then lands them in (N/N_sigma)^*
    cols = len(pair[0]) if pair else 0
    rows = []
    for i in range(xi.source_rank):
        rows.append(tuple(sum(xi.matrix[k][i] * pair[k][j]
                              for k in range(len(pair)))
                          for j in range(cols)))
    return tuple(rows)


def _apply(matrix, y) -> Vec:
    return tuple(sum(row[j] * y[j] for j in range(len(y))) for row in matrix)


def _monomial(point, exps):
    val = Fraction(1)
    for t, k in zip(point, exps, strict=True):
        val *= Fraction(t) ** k
    return val


@dataclass(frozen=True)
class HomogeneousForm:
    """Cox-coordinate exponent table: one exponent per fan ray per term."""

    ray_exponents: tuple[tuple[Vec, tuple[int, ...]], ...]

    def degree_table(self) -> dict:
        return dict(self.ray_exponents)


def homogeneous_form(s: LaurentSection, p: Polytope, fan: Fan,
                     divisor_coeffs) -> HomogeneousForm:
    """Per-term homogeneous exponents <m, v_i> + a_i over the fan rays.

    Raises when a term would need a negative exponent, i.e. the section
    is not holomorphic for the given divisor.
    """
    a = list(divisor_coeffs)
    if len(a) != len(fan.rays):
        raise ValueError("one divisor coefficient per ray is required")
    rows = []
    for e, _ in s.terms:
        exps = tuple(vdot(e, r) + ai for r, ai in zip(fan.rays, a))
        if any(x < 0 for x in exps):
            raise ValueError(f"term {e} is not holomorphic for this divisor")
        rows.append((e, exps))
    return HomogeneousForm(tuple(rows))


@dataclass(frozen=True)
class FibredHomogeneousForm:
    fiber_rays: tuple[int, ...]
    base_rays: tuple[int, ...]
    groups: tuple            # fiber exponent vector -> ((term, base exps), ...)
    xi_factors: tuple        # per term: (target-ray exps, correction exps)

    def group_dict(self) -> dict:
        return {f: dict(terms) for f, terms in self.groups}


def fibred_homogeneous_form(s: LaurentSection, p: Polytope, m: FanMap,
                            divisor_coeffs, xi: LatticeMap | None = None
                            ) -> FibredHomogeneousForm:
    """Homogeneous form grouped by the exponents over kernel rays, with
    the xi-induced three-factor split of the coefficient monomials."""
    full = homogeneous_form(s, p, m.source, divisor_coeffs)
    fiber_rays = tuple(i for i, r in enumerate(m.source.rays)
                       if is_zero(m.phi.apply(r)))
    base_rays = tuple(i for i in range(len(m.source.rays))
                      if i not in fiber_rays)
    if xi is None:
        xi = section_of_surjection(m.phi)
    else:
        comp = m.phi.compose(xi)
        if comp.matrix != LatticeMap.identity(m.phi.target_rank).matrix:
            raise ValueError("xi is not a section of phi")
    groups: dict = {}
    xi_factors = []
    for e, exps in full.ray_exponents:
        fiber_key = tuple(exps[i] for i in fiber_rays)
        base_part = tuple(exps[i] for i in base_rays)
        groups.setdefault(fiber_key, []).append((e, base_part))
        xi_t = tuple(sum(xi.matrix[k][j] * e[k] for k in range(len(e)))
                     for j in range(xi.source_rank))
        target_exps = tuple(vdot(xi_t, v) for v in m.target.rays)
        correction = tuple(
            vdot(e, vsub(m.source.rays[i], xi.apply(m.phi.apply(m.source.rays[i]))))
            for i in base_rays)
        # split identity per base ray: <m, v_k> = <xi^T m, phi(v_k)> + corr_k
        for pos, i in enumerate(base_rays):
            assert vdot(e, m.source.rays[i]) == \
                vdot(xi_t, m.phi.apply(m.source.rays[i])) + correction[pos]
        xi_factors.append((e, target_exps, correction))
    return FibredHomogeneousForm(
        fiber_rays, base_rays,
        tuple(sorted((f, tuple(sorted(terms))) for f, terms in groups.items())),
        tuple(xi_factors))

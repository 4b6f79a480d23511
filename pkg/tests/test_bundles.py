import random
from fractions import Fraction

import pytest

from toricfiber import data
from toricfiber.bundles import (LaurentSection, fibred_form,
                                fibred_homogeneous_form, homogeneous_form,
                                is_principal, plf_from_polytope,
                                polytope_from_plf, pullback_bundle,
                                pullback_section_exponent,
                                quotient_surjection,
                                restrict_section_to_orbit_closure,
                                restrict_to_fiber, same_bundle,
                                sections_basis, xi_transition)
from toricfiber.fans import build_fan
from toricfiber.intlinalg import (LatticeMap, kernel_basis, mat_det,
                                  section_of_surjection)
from toricfiber.morphism import FanMap
from toricfiber.polytopes import hull, lattice_points


def cp2_setup():
    fan = build_fan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [2, 0]])
    p = hull([(-1, -1), (2, -1), (-1, 2)])  # anticanonical triangle
    return fan, p


def test_plf_reflexive_anticanonical():
    p = data.section_polytope()
    fan = data.total_fan()
    h = plf_from_polytope(p, fan)
    assert h.is_compatible()
    assert all(h.value(r) == -1 for r in fan.rays)


def test_plf_round_trip():
    p = data.section_polytope()
    h = plf_from_polytope(p, data.total_fan())
    assert polytope_from_plf(h) == p
    fan, tri = cp2_setup()
    assert polytope_from_plf(plf_from_polytope(tri, fan)) == tri


def test_plf_point_is_principal():
    fan, _ = cp2_setup()
    point = hull([(3, -2)])
    h = plf_from_polytope(point, fan)
    assert is_principal(h)
    segment_fan = build_fan(1, [(1,), (-1,)], [[0], [1]])
    seg = hull([(0,), (1,)])
    h = plf_from_polytope(seg, segment_fan)
    assert not is_principal(h)
    assert polytope_from_plf(h) == seg


def test_plf_rejects_non_refining_fan():
    # the quadrant fan does not refine the normal fan of the CP2 triangle
    quad = build_fan(2, [(1, 0), (0, 1), (-1, 0), (0, -1)],
                     [[0, 1], [1, 2], [2, 3], [3, 0]])
    _, tri = cp2_setup()
    with pytest.raises(ValueError):
        plf_from_polytope(tri, quad)


def test_same_bundle_linear_shift():
    fan, tri = cp2_setup()
    h1 = plf_from_polytope(tri, fan)
    shifted = hull([(v[0] + 2, v[1] - 1) for v in tri.vertices])
    h2 = plf_from_polytope(shifted, fan)
    assert same_bundle(h1, h2)
    bigger = hull([(2 * v[0], 2 * v[1]) for v in tri.vertices])
    assert not same_bundle(h1, plf_from_polytope(bigger, fan))


def test_sections_counts():
    assert len(sections_basis(data.section_polytope())) == 3365
    assert len(sections_basis(hull([(4, 4)]))) == 1


def test_restriction_kernel_dimension():
    p = data.section_polytope()
    fan = data.total_fan()
    s = LaurentSection.generic(p)
    for name, survivors in [("c1'", 154), ("e1'", 2), ("v1' e2'", 11)]:
        restricted, _ = restrict_section_to_orbit_closure(
            s, data.total_cone(name), p, fan)
        assert len(restricted) == survivors
        assert len(s) - len(restricted) == 3365 - survivors
    # zero cone: unchanged
    restricted, _ = restrict_section_to_orbit_closure(s, (), p, fan)
    assert len(restricted) == 3365
    # a section supported entirely outside the restriction dies
    outside = LaurentSection.from_dict({(-22, -14, 4, 1, 1): Fraction(1)})
    restricted, _ = restrict_section_to_orbit_closure(
        outside, data.total_cone("c1'"), p, fan)
    assert len(restricted) == 0


def test_pullback_identity_and_constant():
    fan, tri = cp2_setup()
    m = FanMap(LatticeMap.identity(2), fan, fan)
    assert pullback_bundle(m, tri) == tri
    assert pullback_section_exponent(m, (2, -1)) == (2, -1)
    line = build_fan(1, [(1,), (-1,)], [[0], [1]])
    zero = FanMap(LatticeMap.from_rows([[0], [0]]), line, fan)
    assert pullback_bundle(zero, tri) == hull([(0,)])


def test_pullback_commutes_with_fiber_projection():
    # pulling back along the kernel inclusion equals the fiber projection
    m = data.fibration_map()
    p = data.section_polytope()
    ker = kernel_basis(m.phi)
    star = m.relative_star((), ())
    incl = LatticeMap.from_columns(ker)
    gen_fan = star.fan
    inc_map = FanMap(incl, gen_fan, m.source)
    pulled = pullback_bundle(inc_map, p)
    from toricfiber.polytopes import restriction_polytope
    r = restriction_polytope(p, (), m.source)
    proj, _ = m.project_polytope(r, (), ())
    # the restriction chart normalizes by a weight vertex, so the two
    # agree exactly after translating by the pullback of that origin
    shift = pullback_section_exponent(inc_map, r.chart.origin)
    shifted = {tuple(x + s for x, s in zip(pt, shift))
               for pt in lattice_points(proj)}
    assert shifted == set(lattice_points(pulled))


def test_restrict_to_fiber_generic_partition():
    m = data.fibration_map()
    p = data.section_polytope()
    s = LaurentSection.generic(p)
    fs = restrict_to_fiber(s, (), (), m, p)
    sizes = fs.group_sizes()
    assert len(sizes) == 7
    assert sum(sizes.values()) == 3365
    assert sorted(lattice_points(fs.polytope)) == sorted(sizes)


def test_restrict_to_fiber_demonstration():
    m = data.fibration_map()
    p = data.section_polytope()
    s = LaurentSection.generic(p)
    fs = restrict_to_fiber(s, data.total_cone("v1' e2'"),
                           data.base_cone("d4 r1"), m, p)
    assert sorted(fs.group_sizes().values()) == [1, 1, 2, 3, 4]
    zero = LaurentSection.from_dict({})
    fs0 = restrict_to_fiber(zero, data.total_cone("v1' e2'"),
                            data.base_cone("d4 r1"), m, p)
    assert fs0.groups == ()


def test_fibred_form_demonstration():
    m = data.fibration_map()
    p = data.section_polytope()
    s = LaurentSection.generic(p)
    tau, sigma = data.total_cone("v1' e2'"), data.base_cone("d4 r1")
    form = fibred_form(s, tau, sigma, m, p)
    by_size = sorted(len(t) for _, t in form.groups)
    assert by_size == [1, 1, 2, 3, 4]
    # symbolic labels survive the regrouping untouched
    labels = {c for _, terms in form.groups for _, _, c in terms}
    assert len(labels) == 11 and all(isinstance(c, str) for c in labels)


def test_fibred_form_single_term():
    m = data.fibration_map()
    p = data.section_polytope()
    s = LaurentSection.from_dict({(0, 0, 0, 0, 0): Fraction(5)})
    form = fibred_form(s, (), (), m, p)
    assert len(form.groups) == 1
    ((_, terms),) = form.groups
    assert len(terms) == 1


def random_section_on(restriction, rng):
    pts = lattice_points(restriction.polytope)
    amb = {restriction.chart.from_chart(y):
           Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for y in pts}
    return LaurentSection.from_dict(amb)


def test_fibred_form_exact_evaluation():
    from toricfiber.polytopes import restriction_polytope
    m = data.fibration_map()
    p = data.section_polytope()
    rng = random.Random(17)
    tau, sigma = data.total_cone("v1' e2'"), data.base_cone("d4 r1")
    restriction = restriction_polytope(p, tau, m.source)
    for _ in range(10):
        s = random_section_on(restriction, rng)
        form = fibred_form(s, tau, sigma, m, p)
        a = [list(r) for r in form.fiber_matrix] + \
            [list(r) for r in form.base_matrix]
        assert abs(mat_det(a)) == 1
        u = tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9))
                  for _ in form.fiber_matrix)
        w = tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9))
                  for _ in form.base_matrix)
        t = form.chart_point_for(u, w)
        chart_terms = {}
        for _, terms in form.groups:
            for _, y, c in terms:
                chart_terms[y] = c
        lhs = LaurentSection.from_dict(chart_terms).evaluate(t)
        assert lhs == form.evaluate(u, w)


def test_xi_transition_law():
    m = data.fibration_map()
    p = data.section_polytope()
    tau, sigma = data.total_cone("v1' e2'"), data.base_cone("d4 r1")
    phi_bar, _, _ = quotient_surjection(m, tau, sigma)
    xi1 = section_of_surjection(phi_bar)
    ker = kernel_basis(phi_bar)
    xi2 = LatticeMap.from_rows(
        [[xi1.matrix[i][j] + ker[0][i] for j in range(xi1.source_rank)]
         for i in range(xi1.target_rank)])
    s = LaurentSection.generic(p)
    f1 = fibred_form(s, tau, sigma, m, p, xi=xi1)
    f2 = fibred_form(s, tau, sigma, m, p, xi=xi2)
    assert xi_transition(xi1, xi1, f1, f1)
    assert xi_transition(xi1, xi2, f1, f2)
    # fiber groups do not depend on xi at all
    assert [f for f, _ in f1.groups] == [f for f, _ in f2.groups]


def test_fibred_form_rejects_bad_xi():
    m = data.fibration_map()
    p = data.section_polytope()
    tau, sigma = data.total_cone("v1' e2'"), data.base_cone("d4 r1")
    phi_bar, _, _ = quotient_surjection(m, tau, sigma)
    bad = LatticeMap.from_rows([[2] * phi_bar.target_rank]
                               * phi_bar.source_rank)
    s = LaurentSection.generic(p)
    with pytest.raises(ValueError):
        fibred_form(s, tau, sigma, m, p, xi=bad)


def test_homogeneous_cp2_anticanonical():
    fan, tri = cp2_setup()
    s = LaurentSection.generic(tri)
    table = homogeneous_form(s, tri, fan, [1, 1, 1])
    assert len(table.ray_exponents) == 10
    assert all(sum(e) == 3 for _, e in table.ray_exponents)
    assert all(x >= 0 for _, e in table.ray_exponents for x in e)


def test_homogeneous_single_point():
    fan, _ = cp2_setup()
    s = LaurentSection.from_dict({(0, 0): Fraction(1)})
    table = homogeneous_form(s, hull([(0, 0)]), fan, [0, 0, 0])
    assert table.ray_exponents == (((0, 0), (0, 0, 0)),)


def test_homogeneous_rejects_negative_exponent():
    fan, tri = cp2_setup()
    s = LaurentSection.generic(tri)
    with pytest.raises(ValueError):
        homogeneous_form(s, tri, fan, [0, 1, 1])


def test_homogeneous_big_polytope():
    p = data.section_polytope()
    fan = data.total_fan()
    s = LaurentSection.generic(p)
    table = homogeneous_form(s, p, fan, [1] * 13)
    assert len(table.ray_exponents) == 3365
    assert all(x >= 0 for _, e in table.ray_exponents for x in e)


def test_fibred_homogeneous_form():
    m = data.fibration_map()
    p = data.section_polytope()
    s = LaurentSection.generic(p)
    fh = fibred_homogeneous_form(s, p, m, [1] * 13)
    tnames = data.total_ray_names()
    assert {tnames[i] for i in fh.fiber_rays} == {"b'", "v4'", "v5'"}
    assert len(fh.groups) == 7
    assert sum(len(terms) for _, terms in fh.groups) == 3365

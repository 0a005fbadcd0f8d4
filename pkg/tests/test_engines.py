"""Reduction engines: frozen residue reads, profile constants, route
equalities, and the Weyl wrapper.

Hand-derived values used below:
  - two-point circle atlas: Coeff_{y^-1}[exp(iy)/y] = 1
  - e = y^2 variant: Coeff_{y^-1}[exp(iy)/y^2] = i (first Taylor coefficient)
  - quartic point with squared moment length 2: Coeff_{y^-2}[exp(2iy^2)/y^4]
    = 2i (first Taylor coefficient of exp(2iy^2))
  - rank-2 insertion (y1-y2)^4: the y1^2y2^2 coefficient is 6, so the raw
    read of 6/(y1^0y2^0-term) against exp(i y1^2 + 2i y2^2)/(y1^2 y2^2) is 6,
    halved by the Weyl order to 3.
"""

import json
import math
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqloc.atlas import (
    FixedPointAtlas,
    FixedPointDatum,
    GroupSpec,
    RootSystemData,
    builtin_atlas,
    hk_point_atlas,
    hk_torus_rank2_atlas,
    permute_atlas_variables,
    sphere_atlas,
    validate_atlas,
)
from eqloc.engines import (
    PROFILES,
    ConventionProfile,
    ExactValue,
    ReductionReport,
    reduce_hk_circle,
    reduce_hk_circle_viaP,
    reduce_hk_torus,
    reduce_symplectic_circle,
    reduce_symplectic_torus,
    resolve_profile,
    weyl_product,
    weyl_wrap,
)
from eqloc.errors import ValidationError
from eqloc.exact import ComplexRational, LaurentSeries, SymbolicConstant
from eqloc.roots import SU2_ROOTS, U2_ROOTS, group_spec


def cr(re, im=0):
    return ComplexRational.of(Fraction(re), Fraction(im))


def circle_point(name, mu, weights, eta_terms):
    return FixedPointDatum(
        name=name,
        moment=(Fraction(mu),),
        weights=tuple((w,) for w in weights),
        eta=LaurentSeries(("y",), eta_terms),
    )


def circle_atlas(points):
    a = FixedPointAtlas(
        group=GroupSpec.circle(),
        geometry="symplectic",
        dim_m=2,
        dim_quotient=0,
        deg_eta0=0,
        variable_order=("y",),
        fixed_points=tuple(points),
    )
    validate_atlas(a)
    return a


def hk_circle_atlas(points, dim_m=4, deg_eta0=0):
    a = FixedPointAtlas(
        group=GroupSpec.circle(),
        geometry="hyperkahler",
        dim_m=dim_m,
        dim_quotient=dim_m - 4,
        deg_eta0=deg_eta0,
        variable_order=("y",),
        fixed_points=tuple(points),
    )
    validate_atlas(a)
    return a


def hk_point(name, lam_vec, weights, eta_terms):
    return FixedPointDatum(
        name=name,
        moment=(Fraction(0),),
        weights=tuple((w,) for w in weights),
        eta=LaurentSeries(("y",), eta_terms),
        moment_hk=(tuple(Fraction(x) for x in lam_vec),),
    )


# -- profiles ------------------------------------------------------------


def test_default_profile_constants():
    p = PROFILES["default"]
    assert p.vol_circle == SymbolicConstant(Fraction(2), pi_pow=1)
    assert p.prefactor_symplectic_circle == SymbolicConstant(
        Fraction(1, 4), pi_pow=-2
    )
    assert p.prefactor_hk_circle == SymbolicConstant(
        Fraction(-1, 24), pi_pow=-2, sqrt2_pow=1
    )
    assert p.prefactor("symplectic", 2) == SymbolicConstant(Fraction(1, 16), pi_pow=-4)
    assert p.prefactor("hyperkahler", 2) == SymbolicConstant(Fraction(1, 288), pi_pow=-4)
    assert abs(p.prefactor_hk_circle.numeric_value() + math.sqrt(2) / (24 * math.pi**2)) < 1e-15


def test_unit_volume_profile():
    p = PROFILES["unit_volume"]
    assert p.prefactor_symplectic_circle == SymbolicConstant(Fraction(1, 2), pi_pow=-1)
    assert p.prefactor_hk_circle == SymbolicConstant(
        Fraction(-1, 12), pi_pow=-1, sqrt2_pow=1
    )


def test_resolve_profile():
    assert resolve_profile() is PROFILES["default"]
    assert resolve_profile("unit_volume") is PROFILES["unit_volume"]
    p = PROFILES["default"]
    assert resolve_profile(p) is p
    with pytest.raises(ValidationError):
        resolve_profile("nope")
    with pytest.raises(ValidationError):
        resolve_profile(3.5)


def test_profile_invariants_enforced():
    with pytest.raises(ValidationError):
        ConventionProfile(
            "bad",
            SymbolicConstant(Fraction(-1)),
            SymbolicConstant(Fraction(1)),
            SymbolicConstant(Fraction(1)),
        )
    with pytest.raises(ValidationError):
        ConventionProfile(
            "bad",
            SymbolicConstant(Fraction(1)),
            SymbolicConstant(Fraction(0)),
            SymbolicConstant(Fraction(1)),
        )


# -- symplectic circle ---------------------------------------------------


def test_sphere_reduction_default_profile():
    rep = reduce_symplectic_circle(sphere_atlas())
    assert rep.raw_coefficient == cr(1)
    assert rep.degree_factor == 1
    assert rep.prefactor == SymbolicConstant(Fraction(1, 4), pi_pow=-2)
    assert rep.quotient_integral.coeff == cr(1)
    assert abs(rep.quotient_integral.numeric() - 1 / (4 * math.pi**2)) < 1e-15
    assert [(p.name, p.selected) for p in rep.contributions] == [
        ("north", True),
        ("south", False),
    ]
    assert rep.contributions[0].coefficient == cr(1)
    assert rep.contributions[1].coefficient == cr(0)


def test_sphere_reduction_unit_volume():
    rep = reduce_symplectic_circle(sphere_atlas(), "unit_volume")
    assert rep.raw_coefficient == cr(1)
    assert abs(rep.quotient_integral.numeric() - 1 / (2 * math.pi)) < 1e-15


def test_regular_integrand_gives_zero():
    a = circle_atlas([circle_point("p", 2, [1], {(1,): cr(1)})])
    assert reduce_symplectic_circle(a).raw_coefficient == cr(0)


def test_double_weight_reads_taylor_coefficient():
    a = circle_atlas([circle_point("p", 1, [1, 1], {(0,): cr(1)})])
    assert reduce_symplectic_circle(a).raw_coefficient == cr(0, 1)


def test_negative_moment_point_is_skipped():
    a = circle_atlas(
        [
            circle_point("neg", -1, [-1], {(0,): cr(7)}),
        ]
    )
    rep = reduce_symplectic_circle(a)
    assert rep.raw_coefficient == cr(0)
    assert rep.contributions[0].selected is False


def test_zero_eta_gives_zero():
    a = circle_atlas([circle_point("p", 1, [1], {})])
    assert reduce_symplectic_circle(a).raw_coefficient == cr(0)


def test_extra_order_does_not_change_report():
    a = builtin_atlas("mirror_pair", seed=7)
    r0 = reduce_symplectic_circle(a)
    r3 = reduce_symplectic_circle(a, order=3)
    assert r0.canonical_json() == r3.canonical_json()
    with pytest.raises(ValidationError):
        reduce_symplectic_circle(a, order=-1)


# -- symplectic torus ----------------------------------------------------


def product_of_spheres_atlas():
    variables = ("y1", "y2")
    one = LaurentSeries.const(variables, 1)
    points = []
    for s1, n1 in ((1, "N"), (-1, "S")):
        for s2, n2 in ((1, "N"), (-1, "S")):
            points.append(
                FixedPointDatum(
                    name=n1 + n2,
                    moment=(Fraction(s1), Fraction(s2)),
                    weights=((s1, 0), (0, s2)),
                    eta=one,
                )
            )
    a = FixedPointAtlas(
        group=GroupSpec.torus(2),
        geometry="symplectic",
        dim_m=4,
        dim_quotient=0,
        deg_eta0=0,
        variable_order=variables,
        fixed_points=tuple(points),
    )
    validate_atlas(a)
    return a


def test_product_atlas_selects_all_positive_corner():
    rep = reduce_symplectic_torus(product_of_spheres_atlas())
    assert rep.raw_coefficient == cr(1)
    assert [(p.name, p.selected) for p in rep.contributions] == [
        ("NN", True),
        ("NS", False),
        ("SN", False),
        ("SS", False),
    ]
    assert rep.prefactor == SymbolicConstant(Fraction(1, 16), pi_pow=-4)
    assert abs(rep.quotient_integral.numeric() - 1 / (16 * math.pi**4)) < 1e-18


def test_mixed_sign_moment_gives_zero_not_error():
    a = product_of_spheres_atlas()
    only_mixed = replace(a, fixed_points=(a.fixed_points[1],))
    rep = reduce_symplectic_torus(only_mixed)
    assert rep.raw_coefficient == cr(0)


def test_empty_atlas_rejected():
    a = replace(sphere_atlas(), fixed_points=())
    with pytest.raises(ValidationError):
        reduce_symplectic_circle(a)


def test_geometry_and_rank_guards():
    with pytest.raises(ValidationError):
        reduce_symplectic_circle(hk_point_atlas())
    with pytest.raises(ValidationError):
        reduce_hk_circle(sphere_atlas())
    with pytest.raises(ValidationError):
        reduce_hk_circle(hk_torus_rank2_atlas())
    with pytest.raises(ValidationError):
        reduce_symplectic_circle(product_of_spheres_atlas())


# -- hyperkahler ---------------------------------------------------------


def test_hk_constant_over_quadratic():
    a = hk_circle_atlas([hk_point("p", (1, 0, 0), [1, 2], {(0,): cr(3)})])
    rep = reduce_hk_circle(a)
    assert rep.raw_coefficient == cr(Fraction(3, 2))
    assert rep.degree_factor == 1
    assert rep.quotient_integral.coeff == cr(Fraction(3, 2))


def test_hk_quartic_with_quadratic_eta_and_degree_factor():
    a = hk_circle_atlas(
        [hk_point("p", (0, 1, 0), [1, 1, 1, 3], {(2,): cr(5)})],
        dim_m=8,
        deg_eta0=2,
    )
    rep = reduce_hk_circle(a)
    assert rep.raw_coefficient == cr(Fraction(5, 3))
    assert rep.degree_factor == 3  # 4 - 2 + 1
    assert rep.quotient_integral.coeff == cr(Fraction(5, 9))


def test_hk_point_atlas_report():
    rep = reduce_hk_circle(hk_point_atlas())
    assert rep.raw_coefficient == cr(0, 2)
    assert rep.degree_factor == 5
    assert rep.quotient_integral.coeff == cr(0, Fraction(2, 5))
    expected = (2 / 5) * (-math.sqrt(2) / (24 * math.pi**2))
    assert abs(rep.quotient_integral.numeric() - complex(0, expected)) < 1e-15


def test_degree_factor_law():
    base = hk_point_atlas()
    reports = [
        reduce_hk_circle(replace(base, deg_eta0=d)) for d in range(0, 5)
    ]
    for rep, d in zip(reports, range(0, 5)):
        assert rep.raw_coefficient == reports[0].raw_coefficient
        assert rep.degree_factor == 5 - d
        scaled = rep.quotient_integral.coeff * cr(rep.degree_factor)
        assert scaled == reports[0].quotient_integral.coeff * cr(5)


def test_hk_rank2_report():
    rep = reduce_hk_torus(hk_torus_rank2_atlas())
    assert rep.raw_coefficient == cr(1)
    assert rep.prefactor == SymbolicConstant(Fraction(1, 288), pi_pow=-4)
    assert abs(rep.quotient_integral.numeric() - 1 / (288 * math.pi**4)) < 1e-18


def test_rank2_separable_product_of_circle_reads():
    # factor the two blocks of the separable atlas into rank-1 atlases and
    # compare the product of their raw reads with the rank-2 read
    rank2 = hk_torus_rank2_atlas()
    rep2 = reduce_hk_torus(rank2)
    f1 = hk_circle_atlas([hk_point("a", (1, 0, 0), [1, 1], {(0,): cr(1)})])
    f2 = hk_circle_atlas([hk_point("b", (0, 1, 1), [1, 1], {(0,): cr(1)})])
    r1 = reduce_hk_circle(f1).raw_coefficient
    r2 = reduce_hk_circle(f2).raw_coefficient
    assert rep2.raw_coefficient == r1 * r2


@given(st.integers(0, 200))
@settings(max_examples=30, deadline=None)
def test_torus_rank1_degenerates_to_circle_bitwise(seed):
    a = builtin_atlas("hk_synthetic", seed=seed)
    rc = reduce_hk_circle(a)
    rt = reduce_hk_torus(a)
    assert rc.canonical_json() == rt.canonical_json()
    assert rc.path != rt.path


@given(st.integers(0, 200))
@settings(max_examples=30, deadline=None)
def test_even_part_route_matches_direct_bitwise(seed):
    a = builtin_atlas("hk_synthetic", seed=seed)
    direct = reduce_hk_circle(a)
    via = reduce_hk_circle_viaP(a)
    assert direct.canonical_json() == via.canonical_json()


def test_even_part_route_on_quartic_point():
    direct = reduce_hk_circle(hk_point_atlas())
    via = reduce_hk_circle_viaP(hk_point_atlas())
    assert via.raw_coefficient == cr(0, 2)
    assert direct.canonical_json() == via.canonical_json()


def test_odd_eta_killed_by_even_projector_both_routes():
    a = hk_circle_atlas([hk_point("p", (1, 0, 0), [1, 1], {(1,): cr(4)})])
    assert reduce_hk_circle(a).raw_coefficient == cr(0)
    assert reduce_hk_circle_viaP(a).raw_coefficient == cr(0)


@given(st.integers(0, 150), st.sampled_from([2, 3, Fraction(1, 2), Fraction(-3, 2)]))
@settings(max_examples=25, deadline=None)
def test_engines_linear_in_eta(seed, c):
    a = builtin_atlas("hk_synthetic", seed=seed)
    scaled = replace(
        a,
        fixed_points=tuple(
            replace(fp, eta=fp.eta.scale(Fraction(c))) for fp in a.fixed_points
        ),
    )
    assert reduce_hk_circle(scaled).raw_coefficient == reduce_hk_circle(
        a
    ).raw_coefficient * cr(Fraction(c))


def test_eta_mode_one_probe():
    a = hk_circle_atlas([hk_point("p", (1, 0, 0), [1, 2], {(0,): cr(3)})])
    rep = reduce_hk_circle(a, eta_mode="one")
    assert rep.raw_coefficient == cr(Fraction(1, 2))
    assert rep.eta_mode == "one"


# -- variable-order permutation -----------------------------------------


def test_permuted_extraction_order_same_raw():
    a = hk_torus_rank2_atlas()
    b = permute_atlas_variables(a, ("y2", "y1"))
    validate_atlas(b)
    ra = reduce_hk_torus(a)
    rb = reduce_hk_torus(b)
    assert ra.raw_coefficient == rb.raw_coefficient
    assert rb.variable_order == ("y2", "y1")
    with pytest.raises(ValidationError):
        permute_atlas_variables(a, ("y1", "z"))


def test_permuted_symplectic_torus():
    a = product_of_spheres_atlas()
    b = permute_atlas_variables(a, ("y2", "y1"))
    assert (
        reduce_symplectic_torus(a).raw_coefficient
        == reduce_symplectic_torus(b).raw_coefficient
    )


# -- Weyl wrapper --------------------------------------------------------


def test_weyl_product_shapes():
    assert weyl_product(("y",), SU2_ROOTS).canonical_text() == "(2,0) y^1"
    assert weyl_product(("y1", "y2"), U2_ROOTS).canonical_text() == "(-1,0) y2^1 + (1,0) y1^1"
    with pytest.raises(ValidationError):
        weyl_product(("y",), U2_ROOTS)
    with pytest.raises(ValidationError):
        weyl_product(("y",), RootSystemData(((0,),), 1))


def su2_quartic_atlas():
    fp = FixedPointDatum(
        name="origin",
        moment=(Fraction(0),),
        weights=((1,), (1,), (1,), (1,)),
        eta=LaurentSeries.const(("y",), 1),
        moment_hk=((Fraction(1), Fraction(0), Fraction(0)),),
    )
    a = FixedPointAtlas(
        group=group_spec("SU(2)"),
        geometry="hyperkahler",
        dim_m=16,
        dim_quotient=4,
        deg_eta0=0,
        variable_order=("y",),
        fixed_points=(fp,),
    )
    validate_atlas(a)
    return a


def test_weyl_trivial_is_identity():
    trivial = RootSystemData((), 1)
    a = builtin_atlas("hk_synthetic", seed=3)
    assert weyl_wrap(a, trivial) == reduce_hk_torus(a)
    assert weyl_wrap(sphere_atlas(), trivial) == reduce_symplectic_torus(sphere_atlas())


def test_weyl_su2_insertion():
    rep = weyl_wrap(su2_quartic_atlas())
    assert rep.inserted_polynomial == "(16,0) y^4"
    assert rep.weyl_divisor == 2
    assert rep.raw_coefficient == cr(0)
    assert rep.quotient_integral.coeff == cr(0)
    assert rep.degree_factor == 5


def test_weyl_matches_hand_composed_pipeline():
    a = su2_quartic_atlas()
    wrapped = weyl_wrap(a)
    insert = LaurentSeries.monomial(("y",), (4,), 16)
    manual_atlas = replace(
        a,
        fixed_points=tuple(
            replace(fp, eta=fp.eta * insert) for fp in a.fixed_points
        ),
    )
    manual = reduce_hk_torus(manual_atlas)
    assert wrapped.raw_coefficient == manual.raw_coefficient * cr(Fraction(1, 2))
    assert wrapped.quotient_integral.coeff == manual.quotient_integral.coeff * cr(
        Fraction(1, 2)
    )


@given(st.integers(0, 120))
@settings(max_examples=15, deadline=None)
def test_weyl_pipeline_on_seeded_atlases(seed):
    base = builtin_atlas("hk_synthetic", seed=seed)
    a = replace(base, group=group_spec("SU(2)"), dim_m=base.dim_m + 8)
    validate_atlas(a)
    wrapped = weyl_wrap(a)
    insert = LaurentSeries.monomial(("y",), (4,), 16)
    manual_atlas = replace(
        a,
        fixed_points=tuple(
            replace(fp, eta=fp.eta * insert) for fp in a.fixed_points
        ),
    )
    manual = reduce_hk_torus(manual_atlas)
    assert wrapped.raw_coefficient == manual.raw_coefficient * cr(Fraction(1, 2))
    assert wrapped.degree_factor == manual.degree_factor


def test_weyl_u2_rank2():
    # pole y1^4 y2^4: the (-2,-2) read picks the y1^2y2^2 term of
    # (y1-y2)^4 * exp(...), namely 6 * 1, then the Weyl order halves it
    fp = FixedPointDatum(
        name="deep",
        moment=(Fraction(0), Fraction(0)),
        weights=((1, 0),) * 4 + ((0, 1),) * 4,
        eta=LaurentSeries.const(("y1", "y2"), 1),
        moment_hk=(
            (Fraction(1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(1), Fraction(1)),
        ),
    )
    a = FixedPointAtlas(
        group=group_spec("U(2)"),
        geometry="hyperkahler",
        dim_m=16,
        dim_quotient=0,
        deg_eta0=0,
        variable_order=("y1", "y2"),
        fixed_points=(fp,),
    )
    validate_atlas(a)
    rep = weyl_wrap(a)
    assert rep.weyl_divisor == 2
    assert rep.raw_coefficient == cr(3)
    assert rep.quotient_integral.coeff == cr(3)
    assert abs(rep.quotient_integral.numeric() - 3 / (288 * math.pi**4)) < 1e-18
    assert "y1^2 y2^2" in rep.inserted_polynomial


def test_weyl_requires_roots_and_hk():
    with pytest.raises(ValidationError):
        weyl_wrap(sphere_atlas())
    with pytest.raises(ValidationError):
        weyl_wrap(sphere_atlas(), SU2_ROOTS)
    with pytest.raises(ValidationError):
        weyl_wrap(su2_quartic_atlas(), RootSystemData(((2,),), 0))


# -- reports -------------------------------------------------------------


def test_report_json_shapes():
    rep = reduce_symplectic_circle(sphere_atlas())
    doc = rep.to_json_dict()
    assert doc["path"] == "symplectic_circle"
    canon = json.loads(rep.canonical_json())
    assert "path" not in canon
    assert canon["raw_coefficient"] == {"re": [1, 1], "im": [0, 1]}
    assert canon["profile"]["name"] == "default"
    assert canon["quotient_integral"]["numeric"][0] == pytest.approx(
        1 / (4 * math.pi**2), rel=1e-15
    )
    assert rep.canonical_json().endswith("\n")


def test_report_invariant_quotient_equals_prefactor_times_raw():
    for rep in (
        reduce_symplectic_circle(sphere_atlas()),
        reduce_hk_circle(hk_point_atlas()),
        weyl_wrap(su2_quartic_atlas()),
    ):
        lhs = rep.quotient_integral.numeric() * rep.degree_factor
        rhs = rep.prefactor.numeric_value() * complex(rep.raw_coefficient)
        assert abs(lhs - rhs) < 1e-15


def test_table_text_renders():
    rep = reduce_symplectic_circle(sphere_atlas())
    txt = rep.table_text()
    assert "raw coefficient" in txt
    assert "north" in txt
    txt2 = weyl_wrap(su2_quartic_atlas()).table_text()
    assert "inserted" in txt2

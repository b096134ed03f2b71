from fractions import Fraction

import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from k3strata.errors import InvalidKummerParams, InvalidSlopeProfile
from k3strata.kummer import (
    NUM_PARTS,
    AbelianSlopeProfile,
    AbelianType,
    GeneralSurface,
    KummerParams,
    MinEllipticIntersection,
    NonProduct,
    audit_printed_slopes,
    check_ampleness,
    kummer_slopes,
    minimal_dprime,
    minimal_dprime_for_bound,
    polarization_degree,
    self_intersection_on_blowup,
    seshadri_elliptic_bound_holds,
    seshadri_generic_bound_holds,
    stratum_image,
    variant_from_name,
)
from k3strata.polygon import INFINITE, HeightValue, height_of, stratum_of

ODD_PARTS = (1,) + (2,) * 15


def test_ordinary_profile_gives_height_one():
    polygon = kummer_slopes(AbelianSlopeProfile.ordinary())
    assert height_of(polygon) == HeightValue(1)
    assert polygon.segments == ((Fraction(0), 1), (Fraction(1), 20), (Fraction(2), 1))


def test_p_rank_one_profile_gives_height_two_with_top_slopes_three_halves():
    polygon = kummer_slopes(AbelianSlopeProfile.p_rank_one())
    assert height_of(polygon) == HeightValue(2)
    assert polygon.max_slope == Fraction(3, 2)
    assert polygon.multiplicity("3/2") == 2
    assert polygon.multiplicity("3/4") == 0


def test_supersingular_profile_gives_all_ones():
    polygon = kummer_slopes(AbelianSlopeProfile.supersingular())
    assert polygon.segments == ((Fraction(1), 22),)
    assert height_of(polygon) == INFINITE


def test_printed_slopes_audit():
    audit = audit_printed_slopes()
    assert audit["printed_valid"] is False
    assert audit["printed_error"] == "SymmetryViolation"
    assert audit["computed_height"] == 2
    assert "3/4" in audit["printed"]


@pytest.mark.parametrize("slopes", [("0", "0", "0", "1"), ("1", "1/2", "1/2", "0"), ("0", "1")])
def test_invalid_profiles(slopes):
    with pytest.raises(InvalidSlopeProfile):
        AbelianSlopeProfile(slopes)


def test_profile_parse_and_types():
    profile = AbelianSlopeProfile.parse("1, 1/2, 0, 1/2")
    assert profile == AbelianSlopeProfile.p_rank_one()
    assert profile.p_rank == 1
    assert profile.abelian_type() is AbelianType.P_RANK_ONE
    assert AbelianSlopeProfile.supersingular().abelian_type(superspecial=False) is AbelianType.SUPERSINGULAR_NON_SUPERSPECIAL
    assert profile.to_json() == ["0", "1/2", "1/2", "1"]


def test_degree_of_general_family():
    params = KummerParams.uniform(9, 26, 1)
    assert polarization_degree(params) == 4196
    assert self_intersection_on_blowup(params) == 4 * 4196


@settings(max_examples=10000)
@given(
    st.integers(1, 50),
    st.integers(1, 1000),
    st.lists(st.integers(1, 25), min_size=NUM_PARTS, max_size=NUM_PARTS),
)
def test_self_intersection_is_four_times_degree(n, dprime, parts):
    params = KummerParams(n, dprime, tuple(parts))
    assert self_intersection_on_blowup(params) == 4 * polarization_degree(params)


def test_degree_may_be_non_positive():
    params = KummerParams.uniform(1, 1, 2)
    assert polarization_degree(params) == 2 - 64
    assert not check_ampleness(params).positivity_ok


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 9, "dprime": 26, "parts": (1,) * 15},
        {"n": 0, "dprime": 26, "parts": (1,) * 16},
        {"n": 9, "dprime": -1, "parts": (1,) * 16},
        {"n": 9, "dprime": 26, "parts": (0,) + (1,) * 15},
        {"n": True, "dprime": 26, "parts": (1,) * 16},
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(InvalidKummerParams):
        KummerParams(**kwargs)


def test_params_helpers():
    params = KummerParams.uniform(9, 26, 1).with_part(3, 4)
    assert params.parts[3] == 4
    assert params.sum_of_squares == 15 + 16
    assert KummerParams.from_dict(params.to_dict()) == params
    with pytest.raises(InvalidKummerParams):
        KummerParams.from_dict({"n": 9})


def test_general_family_is_ample():
    report = check_ampleness(KummerParams.uniform(9, 26, 4), NonProduct())
    assert report.ample
    assert report.degree == 4212 - 256
    assert report.failures() == []


def test_even_family_fails_both_branches():
    report = check_ampleness(KummerParams.uniform(1, 32, 1), MinEllipticIntersection(3))
    assert report.degree == 48
    assert report.positivity_ok
    assert not report.ample
    assert report.failures() == ["elliptic", "generic"]


def test_odd_family_is_ample():
    report = check_ampleness(KummerParams(1, 512, ODD_PARTS), MinEllipticIntersection(9))
    assert report.degree == 963
    assert report.ample
    assert report.to_dict()["d"] == 963


def test_bounds_are_strict():
    # 64 * 1 < 64 * d' fails exactly at d' = 1
    assert not seshadri_generic_bound_holds(KummerParams.uniform(8, 1, 1), 0)
    assert seshadri_generic_bound_holds(KummerParams.uniform(8, 2, 1), 0)
    # 4 * 1 < 2 * m fails exactly at m = 2
    assert not seshadri_elliptic_bound_holds(KummerParams.uniform(2, 1, 1), 0, NonProduct())
    assert seshadri_elliptic_bound_holds(KummerParams.uniform(2, 1, 1), 0, MinEllipticIntersection(3))


def test_minimal_dprime_for_general_family():
    assert minimal_dprime_for_bound(9, 4, NonProduct()) == 13
    assert check_ampleness(KummerParams.uniform(9, 13, 4), NonProduct()).ample
    assert not check_ampleness(KummerParams.uniform(9, 12, 4), NonProduct()).ample


def test_minimal_dprime_for_odd_family():
    assert minimal_dprime(1, ODD_PARTS, MinEllipticIntersection(9)) == 257


def test_minimal_dprime_none_when_elliptic_branch_fails():
    assert minimal_dprime(1, (1,) * 16, MinEllipticIntersection(3)) is None
    assert minimal_dprime_for_bound(9, 4, GeneralSurface()) is None


@given(
    st.integers(1, 30),
    st.lists(st.integers(1, 10), min_size=NUM_PARTS, max_size=NUM_PARTS),
    st.integers(1, 50),
)
def test_minimal_dprime_is_minimal(n, parts, m):
    variant = MinEllipticIntersection(m)
    dprime = minimal_dprime(n, parts, variant)
    if dprime is None:
        assert not check_ampleness(KummerParams(n, 10 ** 6, tuple(parts)), variant).elliptic_branch_ok
        return
    assert check_ampleness(KummerParams(n, dprime, tuple(parts)), variant).ample
    if dprime > 1:
        assert not check_ampleness(KummerParams(n, dprime - 1, tuple(parts)), variant).ample


def test_variants():
    assert variant_from_name("non-product") == NonProduct()
    assert variant_from_name("general_surface").m == 1
    assert variant_from_name("min_elliptic_intersection", 5) == MinEllipticIntersection(5)
    assert NonProduct().to_dict() == {"variant": "non_product", "m": 2}
    with pytest.raises(InvalidKummerParams):
        variant_from_name("min_elliptic_intersection")
    with pytest.raises(InvalidKummerParams):
        GeneralSurface(m=3)
    with pytest.raises(InvalidKummerParams):
        variant_from_name("unknown")


def test_stratum_images():
    assert stratum_image(AbelianType.ORDINARY) == stratum_of(1)
    assert stratum_image(AbelianType.P_RANK_ONE) == stratum_of(2)
    assert stratum_image(AbelianType.SUPERSPECIAL).name() == "Sigma(10)"
    assert stratum_image(AbelianType.SUPERSINGULAR_NON_SUPERSPECIAL) == stratum_of(INFINITE, 2)


ampleness_variants = st.one_of(
    st.just(GeneralSurface()),
    st.just(NonProduct()),
    st.integers(2, 60).map(MinEllipticIntersection),
)


@settings(max_examples=1000)
@given(
    st.integers(1, 30),
    st.integers(1, 2000),
    st.lists(st.integers(1, 4), min_size=NUM_PARTS, max_size=NUM_PARTS),
    ampleness_variants,
    st.integers(0, NUM_PARTS - 1),
    st.integers(1, 500),
)
@example(9, 13, [4] * NUM_PARTS, NonProduct(), 0, 1)
@example(1, 512, list(ODD_PARTS), MinEllipticIntersection(9), 1, 7)
def test_ampleness_survives_smaller_parts_and_larger_dprime(n, dprime, parts, variant, j, extra):
    params = KummerParams(n, dprime, tuple(parts))
    if not check_ampleness(params, variant).ample:
        return
    assert check_ampleness(KummerParams(n, dprime + extra, tuple(parts)), variant).ample
    if parts[j] > 1:
        assert check_ampleness(params.with_part(j, parts[j] - 1), variant).ample


@settings(max_examples=1000)
@given(
    st.integers(1, 60),
    st.integers(1, 2000),
    st.lists(st.integers(1, 4), min_size=NUM_PARTS, max_size=NUM_PARTS),
    st.integers(2, 60),
)
@example(40, 26, [1] * NUM_PARTS, 2)
def test_general_surface_ampleness_implies_other_variants(n, dprime, parts, m):
    params = KummerParams(n, dprime, tuple(parts))
    if check_ampleness(params, GeneralSurface()).ample:
        assert check_ampleness(params, NonProduct()).ample
        assert check_ampleness(params, MinEllipticIntersection(m)).ample
    if check_ampleness(params, NonProduct()).ample:
        assert check_ampleness(params, MinEllipticIntersection(m)).ample

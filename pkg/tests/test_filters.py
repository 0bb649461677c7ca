import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import wavewalk as ww
from wavewalk.filters import check_lowpass, check_partition, check_quadrature

from conftest import quadrature_family


def test_response_haar_values(haar):
    assert ww.eval_response(haar, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert abs(ww.eval_response(haar, 0.5)) < 1e-15


def test_response_d4_at_zero(d4):
    assert ww.eval_response(d4, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_weight_haar_third(haar):
    # |(1 + exp(-i 2 pi / 3)) / 2|^2 = cos^2(pi/3) = 1/4
    assert ww.eval_weight(haar, 1 / 3) == pytest.approx(0.25, abs=1e-14)


def test_weight_shannon_lookup(shannon):
    assert ww.eval_weight(shannon, 0.1) == 1.0
    assert ww.eval_weight(shannon, 0.3) == 0.0
    assert ww.eval_weight(shannon, 0.8) == 1.0
    assert ww.eval_weight(shannon, 1.1) == ww.eval_weight(shannon, 0.1)


def test_weight_highpass_at_zero(highpass):
    assert ww.eval_weight(highpass, 0.0) == pytest.approx(0.0, abs=1e-30)


@given(x=st.floats(min_value=-5, max_value=5, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_periodicity(x):
    spec = ww.load_gallery("d4")
    assert abs(ww.eval_response(spec, x) - ww.eval_response(spec, x + 1)) < 1e-11
    assert abs(ww.eval_weight(spec, x) - ww.eval_weight(spec, x + 1)) < 1e-11


@pytest.mark.parametrize("name", ww.GALLERY_NAMES)
def test_weight_array_matches_scalar(name):
    spec = ww.load_gallery(name)
    xs = np.linspace(-2.0, 3.0, 997)
    vec = ww.weight_array(spec, xs)
    sca = np.array([ww.eval_weight(spec, float(x)) for x in xs])
    assert np.max(np.abs(vec - sca)) < 5e-15
    assert vec.min() >= 0.0


def test_partition_haar(haar):
    rep = check_partition(haar, grid_level=8)
    assert rep.partition_max_error < 1e-12
    assert rep.verdicts["partition"]


def test_partition_stretched_haar_level10(stretched):
    # cos^2(3 pi x / 2) + cos^2(3 pi (x+1) / 2) = 1
    rep = check_partition(stretched, grid_level=10)
    assert rep.partition_max_error < 1e-12


def test_partition_constant_04_fails():
    spec = ww.FilterSpec.from_table([0.0], [0.4], label="w04")
    rep = check_partition(spec, grid_level=6)
    assert rep.partition_max_error == pytest.approx(0.2, abs=1e-15)
    assert not rep.verdicts["partition"]


def test_partition_shannon_exact(shannon):
    assert check_partition(shannon, grid_level=10).partition_max_error == 0.0


def test_quadrature_haar_d4(haar, d4):
    assert check_quadrature(haar).quadrature_max_error < 1e-15
    assert check_quadrature(d4).quadrature_max_error < 1e-12


def test_quadrature_rejects():
    bad = ww.FilterSpec.from_coefficients({0: 0.6, 1: 0.4})
    rep = check_quadrature(bad)
    assert not rep.verdicts["quadrature"]
    n3 = ww.FilterSpec.from_coefficients({0: 0.5, 1: 0.5}, scale_n=3)
    with pytest.raises(ww.UnsupportedScale):
        check_quadrature(n3)
    with pytest.raises(ww.FilterKindError):
        check_quadrature(ww.load_gallery("shannon"))


def test_lowpass(haar, d4, highpass):
    assert check_lowpass(haar).lowpass_error == 0.0
    assert check_lowpass(d4).lowpass_error < 1e-15
    rep = check_lowpass(highpass)
    assert rep.lowpass_error == pytest.approx(1.0, abs=1e-15)
    assert not rep.verdicts["lowpass"]


@given(theta=st.floats(min_value=0.01, max_value=6.27))
@settings(max_examples=25, deadline=None)
def test_quadrature_family_partition(theta):
    # quadrature implies the weight is a partition of unity
    spec = quadrature_family(theta)
    assert check_quadrature(spec).quadrature_max_error < 1e-12
    assert check_partition(spec, grid_level=8).partition_max_error <= 1e-10


def test_quadrature_family_partition_level12():
    spec = quadrature_family(1.234)
    assert check_partition(spec, grid_level=12).partition_max_error <= 1e-10


def test_high_pass_haar(haar):
    hp = ww.high_pass(haar)
    assert dict(hp.coeffs) == {0: pytest.approx(-0.5), 1: pytest.approx(0.5)}


def test_high_pass_zero_mean(d4):
    hp = ww.high_pass(d4)
    assert abs(sum(v for _, v in hp.coeffs)) < 1e-15
    assert len(hp.coeffs) == 4


def test_high_pass_index_remap(stretched):
    hp = ww.high_pass(stretched)
    assert sorted(k for k, _ in hp.coeffs) == [-2, 1]


@given(
    values=st.lists(
        st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
        min_size=4,
        max_size=4,
    )
)
@settings(max_examples=50, deadline=None)
def test_high_pass_involution(values):
    spec = ww.FilterSpec.from_coefficients(dict(enumerate(values, start=-1)))
    twice = ww.high_pass(ww.high_pass(spec))
    assert dict(twice.coeffs) == {
        k: pytest.approx(-v, abs=1e-15) for k, v in spec.coeffs
    }


def test_validate_filter_merges(d4, shannon):
    rep = ww.validate_filter(d4)
    assert set(rep.verdicts) == {"partition", "quadrature", "lowpass"}
    assert rep.all_ok
    rep = ww.validate_filter(shannon)
    assert set(rep.verdicts) == {"partition"}


@pytest.mark.parametrize("name", ww.GALLERY_NAMES)
def test_json_round_trip(name):
    spec = ww.load_gallery(name)
    again = ww.FilterSpec.from_json_dict(spec.to_json_dict())
    assert again == spec


def test_json_schema_errors():
    with pytest.raises(ValueError):
        ww.FilterSpec.from_json_dict({"scale_N": 2})
    with pytest.raises(ValueError):
        ww.FilterSpec.from_json_dict(
            {
                "scale_N": 2,
                "coeffs": [{"k": 0, "re": 1.0}],
                "w_table": {"breakpoints": [0.0], "values": [1.0]},
            }
        )


def test_spec_invariants():
    with pytest.raises(ValueError):
        ww.FilterSpec.from_coefficients({0: 1.0}, scale_n=1)
    with pytest.raises(ValueError):
        ww.FilterSpec.from_table([0.0], [1.5])
    with pytest.raises(ValueError):
        ww.FilterSpec.from_table([0.1, 0.5], [1.0, 0.0])
    with pytest.raises(ww.FilterKindError):
        ww.eval_response(ww.load_gallery("shannon"), 0.0)


def test_gallery_files_parse():
    for name in ww.GALLERY_NAMES:
        doc = json.loads(ww.gallery_path(name).read_text())
        spec = ww.FilterSpec.from_json_dict(doc)
        assert spec.label == name
    s3 = math.sqrt(3.0)
    d4 = ww.load_gallery("d4")
    assert dict(d4.coeffs)[0].real == pytest.approx((1 + s3) / 8, abs=1e-16)

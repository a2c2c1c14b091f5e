import math

import numpy as np
import pytest

from expoapprox import (
    ExpoPolyTerm, FrequencySet, SignFunction, build_basis, linear_fit, phi,
    phi_cluster, phi_map, phi_sign_cluster_axis, phi_sign_one_freq
)
from expoapprox.exceptions import InvalidArgumentsError
from expoapprox.objective import _merge_nearest

V0 = 0.742019
PHI_MIN = 0.4749383


@pytest.fixture
def sign():
    return SignFunction()


def test_basis_of_separated_frequencies():
    basis = build_basis(FrequencySet([1j, -1j]))
    assert list(basis) == [ExpoPolyTerm(0, 1j), ExpoPolyTerm(0, -1j)]


def test_basis_of_doubled_frequency():
    basis = build_basis(FrequencySet([0.5j, 0.5j]))
    assert list(basis) == [ExpoPolyTerm(0, 0.5j), ExpoPolyTerm(1, 0.5j)]


def test_basis_merges_at_centroid():
    basis = build_basis(FrequencySet([0, 1e-9]))
    assert [term.degree for term in basis] == [0, 1]
    for term in basis:
        assert term.lam == pytest.approx(5e-10, abs=1e-24)


def test_basis_merges_transitively():
    tol = 1e-3
    basis = build_basis(FrequencySet([0, 0.8e-3, 1.6e-3, 2j], cluster_tol=tol))
    assert [term.degree for term in basis] == [0, 1, 2, 0]
    assert basis[0].lam == pytest.approx(0.8e-3, abs=1e-15)
    assert basis[3].lam == 2j


def test_frequency_set_validation():
    with pytest.raises(InvalidArgumentsError):
        FrequencySet([])
    with pytest.raises(InvalidArgumentsError) as excinfo:
        FrequencySet([1j], cluster_tol=0)
    assert "positive" in str(excinfo.value)
    with pytest.raises(InvalidArgumentsError):
        FrequencySet([complex(math.nan, 0)])
    with pytest.raises(InvalidArgumentsError):
        FrequencySet.from_coordinates([0.0, 1.0, 2.0])


def test_frequency_set_coordinates():
    freqs = FrequencySet.from_coordinates([0.5, -1.0, 0.0, 2.0])
    assert freqs.lambdas == (0.5 - 1j, 2j)
    assert freqs.coordinates() == [0.5, -1.0, 0.0, 2.0]
    assert len(freqs) == 2
    assert freqs == FrequencySet([0.5 - 1j, 2j])


def test_phi_examples(sign):
    assert phi(FrequencySet([0]), sign) == pytest.approx(1.0, abs=1e-15)
    assert phi(FrequencySet([1j * V0]), sign) == pytest.approx(PHI_MIN, abs=1e-5)
    assert phi(FrequencySet([1j]), sign) == pytest.approx(1 - 4 / math.pi ** 2, abs=1e-14)


def test_linear_fit_carries_basis(sign):
    fit = linear_fit(FrequencySet([1j, 1j]), sign)
    assert list(fit.basis) == [ExpoPolyTerm(0, 1j), ExpoPolyTerm(1, 1j)]
    assert len(fit.coefficients) == 2


def test_closed_form_examples():
    assert phi_sign_one_freq(0, 1) == pytest.approx(1 - 4 / math.pi ** 2, abs=1e-15)
    assert phi_sign_one_freq(0, V0) == pytest.approx(PHI_MIN, abs=1e-6)
    assert phi_sign_one_freq(0, 0) == 1.0
    assert phi_sign_one_freq(0, 1e-9) == pytest.approx(1.0, abs=1e-15)


def test_closed_form_matches_pipeline(sign):
    rng = np.random.default_rng(42)
    for _ in range(200):
        u, v = rng.uniform(-2, 2), rng.uniform(-3, 3)
        pipeline = phi(FrequencySet([complex(u, v)]), sign)
        assert abs(phi_sign_one_freq(u, v) - pipeline) < 1e-9, (u, v)


def test_closed_form_is_even():
    rng = np.random.default_rng(1)
    for _ in range(50):
        u, v = rng.uniform(-3, 3), rng.uniform(-3, 3)
        value = phi_sign_one_freq(u, v)
        assert phi_sign_one_freq(-u, v) == value
        assert phi_sign_one_freq(u, -v) == value


def test_pipeline_is_even(sign):
    rng = np.random.default_rng(6)
    for _ in range(50):
        lam = complex(rng.uniform(-2, 2), rng.uniform(-3, 3))
        value = phi(FrequencySet([lam]), sign)
        for mirrored in (-lam, lam.conjugate(), -lam.conjugate()):
            assert phi(FrequencySet([mirrored]), sign) == pytest.approx(value, abs=1e-12)


def test_closed_form_branches_are_continuous():
    for v in (0.3, 1.0, 2.5):
        assert phi_sign_one_freq(1.0001e-8, v) == pytest.approx(phi_sign_one_freq(0.9999e-8, v), abs=1e-12)
        assert phi_sign_one_freq(20.0 + 1e-9, v) == pytest.approx(phi_sign_one_freq(20.0 - 1e-9, v), abs=1e-12)


def test_closed_form_large_real_part():
    value = phi_sign_one_freq(500.0, 1.0)
    assert math.isfinite(value)
    assert 0.99 < value < 1.0


def test_phi_permutation_invariant(sign):
    rng = np.random.default_rng(9)
    for _ in range(20):
        a = complex(rng.uniform(-1, 1), rng.uniform(-3, 3))
        b = complex(rng.uniform(-1, 1), rng.uniform(-3, 3))
        if abs(a - b) < 0.5:
            continue
        assert phi(FrequencySet([a, b]), sign) == pytest.approx(phi(FrequencySet([b, a]), sign), abs=1e-12)


def test_cluster_continuity(sign):
    v = 0.5
    target = phi_sign_cluster_axis(v)
    gaps = [abs(phi(FrequencySet([1j * v, 1j * v + eps]), sign) - target)
            for eps in (1e-2, 1e-3, 1e-4)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[-1] < 1e-3


def test_merge_is_continuous(sign):
    merged = phi(FrequencySet([0.3j, 0.3j + 1e-9]), sign)
    close = phi(FrequencySet([0.3j, 0.3j + 1e-4]), sign)
    assert merged == pytest.approx(close, abs=1e-3)


@pytest.mark.parametrize("base", [0.5j, 0.0])
def test_closely_spaced_frequencies_fall_back_to_cluster(sign, base):
    spacing = 5e-6
    fit = linear_fit(FrequencySet([base, base + spacing, base + 2 * spacing]), sign)
    assert [term.degree for term in fit.basis] == [0, 1, 2]
    assert 0.0 <= fit.f_min <= 1.0
    cluster = phi(FrequencySet([base + spacing] * 3), sign)
    assert fit.f_min == pytest.approx(cluster, abs=1e-9)


def test_merge_nearest_respects_radius():
    assert _merge_nearest([0j, 1j], [[0], [1]], 1) is None
    assert _merge_nearest([0j], [[0]], 0) is None
    groups, distance = _merge_nearest([0j, 1e-3, 1j], [[0], [1], [2]], 1)
    assert groups == [[0, 1], [2]]
    assert distance == pytest.approx(1e-3, abs=1e-18)


def test_cluster_axis_limit():
    assert phi_sign_cluster_axis(0) == 0.25
    assert abs(phi_sign_cluster_axis(0.02) - 0.25) < 2e-2
    assert phi_sign_cluster_axis(1e-6) == pytest.approx(0.25, abs=1e-10)


def test_cluster_axis_series_branch_is_continuous():
    w = 1e-2 / math.pi
    assert phi_sign_cluster_axis(w * 0.999) == pytest.approx(phi_sign_cluster_axis(w * 1.001), abs=1e-10)


def test_cluster_axis_matches_pipeline(sign):
    for v in (0.1, 0.5, 1.0):
        assert phi_cluster(1j * v, sign) == pytest.approx(phi_sign_cluster_axis(v), abs=1e-8)
    assert phi_cluster(2j, sign) == pytest.approx(phi_sign_cluster_axis(2.0), abs=1e-9)


def test_cluster_improves_on_single_frequency():
    value = phi_sign_cluster_axis(V0)
    assert 0.25 < value < phi_sign_one_freq(0, V0)


def test_phi_map_single_point():
    points = phi_map((0.0, 0.0, 1), (V0, V0, 1))
    assert len(points) == 1
    u, v, value = points[0]
    assert (u, v) == (0.0, V0)
    assert value == pytest.approx(PHI_MIN, abs=1e-5)


def test_phi_map_order(sign):
    points = phi_map((-1.0, 1.0, 2), (0.0, 2.0, 3), signal=sign)
    assert [(u, v) for u, v, _ in points] == [
        (-1.0, 0.0), (-1.0, 1.0), (-1.0, 2.0), (1.0, 0.0), (1.0, 1.0), (1.0, 2.0)
    ]
    assert points[1][2] == pytest.approx(phi_sign_one_freq(-1.0, 1.0), abs=1e-9)


def test_phi_map_cluster_mode():
    points = phi_map((0.0, 0.0, 1), (0.01, 0.01, 1), mode="2cluster")
    assert points[0][2] == pytest.approx(0.25, abs=1e-3)


def test_cluster_surface_minimum_at_origin(sign):
    points = phi_map((-0.5, 0.5, 5), (-1.0, 1.0, 5), signal=sign, mode="2cluster")
    u, v, lowest = min(points, key=lambda point: point[2])
    assert (u, v) == (0.0, 0.0)
    assert lowest == pytest.approx(0.25, abs=1e-12)
    others = [value for pu, pv, value in points if (pu, pv) != (0.0, 0.0)]
    assert len(others) == 24
    assert min(others) > 0.25 + 1e-6


def test_phi_map_workers_do_not_change_result():
    serial = phi_map((-0.5, 0.5, 3), (0.5, 1.5, 3))
    parallel = phi_map((-0.5, 0.5, 3), (0.5, 1.5, 3), workers=2)
    assert serial == parallel


def test_phi_map_validation():
    with pytest.raises(InvalidArgumentsError) as excinfo:
        phi_map((0.0, 1.0, 0), (0.0, 1.0, 2))
    assert "must be positive" in str(excinfo.value)
    with pytest.raises(InvalidArgumentsError):
        phi_map((0.0, 1.0, 2), (0.0, 1.0, 2), mode="3")

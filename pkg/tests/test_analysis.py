import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermal_ft.analysis import compare, fit_complex_scale, nrmse, pearson
from thermal_ft.errors import DomainError, UsageError

finite = dict(allow_nan=False, allow_infinity=False)


def _signal(rng, n=200):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def test_fit_identity_and_scaled(rng):
    r = _signal(rng)
    assert fit_complex_scale(r, r) == pytest.approx(1, abs=1e-15)
    assert fit_complex_scale(2j * r, r) == pytest.approx(2j, abs=1e-14)


def test_fit_noise_bound(rng):
    r = _signal(rng, 1000)
    noise = 0.01 * _signal(rng, 1000)
    c = fit_complex_scale(r + noise, r)
    assert abs(c - 1) <= np.linalg.norm(noise) / np.linalg.norm(r)


@given(st.complex_numbers(min_magnitude=1e-6, max_magnitude=1e6, **finite), st.integers(0, 2**31))
def test_fit_exact_on_proportional(c, seed):
    r = _signal(np.random.default_rng(seed), 50)
    assert fit_complex_scale(c * r, r) == pytest.approx(c, rel=1e-12)


def test_fit_errors():
    with pytest.raises(DomainError):
        fit_complex_scale([1, 2], [0, 0])
    with pytest.raises(UsageError):
        fit_complex_scale([1, 2, 3], [1, 2])


def test_pearson_examples():
    a = np.array([1.0, 3.0, 2.0, 5.0])
    assert pearson(a, a) == pytest.approx(1)
    assert pearson(a, -a) == pytest.approx(-1)
    b = np.array([1.0, -1.0, -1.0, 1.0])
    c = np.array([1.0, 1.0, -1.0, -1.0])
    assert abs(pearson(b, c)) < 1e-12
    with pytest.raises(DomainError):
        pearson([1, 1, 1], [1, 2, 3])


def test_nrmse_examples(rng):
    r = _signal(rng)
    assert nrmse(3.5 * r, r) < 1e-15
    assert nrmse(np.exp(0.7j) * r, r) < 1e-15
    # perturbation orthogonal to r with 10% of its norm
    p = _signal(rng)
    p -= np.vdot(r, p) / np.vdot(r, r) * r
    p *= 0.1 * np.linalg.norm(r) / np.linalg.norm(p)
    assert nrmse(r + p, r) == pytest.approx(0.1, rel=1e-12)


@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, **finite), st.integers(0, 2**31))
def test_nrmse_rescaling_invariant(c, seed):
    rng = np.random.default_rng(seed)
    r = _signal(rng, 40)
    m = r + 0.3 * _signal(rng, 40)
    assert nrmse(c * m, r) == pytest.approx(nrmse(m, r), rel=1e-10)


def test_nrmse_zero_reference():
    with pytest.raises(DomainError):
        nrmse([1, 2], [0, 0])


def test_compare_window(rng):
    eta = np.linspace(-500, 500, 101)
    r = _signal(rng, 101)
    m = (1 - 2j) * r
    m[np.abs(eta) > 400] = 1e6  # outside the window, must be ignored
    rep = compare(m, r, eta, (-400, 400))
    assert rep.fitted_scale == pytest.approx(1 - 2j)
    assert rep.pearson_re == pytest.approx(1)
    assert rep.pearson_im == pytest.approx(1)
    assert rep.nrmse < 1e-14
    assert rep.window == (-400.0, 400.0)

import cmath
import math

import pytest

import ahscatter


def test_family_curve():
    spec = ahscatter.builtin_family("sech", 2.0)
    assert abs(spec.alpha(0.0) - 1j) < 1e-15
    assert spec.mu_plus == pytest.approx(1.0)


def test_inverse_map():
    spec = ahscatter.builtin_family("bronski", 1.0)
    assert abs(ahscatter.inverse_map(spec, spec.alpha(0.7)) - 0.7) < 1e-8


def test_f0_prime_closed_form():
    spec = ahscatter.builtin_family("sech", 3.0)
    z = 0.3 + 0.8j
    assert abs(ahscatter.f0_prime(spec, z) - ahscatter.sech_closed_form_f0_prime(3.0, z)) < 1e-7


def test_w():
    spec = ahscatter.builtin_family("sech", 2.0)
    assert ahscatter.w(spec, 1.5) == pytest.approx(-math.pi / 4, abs=1e-8)


def test_roundtrip():
    recovered, err = ahscatter.roundtrip(ahscatter.builtin_family("sech", 2.0), [-1.0, 0.5])
    assert err < 1e-6
    assert recovered[1] == pytest.approx(0.5, abs=1e-6)


def test_critical_point():
    mu, z = ahscatter.bronski_critical_point()
    assert mu == pytest.approx(2 ** -1.5, abs=1e-10)
    assert abs(z - 1j * 3 * math.sqrt(3) / (4 * math.sqrt(2))) < 1e-10


def test_reflection_unitary_scale():
    r = ahscatter.reflection_coefficient(ahscatter.builtin_family("sech", 2.0), 1.3, 0.2)
    assert 0 < abs(r) < 1
    assert cmath.isfinite(r)


def test_errors_are_translated():
    with pytest.raises(ahscatter.AhsError):
        ahscatter.reflection_coefficient(ahscatter.builtin_family("sech", 2.0), 0.5, 5.0)

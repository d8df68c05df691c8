#include <doctest.h>

#include "ahscatter/ah_transform.hpp"

using namespace ahs;

TEST_SUITE("radical_fields") {
    const InitialDataSpec s = builtin_family("sech", 2.0);

    TEST_CASE("radicand vanishes on the curve") {
        for (double y : {-1.0, 0.3, 2.0}) CHECK(std::abs(radical_square(s, y, s.alpha(y))) < 1e-14);
    }

    TEST_CASE("h vanishes at the preimage") {
        const cplx z(0.4, 0.6);
        const cplx xz = inverse_map(s, z);
        CHECK(std::abs(h_field(s, xz, z)) < 1e-8);
    }

    TEST_CASE("direct and ray paths agree") {
        const cplx z(0.4, 0.6);
        CHECK(std::abs(h_field(s, 0.5, z) - h_field_direct(s, 0.5, z)) < 1e-8);
    }

    TEST_CASE("h_z by finite differences") {
        const cplx z(0.5, 1.2), d = 1e-5;
        const cplx fd = (h_field(s, 0.0, z + d) - h_field(s, 0.0, z - d)) / (2.0 * d);
        CHECK(std::abs(h_z_field(s, 0.0, z) - fd) < 1e-6);
    }

    TEST_CASE("boundary values add up to f") {
        const ScatteringData cf = sech_closed_form_scattering(2.0);
        const cplx z = s.alpha(0.8);
        const auto [gp, gm] = g_boundary_values(s, 0.0, z, 0.0);
        CHECK(std::abs(gp + gm - cf.f0(z)) < 1e-8);
    }
}

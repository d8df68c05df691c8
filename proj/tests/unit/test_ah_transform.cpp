#include <doctest.h>

#include "ahscatter/ah_transform.hpp"

using namespace ahs;

TEST_SUITE("ah_transform") {
    TEST_CASE("numeric f0' against the sech closed form") {
        const InitialDataSpec s = builtin_family("sech", 3.0);
        for (cplx z : {cplx(0.2, 0.5), cplx(-1.0, 1.0), cplx(2.0, 0.3)})
            CHECK(std::abs(f0_prime(s, z) - sech_closed_form_f0_prime(3.0, z)) < 1e-7);
    }

    TEST_CASE("f0 vanishes at mu+ with zero constant") {
        const ScatteringData cf = sech_closed_form_scattering(2.0);
        CHECK(std::abs(cf.f0(cplx(1.0, 1e-12))) < 1e-6);
    }

    TEST_CASE("f0 and its derivative are consistent") {
        const InitialDataSpec s = builtin_family("bronski", 1.0);
        const cplx z(0.3, 0.7), d = 1e-5;
        const cplx fd = (forward_f0(s, z + d, 0.0) - forward_f0(s, z - d, 0.0)) / (2.0 * d);
        CHECK(std::abs(f0_prime(s, z) - fd) < 1e-6);
    }

    TEST_CASE("short roundtrip") {
        const auto r = roundtrip(builtin_family("sech", 2.0), {-1.0, 0.5});
        CHECK(r.max_error < 1e-6);
    }

    TEST_CASE("cut jump is linear") {
        const InitialDataSpec s = builtin_family("sech", 1.0);
        const cplx T(0.0, std::sqrt(3.0) / 2), z = 0.5 * T;
        CHECK(std::abs(branch_jump_delta_f(s, z) - I * pi * (z - T)) < 1e-6);
    }
}

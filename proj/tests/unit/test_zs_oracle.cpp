#include <doctest.h>

#include "ahscatter/ah_transform.hpp"
#include "ahscatter/zs_oracle.hpp"

using namespace ahs;

TEST_SUITE("zs_oracle") {
    TEST_CASE("free problem has no reflection") {
        ZsSettings zs;
        zs.x_truncation = 2.0;
        zs.max_doublings = 0;
        const auto c = integrate_zs(zero_potential(), 0.5, 0.1, zs);
        CHECK(std::abs(c.a_coef - 1.0) < 1e-12);
        CHECK(std::abs(c.b_coef) < 1e-15);
    }

    TEST_CASE("unitarity on the real axis") {
        const auto c = integrate_zs(builtin_family("sech", 2.0), 0.5, 0.2);
        CHECK(c.unitarity_defect < 1e-12);
    }

    TEST_CASE("epsilon range") {
        CHECK_THROWS_AS(integrate_zs(builtin_family("sech", 2.0), 0.5, 2.0), Error);
    }

    TEST_CASE("estimate lands near w") {
        const InitialDataSpec s = builtin_family("sech", 2.0);
        const auto chk = semiclassical_limit_check(s, sech_closed_form_scattering(2.0), 1.3, {0.2, 0.1});
        CHECK(std::abs(chk.estimates.back().value.imag() - chk.w) < 0.05 * std::abs(chk.w));
    }
}

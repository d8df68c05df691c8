#include <doctest.h>

#include "ahscatter/sign_analysis.hpp"

using namespace ahs;

TEST_SUITE("sign_analysis") {
    const InitialDataSpec s = builtin_family("sech", 2.0);

    TEST_CASE("w off the support") {
        double disc = 0;
        CHECK(w_of_z(s, 1.5, {}, &disc) == doctest::Approx(-pi / 4).epsilon(1e-8));
        CHECK(disc < 1e-8);
        CHECK(w_of_z(s, -2.0) == doctest::Approx(-pi / 2).epsilon(1e-8));
    }

    TEST_CASE("separation threshold") {
        CHECK(w_separation_threshold(s, 1.05) == doctest::Approx(0.005));
        CHECK(w_separation_threshold(s, 3.0) == doctest::Approx(1e-3));
    }

    TEST_CASE("genus zero certificate") {
        const SignReport r = certify_genus_zero(s, 0.0);
        CHECK(r.certified());
        CHECK(r.lambda_reaches_alpha);
    }
}

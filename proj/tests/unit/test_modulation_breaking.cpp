#include <doctest.h>

#include "ahscatter/ah_transform.hpp"
#include "ahscatter/modulation_breaking.hpp"

using namespace ahs;

TEST_SUITE("modulation_breaking") {
    const ScatteringData sd = sech_closed_form_scattering(2.0);
    const InitialDataSpec s = builtin_family("sech", 2.0);

    TEST_CASE("initial data solves the moment equations") {
        for (double x : {-0.5, 0.0, 0.8}) {
            const auto [r1, r2] = moment_residuals(sd, s.alpha(x), x, 0.0);
            CHECK(std::abs(r1) < 1e-7);
            CHECK(std::abs(r2) < 1e-7);
        }
    }

    TEST_CASE("short continuation stays smooth") {
        const auto states = continue_alpha(sd, 0.5, 0.02, s.alpha(0.5), 0.01);
        REQUIRE(states.size() >= 2);
        CHECK(states.back().t == doctest::Approx(0.02));
        CHECK(std::abs(states.back().alpha - s.alpha(0.5)) < 0.1);
    }

    TEST_CASE("leading coefficient") {
        const cplx a(0.0, 1.0), ap(1.0, 0.0);
        CHECK(std::abs(leading_coefficient(a, ap) - std::sqrt(2.0 * I) / 3.0) < 1e-15);
    }

    TEST_CASE("kind names") { CHECK(std::string(break_kind_name(BreakReport::Kind::triple_point)) == "triple_point"); }
}

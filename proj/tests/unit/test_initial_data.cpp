#include <doctest.h>

#include "ahscatter/initial_data.hpp"

using namespace ahs;

TEST_SUITE("initial_data") {
    TEST_CASE("sech curve") {
        const InitialDataSpec s = builtin_family("sech", 2.0);
        CHECK(std::abs(s.alpha(0.0) - I) < 1e-15);
        CHECK(s.mu_plus == doctest::Approx(1.0));
        CHECK(s.mu_minus == doctest::Approx(-1.0));
    }

    TEST_CASE("inverse map recovers real preimages") {
        for (const char* name : {"sech", "bronski", "double_hump"}) {
            const InitialDataSpec s = builtin_family(name, name[0] == 'd' ? 0.5 : 1.0);
            for (double x : {-1.5, 0.0, 0.7}) CHECK(std::abs(inverse_map(s, s.alpha(x)) - x) < 1e-8);
        }
    }

    TEST_CASE("assumptions") {
        std::vector<double> xs;
        for (int k = -32; k <= 32; ++k) xs.push_back(0.5 * k);
        CHECK(validate_assumptions(builtin_family("sech", 2.0), xs).all_passed());
    }

    TEST_CASE("unknown family") { CHECK_THROWS(builtin_family("gaussian", 1.0)); }

    TEST_CASE("bronski collision") {
        const CriticalPoint cp = bronski_critical_point();
        CHECK(cp.mu_star == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-10));
    }

    TEST_CASE("double hump cubics") {
        for (double k : {0.2, 0.5, 1.0}) {
            const auto r = double_hump_ramification_cubic_roots(k);
            REQUIRE(r.size() == 1);
            CHECK(std::abs(r[0] * r[0] * r[0] + 4 * k * k * r[0] + 4 * k) < 1e-12);
        }
    }

    TEST_CASE("sech ramification points") {
        const InitialDataSpec s = builtin_family("sech", 1.0);
        const auto rp = ramification_points(s, Rect{-3, 3, -pi / 2 + 1e-6, pi / 2 - 1e-6});
        REQUIRE_FALSE(rp.empty());
        for (const auto& r : rp) CHECK(std::abs(s.alpha_prime(r.x_star)) < 1e-9);
    }
}

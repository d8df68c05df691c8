#include <doctest.h>

#include "ahscatter/symmetry.hpp"

using namespace ahs;

TEST_SUITE("symmetry") {
    const InitialDataSpec s = builtin_family("bronski", 1.0);

    TEST_CASE("curve and radicand") {
        const std::vector<cplx> xs{{0.5, 0.1}, {-1.0, 0.0}, {2.0, -0.2}};
        const std::vector<cplx> zs{{0.3, 0.4}, {-0.7, 1.0}};
        CHECK(check_alpha_symmetry(s, xs) < 1e-12);
        CHECK(check_r2_symmetry(s, xs, zs) < 1e-12);
        CHECK(check_x_symmetry(s, zs) < 1e-9);
    }

    TEST_CASE("region contains its mirror points") {
        const SymmetryRegion r = symmetry_region(s, 0.5);
        for (cplx z : {cplx(0.1, 0.3), cplx(-0.1, 0.3)}) CHECK(r.contains(z) == r.contains(-std::conj(z)));
    }

    TEST_CASE("real parity") {
        const ParityReport p = check_real_parity(s, 0.5, {0.2, 1.5, 3.0});
        CHECK(p.points == 3);
        CHECK(p.w_even < 1e-8);
        CHECK(p.re_h_parity < 1e-8);
    }
}

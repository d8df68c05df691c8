#include <doctest.h>

#include "ahscatter/numerics.hpp"

using namespace ahs;

TEST_SUITE("numerics") {
    TEST_CASE("interval quadrature") {
        const auto r = integrate_interval([](double x) { return cplx(x * x, std::sin(x)); }, 0.0, 1.0);
        CHECK(std::abs(r.value - cplx(1.0 / 3.0, 1.0 - std::cos(1.0))) < 1e-12);
    }

    TEST_CASE("inverse square root endpoint") {
        QuadratureSettings q;
        q.singular_start = true;
        const auto r = integrate_interval([](double x) { return cplx(1.0 / std::sqrt(x)); }, 0.0, 1.0, q);
        CHECK(std::abs(r.value - 2.0) < 1e-9);
    }

    TEST_CASE("closed path residue") {
        ContourPath c;
        for (int k = 0; k < 64; ++k) c.nodes.push_back(std::polar(1.0, 2 * pi * k / 64));
        c.closed = true;
        const auto r = integrate_path([](cplx z) { return 1.0 / z; }, c);
        CHECK(std::abs(r.value - 2.0 * pi * I) < 1e-9);
        CHECK(winding_number(c.nodes, 0.1) == 1);
        CHECK(winding_number(c.nodes, 2.0) == 0);
    }

    TEST_CASE("newton root") {
        const cplx r = find_root([](cplx z) { return z * z + 1.0; }, cplx(0.3, 0.7));
        CHECK(std::abs(r - I) < 1e-10);
    }

    TEST_CASE("level curve closes") {
        const auto tr = trace_implicit_curve([](cplx z) { return std::norm(z) - 1.0; }, cplx(1.0, 0.0), I, 0.05,
                                             Rect{-2, 2, -2, 2});
        CHECK(tr.stop == TraceStop::Closed);
        for (cplx z : tr.path.nodes) CHECK(std::abs(std::abs(z) - 1.0) < 1e-8);
    }

    TEST_CASE("tracked root follows the branch") {
        TrackedRoot r([](cplx z) { return z; }, {arc_piece(0.0, 1.0, 0.0, pi)}, 1.0, false);
        CHECK(std::abs(r.end_value() - I) < 1e-12);
    }

    TEST_CASE("segment geometry") {
        CHECK(segments_intersect(cplx(-1, 0), cplx(1, 0), cplx(0, -1), cplx(0, 1)));
        CHECK_FALSE(segments_intersect(cplx(-1, 0), cplx(1, 0), cplx(0, 1), cplx(0, 2)));
        CHECK(distance_to_segment(cplx(0, 2), cplx(-1, 0), cplx(1, 0)) == doctest::Approx(2.0));
    }
}

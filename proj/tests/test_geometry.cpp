#include <doctest.h>

#include <cmath>

#include "vt/errors.hpp"
#include "vt/geometry.hpp"
#include "vt/rng.hpp"

using namespace vt;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("wedge at pi/4 is the diagonal triangle") {
    const Region r = wedge_region(1, kPi / 4);
    REQUIRE(r.vertices.size() == 3);
    CHECK(r.area() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.contains({0.9, 0.1}));
    CHECK(r.contains({0.5, 0.5}));  // boundary
    CHECK_FALSE(r.contains({0.1, 0.9}));
    CHECK_FALSE(r.contains({-0.5, 0.1}));
}

TEST_CASE("wedge at pi/2 fills the quadrant") {
    const Region r = wedge_region(1, kPi / 2);
    CHECK(r.area() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.contains({0.01, 0.99}));
}

TEST_CASE("wedge at zero is degenerate") {
    const Region r = wedge_region(5, 0.0);
    CHECK(r.area() == 0.0);
    CHECK(r.degenerate());
}

TEST_CASE("eight wedges land in their quadrants") {
    const double th = 0.9;
    const double t = std::tan(th);
    struct Probe {
        int type;
        Point inside;
        Point outside;
    };
    // just inside / outside the boundary line of each wedge
    const double eps = 0.05;
    const Probe probes[] = {
        {1, {0.8, 0.8 * t - eps}, {0.8, 0.8 * t + eps}},
        {2, {-0.8, 0.8 * t - eps}, {-0.8, 0.8 * t + eps}},
        {3, {-0.8, -(0.8 * t - eps)}, {-0.8, -(0.8 * t + eps)}},
        {4, {0.8, -(0.8 * t - eps)}, {0.8, -(0.8 * t + eps)}},
        {5, {0.8 * t - eps, 0.8}, {0.8 * t + eps, 0.8}},
        {6, {-(0.8 * t - eps), 0.8}, {-(0.8 * t + eps), 0.8}},
        {7, {-(0.8 * t - eps), -0.8}, {-(0.8 * t + eps), -0.8}},
        {8, {0.8 * t - eps, -0.8}, {0.8 * t + eps, -0.8}},
    };
    for (const Probe& p : probes) {
        const Region r = wedge_region(p.type, th);
        CAPTURE(p.type);
        CHECK(r.contains(p.inside));
        CHECK_FALSE(r.contains(p.outside));
    }
}

TEST_CASE("wedge rejects bad arguments") {
    CHECK_THROWS_AS(wedge_region(0, 0.5), domain_error);
    CHECK_THROWS_AS(wedge_region(9, 0.5), domain_error);
    CHECK_THROWS_AS(wedge_region(1, -0.1), domain_error);
    CHECK_THROWS_AS(wedge_region(1, 2.0), domain_error);
}

TEST_CASE("complementary wedges of a quadrant intersect in a segment") {
    const Region lens = intersect(wedge_region(1, kPi / 4), wedge_region(5, kPi / 4));
    CHECK(lens.area() <= 1e-12);
}

TEST_CASE("full-quadrant wedges intersect in the quadrant") {
    const Region q = intersect(wedge_region(1, kPi / 2), wedge_region(5, kPi / 2));
    CHECK(q.area() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pi/3 lens area matches a Monte Carlo indicator estimate") {
    const Region lens = intersect(wedge_region(1, kPi / 3), wedge_region(5, kPi / 3));
    // brute-force indicator estimate over quadrant 1
    const double t_hi = std::tan(kPi / 3);
    RngStream rng(42, 0);
    const long trials = 2000000;
    long hits = 0;
    for (long k = 0; k < trials; ++k) {
        const double x = rng.next_double();
        const double y = rng.next_double();
        if (y <= x * t_hi && x <= y * t_hi) ++hits;
    }
    const double mc = static_cast<double>(hits) / trials;
    const double se = std::sqrt(mc * (1 - mc) / trials);
    CHECK(std::abs(lens.area() - mc) <= 4 * se);
    // exact value: quadrant minus the two leftover corner triangles
    CHECK(lens.area() == doctest::Approx(1.0 - std::tan(kPi / 6)).epsilon(1e-12));
}

TEST_CASE("intersection of disjoint wedges is empty") {
    const Region r = intersect(wedge_region(1, 0.5), wedge_region(3, 0.5));
    CHECK(r.area() == 0.0);
}

TEST_CASE("clipping preserves area additively") {
    const Region sq = half_square('x', true);
    const Region lo = clip(sq, HalfPlane{0, 1, 0.3});
    const Region hi = clip(sq, HalfPlane{0, -1, -0.3});
    CHECK(lo.area() + hi.area() == doctest::Approx(sq.area()).epsilon(1e-12));
}

TEST_CASE("split_at_lines partitions a region") {
    const Region q = quadrant_region(1);
    const auto pieces = split_at_lines(q, 'x', {0.25, 0.5, 0.75});
    double total = 0.0;
    for (const Region& p : pieces) total += p.area();
    CHECK(pieces.size() == 4);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // lines outside the region change nothing
    const auto same = split_at_lines(q, 'y', {-0.5});
    CHECK(same.size() == 1);
    CHECK(same[0].area() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadrant and half-square regions have unit and double areas") {
    for (int q = 1; q <= 4; ++q) CHECK(quadrant_region(q).area() == doctest::Approx(1.0));
    CHECK(half_square('x', false).area() == doctest::Approx(2.0));
    CHECK(half_square('y', true).area() == doctest::Approx(2.0));
}

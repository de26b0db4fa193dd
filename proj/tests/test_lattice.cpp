#include "support.hpp"

#include <algorithm>
#include <numbers>
#include <set>
#include <utility>

#include "commfact/lattice.hpp"

using namespace commfact;
using namespace testing;

namespace {

using Key = std::pair<long, long>;

std::set<Key> as_set(const std::vector<Complex>& pts) {
    std::set<Key> out;
    for (auto z : pts)
        out.insert({std::lround(z.real()), std::lround(z.imag())});
    return out;
}

// All lattice points in a big box, sorted by norm only.
std::vector<long> sorted_norms(long box) {
    std::vector<long> out;
    for (long x = -box; x <= box; ++x)
        for (long y = -box; y <= box; ++y)
            out.push_back(x * x + y * y);
    std::sort(out.begin(), out.end());
    return out;
}

double brute_energy(const std::vector<Complex>& pts) {
    long double e = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j)
                e += 1.0L / std::norm(pts[i] - pts[j]);
    return double(e);
}

} // namespace

TEST_SUITE("lattice") {

TEST_CASE("small point sets") {
    CHECK(gaussian_points(1).points == std::vector<Complex>{0});
    CHECK(as_set(gaussian_points(5).points) == std::set<Key>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    CHECK(as_set(gaussian_points(9).points) ==
          std::set<Key>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
    // Ties at |z| = 1 are broken by (Re, Im) ascending.
    CHECK(gaussian_points(2).points == std::vector<Complex>{0, -1});
    CHECK(gaussian_points(3).points == std::vector<Complex>{0, -1, Complex(0, -1)});
}

TEST_CASE("smallest moduli, distinct, inside the disc") {
    const auto norms = sorted_norms(40);
    for (std::size_t m : {1, 2, 4, 5, 6, 12, 13, 50, 97, 500, 1000, 4000}) {
        const auto ps = gaussian_points(m);
        REQUIRE(ps.size() == m);
        CHECK(as_set(ps.points).size() == m);
        std::vector<long> got;
        for (auto z : ps.points) {
            CHECK(z.real() == std::round(z.real()));
            CHECK(z.imag() == std::round(z.imag()));
            CHECK(std::abs(z) <= ps.radius_bound);
            got.push_back(std::lround(std::norm(z)));
        }
        CHECK(std::is_sorted(got.begin(), got.end()));
        CHECK(std::equal(got.begin(), got.end(), norms.begin()));
        CHECK(ps.radius_bound == doctest::Approx(disc_radius(m)));
    }
}

TEST_CASE("radius bound holds up to 1e5") {
    for (std::size_t m : {10000, 31415, 100000}) {
        const auto ps = gaussian_points(m);
        double rmax = 0;
        for (auto z : ps.points)
            rmax = std::max(rmax, std::abs(z));
        CHECK(rmax <= 1 + std::sqrt(double(m) / std::numbers::pi));
    }
}

TEST_CASE("pair energy") {
    const std::vector<Complex> two = {0, 1};
    CHECK(pair_energy(two) == doctest::Approx(2));
    CHECK(pair_expectation(two).expectation == doctest::Approx(1));

    const std::vector<Complex> cross = {0, 1, -1, Complex(0, 1), Complex(0, -1)};
    CHECK(pair_energy(cross) == doctest::Approx(13).epsilon(1e-15));
    CHECK(pair_expectation(cross).expectation == doctest::Approx(13.0 / 20).epsilon(1e-15));
    CHECK(pair_expectation(gaussian_points(5)).pair_energy == doctest::Approx(13).epsilon(1e-15));

    CHECK(std::isinf(pair_energy(std::vector<Complex>{1, 1})));
    CHECK_THROWS_AS(pair_expectation(std::vector<Complex>{1}), PreconditionError);
}

TEST_CASE("pair energy matches brute force and scales") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto rng = rng_for(s);
        std::vector<Complex> pts;
        for (int i = 0; i < 3 + int(s); ++i)
            pts.emplace_back(standard_normal(rng), standard_normal(rng));
        const double e = pair_energy(pts);
        CHECK(e == doctest::Approx(brute_energy(pts)).epsilon(1e-12));
        const double t = 0.25 + double(s);
        std::vector<Complex> scaled = pts;
        for (auto& z : scaled)
            z *= t;
        CHECK(pair_energy(scaled) == doctest::Approx(e / (t * t)).epsilon(1e-12));
    }
}

TEST_CASE("energy report") {
    for (std::size_t m : {2, 5, 16, 100, 1000}) {
        const auto r = pair_expectation(gaussian_points(m));
        const double log_m = std::log(double(m));
        CHECK(r.m == m);
        CHECK(r.empirical_a1 == doctest::Approx(double(m) * r.expectation - std::numbers::pi * log_m));
        CHECK(r.bound_value == doctest::Approx((kCalibratedA1 + std::numbers::pi * log_m) / double(m)));
        CHECK(r.expectation <= r.bound_value);
    }
}

TEST_CASE("optimizer") {
    const auto id = optimize_configuration(5, 0, 1);
    CHECK(id.points == gaussian_points(5).points);
    CHECK(id.energy == doctest::Approx(13));

    const auto two = optimize_configuration(2, 2000, 3);
    CHECK(two.energy <= 2.0);
    const double diameter = 2 * disc_radius(2);
    CHECK(two.energy >= 2 / (diameter * diameter) * (1 - 1e-12));

    const auto sixteen = optimize_configuration(16, 10000, 7);
    CHECK(sixteen.energy <= pair_energy(gaussian_points(16).points));
    CHECK(sixteen.energy == doctest::Approx(pair_energy(sixteen.points)).epsilon(1e-12));
    CHECK(sixteen.relative_improvement() >= 0);
    for (auto z : sixteen.points)
        CHECK(std::abs(z) <= disc_radius(16) + 1e-12);

    const auto a = optimize_configuration(16, 500, 11), b = optimize_configuration(16, 500, 11);
    CHECK(a.points == b.points);
}

TEST_CASE("leading term fit") {
    CHECK_THROWS_AS(leading_term_fit({64}), PreconditionError);
    CHECK_THROWS_AS(leading_term_fit({64, 64, 64}), PreconditionError);
    CHECK_THROWS_AS(leading_term_fit({64, 128, 256}), PreconditionError);

    const auto fit = leading_term_fit({64, 256, 1024, 4096});
    CHECK(fit.slope >= 0.85 * std::numbers::pi);
    CHECK(fit.slope <= 1.15 * std::numbers::pi);
    const auto dup = leading_term_fit({4096, 64, 256, 256, 1024, 64});
    CHECK(dup.sizes == std::vector<std::size_t>{64, 256, 1024, 4096});
    CHECK(dup.slope == fit.slope);
}

}

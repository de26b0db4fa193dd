#include "support.hpp"

#include <limits>

#include "commfact/factorizer.hpp"
#include "commfact/filtration.hpp"
#include "commfact/lowerbound.hpp"

using namespace commfact;
using namespace testing;

namespace {

// sum over n >= 0 while (n+1)(n+2)/2 < m, accumulated in long double.
long double quarter_log_sum_oracle(std::size_t m) {
    long double s = 0;
    for (std::size_t n = 0;; ++n) {
        const long double tri = (n + 1) * (n + 2) / 2;
        if (tri >= m)
            break;
        const long double x = 1 - tri / m;
        s += x * x / (2 * (n + 1));
    }
    return s;
}

NormalizedPair normalized_factorization(std::size_t m, std::uint64_t seed = 0) {
    FactorOptions opt;
    opt.seed = seed;
    const auto cert = factor(extremal_matrix(m), opt);
    REQUIRE(cert.valid);
    return normalize_pair(cert.b, cert.c);
}

} // namespace

TEST_SUITE("lowerbound") {

TEST_CASE("extremal matrix") {
    CHECK(max_abs_diff(extremal_matrix(2), diag({0.5, -0.5})) == 0.0);
    for (std::size_t m : {2, 3, 7, 100, 1000}) {
        const ComplexMatrix a = extremal_matrix(m);
        CHECK(std::abs(a.trace()) <= 1e-15);
        CHECK(hs_norm(a) == doctest::Approx(std::sqrt(1 - 1.0 / double(m))).epsilon(1e-14));
        ComplexMatrix p = ComplexMatrix::Zero(a.rows(), a.cols());
        p(0, 0) = 1;
        CHECK(max_abs_diff(a, ComplexMatrix(p - ComplexMatrix::Identity(a.rows(), a.cols()) / double(m))) <= std::numeric_limits<double>::epsilon());
    }
    CHECK_THROWS_AS(extremal_matrix(1), PreconditionError);
}

TEST_CASE("quarter log sum") {
    CHECK(quarter_log_sum(2) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK_THROWS_AS(quarter_log_sum(1), PreconditionError);
    double prev = 0;
    for (std::size_t m = 2; m < 3000; ++m) {
        const double q = quarter_log_sum(m);
        CHECK(q == doctest::Approx(double(quarter_log_sum_oracle(m))).epsilon(1e-13));
        CHECK(q >= prev);
        prev = q;
    }
}

TEST_CASE("two by two chain") {
    const auto pair = normalized_factorization(2);
    CHECK(operator_norm(pair.b) == doctest::Approx(1).epsilon(1e-14));
    const auto f = build_filtration(pair.b, pair.c, first_coordinate_basis(2));
    REQUIRE(f.dims == std::vector<std::size_t>{1, 1});

    const auto records = verify_trace_inequality(pair.b, pair.c, f);
    REQUIRE(records.size() == 2);
    CHECK(records[0].lhs == doctest::Approx(0.5));
    CHECK(records[0].rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(records[0].pass);
    CHECK(records[0].normbd_bound == doctest::Approx(0.5));
    CHECK(records[0].normbd_pass);
    CHECK(records[1].lhs == doctest::Approx(0.0));
    CHECK(records[1].pass);

    const auto profile = singular_profile(pair.c);
    CHECK(profile.values(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(profile.values(1) == doctest::Approx(0.5).epsilon(1e-12));
    const auto sums = verify_partial_sums(pair.c);
    REQUIRE(sums.records.size() == 2);
    CHECK(sums.records[0].partial_sum == doctest::Approx(0.5));
    CHECK(sums.records[0].bound == doctest::Approx(1.0 / 6));
    CHECK(sums.records[1].partial_sum == doctest::Approx(1.0));
    CHECK(sums.records[1].bound == doctest::Approx(std::sqrt(2.0) / 6));
    CHECK(sums.pass());

    const auto iso = construct_partial_isometries(pair.c, f);
    const ComplexMatrix p0 = f.projector(0), p1 = f.projector(1);
    CHECK(nuclear_norm(ComplexMatrix(p0 * iso.v * pair.c * p0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nuclear_norm(ComplexMatrix(p1 * pair.c * p0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(iso.v_identity_residual <= 1e-12);
    CHECK(iso.w_identity_residual <= 1e-12);
}

TEST_CASE("partial isometries, degenerate cases") {
    const ComplexMatrix z = ComplexMatrix::Zero(3, 3);
    const auto f = build_filtration(z, z, first_coordinate_basis(3));
    auto iso = construct_partial_isometries(z, f);
    CHECK(iso.v.norm() == 0.0);
    CHECK(iso.w.norm() == 0.0);
    CHECK(iso.v_identity_residual == 0.0);

    auto rng = rng_for(5);
    const ComplexMatrix c = ginibre(3, 3, rng);
    const auto whole = build_filtration(c, c, ComplexMatrix::Identity(3, 3));
    iso = construct_partial_isometries(c, whole);
    CHECK(iso.v.norm() == 0.0);
    CHECK(iso.v_identity_residual == 0.0);
    CHECK(iso.w_identity_residual == 0.0);
}

TEST_CASE("extremal chain at several sizes") {
    for (std::size_t m : {3, 4, 9, 16, 30}) {
        for (std::uint64_t seed : {0, 3}) {
            CAPTURE(m);
            const auto pair = normalized_factorization(m, seed);
            const auto f = build_filtration(pair.b, pair.c, first_coordinate_basis(Eigen::Index(m)));
            REQUIRE(f.total_dim() == m);
            const auto records = verify_trace_inequality(pair.b, pair.c, f);
            CHECK(records.size() == f.dims.size());
            CHECK(records.front().rhs >= 1 - 1.0 / double(m) - 1e-8);
            for (const auto& r : records) {
                CHECK(r.pass);
                CHECK(r.normbd_pass);
            }
            CHECK(records.back().lhs <= 1e-12);

            const auto iso = construct_partial_isometries(pair.c, f);
            CHECK(iso.v_identity_residual <= 1e-9);
            CHECK(iso.w_identity_residual <= 1e-9);
            CHECK(iso.v_norm <= 1 + 1e-10);
            CHECK(iso.w_norm <= 1 + 1e-10);

            const auto sums = verify_partial_sums(pair.c);
            CHECK(sums.records.size() == m);
            CHECK(sums.pass());
            for (const auto& t : sums.triangular)
                CHECK((t.k + 1) * (t.k + 2) <= m);
        }
    }
}

TEST_CASE("partial sums scale") {
    const auto pair = normalized_factorization(12);
    for (double t : {1.0, 1.5, 10.0}) {
        const auto sums = verify_partial_sums(ComplexMatrix(pair.c * t));
        CHECK(sums.pass());
    }
    // The bounds themselves do not depend on C.
    const auto zero = verify_partial_sums(ComplexMatrix::Zero(4, 4));
    CHECK_FALSE(zero.pass());
    CHECK(zero.records[0].bound == doctest::Approx(1.0 / 6));
}

TEST_CASE("preconditions of the trace inequality") {
    const auto cert = factor(extremal_matrix(4));
    const auto f = build_filtration(cert.b, cert.c, first_coordinate_basis(4));
    const auto pair = normalize_pair(cert.b, cert.c);
    CHECK_NOTHROW(verify_trace_inequality(pair.b, pair.c, f));
    CHECK_THROWS_AS(verify_trace_inequality(ComplexMatrix(2.0 * pair.b), pair.c, f), PreconditionError);
    CHECK_THROWS_AS(verify_trace_inequality(pair.b, ComplexMatrix(pair.c * 1.01), f), PreconditionError);
}

TEST_CASE("lower bound on the norm ratio") {
    FactorOptions opt;
    const auto cert = factor(extremal_matrix(64), opt);
    const auto report = verify_hs_lower_bound({cert});
    REQUIRE(report.records.size() == 1);
    const auto& r = report.records[0];
    CHECK(r.pass);
    CHECK(r.ratio == doctest::Approx(cert.ratio).epsilon(1e-10));
    CHECK(r.implied_k == doctest::Approx(std::log(64.0) - 4 * r.ratio * r.ratio));
    CHECK(r.ratio * r.ratio >= (std::log(64.0) - kDefaultLowerWindow) / 4);

    const auto two = verify_hs_lower_bound({factor(extremal_matrix(2))});
    CHECK(two.records[0].ratio > 0);
    CHECK(two.pass());

    // A near-factorization with a visible residual is refused.
    auto cheat = cert;
    cheat.c *= 0.9;
    CHECK_THROWS_AS(verify_hs_lower_bound({cheat}), PreconditionError);
    auto wrong_size = cert;
    wrong_size.m = 32;
    CHECK_THROWS_AS(verify_hs_lower_bound({wrong_size}), DimensionError);
}

TEST_CASE("full report") {
    const auto report = run_lower_bound(16);
    CHECK(report.strict_pass());
    CHECK(report.trace_pass());
    CHECK(report.isometries.pass);
    CHECK(report.hs_lower.pass());
    CHECK(report.quarter_log_sum == doctest::Approx(quarter_log_sum(16)));
    CHECK(report.filtration.total_dim() == 16);
    CHECK_THROWS_AS(run_lower_bound(1), PreconditionError);

    const auto two = run_lower_bound(2);
    CHECK(two.filtration.dims == std::vector<std::size_t>{1, 1});
    CHECK(two.strict_pass());
}

}

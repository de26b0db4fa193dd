#include "commfact/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "commfact/random.hpp"

namespace commfact {

double disc_radius(std::size_t m) {
    return 1.0 + std::sqrt(static_cast<double>(m) / std::numbers::pi);
}

LatticePointSet gaussian_points(std::size_t m) {
    if (m == 0)
        throw PreconditionError("gaussian_points: m must be positive");

    // The disc of radius 2 + sqrt(m/pi) holds more than m lattice points.
    const auto reach = static_cast<long long>(std::ceil(2.0 + std::sqrt(m / std::numbers::pi)));
    struct Candidate {
        long long norm, re, im;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<std::size_t>((2 * reach + 1) * (2 * reach + 1)));
    for (long long x = -reach; x <= reach; ++x)
        for (long long y = -reach; y <= reach; ++y)
            candidates.push_back({x * x + y * y, x, y});

    const auto key = [](const Candidate& c) { return std::tie(c.norm, c.re, c.im); };
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(m),
                      candidates.end(),
                      [&](const Candidate& a, const Candidate& b) { return key(a) < key(b); });

    LatticePointSet set;
    set.radius_bound = disc_radius(m);
    set.points.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        set.points.emplace_back(static_cast<double>(candidates[i].re),
                                static_cast<double>(candidates[i].im));
    return set;
}

double pair_energy(std::span<const Complex> points) {
    const std::size_t m = points.size();
    double total = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0;
        for (std::size_t j = i + 1; j < m; ++j)
            row += 1.0 / std::norm(points[i] - points[j]);
        total += row;
    }
    return 2.0 * total;
}

EnergyReport pair_expectation(std::span<const Complex> points) {
    const std::size_t m = points.size();
    if (m < 2)
        throw PreconditionError("pair_expectation: need at least two points");
    EnergyReport report;
    report.m = m;
    report.pair_energy = pair_energy(points);
    report.expectation = report.pair_energy / (static_cast<double>(m) * static_cast<double>(m - 1));
    const double log_m = std::log(static_cast<double>(m));
    report.bound_value = (kCalibratedA1 + std::numbers::pi * log_m) / static_cast<double>(m);
    report.empirical_a1 = static_cast<double>(m) * report.expectation - std::numbers::pi * log_m;
    return report;
}

namespace {

// sum_{j != k} 1/|z - z_j|^2, or +inf if z collides with some z_j.
double point_energy(const std::vector<Complex>& points, std::size_t k, Complex z) {
    double e = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (j == k)
            continue;
        const double d2 = std::norm(z - points[j]);
        if (d2 <= 1e-24)
            return std::numeric_limits<double>::infinity();
        e += 1.0 / d2;
    }
    return e;
}

} // namespace

OptimizedConfiguration optimize_configuration(std::size_t m, std::size_t iterations,
                                              std::uint64_t seed) {
    if (m < 2)
        throw PreconditionError("optimize_configuration: m must be at least 2");

    OptimizedConfiguration out;
    out.points = gaussian_points(m).points;
    out.initial_energy = pair_energy(out.points);
    out.energy = out.initial_energy;
    if (iterations == 0)
        return out;

    const double radius = disc_radius(m);
    constexpr double initial_step = 0.5;
    Prng rng(seed);
    std::vector<Complex> points = out.points;

    for (std::size_t it = 0; it < iterations; ++it) {
        const double step = initial_step * (1.0 - static_cast<double>(it) / iterations);
        const auto k = static_cast<std::size_t>(uniform_below(rng, m));
        const double dx = standard_normal(rng);
        const double dy = standard_normal(rng);
        Complex proposal = points[k] + step * Complex(dx, dy);
        const double r = std::abs(proposal);
        if (r > radius)
            proposal *= radius / r;

        const double before = point_energy(points, k, points[k]);
        const double after = point_energy(points, k, proposal);
        if (after < before) {
            points[k] = proposal;
            ++out.accepted_moves;
        }
    }

    // Recompute from scratch; keep the start if rounding ate the gain.
    const double final_energy = pair_energy(points);
    if (final_energy < out.initial_energy) {
        out.points = std::move(points);
        out.energy = final_energy;
    } else {
        out.accepted_moves = 0;
    }
    return out;
}

LeadingTermFit leading_term_fit(std::vector<std::size_t> sizes) {
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.size() < 3)
        throw PreconditionError("leading_term_fit: need at least three distinct sizes");
    if (sizes.front() < 2 || sizes.back() < 10 * sizes.front())
        throw PreconditionError("leading_term_fit: sizes must be >= 2 and span a decade");

    const auto n = static_cast<Eigen::Index>(sizes.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t m = sizes[static_cast<std::size_t>(i)];
        design(i, 0) = std::log(static_cast<double>(m));
        design(i, 1) = 1.0;
        rhs(i) = pair_energy(gaussian_points(m).points) / static_cast<double>(m);
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);

    LeadingTermFit fit;
    fit.slope = coef(0);
    fit.intercept = coef(1);
    fit.sizes = std::move(sizes);
    return fit;
}

} // namespace commfact

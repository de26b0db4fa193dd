#include "commfact/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "commfact/matrix_io.hpp"
#include "commfact/random.hpp"

namespace commfact {

std::vector<SweepRecord> run_sweep(const SweepOptions& options) {
    std::vector<std::size_t> sizes = options.sizes;
    std::vector<std::uint64_t> seeds = options.seeds;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    for (auto m : sizes)
        if (m < 2)
            throw PreconditionError("run_sweep: every m must be at least 2");

    std::vector<SweepRecord> records;
    for (auto m : sizes)
        for (auto seed : seeds)
            records.push_back({m, seed});

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            auto& r = records[i];
            const auto start = std::chrono::steady_clock::now();
            FactorOptions fo;
            fo.trials = options.trials;
            fo.seed = r.seed;
            fo.optimize_assignment = options.optimize_assignment;
            const auto cert = factor(random_trace_zero(static_cast<Eigen::Index>(r.m), r.seed), fo);
            r.ratio = cert.ratio;
            r.ratio_sq_minus_log_m = cert.ratio_sq_minus_log_m();
            r.valid = cert.valid;
            r.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
    };

    std::size_t jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, std::max<std::size_t>(records.size(), 1));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }
    return records;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records, bool include_timing) {
    os << "m,seed,ratio,ratioSqMinusLogM";
    if (include_timing)
        os << ",wallTimeMs";
    os << '\n';
    for (const auto& r : records) {
        os << r.m << ',' << r.seed << ',' << format_real(r.ratio) << ','
           << format_real(r.ratio_sq_minus_log_m);
        if (include_timing)
            os << ',' << format_real(r.wall_time_ms);
        os << '\n';
    }
}

SweepSummary summarize_sweep(const std::vector<SweepRecord>& records) {
    SweepSummary s;
    s.records = records.size();
    if (records.empty())
        return s;
    s.max_ratio_sq_minus_log_m = -std::numeric_limits<double>::infinity();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t first_m = records.front().m;
    bool several = false;
    for (const auto& r : records) {
        if (!r.valid)
            ++s.invalid;
        s.max_ratio_sq_minus_log_m = std::max(s.max_ratio_sq_minus_log_m, r.ratio_sq_minus_log_m);
        const double x = std::log(static_cast<double>(r.m));
        const double y = r.ratio * r.ratio;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        several = several || r.m != first_m;
    }
    if (several) {
        const double n = static_cast<double>(records.size());
        const double denom = n * sxx - sx * sx;
        s.has_fit = true;
        s.slope = (n * sxy - sx * sy) / denom;
        s.intercept = (sy - s.slope * sx) / n;
    }
    return s;
}

} // namespace commfact

// commfact: command-line front end for commutator factorization and the
// lower-bound harness. Exit codes: 0 success, 1 a check failed, 2 bad input,
// 3 nonzero trace, 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commfact/factorizer.hpp"
#include "commfact/filtration.hpp"
#include "commfact/lattice.hpp"
#include "commfact/lowerbound.hpp"
#include "commfact/matrix_io.hpp"
#include "commfact/serialize.hpp"
#include "commfact/sweep.hpp"

namespace fs = std::filesystem;
using namespace commfact;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 1, kBadInput = 2, kNonzeroTrace = 3, kNumerical = 4 };

std::uint64_t default_seed() {
    if (const char* env = std::getenv("COMMFACT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring unparsable COMMFACT_SEED='" << env << "'\n";
        }
    }
    return 0;
}

// "1,2,5-8" -> {1, 2, 5, 6, 7, 8}
std::vector<std::uint64_t> parse_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        const auto dash = item.find('-', 1);
        std::size_t used = 0;
        if (dash == std::string::npos) {
            out.push_back(std::stoull(item, &used));
            if (used != item.size())
                throw std::invalid_argument("bad list item '" + item + "'");
        } else {
            const auto lo = std::stoull(item.substr(0, dash));
            const auto hi = std::stoull(item.substr(dash + 1));
            if (hi < lo)
                throw std::invalid_argument("empty range '" + item + "'");
            for (auto v = lo; v <= hi; ++v)
                out.push_back(v);
        }
    }
    return out;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path);
    os << j.dump(2) << '\n';
}

// Shared error-to-exit-code mapping.
template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kBadInput;
    } catch (const TraceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNonzeroTrace;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
}

struct FactorArgs {
    std::string input;
    std::string prefix;
    std::size_t trials = kDefaultTrials;
    std::uint64_t seed = 0;
    bool optimize = false;
    double tol = kDefaultFactorTol;
};

int cmd_factor(const FactorArgs& args) {
    return guarded([&] {
        const ComplexMatrix a = read_matrix_file(args.input);
        FactorOptions options;
        options.trials = args.trials;
        options.seed = args.seed;
        options.optimize_assignment = args.optimize;
        options.tol = args.tol;
        const auto cert = factor(a, options);

        fs::path prefix = args.prefix.empty() ? fs::path(args.input).replace_extension() : fs::path(args.prefix);
        const auto with_suffix = [&](const std::string& s) { return prefix.string() + s; };
        const MatrixFiles files{with_suffix("_B.txt"), with_suffix("_C.txt"), with_suffix("_Q.txt")};
        write_matrix_file(files.b, cert.b);
        write_matrix_file(files.c, cert.c);
        write_matrix_file(files.q, cert.q);
        const auto json = certificate_json(cert, files);
        write_json(json, with_suffix("_certificate.json"));
        std::cout << json.dump(2) << '\n';
        return cert.valid ? kOk : kNumerical;
    });
}

struct VerifyArgs {
    std::string a, b, c;
    double tol = kDefaultFactorTol;
};

int cmd_verify(const VerifyArgs& args) {
    return guarded([&] {
        const ComplexMatrix a = read_matrix_file(args.a);
        const ComplexMatrix b = read_matrix_file(args.b);
        const ComplexMatrix c = read_matrix_file(args.c);
        if (a.rows() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols() ||
            c.rows() != a.rows() || c.cols() != a.cols())
            throw DimensionError("A, B and C must be square matrices of the same size");

        const double residual = (a - commutator(b, c)).norm();
        const double op_b = operator_norm(b);
        const double hs_c = hs_norm(c);
        const double hs_a = hs_norm(a);
        const double scale = std::max(1.0, op_b * hs_c);
        const bool sanity = hs_a <= 2.0 * op_b * hs_c + args.tol * scale;
        const bool factors = residual <= args.tol * scale;
        nlohmann::json report = {
            {"residual", residual},
            {"opNormB", op_b},
            {"hsNormC", hs_c},
            {"hsNormA", hs_a},
            {"ratio", hs_a > 0 ? op_b * hs_c / hs_a : 0.0},
            {"tolerance", args.tol * scale},
            {"factorizationPass", factors},
            {"sanityPass", sanity},
            {"pass", factors && sanity},
        };
        std::cout << report.dump(2) << '\n';
        return factors && sanity ? kOk : kCheckFailed;
    });
}

struct LowerArgs {
    std::size_t m = 0;
    std::size_t trials = kDefaultTrials;
    std::uint64_t seed = 0;
    std::optional<double> rank_tol;
    double window = kDefaultLowerWindow;
    std::string out;
};

int cmd_lowerbound(const LowerArgs& args) {
    return guarded([&] {
        if (args.m < 2)
            throw PreconditionError("lowerbound: m must be at least 2");
        FactorOptions options;
        options.trials = args.trials;
        options.seed = args.seed;
        const auto report = run_lower_bound(args.m, options, args.rank_tol, args.window);
        write_json(lower_bound_json(report), args.out);
        if (!args.out.empty())
            std::cout << "m=" << report.m << " blocks=" << report.filtration.dims.size()
                      << " strictPass=" << (report.strict_pass() ? "true" : "false")
                      << " hsLowerPass=" << (report.hs_lower.pass() ? "true" : "false") << '\n';
        return report.strict_pass() ? kOk : kCheckFailed;
    });
}

struct SweepArgs {
    std::string sizes;
    std::string seeds;
    std::size_t trials = kDefaultTrials;
    bool optimize = false;
    bool timing = false;
    std::size_t jobs = 0;
    std::string out;
};

int cmd_sweep(const SweepArgs& args) {
    return guarded([&] {
        SweepOptions options;
        for (auto m : parse_list(args.sizes))
            options.sizes.push_back(static_cast<std::size_t>(m));
        options.seeds = parse_list(args.seeds);
        options.trials = args.trials;
        options.optimize_assignment = args.optimize;
        options.jobs = args.jobs;
        const auto records = run_sweep(options);

        std::ostream* summary_os = &std::cout;
        if (args.out.empty() || args.out == "-") {
            write_sweep_csv(std::cout, records, args.timing);
            summary_os = &std::cerr;
        } else {
            std::ofstream os(args.out, std::ios::binary);
            if (!os)
                throw std::runtime_error("cannot open " + args.out);
            write_sweep_csv(os, records, args.timing);
        }
        const auto s = summarize_sweep(records);
        *summary_os << "records=" << s.records << " invalid=" << s.invalid;
        if (s.records)
            *summary_os << " maxRatioSqMinusLogM=" << format_real(s.max_ratio_sq_minus_log_m);
        if (s.has_fit)
            *summary_os << " fitSlope=" << format_real(s.slope) << " fitIntercept=" << format_real(s.intercept);
        *summary_os << '\n';
        return s.invalid == 0 ? kOk : kNumerical;
    });
}

struct LatticeArgs {
    std::size_t m = 0;
    bool optimize = false;
    std::size_t iterations = 10000;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_lattice(const LatticeArgs& args) {
    return guarded([&] {
        if (args.m < 2)
            throw PreconditionError("lattice: m must be at least 2");
        const auto lattice = gaussian_points(args.m);
        nlohmann::json report = {{"lattice", energy_json(pair_expectation(lattice))},
                                 {"radiusBound", lattice.radius_bound}};
        std::vector<Complex> points = lattice.points;
        if (args.optimize) {
            auto opt = optimize_configuration(args.m, args.iterations, args.seed);
            report["optimized"] = {
                {"energy", opt.energy},
                {"expectation", pair_expectation(opt.points).expectation},
                {"initialEnergy", opt.initial_energy},
                {"relativeImprovement", opt.relative_improvement()},
                {"acceptedMoves", opt.accepted_moves},
                {"iterations", args.iterations},
                {"seed", args.seed},
            };
            points = std::move(opt.points);
        }
        if (!args.out.empty()) {
            write_matrix_file(args.out, points_as_column(points));
            report["pointsFile"] = args.out;
        }
        std::cout << report.dump(2) << '\n';
        return kOk;
    });
}

struct FiltrationArgs {
    std::string s, t, m;
    std::string lambda = "0,0";
    std::optional<double> rank_tol;
    std::string out;
};

int cmd_filtration(const FiltrationArgs& args) {
    return guarded([&] {
        const ComplexMatrix s = read_matrix_file(args.s);
        const ComplexMatrix t = read_matrix_file(args.t);
        const ComplexMatrix m_basis = read_matrix_file(args.m);
        const ComplexMatrix lambda = matrix_from_string("1 1\n" + args.lambda + "\n");
        const auto f = build_filtration(s, t, m_basis, args.rank_tol);
        const auto lemma = verify_lemma_conclusions(f, s, t, lambda(0, 0), m_basis);
        write_json(filtration_json(f, lemma), args.out);
        return lemma.pass() ? kOk : kCheckFailed;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Commutator factorization A = [B, C] with B normal, and lower-bound checks"};
    app.require_subcommand(1);
    const std::uint64_t seed = default_seed();

    FactorArgs fa;
    fa.seed = seed;
    auto* factor_cmd = app.add_subcommand("factor", "Factor a trace-zero matrix and write B, C, Q and a certificate");
    factor_cmd->add_option("input", fa.input, "Matrix file")->required();
    factor_cmd->add_option("--trials", fa.trials, "Random assignments to try")->check(CLI::PositiveNumber);
    factor_cmd->add_option("--seed", fa.seed, "Base seed (default $COMMFACT_SEED or 0)");
    factor_cmd->add_flag("--optimize-assignment", fa.optimize, "Refine the best assignment with pairwise swaps");
    factor_cmd->add_option("--out-prefix", fa.prefix, "Output prefix (default: input path without extension)");
    factor_cmd->add_option("--tol", fa.tol, "Relative tolerance for the certificate checks");

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "Check that A = [B, C] and report the norm ratio");
    verify_cmd->add_option("A", va.a)->required();
    verify_cmd->add_option("B", va.b)->required();
    verify_cmd->add_option("C", va.c)->required();
    verify_cmd->add_option("--tol", va.tol, "Relative tolerance");

    LowerArgs la;
    la.seed = seed;
    double lower_rank_tol = 0;
    auto* lower_cmd = app.add_subcommand("lowerbound", "Run the lower-bound checks on A = P - I/m");
    lower_cmd->add_option("--m", la.m, "Dimension")->required();
    lower_cmd->add_option("--trials", la.trials)->check(CLI::PositiveNumber);
    lower_cmd->add_option("--seed", la.seed);
    auto* lower_rank_opt = lower_cmd->add_option("--rank-tol", lower_rank_tol, "Filtration rank cutoff (default 1e-8 m)");
    lower_cmd->add_option("--window", la.window, "K in ratio^2 >= (log m - K)/4");
    lower_cmd->add_option("--out", la.out, "Report file (default stdout)");

    SweepArgs sa;
    sa.seeds = std::to_string(seed);
    auto* sweep_cmd = app.add_subcommand("sweep", "Factor random trace-zero matrices over (m, seed) and write CSV");
    sweep_cmd->add_option("--m", sa.sizes, "Sizes, e.g. 4,16,64 or 4-8");
    sweep_cmd->add_option("--seeds", sa.seeds, "Seeds, e.g. 0-9");
    sweep_cmd->add_option("--trials", sa.trials)->check(CLI::PositiveNumber);
    sweep_cmd->add_flag("--optimize-assignment", sa.optimize);
    sweep_cmd->add_flag("--timing", sa.timing, "Add a wallTimeMs column (not reproducible)");
    sweep_cmd->add_option("--jobs", sa.jobs, "Worker threads (0: all cores)");
    sweep_cmd->add_option("--out", sa.out, "CSV file (default stdout)");

    LatticeArgs lta;
    lta.seed = seed;
    auto* lattice_cmd = app.add_subcommand("lattice", "Gaussian lattice points and their pair energy");
    lattice_cmd->add_option("--m", lta.m)->required();
    lattice_cmd->add_flag("--optimize", lta.optimize, "Run the energy descent");
    lattice_cmd->add_option("--iterations", lta.iterations);
    lattice_cmd->add_option("--seed", lta.seed);
    lattice_cmd->add_option("--out", lta.out, "Write the points as an m x 1 matrix");

    FiltrationArgs fia;
    double filt_rank_tol = 0;
    auto* filt_cmd = app.add_subcommand("filtration", "Build the S, T filtration from M and check its structure");
    filt_cmd->add_option("S", fia.s)->required();
    filt_cmd->add_option("T", fia.t)->required();
    filt_cmd->add_option("M", fia.m, "Orthonormal basis of M, one column per vector")->required();
    filt_cmd->add_option("--lambda", fia.lambda, "Shift as re,im");
    auto* filt_rank_opt = filt_cmd->add_option("--rank-tol", filt_rank_tol);
    filt_cmd->add_option("--out", fia.out, "Report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    if (*factor_cmd)
        return cmd_factor(fa);
    if (*verify_cmd)
        return cmd_verify(va);
    if (*lower_cmd) {
        if (*lower_rank_opt)
            la.rank_tol = lower_rank_tol;
        return cmd_lowerbound(la);
    }
    if (*sweep_cmd)
        return cmd_sweep(sa);
    if (*lattice_cmd)
        return cmd_lattice(lta);
    if (*filt_cmd) {
        if (*filt_rank_opt)
            fia.rank_tol = filt_rank_tol;
        return cmd_filtration(fia);
    }
    return kBadInput;
}

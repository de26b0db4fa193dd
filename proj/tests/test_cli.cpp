#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commfact/matrix_io.hpp"

using namespace commfact;
using namespace testing;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class Scratch {
public:
    Scratch() {
        dir_ = fs::temp_directory_path() / ("commfact_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }
    fs::path operator/(const std::string& name) const { return dir_ / name; }

    Run run(const std::string& args) const {
        const auto out = dir_ / "stdout.txt";
        const std::string cmd = std::string(COMMFACT_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                                (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        Run r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        return r;
    }

private:
    fs::path dir_;
    static inline int counter_ = 0;
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("factor then verify") {
    Scratch tmp;
    write_matrix_file(tmp / "a.txt", diag({0.5, -0.5}));
    auto r = tmp.run("factor " + (tmp / "a.txt").string());
    REQUIRE(r.code == 0);
    const auto cert = nlohmann::json::parse(slurp(tmp / "a_certificate.json"));
    CHECK(cert["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cert["valid"].get<bool>());
    CHECK(cert["B"].get<std::string>() == (tmp / "a_B.txt").string());

    r = tmp.run("verify " + (tmp / "a.txt").string() + " " + (tmp / "a_B.txt").string() + " " +
                (tmp / "a_C.txt").string());
    CHECK(r.code == 0);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report["residual"].get<double>() <= 1e-10);
    CHECK(report["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("factor of a random matrix round-trips through files") {
    Scratch tmp;
    const ComplexMatrix a = random_trace_zero(12, 4);
    write_matrix_file(tmp / "a.txt", a);
    REQUIRE(tmp.run("factor " + (tmp / "a.txt").string() + " --seed 4 --out-prefix " + (tmp / "x").string()).code == 0);
    const ComplexMatrix b = read_matrix_file(tmp / "x_B.txt"), c = read_matrix_file(tmp / "x_C.txt");
    CHECK(hs_norm(ComplexMatrix(a - commutator(b, c))) <= 1e-10 * std::max(1.0, operator_norm(b) * hs_norm(c)));
    CHECK(tmp.run("verify " + (tmp / "a.txt").string() + " " + (tmp / "x_B.txt").string() + " " +
                  (tmp / "x_C.txt").string()).code == 0);
}

TEST_CASE("factor exit codes") {
    Scratch tmp;
    std::ofstream(tmp / "bad.txt") << "2 2\n1,0 0,0\n";
    CHECK(tmp.run("factor " + (tmp / "bad.txt").string()).code == 2);
    CHECK(tmp.run("factor " + (tmp / "missing.txt").string()).code == 2);
    write_matrix_file(tmp / "id.txt", ComplexMatrix::Identity(3, 3));
    CHECK(tmp.run("factor " + (tmp / "id.txt").string()).code == 3);
    write_matrix_file(tmp / "rect.txt", ComplexMatrix::Zero(2, 3));
    CHECK(tmp.run("factor " + (tmp / "rect.txt").string()).code == 2);
    CHECK(tmp.run("factor").code == 2);
    CHECK(tmp.run("nonsense").code == 2);
}

TEST_CASE("verify rejects a wrong factorization") {
    Scratch tmp;
    const ComplexMatrix b = mat2(1, 2, 3, 4);
    write_matrix_file(tmp / "b.txt", b);
    write_matrix_file(tmp / "a.txt", mat2(0, 1, 1, 0));
    write_matrix_file(tmp / "zero.txt", ComplexMatrix::Zero(2, 2));
    CHECK(tmp.run("verify " + (tmp / "a.txt").string() + " " + (tmp / "b.txt").string() + " " +
                  (tmp / "b.txt").string()).code == 1);
    CHECK(tmp.run("verify " + (tmp / "zero.txt").string() + " " + (tmp / "b.txt").string() + " " +
                  (tmp / "b.txt").string()).code == 0);
    write_matrix_file(tmp / "three.txt", ComplexMatrix::Zero(3, 3));
    CHECK(tmp.run("verify " + (tmp / "three.txt").string() + " " + (tmp / "b.txt").string() + " " +
                  (tmp / "b.txt").string()).code == 2);
}

TEST_CASE("lowerbound") {
    Scratch tmp;
    auto r = tmp.run("lowerbound --m 16");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["strictPass"].get<bool>());
    CHECK(j["traceIneqPass"].get<bool>());
    CHECK(j["partialSumPass"].get<bool>());

    r = tmp.run("lowerbound --m 2");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["filtration"]["dims"] == nlohmann::json::array({1, 1}));

    CHECK(tmp.run("lowerbound --m 1").code == 2);
}

TEST_CASE("sweep") {
    Scratch tmp;
    auto r = tmp.run("sweep --m 4,16 --seeds 0-2 --trials 8");
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "m,seed,ratio,ratioSqMinusLogM");
    int rows = 0;
    while (std::getline(lines, line))
        ++rows;
    CHECK(rows == 6);

    r = tmp.run("sweep --seeds 0");
    CHECK(r.code == 0);
    CHECK(r.out == "m,seed,ratio,ratioSqMinusLogM\n");

    CHECK(tmp.run("sweep --m 1 --seeds 0").code == 2);
    CHECK(tmp.run("sweep --m 4 --seeds 3-1").code == 2);

    const auto out = (tmp / "s.csv").string();
    REQUIRE(tmp.run("sweep --m 8 --seeds 0,1 --timing --out " + out).code == 0);
    CHECK(slurp(out).rfind("m,seed,ratio,ratioSqMinusLogM,wallTimeMs\n", 0) == 0);
}

TEST_CASE("seed from the environment") {
    Scratch tmp;
    const auto a = tmp.run("sweep --m 5 --trials 4").out;
    ::setenv("COMMFACT_SEED", "9", 1);
    const auto b = tmp.run("sweep --m 5 --trials 4").out;
    ::unsetenv("COMMFACT_SEED");
    CHECK(a.find("\n5,0,") != std::string::npos);
    CHECK(b.find("\n5,9,") != std::string::npos);
}

TEST_CASE("lattice") {
    Scratch tmp;
    auto r = tmp.run("lattice --m 5");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["lattice"]["pairEnergy"].get<double>() == doctest::Approx(13));

    r = tmp.run("lattice --m 5 --optimize --iterations 0");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["optimized"]["energy"].get<double>() == doctest::Approx(13));

    const auto pts = (tmp / "pts.txt").string();
    r = tmp.run("lattice --m 64 --optimize --iterations 3000 --seed 1 --out " + pts);
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["optimized"]["relativeImprovement"].get<double>() >= 0);
    CHECK(read_matrix_file(pts).rows() == 64);

    CHECK(tmp.run("lattice --m 1").code == 2);
}

TEST_CASE("filtration") {
    Scratch tmp;
    const double h = 1 / std::sqrt(2.0);
    // A hand factorization of diag(1/2, -1/2).
    const ComplexMatrix q = mat2(h, h, h, -h);
    write_matrix_file(tmp / "s.txt", ComplexMatrix(q * diag({0, 1}) * q.adjoint()));
    write_matrix_file(tmp / "t.txt", ComplexMatrix(q * mat2(0, -0.5, 0.5, 0) * q.adjoint()));
    ComplexMatrix e1 = ComplexMatrix::Zero(2, 1);
    e1(0, 0) = 1;
    write_matrix_file(tmp / "m.txt", e1);
    const std::string args = (tmp / "s.txt").string() + " " + (tmp / "t.txt").string() + " " + (tmp / "m.txt").string();
    auto r = tmp.run("filtration " + args + " --lambda 0.5,0");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["dims"] == nlohmann::json::array({1, 1}));
    CHECK(j["pass"].get<bool>());

    CHECK(tmp.run("filtration " + args + " --lambda 3,0").code == 1);
    write_matrix_file(tmp / "m.txt", ComplexMatrix::Ones(2, 1));
    CHECK(tmp.run("filtration " + args).code == 2);
}

}

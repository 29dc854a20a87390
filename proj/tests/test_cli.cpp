#include "bclab/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bclab;
using json = nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;

    std::vector<json> lines() const {
        std::vector<json> v;
        std::istringstream in(out);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) v.push_back(json::parse(line));
        return v;
    }
    json envelope() const { return lines().back(); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "bclab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("bclab_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("classify golden") {
    const auto r = run({"classify", "x^2-x-1"});
    REQUIRE(r.code == 0);
    const auto env = r.envelope();
    CHECK(env["type"] == "envelope");
    CHECK(env["classification"]["pisot"] == true);
    CHECK(env["payload"]["summary"]["degree"] == 2);
    CHECK(env["minpoly"]["coefficients"] == json::array({"1", "-1", "-1"}));
    CHECK_FALSE(env.contains("wall_time_s"));
}

TEST_CASE("classify 2x-3") {
    const auto r = run({"classify", "2x-3"});
    REQUIRE(r.code == 0);
    CHECK(r.envelope()["classification"]["algebraic_integer"] == false);
}

TEST_CASE("exit codes") {
    auto reducible = run({"classify", "x^2-1"});
    CHECK(reducible.code == 3);
    const auto err = reducible.envelope();
    CHECK(err["type"] == "error");
    CHECK(err["factor"]["text"] == "x - 1");

    CHECK(run({"classify", "x^^2"}).code == 2);
    CHECK(run({"classify"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"dn", "x^2-x-1", "--budget", "10"}).code == 2);
    CHECK(run({"dn", "x^2-x-1", "--nmax", "30", "--budget", "4096"}).code == 5);
    CHECK(run({"traces", "2,-3"}).code == 6);
    CHECK(run({"salem-sums", "x^2-x-1"}).code == 6);
    CHECK(run({"reduce", "x^2-3", "--max-steps", "1"}).code == 7);
    CHECK(run({"classify", "x^2+1"}).code == 8);
    CHECK(run({"reduce", "x^2-2"}).code == 9);
    CHECK(run({"dn", "x^2-x-1", "--cache-dir", "/proc/bclab-none/x"}).code == 10);
}

TEST_CASE("exit code table is injective over the documented errors") {
    CHECK(exit_code(ErrorCode::Syntax) == 2);
    CHECK(exit_code(ErrorCode::Reducible) == 3);
    CHECK(exit_code(ErrorCode::PrecisionExhausted) == 4);
    CHECK(exit_code(ErrorCode::BudgetExceeded) == 5);
    CHECK(exit_code(ErrorCode::NotMonic) == 6);
    CHECK(exit_code(ErrorCode::NotSalem) == 6);
    CHECK(exit_code(ErrorCode::ReductionDidNotTerminate) == 7);
    CHECK(exit_code(ErrorCode::NoRealRootAboveOne) == 8);
    CHECK(exit_code(ErrorCode::DegreeCapExceeded) == 9);
    CHECK(exit_code(ErrorCode::CacheIO) == 10);
}

TEST_CASE("dn rows for 3/2 are powers of two") {
    const auto r = run({"dn", "2,-3", "--nmax", "12"});
    REQUIRE(r.code == 0);
    const auto lines = r.lines();
    REQUIRE(lines.size() == 13);
    for (int n = 1; n <= 12; ++n) {
        CHECK(lines[n - 1]["type"] == "row");
        CHECK(lines[n - 1]["row"]["d_n"] == (1u << n));
    }
}

TEST_CASE("traces golden") {
    const auto r = run({"traces", "x^2-x-1", "--N", "6"});
    REQUIRE(r.code == 0);
    const std::vector<std::string> expected{"1", "3", "4", "7", "11", "18"};
    const auto lines = r.lines();
    for (int n = 0; n < 6; ++n) CHECK(lines[n]["row"]["t_n"] == expected[n]);
}

TEST_CASE("csv output") {
    const auto r = run({"gaps", "x^2-x-1", "--nmax", "6", "--csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,count,g_n,g_n_err,G_n,G_n_err,g_n_exact");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 6);
    // envelope goes to stderr without --summary
    CHECK(json::parse(r.err)["type"] == "envelope");
}

TEST_CASE("summary file and table output") {
    const auto dir = scratch("summary");
    std::filesystem::create_directories(dir);
    const auto path = (dir / "env.json").string();
    const auto r = run({"entropy", "x^2-x-1", "--nmax", "5", "--table", "--summary", path});
    REQUIRE(r.code == 0);
    std::ifstream f(path);
    json env = json::parse(f);
    CHECK(env["command"] == "entropy");
    CHECK(r.out.find("H_last") != std::string::npos);
}

TEST_CASE("thread count does not change output") {
    for (const std::vector<std::string>& base :
         {std::vector<std::string>{"dn", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", "--nmax", "12"},
          std::vector<std::string>{"gaps", "x^3-x-2", "--nmax", "8"},
          std::vector<std::string>{"measure", "x^2-x-1", "--n", "5", "--depth", "13"}}) {
        auto one = base, many = base;
        one.insert(one.end(), {"--threads", "1"});
        many.insert(many.end(), {"--threads", "4"});
        const auto a = run(one), b = run(many);
        REQUIRE(a.code == 0);
        auto ea = a.envelope(), eb = b.envelope();
        ea.erase("parameters");
        eb.erase("parameters");
        CHECK(ea == eb);
        CHECK(a.lines().size() == b.lines().size());
    }
}

TEST_CASE("cache hit and cold run give identical payloads") {
    const auto dir = scratch("cache");
    const std::vector<std::string> args{"gaps", "x^3-x-1", "--nmax", "9", "--cache-dir", dir.string()};
    const auto cold = run(args);
    REQUIRE(cold.code == 0);
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) > 0);
    const auto warm = run(args);
    CHECK(warm.out == cold.out);
    const auto plain = run({"gaps", "x^3-x-1", "--nmax", "9"});
    CHECK(plain.out == cold.out);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config file, flags take precedence") {
    const auto dir = scratch("config");
    std::filesystem::create_directories(dir);
    const auto cfg = (dir / "run.conf").string();
    {
        std::ofstream f(cfg);
        f << "# comment\nprecision_bits = 192\nseed=42\noutput_format=json\nbudget = 100000\n";
    }
    auto r = run({"classify", "x^2-x-1", "--config", cfg});
    REQUIRE(r.code == 0);
    CHECK(r.envelope()["parameters"]["precision_bits"] == 192);
    CHECK(r.envelope()["parameters"]["seed"] == 42);
    r = run({"classify", "x^2-x-1", "--config", cfg, "--seed", "7"});
    CHECK(r.envelope()["parameters"]["seed"] == 7);
    {
        std::ofstream f(cfg);
        f << "unknown_key = 1\n";
    }
    CHECK(run({"classify", "x^2-x-1", "--config", cfg}).code == 2);
    CHECK(run({"classify", "x^2-x-1", "--config", (dir / "missing").string()}).code == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("timing is opt-in") {
    const auto r = run({"classify", "x^2-x-1", "--timing"});
    CHECK(r.envelope().contains("wall_time_s"));
}

TEST_CASE("equal seeds give byte-identical branching output") {
    const std::vector<std::string> args{"branching", "2,-3", "--samples", "3", "--N", "16", "--nmax", "8", "--seed", "5"};
    CHECK(run(args).out == run(args).out);
    auto other = args;
    other.back() = "6";
    CHECK(run(other).out != run(args).out);
}

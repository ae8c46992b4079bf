#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef CONFCAL_CLI_PATH
#error "CONFCAL_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string err_path = "cli_stderr.tmp";
    const std::string cmd =
        std::string(CONFCAL_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST_CASE("eval evaluates expressions with bindings") {
    const RunResult r = run_cli("eval --expr \"qexp(0, x)\" --bind x=3");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "4\n");
}

TEST_CASE("eval reports parse errors on stderr with exit 2") {
    const RunResult r = run_cli("eval --expr \"x +\"");
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("offset 3") != std::string::npos);
}

TEST_CASE("eval propagates support violations as exit 2") {
    const RunResult r = run_cli("eval --expr \"qexp(2, 1.5)\"");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("support") != std::string::npos);
}

TEST_CASE("diff symbolic and numeric modes") {
    CHECK(run_cli("diff --kind cd --alpha 0.5 --expr \"x^2\" --var x --symbolic").out ==
          "2*x^1.5\n");
    CHECK(std::abs(std::stod(run_cli("diff --kind dcd --alpha 1 --expr \"x^2\" --var x --numeric --at 3").out) -
                   6.0) <= 1e-8);
    CHECK(std::abs(std::stod(run_cli("diff --kind chen --alpha 0.5 --expr \"x^2\" --var x --numeric --at 4").out) -
                   32.0) <= 1e-7);
    CHECK(std::abs(std::stod(run_cli("diff --kind classic --expr \"sin(x)\" --var x --numeric --at 0").out) -
                   1.0) <= 1e-9);

    // Exactly one of --symbolic/--numeric, and --numeric needs --at.
    CHECK(run_cli("diff --kind cd --alpha 0.5 --expr \"x^2\" --var x").exit_code == 2);
    CHECK(run_cli("diff --kind cd --alpha 0.5 --expr \"x^2\" --var x --numeric").exit_code == 2);
    CHECK(run_cli("diff --kind cd --alpha 0.5 --expr \"x^2\" --var x --symbolic --numeric --at 1")
              .exit_code == 2);
}

TEST_CASE("integrate covers the three integral kinds") {
    CHECK(std::abs(std::stod(run_cli("integrate --kind cd --alpha 0.5 --expr \"1\" --from 0 --to 4").out) -
                   4.0) <= 1e-8);
    CHECK(std::abs(std::stod(run_cli("integrate --kind cd --alpha 1 --expr \"x\" --from 0 --to 2").out) -
                   2.0) <= 1e-9);

    const RunResult paper =
        run_cli("integrate --kind dcd-paper --alpha 0 --expr \"x\" --from 1 --to 2");
    CHECK(paper.exit_code == 0);
    CHECK(std::abs(std::stod(paper.out) - 7.0 / 3.0) <= 1e-9);

    const RunResult strict =
        run_cli("integrate --kind dcd-strict --alpha 1 --expr \"1\" --from 0 --to 2 --h0 1");
    CHECK(std::abs(std::stod(strict.out) - 3.0) <= 1e-9);  // H = H0 + x

    CHECK(run_cli("integrate --kind cd --alpha 0.5 --expr \"1\" --from -1 --to 2").exit_code == 2);
    CHECK(run_cli("integrate --kind cd --alpha 0.5 --expr \"1\" --from 0 --to 4 --precision 6").out ==
          "4\n");
}

TEST_CASE("solve dcd-eigen emits a table and flags blow-up with exit 3") {
    const RunResult ok = run_cli("solve dcd-eigen --alpha 2 --lambda 1 --x-end 1 --steps 64");
    CHECK(ok.exit_code == 0);
    const auto rows = parse_csv(ok.out);
    REQUIRE(rows.size() == 66);  // header + 65 nodes
    CHECK(rows[0] == std::vector<std::string>{"x", "value"});
    CHECK(std::stod(rows.back()[0]) == doctest::Approx(1.0));
    CHECK(std::stod(rows.back()[1]) == doctest::Approx(2.0).epsilon(1e-12));

    const RunResult blow = run_cli("solve dcd-eigen --alpha 0.5 --lambda 1 --x-end 3");
    CHECK(blow.exit_code == 3);
    const std::string last_line = blow.out.substr(blow.out.rfind("# event"));
    CHECK(last_line.find("blow_up") != std::string::npos);
    const double location = std::stod(last_line.substr(last_line.rfind(',') + 1));
    CHECK(location < 2.0);
}

TEST_CASE("solve oscillator matches the classical cosine") {
    const RunResult r =
        run_cli("solve oscillator --alpha 1 --omega 2 --x0 1 --v0 0 --t-end 0.7 --steps 512");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 514);
    CHECK(rows[0] == std::vector<std::string>{"t", "x", "v", "E"});
    for (std::size_t i = 1; i < rows.size(); i += 64) {
        const double t = std::stod(rows[i][0]);
        const double x = std::stod(rows[i][1]);
        CHECK(std::abs(x - std::cos(2.0 * t)) <= 1e-6);
    }
}

TEST_CASE("solve emits JSON when asked") {
    const RunResult r = run_cli(
        "solve cd-eigen --alpha 1 --lambda 1 --x0 0.5 --y0 1 --x-end 1 --steps 16 --format json");
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("columns") == nlohmann::json({"x", "value"}));
    CHECK(j.at("rows").size() == 17);
}

TEST_CASE("verify emits a JSON report and exit 0 when green") {
    const RunResult r = run_cli("verify --seed 42 --samples 64");
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("seed") == 42);
    for (const auto& e : j.at("entries")) CHECK(e.at("passed") == true);
}

TEST_CASE("verify rejects sample counts below the minimum") {
    CHECK(run_cli("verify --samples 8").exit_code == 2);
}

TEST_CASE("verify filter narrows the report") {
    const RunResult r = run_cli("verify --seed 1 --samples 32 --filter duality");
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("entries").size() == 1);
    CHECK(j.at("entries")[0].at("name") == "duality-product");
}

TEST_CASE("verify can render the report as CSV") {
    const RunResult r = run_cli("verify --seed 1 --samples 32 --filter duality --format csv");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "name");
    CHECK(rows[1][0] == "duality-product");
    CHECK(rows[1].back() == "true");
}

TEST_CASE("identical invocations produce byte-identical output") {
    const RunResult a = run_cli("verify --seed 42 --samples 64");
    const RunResult b = run_cli("verify --seed 42 --samples 64");
    CHECK(a.out == b.out);

    const RunResult s1 = run_cli("solve oscillator --alpha 0.9 --t-end 1 --steps 64");
    const RunResult s2 = run_cli("solve oscillator --alpha 0.9 --t-end 1 --steps 64");
    CHECK(s1.out == s2.out);
}

TEST_CASE("--out writes the payload to a file") {
    const std::string path = "cli_payload.tmp";
    const RunResult r = run_cli("eval --expr \"1 + 1\" --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(path) == "2\n");
    std::remove(path.c_str());
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("eval").exit_code == 2);
    CHECK(run_cli("eval --expr x --precision 30").exit_code == 2);
    CHECK(run_cli("solve").exit_code == 2);
    CHECK(run_cli("eval --expr x --bind broken").exit_code == 2);
    CHECK(run_cli("eval --expr x").exit_code == 2);  // unbound variable
}

TEST_CASE("help exits 0") {
    CHECK(run_cli("--help").exit_code == 0);
}

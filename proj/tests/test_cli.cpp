#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdef/cli.hpp"
#include "qdef/errors.hpp"

#include <json.hpp>

#include <cstdlib>
#include <string>
#include <vector>

using namespace qdef;
using namespace qdef::cli;
using json = nlohmann::json;

namespace {

RunConfig args(std::vector<std::string> a) {
    a.insert(a.begin(), "qdef");
    std::vector<const char*> argv;
    for (const auto& s : a) argv.push_back(s.c_str());
    return parse_args(static_cast<int>(argv.size()), argv.data());
}

std::string data(const char* name) { return std::string(QDEF_DATA_DIR) + "/" + name; }

} // namespace

TEST_CASE("argument parsing") {
    const RunConfig c = args({"deficiency", "--preset", "jacobi_sq", "--N", "2000", "--unit", "k",
                              "--q", "1+i", "--seed", "9", "--format", "text", "--window", "50"});
    CHECK(c.command == Command::deficiency);
    CHECK(c.preset == "jacobi_sq");
    CHECK(c.tol.N == 2000);
    CHECK(c.tol.window == 50);
    CHECK(c.unit == 'k');
    CHECK(*c.q == Quaternion(1, 1, 0, 0));
    CHECK(c.seed == 9);
    CHECK(c.format == Format::text);

    CHECK_THROWS_AS(args({"frobnicate"}), ConfigParse);
    CHECK_THROWS_AS(args({"verify", "--unit", "x"}), ConfigParse);
    CHECK_THROWS_AS(args({"verify", "--N", "ten"}), ConfigParse);
    CHECK_THROWS_AS(args({"verify", "--q", "1+2q"}), ConfigParse);
}

TEST_CASE("tolerance overrides") {
    Tolerances t;
    apply_tolerance_overrides(t, R"({"atol": 1e-9, "N": 4000, "window": 50})");
    CHECK(t.atol == 1e-9);
    CHECK(t.N == 4000);
    CHECK(t.window == 50);
    CHECK(t.rank_tol == 1e-10);
    CHECK_THROWS_AS(apply_tolerance_overrides(t, "{"), ConfigParse);
    CHECK_THROWS_AS(apply_tolerance_overrides(t, R"({"speed": 1})"), ConfigParse);
    CHECK_THROWS_AS(apply_tolerance_overrides(t, R"({"N": -3})"), ConfigParse);

    setenv("QDEF_TOL_OVERRIDES", R"({"N": 500, "ratio": 0.01})", 1);
    const RunConfig env_only = args({"verify", "--preset", "diag_1_2"});
    CHECK(env_only.tol.N == 500);
    CHECK(env_only.tol.ratio == 0.01);
    const RunConfig flag_wins = args({"verify", "--preset", "diag_1_2", "--N", "800"});
    CHECK(flag_wins.tol.N == 800);
    unsetenv("QDEF_TOL_OVERRIDES");
}

TEST_CASE("deficiency command") {
    const RunResult r = run(args({"deficiency", "--preset", "jacobi_sq", "--N", "2000"}));
    CHECK(r.exit_code == kExitPass);
    const json doc = json::parse(r.output);
    CHECK(doc["result"]["deficiency"]["n_plus"] == 1);
    CHECK(doc["result"]["deficiency"]["n_minus"] == 1);
    CHECK(doc["result"]["deficiency"]["stability"]["all_equal"] == true);
    CHECK(doc["tolerances"]["N"] == 2000);
    CHECK(doc["tolerances"]["rank_tol"] == 1e-10);
}

TEST_CASE("sspectrum command") {
    const RunResult r = run(args({"sspectrum", "--matrix", data("diag_1_2.json")}));
    CHECK(r.exit_code == kExitPass);
    const json s = json::parse(r.output)["result"]["spectrum"]["spheres"];
    REQUIRE(s.size() == 2);
    CHECK(s[0]["re"] == 1.0);
    CHECK(s[0]["im_mag"] == 0.0);
    CHECK(s[1]["re"] == 2.0);

    const RunResult csv = run(args({"sspectrum", "--preset", "diag_1_2", "--format", "csv"}));
    CHECK(csv.output == "re,im_mag,mult\n1.0,0.0,1\n2.0,0.0,1\n");

    CHECK(run(args({"sspectrum", "--preset", "jacobi_sq"})).exit_code == kExitConfigError);
}

TEST_CASE("verify exit codes and determinism") {
    const RunConfig c = args({"verify", "--preset", "number_operator", "--seed", "7"});
    const RunResult a = run(c);
    const RunResult b = run(c);
    CHECK(a.exit_code == kExitPass);
    CHECK(a.output == b.output);

    CHECK(run(args({"verify", "--matrix", data("hermitian_3.json")})).exit_code == kExitPass);
    CHECK(run(args({"verify", "--matrix", data("hermitian_perturbed.json")})).exit_code ==
          kExitPropertyFailure);
    CHECK(run(args({"verify", "--matrix", data("malformed.json")})).exit_code == kExitConfigError);
    CHECK(run(args({"verify", "--matrix", data("does_not_exist.json")})).exit_code == kExitConfigError);
    CHECK(run(args({"verify", "--preset", "nope"})).exit_code == kExitConfigError);
    CHECK(run(args({"verify"})).exit_code == kExitConfigError);
    CHECK(run(args({"verify", "--matrix", data("jacobi_sq.json")})).exit_code == kExitPass);

    const json doc = json::parse(run(args({"verify", "--matrix", data("hermitian_perturbed.json")})).output);
    bool found = false;
    for (const auto& ch : doc["result"]["checks"]) {
        if (ch["name"] == "symmetric") found = ch["passed"] == false;
    }
    CHECK(found);
}

TEST_CASE("invariance and report commands") {
    const RunResult inv = run(args({"invariance", "--preset", "real_symmetric", "--seed", "3"}));
    CHECK(inv.exit_code == kExitPass);
    CHECK(json::parse(inv.output)["result"]["invariance"]["discrepancy"] == 0);

    const RunResult rep = run(args({"report", "--preset", "real_symmetric", "--seed", "3"}));
    CHECK(rep.exit_code == kExitPass);
    const json d = json::parse(rep.output)["result"];
    CHECK(d.contains("verify"));
    CHECK(d.contains("sspectrum"));
    CHECK(d.contains("deficiency"));
    CHECK(d.contains("invariance"));

    CHECK(run(args({"verify", "--preset", "left_scalar_i", "--dim", "2"})).exit_code == kExitPropertyFailure);
}

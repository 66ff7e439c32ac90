#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "../src/cli/commands.hpp"
#include "divtest/asymptotics.hpp"
#include "divtest/distribution.hpp"
#include "divtest/divergence.hpp"
#include "divtest/tradeoff.hpp"

using namespace divtest;
using Json = nlohmann::json;

namespace {

// In-process driver. argv[0] is a dummy program name.
int run_args(std::initializer_list<const char*> args) {
    std::vector<std::string> store{"divtest"};
    for (const char* a : args) store.emplace_back(a);
    std::vector<char*> argv;
    argv.reserve(store.size());
    for (auto& s : store) argv.push_back(s.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct ProcResult {
    int code;
    std::string out;
};

// Subprocess driver for stdout-shape checks. Stderr is discarded.
ProcResult run_tool(const std::string& args) {
    const char* bin = std::getenv("DIVTEST_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string("\"") + bin + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t m;
    while ((m = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, m);
    int status = pclose(pipe);
    int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::filesystem::path tmp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("divtest_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Json load_json(const std::filesystem::path& p) { return Json::parse(slurp(p)); }

constexpr const char* kP1 = "0.15,0.6,0.25";
constexpr const char* kQ1 = "0.45,0.15,0.4";

// Frozen second-order values for (kP1, kQ1).
constexpr double kKl = 0.549483866060284;
constexpr double kNp02 = -2.1416405716875215;
constexpr double kHoeff02 = -2.916855651483583;
constexpr double kSm02 = -3.3135778825840037;
constexpr double kHoeff50 = -1.2277981308605581;
constexpr double kSm50 = -1.3437092241291253;

}  // namespace

TEST_CASE("analyze emits one report per test with frozen values") {
    auto out = tmp_path("analyze.json");
    int rc = run_args({"analyze", "--p", kP1, "--q", kQ1, "--eps", "0.02", "--out",
                       out.c_str()});
    REQUIRE(rc == 0);
    Json doc = load_json(out);
    CHECK(doc["schema"] == "1");
    CHECK(doc["command"] == "analyze");
    CHECK(doc["eps"].get<double>() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(doc["p"].size() == 3);
    CHECK(doc["q"][0].get<double>() == doctest::Approx(0.45).epsilon(1e-15));

    const Json& reports = doc["reports"];
    REQUIRE(reports.size() == 3);
    CHECK(reports[0]["test"] == "neyman_pearson");
    CHECK(reports[1]["test"] == "hoeffding");
    CHECK(reports[2]["test"] == "divergence");
    CHECK(reports[2]["divergence"] == "mahalanobis_default");
    for (const Json& r : reports) {
        CHECK(r["beta_first"].get<double>() == doctest::Approx(kKl).epsilon(1e-12));
    }
    CHECK(reports[0]["beta_second"].get<double>() ==
          doctest::Approx(kNp02).epsilon(1e-12));
    CHECK(reports[1]["beta_second"].get<double>() ==
          doctest::Approx(kHoeff02).epsilon(1e-7));
    CHECK(reports[2]["beta_second"].get<double>() ==
          doctest::Approx(kSm02).epsilon(1e-7));
    CHECK(reports[1]["kl_variance"].get<double>() ==
          doctest::Approx(1.0874229113410552).epsilon(1e-12));
    REQUIRE(reports[2]["lambda"].size() == 2);
    CHECK(reports[2]["lambda"][0].get<double>() ==
          doctest::Approx(1.626226552146785).epsilon(1e-9));
    CHECK(reports[2]["lambda"][1].get<double>() ==
          doctest::Approx(3.040440114519879).epsilon(1e-9));
    CHECK(reports[2]["quad_form"].get<double>() ==
          doctest::Approx(0.5757424395059413).epsilon(1e-12));

    // Median level kills the normal quantile, so the correction vanishes.
    rc = run_args({"analyze", "--p", kP1, "--q", kQ1, "--eps", "0.5", "--out",
                   out.c_str()});
    REQUIRE(rc == 0);
    doc = load_json(out);
    CHECK(std::fabs(doc["reports"][0]["beta_second"].get<double>()) < 1e-12);
    CHECK(doc["reports"][1]["beta_second"].get<double>() ==
          doctest::Approx(kHoeff50).epsilon(1e-7));
    CHECK(doc["reports"][2]["beta_second"].get<double>() ==
          doctest::Approx(kSm50).epsilon(1e-7));
    std::filesystem::remove(out);
}

TEST_CASE("analyze rejects bad input") {
    auto out = tmp_path("analyze_err.json");
    CHECK(run_args({"analyze", "--q", kQ1, "--out", out.c_str()}) == 2);
    CHECK(run_args({"analyze", "--p", kP1, "--out", out.c_str()}) == 2);
    CHECK(run_args({"analyze", "--p", kP1, "--q", kP1, "--out", out.c_str()}) == 2);
    CHECK(run_args({"analyze", "--p", kP1, "--q", kQ1, "--format", "csv", "--out",
                    out.c_str()}) == 2);
    CHECK(run_args({"analyze", "--p", kP1, "--q", kQ1, "--eps", "0", "--out",
                    out.c_str()}) == 2);
    CHECK(run_args({"analyze", "--p", kP1, "--q", kQ1, "--eps", "0.02,0.05", "--out",
                    out.c_str()}) == 2);
    CHECK(run_args({"analyze", "--p", "0.2,0.3", "--q", kQ1, "--out", out.c_str()}) ==
          2);
    CHECK(run_args({"analyze", "--p", "0.2,-0.1,0.9", "--q", kQ1, "--out",
                    out.c_str()}) == 2);
    std::filesystem::remove(out);
}

TEST_CASE("ratio-grid emits the documented columns and stays inside the simplex") {
    auto out = tmp_path("grid.csv");
    int rc = run_args({"ratio-grid", "--p", kP1, "--eps", "0.02", "--resolution", "12",
                       "--out", out.c_str()});
    REQUIRE(rc == 0);
    NumericCsv table = numeric_csv_parse(slurp(out));
    const std::vector<std::string> want = {"Q1",       "Q2",
                                           "eps",      "rho",
                                           "beta2_np", "beta2_hoeffding",
                                           "beta2_div"};
    REQUIRE(table.columns == want);
    REQUIRE(table.rows.size() > 20);

    double rho_min = 1e300;
    double rho_max = 0.0;
    for (const auto& row : table.rows) {
        REQUIRE(row.size() == 7);
        CHECK(row[0] >= 1e-3 - 1e-12);
        CHECK(row[1] >= 1e-3 - 1e-12);
        CHECK(1.0 - row[0] - row[1] >= 1e-3 - 1e-9);
        CHECK(row[2] == doctest::Approx(0.02).epsilon(1e-15));
        CHECK(std::isfinite(row[3]));
        CHECK(row[3] > 0.0);
        CHECK(row[4] < 0.0);
        CHECK(row[5] < 0.0);
        CHECK(row[6] < 0.0);
        rho_min = std::min(rho_min, row[3]);
        rho_max = std::max(rho_max, row[3]);
    }
    // At this level the divergence test beats the mismatched baseline for some
    // alternatives and loses for others.
    CHECK(rho_min < 1.0);
    CHECK(rho_max > 1.0);

    // One row reproduced through the library entry points.
    const auto& row = table.rows[table.rows.size() / 2];
    Distribution p = make_distribution({0.15, 0.6, 0.25});
    Distribution qd = make_distribution({row[0], row[1], 1.0 - row[0] - row[1]});
    Divergence sm = Divergence::mahalanobis_default();
    CHECK(row[4] ==
          doctest::Approx(second_order_np(p, qd, 0.02).beta_second).epsilon(1e-12));
    CHECK(row[5] ==
          doctest::Approx(second_order_hoeffding(p, qd, 0.02).beta_second)
              .epsilon(1e-8));
    CHECK(row[6] ==
          doctest::Approx(second_order_divergence(sm, p, qd, 0.02).beta_second)
              .epsilon(1e-12));
    CHECK(row[3] == doctest::Approx(ratio_rho(sm, p, qd, 0.02)).epsilon(1e-8));
    std::filesystem::remove(out);
}

TEST_CASE("ratio-grid q2 slice and json format") {
    auto out = tmp_path("grid_slice.csv");
    int rc = run_args({"ratio-grid", "--p", kP1, "--eps", "0.02", "--resolution", "8",
                       "--q2", "0.3", "--out", out.c_str()});
    REQUIRE(rc == 0);
    NumericCsv table = numeric_csv_parse(slurp(out));
    // q1 grid stops once the third component hits the margin.
    REQUIRE(table.rows.size() == 5);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(table.rows[i][1] == doctest::Approx(0.3).epsilon(1e-15));
        if (i > 0) CHECK(table.rows[i][0] > table.rows[i - 1][0]);
    }

    auto jout = tmp_path("grid.json");
    rc = run_args({"ratio-grid", "--p", kP1, "--eps", "0.02", "--resolution", "4",
                   "--format", "json", "--out", jout.c_str()});
    REQUIRE(rc == 0);
    Json doc = load_json(jout);
    CHECK(doc["schema"] == "1");
    CHECK(doc["command"] == "ratio-grid");
    REQUIRE(doc["columns"].size() == 7);
    CHECK(doc["columns"][3] == "rho");
    REQUIRE(doc["rows"].size() > 0);
    CHECK(doc["rows"][0].size() == 7);
    CHECK(doc["rows"][0][2].get<double>() == doctest::Approx(0.02).epsilon(1e-15));
    std::filesystem::remove(out);
    std::filesystem::remove(jout);
}

TEST_CASE("ratio-grid rejects bad input") {
    CHECK(run_args({"ratio-grid", "--p", "0.5,0.5", "--eps", "0.02"}) == 2);
    CHECK(run_args({"ratio-grid", "--p", kP1, "--q", kQ1, "--eps", "0.02"}) == 2);
    CHECK(run_args({"ratio-grid", "--p", kP1, "--eps", "0.02", "--resolution", "1"}) ==
          2);
    CHECK(run_args({"ratio-grid", "--p", kP1, "--eps", "0.02", "--divergence", "sm",
                    "--divergence", "kl"}) == 2);
    CHECK(run_args({"ratio-grid", "--p", kP1, "--eps", "0.02", "--q2", "0.9995"}) == 2);
    CHECK(run_args({"ratio-grid", "--p", kP1, "--eps", "0.02", "--q2", "1e-5"}) == 2);
}

TEST_CASE("tradeoff prints one labeled section per curve") {
    ProcResult r = run_tool("tradeoff --p 0.5,0.25,0.25 --q 0.25,0.25,0.5 --n 12");
    REQUIRE(r.code == 0);
    auto pos_np = r.out.find("# curve: np\nthreshold,alpha,beta,ln_alpha,ln_beta\n");
    auto pos_h = r.out.find("# curve: hoeffding\n");
    auto pos_sm = r.out.find("# curve: mahalanobis_default\n");
    REQUIRE(pos_np != std::string::npos);
    REQUIRE(pos_h != std::string::npos);
    REQUIRE(pos_sm != std::string::npos);
    CHECK(pos_np < pos_h);
    CHECK(pos_h < pos_sm);
}

TEST_CASE("tradeoff per-curve files round-trip the exact curves") {
    auto base = tmp_path("curves.csv");
    int rc = run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "10", "--out",
                       base.c_str()});
    REQUIRE(rc == 0);
    auto stem = base.parent_path() / base.stem();
    auto np_file = stem;
    np_file += "_np.csv";
    auto h_file = stem;
    h_file += "_hoeffding.csv";
    auto sm_file = stem;
    sm_file += "_mahalanobis_default.csv";
    REQUIRE(std::filesystem::exists(np_file));
    REQUIRE(std::filesystem::exists(h_file));
    REQUIRE(std::filesystem::exists(sm_file));

    Distribution p = make_distribution({0.15, 0.6, 0.25});
    Distribution q = make_distribution({0.45, 0.15, 0.4});
    std::uint64_t cap = enum_cap_from_env();
    CHECK(slurp(np_file) == tradeoff_csv(np_tradeoff_curve(p, q, 10, cap)));
    CHECK(slurp(h_file) ==
          tradeoff_csv(divergence_tradeoff_curve(Divergence::kl(), p, q, 10, cap)));
    CHECK(slurp(sm_file) ==
          tradeoff_csv(divergence_tradeoff_curve(Divergence::mahalanobis_default(), p,
                                                 q, 10, cap)));
    std::filesystem::remove(np_file);
    std::filesystem::remove(h_file);
    std::filesystem::remove(sm_file);
}

TEST_CASE("tradeoff json lists curves with points") {
    auto out = tmp_path("curves.json");
    int rc = run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "8", "--format",
                       "json", "--out", out.c_str()});
    REQUIRE(rc == 0);
    Json doc = load_json(out);
    CHECK(doc["schema"] == "1");
    CHECK(doc["command"] == "tradeoff");
    CHECK(doc["n"].get<std::int64_t>() == 8);
    REQUIRE(doc["curves"].size() == 3);
    CHECK(doc["curves"][0]["test"] == "np");
    CHECK(doc["curves"][0]["statistic"] == "log_likelihood_ratio");
    CHECK(doc["curves"][1]["test"] == "hoeffding");
    CHECK(doc["curves"][1]["statistic"] == "kl");
    CHECK(doc["curves"][2]["test"] == "mahalanobis_default");

    Distribution p = make_distribution({0.15, 0.6, 0.25});
    Distribution q = make_distribution({0.45, 0.15, 0.4});
    TradeoffCurve ref = np_tradeoff_curve(p, q, 8, enum_cap_from_env());
    const Json& pts = doc["curves"][0]["points"];
    REQUIRE(pts.size() == ref.points.size());
    for (std::size_t i = 0; i < ref.points.size(); ++i) {
        REQUIRE(pts[i].size() == 3);
        CHECK(pts[i][0].get<double>() == ref.points[i].threshold);
        CHECK(pts[i][1].get<double>() == ref.points[i].alpha);
        CHECK(pts[i][2].get<double>() == ref.points[i].beta);
    }

    // An explicit kl divergence collapses into the hoeffding curve.
    rc = run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "8", "--divergence",
                   "kl", "--format", "json", "--out", out.c_str()});
    REQUIRE(rc == 0);
    doc = load_json(out);
    REQUIRE(doc["curves"].size() == 2);
    CHECK(doc["curves"][0]["test"] == "np");
    CHECK(doc["curves"][1]["test"] == "hoeffding");
    std::filesystem::remove(out);
}

TEST_CASE("tradeoff rejects bad input") {
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1}) == 2);
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "10,20"}) == 2);
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "0"}) == 2);
}

TEST_CASE("convergence sweeps n for a fixed level") {
    auto out = tmp_path("conv_n.csv");
    int rc = run_args({"convergence", "--p", kP1, "--q", kQ1, "--eps", "0.02", "--n",
                       "50,100,500", "--out", out.c_str()});
    REQUIRE(rc == 0);
    NumericCsv table = numeric_csv_parse(slurp(out));
    const std::vector<std::string> want = {"n", "approx_np", "approx_hoeffding",
                                           "approx_div", "beta_first"};
    REQUIRE(table.columns == want);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0][0] == 50.0);
    CHECK(table.rows[1][0] == 100.0);
    CHECK(table.rows[2][0] == 500.0);
    for (const auto& row : table.rows) {
        CHECK(row[4] == doctest::Approx(kKl).epsilon(1e-12));
    }
    CHECK(table.rows[2][1] == doctest::Approx(0.45370678802698783).epsilon(1e-12));
    CHECK(table.rows[2][2] == doctest::Approx(0.41903811571484945).epsilon(1e-7));
    CHECK(table.rows[2][3] == doctest::Approx(0.401296158176331).epsilon(1e-7));
    // The corrections are negative, so every approximation sits below the
    // first-order exponent and grows toward it with n.
    for (int c = 1; c <= 3; ++c) {
        CHECK(table.rows[0][c] < table.rows[1][c]);
        CHECK(table.rows[1][c] < table.rows[2][c]);
        CHECK(table.rows[2][c] < kKl);
    }
    std::filesystem::remove(out);
}

TEST_CASE("convergence sweeps eps when several levels are given") {
    auto out = tmp_path("conv_eps.csv");
    int rc = run_args({"convergence", "--p", kP1, "--q", kQ1, "--eps",
                       "0.02,0.5", "--out", out.c_str()});
    REQUIRE(rc == 0);
    NumericCsv table = numeric_csv_parse(slurp(out));
    const std::vector<std::string> want = {"eps", "abs_beta2_np", "abs_beta2_hoeffding",
                                           "abs_beta2_div"};
    REQUIRE(table.columns == want);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][1] == doctest::Approx(-kNp02).epsilon(1e-12));
    CHECK(table.rows[0][2] == doctest::Approx(-kHoeff02).epsilon(1e-7));
    CHECK(table.rows[0][3] == doctest::Approx(-kSm02).epsilon(1e-7));
    CHECK(std::fabs(table.rows[1][1]) < 1e-12);
    CHECK(table.rows[1][2] == doctest::Approx(-kHoeff50).epsilon(1e-7));
    CHECK(table.rows[1][3] == doctest::Approx(-kSm50).epsilon(1e-7));
    std::filesystem::remove(out);
}

TEST_CASE("convergence rejects bad input") {
    CHECK(run_args({"convergence", "--p", kP1, "--q", kQ1, "--eps", "0.01,0.02",
                    "--n", "10,20"}) == 2);
    CHECK(run_args({"convergence", "--p", kP1, "--q", kQ1, "--eps", "0.02"}) == 2);
    CHECK(run_args({"convergence", "--p", kP1, "--q", kQ1, "--n", "10",
                    "--divergence", "kl", "--divergence", "sm"}) == 2);
    CHECK(run_args({"convergence", "--p", kP1, "--q", kQ1, "--eps", "0.02", "--n",
                    "0"}) == 2);
}

TEST_CASE("verify passes its gates on the default pair") {
    auto out = tmp_path("verify.json");
    int rc = run_args({"verify", "--seed", "42", "--out", out.c_str()});
    REQUIRE(rc == 0);
    Json doc = load_json(out);
    CHECK(doc["schema"] == "1");
    CHECK(doc["command"] == "verify");
    CHECK(doc["seed"].get<std::uint64_t>() == 42);
    CHECK(doc["pass"] == true);
    REQUIRE(doc["p"].size() == 3);
    CHECK(doc["p"][1].get<double>() == doctest::Approx(0.6).epsilon(1e-15));
    REQUIRE(doc["gates"].size() == 3);
    CHECK(doc["gates"][0]["name"] == "wilks_kl");
    CHECK(doc["gates"][1]["name"] == "limit_sm");
    CHECK(doc["gates"][2]["name"] == "exact_vs_mc");
    for (const Json& g : doc["gates"]) CHECK(g["pass"] == true);
    CHECK(doc["gates"][0]["value"].get<double>() < 0.02);
    CHECK(doc["gates"][1]["value"].get<double>() < 0.02);
    CHECK(doc["gates"][2]["inside"].get<int>() >= 2);
    REQUIRE(doc["gates"][2]["levels"].size() == 3);
    std::filesystem::remove(out);
}

TEST_CASE("verify negative control fails the limit gates") {
    auto out = tmp_path("verify_bad.json");
    int rc = run_args({"verify", "--seed", "42", "--inject-wrong-lambda", "--out",
                       out.c_str()});
    CHECK(rc == 1);
    Json doc = load_json(out);
    CHECK(doc["pass"] == false);
    CHECK(doc["gates"][0]["pass"] == false);
    CHECK(doc["gates"][1]["pass"] == false);
    // The enumeration cross-check has no limit law in it.
    CHECK(doc["gates"][2]["pass"] == true);
    std::filesystem::remove(out);
}

TEST_CASE("verify reruns are byte identical for a fixed seed") {
    auto a = tmp_path("verify_a.json");
    auto b = tmp_path("verify_b.json");
    REQUIRE(run_args({"verify", "--seed", "123", "--out", a.c_str()}) == 0);
    REQUIRE(run_args({"verify", "--seed", "123", "--out", b.c_str()}) == 0);
    CHECK(slurp(a) == slurp(b));
    REQUIRE(run_args({"verify", "--seed", "7", "--out", b.c_str()}) == 0);
    CHECK(slurp(a) != slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("enumeration cap env override") {
    auto out = tmp_path("cap.json");
    // 91 compositions at n=12, k=3 exceed a cap of 10.
    setenv("DIVTEST_ENUM_CAP", "10", 1);
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "12", "--format",
                    "json", "--out", out.c_str()}) == 3);
    setenv("DIVTEST_ENUM_CAP", "1000", 1);
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "12", "--format",
                    "json", "--out", out.c_str()}) == 0);
    setenv("DIVTEST_ENUM_CAP", "abc", 1);
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "12", "--format",
                    "json", "--out", out.c_str()}) == 2);
    setenv("DIVTEST_ENUM_CAP", "10x", 1);
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "12", "--format",
                    "json", "--out", out.c_str()}) == 2);
    setenv("DIVTEST_ENUM_CAP", "0", 1);
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "12", "--format",
                    "json", "--out", out.c_str()}) == 2);
    unsetenv("DIVTEST_ENUM_CAP");
    CHECK(run_args({"tradeoff", "--p", kP1, "--q", kQ1, "--n", "12", "--format",
                    "json", "--out", out.c_str()}) == 0);
    std::filesystem::remove(out);
}

TEST_CASE("config file fills unset flags and flags win") {
    auto cfg = tmp_path("config.json");
    {
        std::ofstream os(cfg);
        // String, array, and scalar spellings are all accepted; the schema and
        // command keys of a reused output document are ignored.
        os << R"({"schema":"1","command":"analyze","p":"0.15,0.6,0.25",)"
           << R"("q":[0.45,0.15,0.4],"eps":0.5,"seed":9,"resolution":33})";
    }
    auto out = tmp_path("cfg_out.json");
    int rc = run_args({"analyze", "--config", cfg.c_str(), "--out", out.c_str()});
    REQUIRE(rc == 0);
    Json doc = load_json(out);
    CHECK(doc["eps"].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::fabs(doc["reports"][0]["beta_second"].get<double>()) < 1e-12);

    rc = run_args({"analyze", "--config", cfg.c_str(), "--eps", "0.02", "--out",
                   out.c_str()});
    REQUIRE(rc == 0);
    doc = load_json(out);
    CHECK(doc["eps"].get<double>() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(doc["reports"][0]["beta_second"].get<double>() ==
          doctest::Approx(kNp02).epsilon(1e-12));

    CHECK(run_args({"analyze", "--config", "/nonexistent/divtest.json", "--out",
                    out.c_str()}) == 2);
    auto bad = tmp_path("config_bad.json");
    {
        std::ofstream os(bad);
        os << "{nope";
    }
    CHECK(run_args({"analyze", "--config", bad.c_str(), "--out", out.c_str()}) == 2);
    std::filesystem::remove(cfg);
    std::filesystem::remove(bad);
    std::filesystem::remove(out);
}

TEST_CASE("argument parser failures exit with code 2") {
    CHECK(run_args({}) == 2);
    CHECK(run_args({"frobnicate"}) == 2);
    CHECK(run_args({"analyze", "--p", kP1, "--q", kQ1, "--no-such-flag"}) == 2);
    ProcResult help = run_tool("--help");
    CHECK(help.code == 0);
    CHECK(help.out.find("analyze") != std::string::npos);
    CHECK(help.out.find("tradeoff") != std::string::npos);
}

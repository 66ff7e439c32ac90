#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "divtest/asymptotics.hpp"
#include "divtest/distribution.hpp"
#include "divtest/divergence.hpp"
#include "divtest/errors.hpp"
#include "divtest/genchisq.hpp"
#include "divtest/information.hpp"
#include "divtest/jsonio.hpp"
#include "divtest/montecarlo.hpp"
#include "divtest/tradeoff.hpp"

namespace divtest {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0') {
            throw ConfigError(std::string(what) + ": cannot parse '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& s, const char* what) {
    std::vector<std::int64_t> out;
    for (double v : parse_double_list(s, what)) {
        auto i = static_cast<std::int64_t>(v);
        if (static_cast<double>(i) != v) {
            throw ConfigError(std::string(what) + ": expected integers");
        }
        out.push_back(i);
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file " + path);
    os << content;
    if (!os) throw ConfigError("failed writing " + path);
}

Distribution dist_from(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw ConfigError(std::string(what) + " distribution is required");
    return make_distribution(v);
}

std::vector<Divergence> resolve_divergences(const RunConfig& cfg, bool default_sm) {
    std::vector<Divergence> out;
    for (const auto& tok : cfg.divergences) out.push_back(divergence_from_string(tok));
    if (out.empty() && default_sm) out.push_back(Divergence::mahalanobis_default());
    return out;
}

double single_eps(const RunConfig& cfg) {
    if (cfg.eps.size() != 1) {
        throw ConfigError(cfg.subcommand + " expects exactly one --eps value");
    }
    double e = cfg.eps[0];
    if (!(e > 0.0) || !(e < 1.0)) throw ConfigError("--eps must lie in (0,1)");
    return e;
}

std::string out_with_suffix(const std::string& out, const std::string& tag) {
    if (out.empty()) return out;
    auto dot = out.rfind('.');
    if (dot == std::string::npos || out.find('/', dot) != std::string::npos) {
        return out + "_" + tag;
    }
    return out.substr(0, dot) + "_" + tag + out.substr(dot);
}

}  // namespace

std::string numeric_csv_emit(const NumericCsv& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ',';
        os << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << fmt17(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

NumericCsv numeric_csv_parse(const std::string& text) {
    NumericCsv table;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("numeric_csv_parse: empty input");
    std::stringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) table.columns.push_back(col);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        std::string cell;
        while (std::getline(rs, cell, ',')) {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) {
                throw ConfigError("numeric_csv_parse: bad cell '" + cell + "'");
            }
            row.push_back(v);
        }
        if (row.size() != table.columns.size()) {
            throw ConfigError("numeric_csv_parse: ragged row");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::uint64_t enum_cap_from_env() {
    const char* env = std::getenv("DIVTEST_ENUM_CAP");
    if (!env || !*env) return kDefaultEnumCap;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
        throw ConfigError("DIVTEST_ENUM_CAP must be a positive integer, got '" +
                          std::string(env) + "'");
    }
    return static_cast<std::uint64_t>(v);
}

int cmd_analyze(const RunConfig& cfg) {
    if (cfg.format != "json") {
        throw ConfigError("analyze emits json; pass --format json or drop --format");
    }
    Distribution p = dist_from(cfg.p, "--p");
    Distribution q = dist_from(cfg.q, "--q");
    double eps = single_eps(cfg);
    Json doc;
    doc["schema"] = "1";
    doc["command"] = "analyze";
    doc["p"] = distribution_to_json(p);
    doc["q"] = distribution_to_json(q);
    doc["eps"] = eps;
    Json reports = Json::array();
    reports.push_back(report_to_json(second_order_np(p, q, eps)));
    reports.push_back(report_to_json(second_order_hoeffding(p, q, eps)));
    for (const auto& d : resolve_divergences(cfg, true)) {
        reports.push_back(report_to_json(second_order_divergence(d, p, q, eps)));
    }
    doc["reports"] = std::move(reports);
    write_output(cfg.out, doc.dump(2) + "\n");
    return 0;
}

int cmd_ratio_grid(const RunConfig& cfg) {
    Distribution p = dist_from(cfg.p, "--p");
    if (p.size() != 3) {
        throw ConfigError("ratio-grid needs k=3 (use --q2 for a fixed-Q2 slice)");
    }
    if (!cfg.q.empty()) throw ConfigError("ratio-grid sweeps q; drop --q");
    double eps = single_eps(cfg);
    if (cfg.resolution < 2) throw ConfigError("--resolution must be >= 2");
    auto divs = resolve_divergences(cfg, true);
    if (divs.size() != 1) throw ConfigError("ratio-grid takes exactly one divergence");
    const Divergence& d = divs[0];

    // The limiting mixture depends on (D, P) only, so the quantile work is
    // hoisted out of the Q sweep.
    Eigen::MatrixXd a = hessian_matrix(d, p).value;
    Eigen::LLT<Eigen::MatrixXd> allt(a);
    std::vector<double> lam = limit_eigenvalues(a, p);
    double q_div = inverse_tail(from_eigenvalues(lam), eps);
    // Unit weights: b2_h below pairs this quantile with the plain variance, so
    // the reference here is the chi-square itself, not the half-scaled limit.
    double q_chi = inverse_tail(from_eigenvalues(std::vector<double>(
                                    static_cast<std::size_t>(p.size() - 1), 1.0)),
                                eps);
    double z_np = standard_normal_inverse_tail(eps);

    constexpr double kMargin = 1e-3;
    NumericCsv table;
    table.columns = {"Q1", "Q2", "eps", "rho", "beta2_np", "beta2_hoeffding", "beta2_div"};
    int res = cfg.resolution;
    double span = 1.0 - 3.0 * kMargin;
    auto emit_cell = [&](double q1, double q2) {
        std::vector<double> qv{q1, q2, 1.0 - q1 - q2};
        Distribution qd = make_distribution(qv);
        Eigen::VectorXd c = tilt_vector(p, qd);
        if (c.norm() < kDefaultMinTiltNorm) return;  // grid node collided with p
        double v = kl_variance(p, qd);
        double quad = c.dot(allt.solve(c));
        double b2_np = -std::sqrt(v) * z_np;
        double b2_h = -std::sqrt(v * q_chi);
        double b2_d = -std::sqrt(quad * q_div);
        table.rows.push_back({q1, q2, eps, std::fabs(b2_d) / std::fabs(b2_h), b2_np, b2_h,
                              b2_d});
    };
    if (cfg.q2_slice >= 0.0) {
        double q2 = cfg.q2_slice;
        if (!(q2 >= kMargin) || !(q2 <= 1.0 - 2.0 * kMargin)) {
            throw ConfigError("--q2 must keep the slice inside the simplex");
        }
        for (int i = 0; i < res; ++i) {
            double q1 = kMargin + span * static_cast<double>(i) / (res - 1);
            if (1.0 - q1 - q2 < kMargin) break;
            emit_cell(q1, q2);
        }
    } else {
        for (int i = 0; i < res; ++i) {
            double q1 = kMargin + span * static_cast<double>(i) / (res - 1);
            for (int j = 0; j < res; ++j) {
                double q2 = kMargin + span * static_cast<double>(j) / (res - 1);
                if (1.0 - q1 - q2 < kMargin) break;
                emit_cell(q1, q2);
            }
        }
    }
    if (cfg.format == "json") {
        Json doc;
        doc["schema"] = "1";
        doc["command"] = "ratio-grid";
        doc["columns"] = table.columns;
        doc["rows"] = table.rows;
        write_output(cfg.out, doc.dump(2) + "\n");
    } else {
        write_output(cfg.out, numeric_csv_emit(table));
    }
    return 0;
}

int cmd_tradeoff(const RunConfig& cfg) {
    Distribution p = dist_from(cfg.p, "--p");
    Distribution q = dist_from(cfg.q, "--q");
    if (cfg.n.size() != 1) throw ConfigError("tradeoff expects exactly one --n");
    std::int64_t n = cfg.n[0];
    std::uint64_t cap = enum_cap_from_env();
    auto divs = resolve_divergences(cfg, true);

    std::vector<std::pair<std::string, TradeoffCurve>> curves;
    curves.emplace_back("np", np_tradeoff_curve(p, q, n, cap));
    curves.emplace_back("hoeffding",
                        divergence_tradeoff_curve(Divergence::kl(), p, q, n, cap));
    for (const auto& d : divs) {
        if (d.kind() == Divergence::Kind::KL) continue;  // already present as hoeffding
        curves.emplace_back(d.label(), divergence_tradeoff_curve(d, p, q, n, cap));
    }

    if (cfg.format == "json") {
        Json doc;
        doc["schema"] = "1";
        doc["command"] = "tradeoff";
        doc["n"] = n;
        Json arr = Json::array();
        for (const auto& [tag, curve] : curves) {
            Json c;
            c["test"] = tag;
            c["statistic"] = curve.statistic;
            Json pts = Json::array();
            for (const auto& pt : curve.points) {
                pts.push_back({pt.threshold, pt.alpha, pt.beta});
            }
            c["points"] = std::move(pts);
            arr.push_back(std::move(c));
        }
        doc["curves"] = std::move(arr);
        write_output(cfg.out, doc.dump(2) + "\n");
        return 0;
    }
    if (cfg.out.empty()) {
        std::ostringstream os;
        for (const auto& [tag, curve] : curves) {
            os << "# curve: " << tag << "\n" << tradeoff_csv(curve);
        }
        std::cout << os.str();
        return 0;
    }
    for (const auto& [tag, curve] : curves) {
        write_output(out_with_suffix(cfg.out, tag), tradeoff_csv(curve));
    }
    return 0;
}

int cmd_convergence(const RunConfig& cfg) {
    Distribution p = dist_from(cfg.p, "--p");
    Distribution q = dist_from(cfg.q, "--q");
    auto divs = resolve_divergences(cfg, true);
    if (divs.size() != 1) throw ConfigError("convergence takes exactly one divergence");
    const Divergence& d = divs[0];

    NumericCsv table;
    if (cfg.eps.size() > 1) {
        if (cfg.n.size() > 1) {
            throw ConfigError("convergence sweeps either --eps or --n, not both");
        }
        table.columns = {"eps", "abs_beta2_np", "abs_beta2_hoeffding", "abs_beta2_div"};
        for (double eps : cfg.eps) {
            if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("--eps must lie in (0,1)");
            auto rn = second_order_np(p, q, eps);
            auto rh = second_order_hoeffding(p, q, eps);
            auto rd = second_order_divergence(d, p, q, eps);
            table.rows.push_back({eps, std::fabs(rn.beta_second),
                                  std::fabs(rh.beta_second), std::fabs(rd.beta_second)});
        }
    } else {
        if (cfg.n.empty()) throw ConfigError("convergence needs --n or a multi-value --eps");
        double eps = single_eps(cfg);
        auto rn = second_order_np(p, q, eps);
        auto rh = second_order_hoeffding(p, q, eps);
        auto rd = second_order_divergence(d, p, q, eps);
        table.columns = {"n", "approx_np", "approx_hoeffding", "approx_div", "beta_first"};
        for (std::int64_t n : cfg.n) {
            if (n < 1) throw ConfigError("--n entries must be >= 1");
            table.rows.push_back({static_cast<double>(n), approx_exponent(rn, n),
                                  approx_exponent(rh, n), approx_exponent(rd, n),
                                  rn.beta_first});
        }
    }
    if (cfg.format == "json") {
        Json doc;
        doc["schema"] = "1";
        doc["command"] = "convergence";
        doc["columns"] = table.columns;
        doc["rows"] = table.rows;
        write_output(cfg.out, doc.dump(2) + "\n");
    } else {
        write_output(cfg.out, numeric_csv_emit(table));
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    if (cfg.format != "json") {
        throw ConfigError("verify emits json; pass --format json or drop --format");
    }
    Distribution p = cfg.p.empty() ? make_distribution({0.15, 0.6, 0.25})
                                   : dist_from(cfg.p, "--p");
    Distribution q = cfg.q.empty() ? make_distribution({0.45, 0.15, 0.4})
                                   : dist_from(cfg.q, "--q");
    std::uint64_t seed = cfg.seed;
    Json gates = Json::array();
    bool all_pass = true;

    auto run_wilks = [&](const char* name, const Divergence& d, std::uint64_t gate_seed) {
        constexpr std::int64_t n = 10000;
        constexpr std::uint64_t samples = 20000;
        constexpr double budget = 0.02;
        ConvergenceReport rep;
        if (cfg.inject_wrong_lambda) {
            // Negative control: compare against a deliberately misscaled limit.
            std::vector<double> lam = limit_eigenvalues(hessian_matrix(d, p).value, p);
            for (double& l : lam) l *= 1.5;
            GenChiSq wrong = from_eigenvalues(lam);
            rep = statistic_convergence(d, p, n, samples, gate_seed);
            double sup = 0.0;
            for (std::size_t j = 0; j < rep.grid.size(); ++j) {
                double emp = rep.empirical_tail[j];
                sup = std::max(sup, std::fabs(emp - tail(wrong, rep.grid[j])));
            }
            rep.sup_distance = sup;
        } else {
            rep = statistic_convergence(d, p, n, samples, gate_seed);
        }
        bool pass = rep.sup_distance < budget;
        all_pass = all_pass && pass;
        Json g;
        g["name"] = name;
        g["pass"] = pass;
        g["value"] = rep.sup_distance;
        g["budget"] = budget;
        g["samples"] = samples;
        g["n"] = n;
        gates.push_back(std::move(g));
    };
    std::uint64_t state = seed;
    run_wilks("wilks_kl", Divergence::kl(), splitmix64(state));
    run_wilks("limit_sm", Divergence::mahalanobis_default(), splitmix64(state));

    // Exact enumeration vs simulated operating points at small n. Each level is
    // one 95% interval check per error kind, so a minority of misses is within
    // expectation; two of three levels must reconcile.
    {
        constexpr std::int64_t n = 100;
        constexpr std::uint64_t samples = 20000;
        std::uint64_t cap = enum_cap_from_env();
        Divergence kl = Divergence::kl();
        TradeoffCurve curve = divergence_tradeoff_curve(kl, p, q, n, cap);
        int inside = 0;
        Json levels = Json::array();
        for (double level : {0.02, 0.05, 0.1}) {
            CalibratedThreshold cal = calibrate_threshold(kl, p, n, level, cap);
            double exact_beta = beta_at_alpha(curve, cal.alpha);
            ErrorEstimate est =
                estimate_errors(kl, p, q, n, cal.threshold, samples, splitmix64(state));
            bool a_in = est.alpha.lo <= cal.alpha && cal.alpha <= est.alpha.hi;
            bool b_in = est.beta.lo <= exact_beta && exact_beta <= est.beta.hi;
            if (a_in && b_in) ++inside;
            Json g;
            g["level"] = level;
            g["exact_alpha"] = cal.alpha;
            g["exact_beta"] = exact_beta;
            g["alpha_interval"] = {est.alpha.lo, est.alpha.hi};
            g["beta_interval"] = {est.beta.lo, est.beta.hi};
            g["inside"] = a_in && b_in;
            levels.push_back(std::move(g));
        }
        bool pass = inside >= 2;
        all_pass = all_pass && pass;
        Json g;
        g["name"] = "exact_vs_mc";
        g["pass"] = pass;
        g["inside"] = inside;
        g["required"] = 2;
        g["levels"] = std::move(levels);
        g["samples"] = samples;
        g["n"] = n;
        gates.push_back(std::move(g));
    }

    Json doc;
    doc["schema"] = "1";
    doc["command"] = "verify";
    doc["seed"] = seed;
    doc["p"] = distribution_to_json(p);
    doc["q"] = distribution_to_json(q);
    doc["gates"] = std::move(gates);
    doc["pass"] = all_pass;
    write_output(cfg.out, doc.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

namespace {

struct FlagSet {
    std::string p, q, eps, n, config;
    std::vector<std::string> divergences;
    int resolution = 0;
    std::string out;
    std::uint64_t seed = 0;
    std::string format;
    double q2 = -1.0;
    bool inject_wrong_lambda = false;
};

void merge_config_file(const std::string& path, CLI::App* sub, FlagSet& f) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    Json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    auto list_str = [](const Json& v, const char* what) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number()) return v.dump();
        if (v.is_array()) {
            std::string s;
            for (const auto& e : v) {
                if (!s.empty()) s += ',';
                s += e.dump();
            }
            return s;
        }
        throw ConfigError(std::string(what) + ": expected number, string, or array");
    };
    auto unset = [&](const char* flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt == nullptr || opt->count() == 0;
    };
    for (auto& [key, val] : j.items()) {
        if (key == "p" && unset("--p")) f.p = list_str(val, "p");
        else if (key == "q" && unset("--q")) f.q = list_str(val, "q");
        else if (key == "eps" && unset("--eps")) f.eps = list_str(val, "eps");
        else if (key == "n" && unset("--n")) f.n = list_str(val, "n");
        else if (key == "divergence" && unset("--divergence")) {
            if (val.is_string()) f.divergences = {val.get<std::string>()};
            else if (val.is_array()) {
                for (const auto& e : val) f.divergences.push_back(e.get<std::string>());
            } else throw ConfigError("divergence: expected string or array");
        }
        else if (key == "resolution" && unset("--resolution")) f.resolution = val.get<int>();
        else if (key == "out" && unset("--out")) f.out = val.get<std::string>();
        else if (key == "seed" && unset("--seed")) f.seed = val.get<std::uint64_t>();
        else if (key == "format" && unset("--format")) f.format = val.get<std::string>();
        else if (key == "q2" && unset("--q2")) f.q2 = val.get<double>();
        else if (key == "schema" || key == "command") { /* tolerated in replayed output */ }
    }
}

RunConfig build_config(const std::string& name, CLI::App* sub, FlagSet& f) {
    if (sub->count("--config")) merge_config_file(f.config, sub, f);
    RunConfig cfg;
    cfg.subcommand = name;
    if (!f.p.empty()) cfg.p = parse_double_list(f.p, "--p");
    if (!f.q.empty()) cfg.q = parse_double_list(f.q, "--q");
    if (!f.eps.empty()) cfg.eps = parse_double_list(f.eps, "--eps");
    if (!f.n.empty()) cfg.n = parse_int_list(f.n, "--n");
    cfg.divergences = f.divergences;
    if (f.resolution > 0) cfg.resolution = f.resolution;
    cfg.out = f.out;
    if (f.seed > 0) cfg.seed = f.seed;
    if (!f.format.empty()) {
        cfg.format = f.format;
    } else if (name == "analyze" || name == "verify") {
        cfg.format = "json";
    }
    if (cfg.format != "csv" && cfg.format != "json") {
        throw ConfigError("--format must be csv or json");
    }
    cfg.q2_slice = f.q2;
    cfg.inject_wrong_lambda = f.inject_wrong_lambda;
    return cfg;
}

void add_common_flags(CLI::App* sub, FlagSet& f) {
    sub->add_option("--p", f.p, "null distribution, comma-separated");
    sub->add_option("--q", f.q, "alternative distribution, comma-separated");
    sub->add_option("--eps", f.eps, "type-I error level(s), comma-separated");
    sub->add_option("--n", f.n, "sample size(s), comma-separated");
    sub->add_option("--divergence", f.divergences,
                    "divergence family: kl | chi2 | renyi:<a> | alpha:<a> | sm");
    sub->add_option("--resolution", f.resolution, "grid resolution");
    sub->add_option("--out", f.out, "output file (stdout when omitted)");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--format", f.format, "output format: csv | json");
    sub->add_option("--config", f.config, "JSON config file; flags override");
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"second-order analysis of divergence-based hypothesis tests"};
    app.require_subcommand(1);

    FlagSet flags;
    CLI::App* analyze = app.add_subcommand("analyze", "second-order reports for one (P,Q,eps)");
    CLI::App* ratio = app.add_subcommand("ratio-grid", "rho over a grid of alternatives Q");
    CLI::App* trade = app.add_subcommand("tradeoff", "exact finite-n error trade-off curves");
    CLI::App* conv = app.add_subcommand("convergence", "approximations along an n or eps grid");
    CLI::App* verify = app.add_subcommand("verify", "Monte Carlo verification gates");
    for (CLI::App* sub : {analyze, ratio, trade, conv, verify}) {
        add_common_flags(sub, flags);
    }
    ratio->add_option("--q2", flags.q2, "fix Q2 and sweep Q1 only");
    verify->add_flag("--inject-wrong-lambda", flags.inject_wrong_lambda,
                     "negative control: compare against a misscaled limit law")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        RunConfig cfg = build_config(sub->get_name(), sub, flags);
        if (cfg.subcommand == "analyze") return cmd_analyze(cfg);
        if (cfg.subcommand == "ratio-grid") return cmd_ratio_grid(cfg);
        if (cfg.subcommand == "tradeoff") return cmd_tradeoff(cfg);
        if (cfg.subcommand == "convergence") return cmd_convergence(cfg);
        return cmd_verify(cfg);
    } catch (const SizeLimit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace divtest

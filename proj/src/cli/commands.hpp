#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace divtest {

// Entry point behind main(); returns the process exit code.
// 0 ok, 1 verification gate failure, 2 config/validation error, 3 resource cap.
int run_cli(int argc, char** argv);

// Effective settings for one subcommand invocation after merging flags over an
// optional JSON config file.
struct RunConfig {
    std::string subcommand;
    std::vector<double> p;
    std::vector<double> q;
    std::vector<double> eps{0.02};
    std::vector<std::int64_t> n;
    std::vector<std::string> divergences;
    int resolution = 100;
    std::string out;  // empty writes to stdout
    std::uint64_t seed = 42;
    std::string format = "csv";
    double q2_slice = -1.0;  // ratio-grid: fix Q2 and sweep Q1 when >= 0
    bool inject_wrong_lambda = false;
};

// Plain numeric CSV: one header line, comma-separated double rows.
// The emit/parse pair round-trips bit-exactly via shortest-round-trip wording.
struct NumericCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string numeric_csv_emit(const NumericCsv& table);
NumericCsv numeric_csv_parse(const std::string& text);

// Enumeration cap honoring the DIVTEST_ENUM_CAP override.
std::uint64_t enum_cap_from_env();

int cmd_analyze(const RunConfig& cfg);
int cmd_ratio_grid(const RunConfig& cfg);
int cmd_tradeoff(const RunConfig& cfg);
int cmd_convergence(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

}  // namespace divtest

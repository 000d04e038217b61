#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "convexlab/builtin_energies.hpp"
#include "convexlab/polyconvexity.hpp"

namespace convexlab {

/// Shortest decimal that round-trips the double exactly.
std::string format_double_shortest(double v);
/// 6 significant digits, for human-facing output.
std::string format_double_human(double v);

// ---- contour emission -----------------------------------------------------

struct ContourOptions {
    double l_min = 0.049787068367863944;  // e^-3
    double l_max = 20.085536923187668;    // e^3
    int n = 121;                          // nodes per axis, unordered square grid
    std::vector<double> levels;
};

/// CSV with header "lambda1,lambda2,W", one row per grid node, row-major with
/// lambda1 as the outer loop, shortest round-trip number formatting.
std::string contour_csv(const Energy& e, const ContourOptions& opt);

/// Minimal static SVG: grid cells filled by level band, darkest band lowest.
std::string contour_svg(const Energy& e, const ContourOptions& opt);

// ---- check reports ----------------------------------------------------------

struct CheckReport {
    int schema_version = 1;
    std::string energy;
    std::string check;
    std::string verdict;  // pass | fail | no-violation-found | falsified | inconclusive
    nlohmann::json grid = nlohmann::json::object();
    nlohmann::json witnesses = nlohmann::json::array();
    nlohmann::json margins = nlohmann::json::object();
    std::optional<double> wall_time_ms;  // only populated on request
};

nlohmann::json check_report_to_json(const CheckReport& r);
CheckReport check_report_from_json(const nlohmann::json& j);

/// Exit status conventions shared by the CLI and the suite.
enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2, exit_domain = 3 };

// ---- check runners ----------------------------------------------------------

CheckReport run_rank_one_check(const Energy& e, const std::string& method, bool timings = false,
                               int scan_angle_samples = 0);  // 0 = default grid
CheckReport run_polyconvexity_check(const Energy& e, const SVGrid& gamma_grid,
                                    const SVGrid& nu_grid, bool timings = false);
CheckReport run_sublevel_check(const Energy& e, double level, bool compactness,
                               bool connectivity,
                               const std::optional<std::pair<Mat2, Mat2>>& path_endpoints,
                               bool timings = false);

// ---- reproduce-paper suite -----------------------------------------------------

struct SuiteOptions {
    std::vector<std::string> only;  // item names; empty runs everything
    bool timings = false;
    std::optional<Energy> w0_override;  // swap in a replacement for the w0 energy
};

struct SuiteItem {
    std::string name;
    bool pass = false;
    std::string detail;  // per-item diff when failing, short summary otherwise
    std::optional<double> wall_ms;
    nlohmann::json data = nlohmann::json::object();
};

struct SuiteResult {
    std::vector<SuiteItem> items;
    bool all_pass = true;
};

/// Item names: values, rank-one, polyconvexity, adm-thresholds, compactness,
/// connectedness, cross-method.
SuiteResult run_reproduce_paper(const SuiteOptions& opt = {});

nlohmann::json suite_report_json(const SuiteResult& r);

}  // namespace convexlab

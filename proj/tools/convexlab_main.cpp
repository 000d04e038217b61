#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "convexlab/builtin_energies.hpp"
#include "convexlab/expr.hpp"
#include "convexlab/kernels.hpp"
#include "convexlab/report.hpp"
#include "convexlab/sublevel.hpp"

using namespace convexlab;

namespace {

Mat2 parse_matrix(const std::string& spec) {
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("bad matrix entry: '" + tok + "'");
    }
    if (vals.size() != 4) {
        throw std::invalid_argument("matrix must be four comma-separated reals a11,a12,a21,a22");
    }
    return Mat2(vals[0], vals[1], vals[2], vals[3]);
}

std::vector<double> parse_levels(const std::string& spec) {
    std::vector<double> vals;
    if (spec.empty()) return vals;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    return vals;
}

// grid spec "N:lo,hi" -> log grid with N nodes per axis on [lo, hi]
SVGrid parse_sv_grid(const std::string& spec, const SVGrid& fallback) {
    if (spec.empty()) return fallback;
    const std::size_t colon = spec.find(':');
    const std::size_t comma = spec.find(',', colon);
    if (colon == std::string::npos || comma == std::string::npos) {
        throw std::invalid_argument("grid spec must be N:lo,hi");
    }
    const int n = std::stoi(spec.substr(0, colon));
    const double lo = std::stod(spec.substr(colon + 1, comma - colon - 1));
    const double hi = std::stod(spec.substr(comma + 1));
    if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bad grid spec: " + spec);
    return SVGrid::log_grid(lo, hi, n);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out) throw std::runtime_error("error writing output file: " + path);
}

void emit_report(const CheckReport& report, const std::string& json_path) {
    if (!json_path.empty()) {
        write_text(json_path, check_report_to_json(report).dump(2) + "\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized-convexity checks for isotropic planar energies"};
    app.set_config("--config", "", "flat key-value config file (key=value per line)");

    int threads = 0;
    std::string simd_mode;
    app.add_option("--threads", threads, "cap worker threads (same effect as CONVEXLAB_THREADS)");
    app.add_option("--simd", simd_mode, "kernel backend: auto|scalar|avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate an energy at a matrix");
    std::string eval_energy = "w0", eval_matrix_spec;
    eval_cmd->add_option("--energy", eval_energy, "w0 | aubert | adm:<gamma> | silhavy | file:<path>");
    eval_cmd->add_option("--matrix", eval_matrix_spec, "a11,a12,a21,a22")->required();

    // check rank-one / polyconvexity / sublevel
    auto* check_cmd = app.add_subcommand("check", "run a convexity criterion");
    check_cmd->require_subcommand(1);

    auto* rank_cmd = check_cmd->add_subcommand("rank-one", "rank-one convexity verdicts");
    std::string rank_energy = "w0", rank_method = "both", rank_json;
    int rank_grid = 0;
    rank_cmd->add_option("--energy", rank_energy, "energy name");
    rank_cmd->add_option("--method", rank_method, "split | scan | both")
        ->check(CLI::IsMember({"split", "scan", "both"}));
    rank_cmd->add_option("--grid", rank_grid, "direction samples per angle for the scan")
        ->check(CLI::PositiveNumber);
    rank_cmd->add_option("--json", rank_json, "write the JSON report to this file");

    auto* poly_cmd = check_cmd->add_subcommand("polyconvexity", "polyconvexity falsification");
    std::string poly_energy = "w0", poly_gamma_spec, poly_nu_spec, poly_json;
    poly_cmd->add_option("--energy", poly_energy, "energy name");
    poly_cmd->add_option("--gamma-grid", poly_gamma_spec, "gamma grid as N:lo,hi");
    poly_cmd->add_option("--nu-grid", poly_nu_spec, "nu grid as N:lo,hi");
    poly_cmd->add_option("--json", poly_json, "write the JSON report to this file");

    auto* sub_cmd = check_cmd->add_subcommand("sublevel", "sublevel-set topology checks");
    std::string sub_energy = "w0", sub_json;
    double sub_level = 0.0;
    bool sub_compactness = false, sub_connectivity = false;
    std::vector<std::string> sub_path;
    sub_cmd->add_option("--energy", sub_energy, "energy name");
    sub_cmd->add_option("--level", sub_level, "sublevel value c")->required();
    sub_cmd->add_flag("--compactness", sub_compactness, "run the compactness check");
    sub_cmd->add_flag("--connectivity", sub_connectivity, "run the grid flood-fill count");
    sub_cmd->add_option("--path", sub_path, "two endpoint matrices, each a11,a12,a21,a22")
        ->expected(2);
    sub_cmd->add_option("--json", sub_json, "write the JSON report to this file");

    // contour
    auto* contour_cmd = app.add_subcommand("contour", "emit W(diag(l1, l2)) grids");
    std::string ct_energy = "w0", ct_out, ct_format = "csv", ct_levels_spec;
    double ct_min = 0.049787068367863944, ct_max = 20.085536923187668;
    int ct_n = 121;
    contour_cmd->add_option("--energy", ct_energy, "energy name");
    contour_cmd->add_option("--out", ct_out, "output file ('-' = stdout)");
    contour_cmd->add_option("--format", ct_format, "csv | svg")
        ->check(CLI::IsMember({"csv", "svg"}));
    contour_cmd->add_option("--levels", ct_levels_spec, "comma-separated level list");
    contour_cmd->add_option("--min", ct_min, "smallest singular value on the grid");
    contour_cmd->add_option("--max", ct_max, "largest singular value on the grid");
    contour_cmd->add_option("--n", ct_n, "nodes per axis");

    // reproduce-paper
    auto* repro_cmd = app.add_subcommand("reproduce-paper", "run the fixed verification suite");
    std::vector<std::string> repro_only;
    std::string repro_out, repro_w0_file;
    bool repro_timings = false;
    repro_cmd->add_option("--only", repro_only, "run only the named items");
    repro_cmd->add_option("--out", repro_out, "write the JSON report to this file");
    repro_cmd->add_flag("--timings", repro_timings, "include wall times in the report");
    repro_cmd->add_option("--w0-file", repro_w0_file,
                          "substitute the w0 energy with an energy definition file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }

    if (threads > 0) setenv("CONVEXLAB_THREADS", std::to_string(threads).c_str(), 1);
    if (!simd_mode.empty() && simd_mode != "auto") setenv("CONVEXLAB_SIMD", simd_mode.c_str(), 1);

    try {
        if (*eval_cmd) {
            const Energy e = lookup_energy(eval_energy);
            const Mat2 f = parse_matrix(eval_matrix_spec);
            std::cout << format_double_shortest(eval_matrix(e.ordered, f)) << "\n";
            return exit_ok;
        }

        if (*rank_cmd) {
            const Energy e = lookup_energy(rank_energy);
            const CheckReport report = run_rank_one_check(e, rank_method, false, rank_grid);
            emit_report(report, rank_json);
            std::cout << "rank-one " << e.name << ": " << report.verdict << "\n";
            if (!report.witnesses.empty()) {
                std::cout << "  witness: " << report.witnesses[0].dump() << "\n";
            }
            return report.verdict == "fail" ? exit_check_failed : exit_ok;
        }

        if (*poly_cmd) {
            const Energy e = lookup_energy(poly_energy);
            const SVGrid gamma_grid = parse_sv_grid(poly_gamma_spec, default_gamma_grid());
            const SVGrid nu_grid = parse_sv_grid(poly_nu_spec, default_nu_grid());
            const CheckReport report = run_polyconvexity_check(e, gamma_grid, nu_grid);
            emit_report(report, poly_json);
            std::cout << "polyconvexity " << e.name << ": " << report.verdict << "\n";
            if (!report.witnesses.empty()) {
                std::cout << "  witness: " << report.witnesses[0].dump() << "\n";
            }
            return report.verdict == "falsified" ? exit_check_failed : exit_ok;
        }

        if (*sub_cmd) {
            const Energy e = lookup_energy(sub_energy);
            std::optional<std::pair<Mat2, Mat2>> endpoints;
            if (!sub_path.empty()) {
                endpoints = std::make_pair(parse_matrix(sub_path[0]), parse_matrix(sub_path[1]));
            }
            const CheckReport report = run_sublevel_check(e, sub_level, sub_compactness,
                                                          sub_connectivity, endpoints);
            emit_report(report, sub_json);
            std::cout << "sublevel " << e.name << " (c = " << format_double_human(sub_level)
                      << "): " << report.verdict << "\n";
            for (const auto& [key, value] : report.margins.items()) {
                std::cout << "  " << key << ": " << value.dump() << "\n";
            }
            return report.verdict == "fail" ? exit_check_failed : exit_ok;
        }

        if (*contour_cmd) {
            const Energy e = lookup_energy(ct_energy);
            ContourOptions opt;
            opt.l_min = ct_min;
            opt.l_max = ct_max;
            opt.n = ct_n;
            opt.levels = parse_levels(ct_levels_spec);
            write_text(ct_out, ct_format == "svg" ? contour_svg(e, opt) : contour_csv(e, opt));
            return exit_ok;
        }

        if (*repro_cmd) {
            SuiteOptions opt;
            opt.only = repro_only;
            opt.timings = repro_timings;
            if (!repro_w0_file.empty()) {
                Energy custom;
                custom.split = split_energy_from_file(load_energy_file(repro_w0_file));
                custom.name = custom.split->name;
                custom.ordered = split_to_ordered(*custom.split);
                opt.w0_override = custom;
            }
            const SuiteResult result = run_reproduce_paper(opt);
            for (const SuiteItem& item : result.items) {
                std::cout << (item.pass ? "PASS" : "FAIL") << "  " << item.name;
                if (!item.pass && !item.detail.empty()) std::cout << "  -- " << item.detail;
                if (item.wall_ms.has_value()) {
                    std::cout << "  (" << format_double_human(*item.wall_ms) << " ms)";
                }
                std::cout << "\n";
            }
            if (!repro_out.empty()) {
                write_text(repro_out, suite_report_json(result).dump(2) + "\n");
            }
            return result.all_pass ? exit_ok : exit_check_failed;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_domain;
    } catch (const RefusalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_domain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_check_failed;
    }

    std::cerr << app.help() << "\n";
    return exit_usage;
}

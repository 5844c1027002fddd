// Command-line front end: data generation, estimator fits, sparsity tuning,
// Monte-Carlo benchmarks, and reduced-predictor export.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdr/benchmark.hpp"
#include "sdr/csv.hpp"
#include "sdr/estimators.hpp"
#include "sdr/simulate.hpp"
#include "sdr/tuning.hpp"

namespace {

using nlohmann::json;

int error_code(const sdr::Error& e) {
    if (dynamic_cast<const sdr::ParameterError*>(&e)) return 2;
    if (dynamic_cast<const sdr::ParseError*>(&e)) return 2;
    if (dynamic_cast<const sdr::DimensionError*>(&e)) return 2;
    if (dynamic_cast<const sdr::DataError*>(&e)) return 3;
    if (dynamic_cast<const sdr::NumericalError*>(&e)) return 4;
    return 1;
}

const char* error_type(const sdr::Error& e) {
    if (dynamic_cast<const sdr::ParameterError*>(&e)) return "parameter";
    if (dynamic_cast<const sdr::ParseError*>(&e)) return "parse";
    if (dynamic_cast<const sdr::DimensionError*>(&e)) return "dimension";
    if (dynamic_cast<const sdr::DataError*>(&e)) return "data";
    if (dynamic_cast<const sdr::NumericalError*>(&e)) return "numerical";
    return "error";
}

void print_error_json(const sdr::Error& e) {
    json j;
    j["error"] = {{"type", error_type(e)}, {"message", e.what()}};
    std::cout << j.dump() << "\n";
}

struct FitArgs {
    std::string x_path, y_path, method = "gep-mddm", out = "fit";
    bool header = false;
    int s = 0, K = 1, slices = 10, restarts = 1, n_proj = 0, max_iter = 1000;
    double eta = 1.0, ridge = 0.0, tol = 1e-8;
    std::uint64_t seed = 0;
    std::string sigma = "sample";
    std::string init_path;
    std::vector<Eigen::Index> support;
};

int run_fit(const FitArgs& a) {
    sdr::DataMatrix x(sdr::load_matrix_csv(a.x_path, a.header).values);
    sdr::DataMatrix y(sdr::load_matrix_csv(a.y_path, a.header).values);
    sdr::Method method = sdr::parse_method(a.method);

    sdr::FitOptions opts;
    opts.sparsity = a.s;
    opts.num_directions = a.K;
    opts.step_size = a.eta;
    opts.slices = a.slices;
    opts.seed = a.seed;
    opts.restarts = a.restarts;
    opts.ridge = a.ridge;
    opts.n_proj = a.n_proj;
    opts.tol = a.tol;
    opts.max_iter = a.max_iter;
    opts.identity_sigma = a.sigma == "identity";
    opts.support = a.support;
    if (!a.init_path.empty()) opts.init_vectors = sdr::load_matrix_csv(a.init_path, false).values;

    sdr::FitResult res = sdr::fit(x, y, method, opts);
    sdr::save_matrix_csv(a.out + "_directions.csv", res.basis.vectors);

    json meta;
    meta["method"] = a.method;
    meta["values"] = std::vector<double>(res.basis.values.data(),
                                         res.basis.values.data() + res.basis.values.size());
    meta["converged"] = res.basis.converged;
    meta["norm"] = res.basis.norm_kind == sdr::NormKind::Euclidean ? "euclidean" : "sigma";
    meta["seed"] = a.seed;
    meta["config"] = {{"s", opts.sparsity},        {"K", opts.num_directions},
                      {"eta", opts.step_size},     {"slices", opts.slices},
                      {"restarts", opts.restarts}, {"ridge", opts.ridge},
                      {"n_proj", opts.n_proj},     {"tol", opts.tol},
                      {"max_iter", opts.max_iter}, {"sigma", a.sigma}};
    std::ofstream mf(a.out + "_meta.json");
    mf << meta.dump(2) << "\n";
    return 0;
}

struct SimArgs {
    std::string model = "M1", cov = "identity", out = "sim";
    Eigen::Index n = 200, p = 200;
    std::uint64_t seed = 0;
};

int run_simulate(const SimArgs& a) {
    sdr::ModelSpec spec{sdr::parse_model(a.model), a.n, a.p, sdr::parse_cov(a.cov), a.seed};
    sdr::Dataset data = sdr::generate_dataset(spec);
    sdr::save_matrix_csv(a.out + "_x.csv", data.x.values());
    sdr::save_matrix_csv(a.out + "_y.csv", data.y.values());
    sdr::save_matrix_csv(a.out + "_truth.csv", data.truth.basis);
    return 0;
}

struct TuneArgs {
    std::string x_path, y_path, method = "eigen-mddm", out = "curve.csv";
    bool header = false;
    int K = 1, s_min = 1, s_max = 45, restarts = 1;
    double eta = 1.0;
    std::uint64_t seed = 0;
};

int run_tune(const TuneArgs& a) {
    sdr::DataMatrix x(sdr::load_matrix_csv(a.x_path, a.header).values);
    sdr::DataMatrix y(sdr::load_matrix_csv(a.y_path, a.header).values);
    sdr::CurveMethod method;
    if (a.method == "eigen-mddm")
        method = sdr::CurveMethod::EigenMddm;
    else if (a.method == "gep-mddm")
        method = sdr::CurveMethod::GepMddm;
    else
        throw sdr::ParameterError("tune supports eigen-mddm or gep-mddm");

    std::vector<int> grid;
    const int cap = static_cast<int>(std::min<Eigen::Index>(a.s_max, x.cols()));
    for (int s = a.s_min; s <= cap; ++s) grid.push_back(s);
    auto curve = sdr::sparsity_curve(x, y, method, grid, a.K, a.seed, a.eta, a.restarts);

    std::ofstream out(a.out);
    if (!out) throw sdr::DataError("cannot open " + a.out);
    out << "s,dcov,status\n";
    for (const auto& pt : curve)
        out << pt.sparsity << ',' << sdr::detail::format_full(pt.dcov) << ','
            << (pt.ok ? "ok" : "failed") << '\n';
    return 0;
}

struct BenchArgs {
    std::string config_path, out = "benchmark";
    int workers = 0;
    int reps = 0;
    bool zero_timing = false;
};

int run_benchmark_cmd(const BenchArgs& a) {
    std::ifstream in(a.config_path);
    if (!in) throw sdr::DataError("cannot open config: " + a.config_path);
    json j = json::parse(in);
    sdr::BenchmarkConfig cfg = sdr::benchmark_config_from_json(j);
    if (a.workers > 0) cfg.workers = a.workers;
    if (a.reps > 0) cfg.reps = a.reps;

    sdr::BenchmarkResult res = sdr::run_benchmark(cfg);

    const std::string records_path = a.out + "_records.csv";
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(records_path, ec) ||
                       std::filesystem::file_size(records_path, ec) == 0;
    std::ofstream rf(records_path, std::ios::app);
    sdr::write_records_csv(rf, res.records, fresh, a.zero_timing);

    std::ofstream sf(a.out + "_summary.csv");
    sdr::write_summary_csv(sf, res.summary);
    std::ofstream tf(a.out + "_summary.txt");
    sdr::write_summary_table(tf, res.summary);
    sdr::write_summary_table(std::cout, res.summary);
    return 0;
}

struct ExportArgs {
    std::string x_path, basis_path, out = "reduced.csv";
    bool header = false;
};

int run_export(const ExportArgs& a) {
    sdr::CsvTable xt = sdr::load_matrix_csv(a.x_path, a.header);
    sdr::CsvTable bt = sdr::load_matrix_csv(a.basis_path, false);
    if (xt.values.cols() != bt.values.rows())
        throw sdr::DimensionError("predictor has " + std::to_string(xt.values.cols()) +
                                  " columns but basis has " + std::to_string(bt.values.rows()) +
                                  " rows");
    sdr::save_matrix_csv(a.out, xt.values * bt.values);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slicing-free sufficient dimension reduction toolkit"};
    app.require_subcommand(1);

    FitArgs fa;
    auto* fit_cmd = app.add_subcommand("fit", "estimate a sparse basis from X and Y CSV files");
    fit_cmd->add_option("--x", fa.x_path, "predictor CSV (n x p)")->required();
    fit_cmd->add_option("--y", fa.y_path, "response CSV (n x q)")->required();
    fit_cmd->add_option("--method", fa.method,
                        "eigen-mddm|gep-mddm|sir|rifle-sir|pr-sir|oracle-sir");
    fit_cmd->add_option("--s", fa.s, "sparsity level (0 = unconstrained)");
    fit_cmd->add_option("--K", fa.K, "number of directions");
    fit_cmd->add_option("--eta", fa.eta, "gradient step size");
    fit_cmd->add_option("--slices", fa.slices, "slice count for SIR-family methods");
    fit_cmd->add_option("--seed", fa.seed, "random seed");
    fit_cmd->add_option("--restarts", fa.restarts, "start candidates per direction");
    fit_cmd->add_option("--ridge", fa.ridge, "diagonal ridge added to the covariance");
    fit_cmd->add_option("--n-proj", fa.n_proj, "projections for pr-sir (0 = n log n)");
    fit_cmd->add_option("--tol", fa.tol, "convergence tolerance");
    fit_cmd->add_option("--max-iter", fa.max_iter, "iteration cap");
    fit_cmd->add_option("--sigma", fa.sigma, "sample|identity covariance for gep-mddm/sir");
    fit_cmd->add_option("--support", fa.support, "oracle-sir support indices (0-based)")
        ->delimiter(',');
    fit_cmd->add_option("--init", fa.init_path, "CSV of explicit start vectors (p x K)");
    fit_cmd->add_flag("--header", fa.header, "input CSVs carry a header row");
    fit_cmd->add_option("--out", fa.out, "output prefix");

    SimArgs sa;
    auto* sim_cmd = app.add_subcommand("simulate", "generate a model data set with known basis");
    sim_cmd->add_option("--model", sa.model, "M1..M9")->required();
    sim_cmd->add_option("--n", sa.n, "observations");
    sim_cmd->add_option("--p", sa.p, "predictor dimension");
    sim_cmd->add_option("--cov", sa.cov, "identity|ar1");
    sim_cmd->add_option("--seed", sa.seed, "random seed");
    sim_cmd->add_option("--out", sa.out, "output prefix");

    TuneArgs ta;
    auto* tune_cmd = app.add_subcommand("tune", "sparsity-vs-dependence curve");
    tune_cmd->add_option("--x", ta.x_path)->required();
    tune_cmd->add_option("--y", ta.y_path)->required();
    tune_cmd->add_option("--method", ta.method, "eigen-mddm|gep-mddm");
    tune_cmd->add_option("--K", ta.K, "number of directions");
    tune_cmd->add_option("--s-min", ta.s_min, "smallest sparsity level");
    tune_cmd->add_option("--s-max", ta.s_max, "largest sparsity level");
    tune_cmd->add_option("--eta", ta.eta, "gradient step size (gep)");
    tune_cmd->add_option("--restarts", ta.restarts, "start candidates per direction");
    tune_cmd->add_option("--seed", ta.seed, "random seed");
    tune_cmd->add_flag("--header", ta.header, "input CSVs carry a header row");
    tune_cmd->add_option("--out", ta.out, "curve CSV path");

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("benchmark", "Monte-Carlo benchmark from a JSON config");
    bench_cmd->add_option("--config", ba.config_path, "JSON config")->required();
    bench_cmd->add_option("--out", ba.out, "output prefix");
    bench_cmd->add_option("--workers", ba.workers, "worker threads (overrides config)");
    bench_cmd->add_option("--reps", ba.reps, "replications per cell (overrides config)");
    bench_cmd->add_flag("--zero-timing", ba.zero_timing,
                        "write 0 for wall times so reruns are byte-identical");

    ExportArgs ea;
    auto* export_cmd = app.add_subcommand("export", "write reduced predictors X * B");
    export_cmd->add_option("--x", ea.x_path)->required();
    export_cmd->add_option("--basis", ea.basis_path)->required();
    export_cmd->add_flag("--header", ea.header, "predictor CSV carries a header row");
    export_cmd->add_option("--out", ea.out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit_cmd) return run_fit(fa);
        if (*sim_cmd) return run_simulate(sa);
        if (*tune_cmd) return run_tune(ta);
        if (*bench_cmd) return run_benchmark_cmd(ba);
        if (*export_cmd) return run_export(ea);
    } catch (const sdr::Error& e) {
        print_error_json(e);
        return error_code(e);
    } catch (const std::exception& e) {
        json j;
        j["error"] = {{"type", "internal"}, {"message", e.what()}};
        std::cout << j.dump() << "\n";
        return 1;
    }
    return 0;
}

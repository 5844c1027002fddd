#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sdr/csv.hpp"
#include "sdr/error.hpp"
#include "sdr/estimators.hpp"
#include "sdr/simulate.hpp"

namespace sdr {

struct MethodConfig {
    Method method = Method::EigenMddm;
    FitOptions options;
    std::string label;  // defaults to the method name
    /// Start every direction at the model's true basis instead of the seeded
    /// pool; the best-case protocol for hard simulation cells.
    bool truth_init = false;
};

struct BenchmarkCell {
    ModelId model = ModelId::M1;
    CovKind cov = CovKind::Identity;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    MethodConfig method;
};

struct BenchmarkConfig {
    std::vector<std::pair<ModelId, CovKind>> models;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> grid;  // (n, p)
    std::vector<MethodConfig> methods;
    int reps = 100;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct BenchmarkRecord {
    std::string model;
    std::string cov;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    std::string method;
    int rep = 0;
    std::uint64_t seed = 0;  // replication data seed
    double error = 0.0;
    double wall_ms = 0.0;
    bool ok = false;
    std::string note;
};

struct SummaryRow {
    std::string model;
    std::string cov;
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    std::string method;
    double mean_x100 = 0.0;
    double se_x100 = 0.0;
    int count = 0;
    int failures = 0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRecord> records;  // ordered by (cell, rep)
    std::vector<SummaryRow> summary;
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Data seed depends on the model cell and rep but not on the method, so all
/// methods in a run see the same replication data sets.
inline std::uint64_t data_seed(std::uint64_t master, const BenchmarkCell& cell, int rep) {
    const std::string id = std::string(to_string(cell.model)) + "|" + to_string(cell.cov) + "|" +
                           std::to_string(cell.n) + "|" + std::to_string(cell.p);
    return derive_seed(master, {fnv1a(id), static_cast<std::uint64_t>(rep)});
}

inline std::uint64_t fit_seed(std::uint64_t master, const BenchmarkCell& cell, int rep) {
    const std::string id = std::string(to_string(cell.model)) + "|" + to_string(cell.cov) + "|" +
                           std::to_string(cell.n) + "|" + std::to_string(cell.p) + "|" +
                           cell.method.label;
    return derive_seed(master, {fnv1a(id), static_cast<std::uint64_t>(rep), 1});
}

}  // namespace detail

inline FitOptions fit_options_from_json(const nlohmann::json& j) {
    FitOptions o;
    o.num_directions = 0;  // 0 = match the model's true direction count
    if (j.contains("s")) o.sparsity = j.at("s").get<int>();
    if (j.contains("K")) o.num_directions = j.at("K").get<int>();
    if (j.contains("eta")) o.step_size = j.at("eta").get<double>();
    if (j.contains("slices")) o.slices = j.at("slices").get<int>();
    if (j.contains("restarts")) o.restarts = j.at("restarts").get<int>();
    if (j.contains("ridge")) o.ridge = j.at("ridge").get<double>();
    if (j.contains("n_proj")) o.n_proj = j.at("n_proj").get<int>();
    if (j.contains("tol")) o.tol = j.at("tol").get<double>();
    if (j.contains("max_iter")) o.max_iter = j.at("max_iter").get<int>();
    if (j.contains("sigma")) o.identity_sigma = j.at("sigma").get<std::string>() == "identity";
    if (j.contains("support"))
        for (const auto& v : j.at("support")) o.support.push_back(v.get<Eigen::Index>());
    return o;
}

inline BenchmarkConfig benchmark_config_from_json(const nlohmann::json& j) {
    BenchmarkConfig cfg;
    for (const auto& m : j.at("models")) {
        ModelId id = parse_model(m.at("id").get<std::string>());
        CovKind cov = m.contains("cov") ? parse_cov(m.at("cov").get<std::string>())
                                        : CovKind::Identity;
        cfg.models.emplace_back(id, cov);
    }
    for (const auto& g : j.at("grid"))
        cfg.grid.emplace_back(g.at("n").get<Eigen::Index>(), g.at("p").get<Eigen::Index>());
    for (const auto& m : j.at("methods")) {
        MethodConfig mc;
        mc.method = parse_method(m.at("name").get<std::string>());
        mc.options = fit_options_from_json(m);
        mc.label = m.contains("label") ? m.at("label").get<std::string>()
                                       : std::string(to_string(mc.method));
        if (m.contains("init")) {
            const std::string init = m.at("init").get<std::string>();
            if (init == "truth")
                mc.truth_init = true;
            else if (init != "seeded")
                throw ParameterError("unknown init mode: " + init + " (expected seeded|truth)");
        }
        cfg.methods.push_back(std::move(mc));
    }
    cfg.reps = j.at("reps").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    return cfg;
}

/// Runs reps replications of every (model, grid, method) cell in a fixed
/// task order. Workers pull tasks from a shared counter; records land in a
/// pre-sized vector indexed by task, so the output order is by (cell, rep)
/// no matter which worker finishes first.
inline BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.reps < 1) throw ParameterError("reps must be at least 1");
    if (cfg.workers < 1) throw ParameterError("workers must be at least 1");

    std::vector<BenchmarkCell> cells;
    for (const auto& [model, cov] : cfg.models)
        for (const auto& [n, p] : cfg.grid)
            for (const auto& mc : cfg.methods)
                cells.push_back(BenchmarkCell{model, cov, n, p, mc});

    const std::size_t total = cells.size() * static_cast<std::size_t>(cfg.reps);
    std::vector<BenchmarkRecord> records(total);

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= total) return;
            const BenchmarkCell& cell = cells[t / static_cast<std::size_t>(cfg.reps)];
            const int rep = static_cast<int>(t % static_cast<std::size_t>(cfg.reps));

            BenchmarkRecord rec;
            rec.model = to_string(cell.model);
            rec.cov = to_string(cell.cov);
            rec.n = cell.n;
            rec.p = cell.p;
            rec.method = cell.method.label;
            rec.rep = rep;
            rec.seed = detail::data_seed(cfg.seed, cell, rep);
            try {
                ModelSpec spec{cell.model, cell.n, cell.p, cell.cov, rec.seed};
                Dataset data = generate_dataset(spec);
                FitOptions opts = cell.method.options;
                opts.seed = detail::fit_seed(cfg.seed, cell, rep);
                if (opts.num_directions == 0) opts.num_directions = data.truth.num_directions();
                if (cell.method.truth_init) opts.init_vectors = data.truth.basis;
                FitResult fr = fit(data.x, data.y, cell.method.method, opts);
                rec.error = subspace_error(fr.basis.vectors, data.truth.basis);
                rec.wall_ms = fr.seconds * 1e3;
                rec.ok = true;
            } catch (const Error& e) {
                rec.ok = false;
                rec.note = e.what();
            }
            records[t] = std::move(rec);
        }
    };

    if (cfg.workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(cfg.workers));
        for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    BenchmarkResult out;
    out.records = std::move(records);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        SummaryRow row;
        row.model = to_string(cells[c].model);
        row.cov = to_string(cells[c].cov);
        row.n = cells[c].n;
        row.p = cells[c].p;
        row.method = cells[c].method.label;
        double sum = 0.0;
        std::vector<double> errs;
        for (int r = 0; r < cfg.reps; ++r) {
            const BenchmarkRecord& rec = out.records[c * static_cast<std::size_t>(cfg.reps) +
                                                     static_cast<std::size_t>(r)];
            if (rec.ok) {
                errs.push_back(rec.error);
                sum += rec.error;
            } else {
                ++row.failures;
            }
        }
        row.count = static_cast<int>(errs.size());
        if (row.count > 0) {
            const double mean = sum / row.count;
            double ss = 0.0;
            for (double e : errs) ss += (e - mean) * (e - mean);
            const double sd = row.count > 1 ? std::sqrt(ss / (row.count - 1)) : 0.0;
            row.mean_x100 = 100.0 * mean;
            row.se_x100 = 100.0 * sd / std::sqrt(static_cast<double>(row.count));
        }
        out.summary.push_back(std::move(row));
    }
    return out;
}

/// Records CSV, append-safe: header only when the stream is at offset zero.
/// zero_timing replaces wall-clock times with 0 so repeated runs of the same
/// config and seed are byte-identical.
inline void write_records_csv(std::ostream& os, const std::vector<BenchmarkRecord>& records,
                              bool with_header, bool zero_timing = false) {
    if (with_header) os << "model,cov,n,p,method,rep,seed,subspace_error,wall_time_ms,status\n";
    for (const auto& r : records) {
        os << r.model << ',' << r.cov << ',' << r.n << ',' << r.p << ',' << r.method << ','
           << r.rep << ',' << r.seed << ',' << detail::format_full(r.error) << ','
           << detail::format_full(zero_timing ? 0.0 : r.wall_ms) << ','
           << (r.ok ? "ok" : "failed") << '\n';
    }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& summary) {
    os << "model,cov,n,p,method,mean_error_x100,se_x100,reps_ok,reps_failed\n";
    for (const auto& s : summary) {
        os << s.model << ',' << s.cov << ',' << s.n << ',' << s.p << ',' << s.method << ','
           << detail::format_full(s.mean_x100) << ',' << detail::format_full(s.se_x100) << ','
           << s.count << ',' << s.failures << '\n';
    }
}

inline void write_summary_table(std::ostream& os, const std::vector<SummaryRow>& summary) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6s %-9s %6s %6s %-24s %12s %8s %6s %6s", "model", "cov",
                  "n", "p", "method", "mean(x100)", "se", "ok", "fail");
    os << buf << '\n';
    for (const auto& s : summary) {
        std::snprintf(buf, sizeof buf, "%-6s %-9s %6lld %6lld %-24s %12.2f %8.2f %6d %6d",
                      s.model.c_str(), s.cov.c_str(), static_cast<long long>(s.n),
                      static_cast<long long>(s.p), s.method.c_str(), s.mean_x100, s.se_x100,
                      s.count, s.failures);
        os << buf << '\n';
    }
}

}  // namespace sdr

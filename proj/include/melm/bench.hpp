#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "melm/trainer.hpp"

namespace melm {

enum class Algorithm { Elm, BasElm, MbasElm };

inline constexpr std::array<Algorithm, 3> kAlgorithmOrder{Algorithm::Elm, Algorithm::BasElm,
                                                          Algorithm::MbasElm};

inline std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Elm: return "ELM";
        case Algorithm::BasElm: return "BAS-ELM";
        case Algorithm::MbasElm: return "MBAS-ELM";
    }
    return "?";
}

inline Algorithm parse_algorithm(std::string_view name) {
    if (name == "elm" || name == "ELM") return Algorithm::Elm;
    if (name == "bas-elm" || name == "BAS-ELM") return Algorithm::BasElm;
    if (name == "mbas-elm" || name == "MBAS-ELM") return Algorithm::MbasElm;
    throw ConfigError("unknown algorithm '" + std::string(name) +
                      "' (expected elm, bas-elm or mbas-elm)");
}

enum class EmitFormat { Table, Csv, Json };

struct RunConfig {
    std::string data_path;
    std::optional<DataFormat> format;  // unset = sniff from content
    int target_column = -1;
    Eigen::Index n_train = 0;
    std::vector<Algorithm> algorithms{Algorithm::Elm, Algorithm::BasElm, Algorithm::MbasElm};
    std::size_t repeats = 30;
    Eigen::Index hidden_count = 10;
    Activation activation = Activation::Sigmoid;
    std::uint64_t seed = 1;
    SwarmConfig<double> swarm = default_benchmark_swarm();
    std::vector<double> gamma_grid{0.1, 1.0, 10.0, 100.0};
    std::string out_dir = "melm_out";
    std::set<EmitFormat> emit{EmitFormat::Table, EmitFormat::Csv, EmitFormat::Json};

    static SwarmConfig<double> default_benchmark_swarm() {
        SwarmConfig<double> swarm;
        const auto split = default_swarm_split(12);
        swarm.n_searchers = split[0];
        swarm.n_followers = split[1];
        swarm.n_explorers = split[2];
        swarm.follower_step = 0.2;
        swarm.explorer_step = 0.3;
        swarm.iterations = 40;
        swarm.bounds = {-1.0, 1.0};
        swarm.searcher_bas.eta = 0.95;
        swarm.searcher_bas.step0 = 1.0;
        swarm.searcher_bas.step_min = 0.0;
        swarm.searcher_bas.antenna_min = 0.0;
        return swarm;
    }

    void validate() const {
        if (repeats < 1) throw ConfigError("benchmark: repeats must be >= 1");
        if (algorithms.empty()) throw ConfigError("benchmark: algorithm list is empty");
        if (hidden_count < 1) throw ConfigError("benchmark: need at least one hidden node");
        if (n_train < 1) throw ConfigError("benchmark: n_train must be >= 1");
        if (gamma_grid.empty()) throw ConfigError("benchmark: gamma grid is empty");
        swarm.validate();
    }
};

struct RunRecord {
    std::size_t repeat;
    Algorithm algorithm;
    double rmse;
    double r_squared;
    double k2_test;   // condition number of the hidden matrix on test inputs
    double k2_train;  // same on training inputs
    double beta_norm;
    double gamma;  // 0 for plain ELM
};

struct AlgorithmSummary {
    Algorithm algorithm;
    std::size_t repeats;
    double mean_rmse;
    double std_rmse;  // sample standard deviation; 0 by convention for one repeat
    double mean_r_squared;
    double mean_k2_test;
    double mean_k2_train;
    double mean_beta_norm;
};

struct Summary {
    std::vector<AlgorithmSummary> rows;
};

struct BenchmarkResult {
    Summary summary;
    std::vector<RunRecord> records;
};

namespace detail {

inline std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// The repeated-split protocol: per repeat one random train/test split and one
/// min-max scaler are shared by every algorithm, each algorithm trains with
/// its own derived seed, and test-split metrics are recorded. The swarm-based
/// algorithms reselect gamma by cross-validation inside each repeat's
/// training split whenever the grid has more than one entry.
inline BenchmarkResult run_benchmark(const RunConfig& cfg, const Dataset& data) {
    cfg.validate();
    if (data.n() <= cfg.n_train)
        throw ConfigError("benchmark: n_train " + std::to_string(cfg.n_train) +
                          " leaves no test rows out of " + std::to_string(data.n()));

    BenchmarkResult result;
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const std::uint64_t repeat_seed = derive_seed(cfg.seed, r);
        Rng split_rng = substream(repeat_seed, 0);
        const auto [train_raw, test_raw] = random_split(data, cfg.n_train, split_rng);
        const Scaler scaler = fit_scaler(train_raw);
        const Dataset train = apply_scaler(scaler, train_raw);
        const Dataset test = apply_scaler(scaler, test_raw);

        for (const Algorithm alg : cfg.algorithms) {
            const std::uint64_t alg_seed =
                derive_seed(repeat_seed, 1 + static_cast<std::uint64_t>(alg));
            ElmModel<double> model;
            double gamma = 0;
            if (alg == Algorithm::Elm) {
                Rng rng = substream(alg_seed, 0);
                model = train_plain_elm(train, cfg.hidden_count, cfg.activation, rng);
            } else {
                TrainConfig tc;
                tc.swarm = cfg.swarm;
                if (alg == Algorithm::BasElm) {
                    tc.swarm.n_searchers = 1;
                    tc.swarm.n_followers = 0;
                    tc.swarm.n_explorers = 0;
                }
                tc.fitness.hidden_count = cfg.hidden_count;
                tc.fitness.activation = cfg.activation;
                tc.gamma_grid = cfg.gamma_grid;
                tc.seed = alg_seed;
                if (cfg.gamma_grid.size() == 1) {
                    tc.fitness.gamma = cfg.gamma_grid.front();
                    model = train_mbas_elm(train, tc).model;
                    gamma = tc.fitness.gamma;
                } else {
                    auto choice = select_gamma_detailed(train, cfg.gamma_grid, tc);
                    model = std::move(choice.trained.model);
                    gamma = choice.gamma;
                }
            }
            const EvalReport<double> report = evaluate(model, test.X, test.Y);
            const double k2_train =
                condition_number(hidden_matrix(train.X, model.params));
            result.records.push_back({r, alg, report.rmse, report.r_squared,
                                      report.condition_number, k2_train, report.beta_norm,
                                      gamma});
        }
    }

    for (const Algorithm alg : kAlgorithmOrder) {
        std::vector<const RunRecord*> rows;
        for (const auto& rec : result.records)
            if (rec.algorithm == alg) rows.push_back(&rec);
        if (rows.empty()) continue;
        AlgorithmSummary s{alg, rows.size(), 0, 0, 0, 0, 0, 0};
        for (const auto* rec : rows) {
            s.mean_rmse += rec->rmse;
            s.mean_r_squared += rec->r_squared;
            s.mean_k2_test += rec->k2_test;
            s.mean_k2_train += rec->k2_train;
            s.mean_beta_norm += rec->beta_norm;
        }
        const auto n = static_cast<double>(rows.size());
        s.mean_rmse /= n;
        s.mean_r_squared /= n;
        s.mean_k2_test /= n;
        s.mean_k2_train /= n;
        s.mean_beta_norm /= n;
        if (rows.size() > 1) {
            double ss = 0;
            for (const auto* rec : rows) ss += (rec->rmse - s.mean_rmse) * (rec->rmse - s.mean_rmse);
            s.std_rmse = std::sqrt(ss / (n - 1));
        }
        result.summary.rows.push_back(s);
    }
    return result;
}

inline BenchmarkResult run_benchmark(const RunConfig& cfg) {
    const std::string text = read_text_file(cfg.data_path);
    const DataFormat format = cfg.format ? *cfg.format : sniff_format(text);
    const Dataset data = format == DataFormat::Libsvm
                             ? parse_libsvm(text)
                             : parse_delimited(text, cfg.target_column);
    return run_benchmark(cfg, data);
}

/// Aligned text table; the row with the smallest mean RMSE carries the best
/// marker. All numbers at 6 significant digits, matching the machine formats.
inline std::string emit_table(const Summary& summary) {
    static constexpr const char* headers[] = {"algorithm",  "repeats",      "mean RMSE",
                                              "std RMSE",   "mean R2",      "mean K2(H)",
                                              "mean |beta|", "best"};
    std::size_t best = 0;
    for (std::size_t i = 1; i < summary.rows.size(); ++i)
        if (summary.rows[i].mean_rmse < summary.rows[best].mean_rmse) best = i;

    std::vector<std::array<std::string, 8>> cells;
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
        const auto& r = summary.rows[i];
        cells.push_back({std::string(to_string(r.algorithm)), std::to_string(r.repeats),
                         detail::fmt6(r.mean_rmse), detail::fmt6(r.std_rmse),
                         detail::fmt6(r.mean_r_squared), detail::fmt6(r.mean_k2_test),
                         detail::fmt6(r.mean_beta_norm), i == best ? "*" : ""});
    }
    std::array<std::size_t, 8> width{};
    for (std::size_t c = 0; c < 8; ++c) {
        width[c] = std::string(headers[c]).size();
        for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    auto pad = [&](const std::string& s, std::size_t w) {
        os << s << std::string(w - s.size() + 2, ' ');
    };
    for (std::size_t c = 0; c < 8; ++c) pad(headers[c], width[c]);
    os << '\n';
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 8; ++c) pad(row[c], width[c]);
        os << '\n';
    }
    bool single = false;
    for (const auto& r : summary.rows) single = single || r.repeats == 1;
    if (single) os << "(std over a single repeat is reported as 0)\n";
    return os.str();
}

inline std::string emit_csv(const Summary& summary) {
    std::ostringstream os;
    std::size_t best = 0;
    for (std::size_t i = 1; i < summary.rows.size(); ++i)
        if (summary.rows[i].mean_rmse < summary.rows[best].mean_rmse) best = i;
    os << "algorithm,repeats,mean_rmse,std_rmse,mean_r2,mean_k2_test,mean_k2_train,"
          "mean_beta_norm,best\n";
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
        const auto& r = summary.rows[i];
        os << to_string(r.algorithm) << ',' << r.repeats << ',' << detail::fmt6(r.mean_rmse)
           << ',' << detail::fmt6(r.std_rmse) << ',' << detail::fmt6(r.mean_r_squared) << ','
           << detail::fmt6(r.mean_k2_test) << ',' << detail::fmt6(r.mean_k2_train) << ','
           << detail::fmt6(r.mean_beta_norm) << ',' << (i == best ? 1 : 0) << '\n';
    }
    return os.str();
}

namespace detail {

/// Number rounded to the same 6 significant digits the text formats show;
/// infinities become the string "inf" (JSON has no infinity literal).
inline nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
    return std::strtod(fmt6(v).c_str(), nullptr);
}

}  // namespace detail

inline nlohmann::json emit_json(const Summary& summary, const std::vector<RunRecord>& records) {
    nlohmann::json out;
    out["algorithms"] = nlohmann::json::array();
    for (const auto& r : summary.rows)
        out["algorithms"].push_back({{"name", to_string(r.algorithm)},
                                     {"repeats", r.repeats},
                                     {"mean_rmse", detail::json_number(r.mean_rmse)},
                                     {"std_rmse", detail::json_number(r.std_rmse)},
                                     {"mean_r2", detail::json_number(r.mean_r_squared)},
                                     {"mean_k2_test", detail::json_number(r.mean_k2_test)},
                                     {"mean_k2_train", detail::json_number(r.mean_k2_train)},
                                     {"mean_beta_norm", detail::json_number(r.mean_beta_norm)}});
    out["runs"] = nlohmann::json::array();
    for (const auto& rec : records)
        out["runs"].push_back({{"repeat", rec.repeat},
                               {"algorithm", to_string(rec.algorithm)},
                               {"rmse", rec.rmse},
                               {"r2", rec.r_squared},
                               {"k2_test", detail::json_number(rec.k2_test)},
                               {"k2_train", detail::json_number(rec.k2_train)},
                               {"beta_norm", rec.beta_norm},
                               {"gamma", rec.gamma}});
    return out;
}

/// One CSV text per metric: a repeat-index column then one column per
/// algorithm present, in ELM, BAS-ELM, MBAS-ELM order, full precision.
inline std::map<std::string, std::string> emit_traces(const std::vector<RunRecord>& records) {
    std::vector<Algorithm> present;
    std::size_t repeats = 0;
    for (const Algorithm alg : kAlgorithmOrder)
        for (const auto& rec : records)
            if (rec.algorithm == alg) {
                present.push_back(alg);
                break;
            }
    for (const auto& rec : records) repeats = std::max(repeats, rec.repeat + 1);

    auto value_of = [](const RunRecord& rec, const std::string& metric) {
        if (metric == "rmse") return rec.rmse;
        if (metric == "r2") return rec.r_squared;
        if (metric == "cond") return rec.k2_test;
        return rec.beta_norm;
    };
    std::map<std::string, std::string> out;
    for (const std::string metric : {"rmse", "r2", "cond", "norm"}) {
        std::ostringstream os;
        os << "repeat";
        for (const Algorithm alg : present) os << ',' << to_string(alg);
        os << '\n';
        for (std::size_t r = 0; r < repeats; ++r) {
            os << r;
            for (const Algorithm alg : present) {
                for (const auto& rec : records)
                    if (rec.repeat == r && rec.algorithm == alg) {
                        os << ',' << detail::fmt17(value_of(rec, metric));
                        break;
                    }
            }
            os << '\n';
        }
        out[metric] = os.str();
    }
    return out;
}

/// Write the requested output files into cfg.out_dir.
inline void write_outputs(const RunConfig& cfg, const BenchmarkResult& result) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw DataError("cannot create output directory '" + cfg.out_dir + "'");
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream os(fs::path(cfg.out_dir) / name);
        if (!os) throw DataError("cannot write '" + name + "' in '" + cfg.out_dir + "'");
        os << text;
    };
    if (cfg.emit.count(EmitFormat::Table)) write("summary.txt", emit_table(result.summary));
    if (cfg.emit.count(EmitFormat::Csv)) {
        write("summary.csv", emit_csv(result.summary));
        for (const auto& [metric, text] : emit_traces(result.records))
            write("trace_" + metric + ".csv", text);
    }
    if (cfg.emit.count(EmitFormat::Json))
        write("summary.json", emit_json(result.summary, result.records).dump(2) + "\n");
}

}  // namespace melm

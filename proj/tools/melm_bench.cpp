// Benchmark harness: repeated random-split evaluation of ELM, BAS-ELM and
// MBAS-ELM on a regression dataset, with table/CSV/JSON summaries and per-run
// trace files.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "melm/bench.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

melm::RunConfig build_config(const CLI::App& app, const std::string& data,
                             const std::string& format, int target_col, long long n_train,
                             const std::vector<std::string>& algs, long long repeats,
                             long long hidden, const std::string& activation,
                             std::uint64_t seed, const std::vector<double>& gamma_grid,
                             const std::string& out_dir, const std::vector<std::string>& emits,
                             long long pop, long long searchers, long long followers,
                             long long explorers, long long iters, double eta, double step0,
                             double step_min, double antenna0, double antenna_min,
                             double follower_step, double explorer_step) {
    melm::RunConfig cfg;
    cfg.data_path = data;
    if (format == "libsvm")
        cfg.format = melm::DataFormat::Libsvm;
    else if (format == "delimited")
        cfg.format = melm::DataFormat::Delimited;
    cfg.target_column = target_col;
    cfg.n_train = n_train;
    cfg.algorithms.clear();
    for (const auto& a : algs) cfg.algorithms.push_back(melm::parse_algorithm(a));
    cfg.repeats = static_cast<std::size_t>(repeats);
    cfg.hidden_count = hidden;
    cfg.activation = melm::parse_activation(activation);
    cfg.seed = seed;
    cfg.gamma_grid = gamma_grid;
    cfg.out_dir = out_dir;
    if (!emits.empty()) {
        cfg.emit.clear();
        for (const auto& e : emits) {
            if (e == "table") cfg.emit.insert(melm::EmitFormat::Table);
            if (e == "csv") cfg.emit.insert(melm::EmitFormat::Csv);
            if (e == "json") cfg.emit.insert(melm::EmitFormat::Json);
        }
    }

    auto& swarm = cfg.swarm;
    if (app.count("--pop")) {
        const auto split = melm::default_swarm_split(static_cast<std::size_t>(pop));
        swarm.n_searchers = split[0];
        swarm.n_followers = split[1];
        swarm.n_explorers = split[2];
    }
    if (app.count("--searchers")) swarm.n_searchers = static_cast<std::size_t>(searchers);
    if (app.count("--followers")) swarm.n_followers = static_cast<std::size_t>(followers);
    if (app.count("--explorers")) swarm.n_explorers = static_cast<std::size_t>(explorers);
    if (app.count("--iters")) swarm.iterations = static_cast<std::size_t>(iters);
    swarm.searcher_bas.eta = eta;
    swarm.searcher_bas.step0 = step0;
    swarm.searcher_bas.step_min = step_min;
    if (app.count("--antenna0")) swarm.searcher_bas.antenna0 = antenna0;
    swarm.searcher_bas.antenna_min = antenna_min;
    swarm.follower_step = follower_step;
    swarm.explorer_step = explorer_step;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ELM / BAS-ELM / MBAS-ELM regression benchmark"};
    app.set_config("--config", "", "key=value file with long option names; flags override");

    std::string data;
    std::string format = "auto";
    int target_col = -1;
    long long n_train = 0;
    std::vector<std::string> algs{"elm", "bas-elm", "mbas-elm"};
    long long repeats = 30;
    long long hidden = 10;
    std::string activation = "sigmoid";
    std::uint64_t seed = 1;
    std::vector<double> gamma_grid{0.1, 1.0, 10.0, 100.0};
    std::string out_dir = "melm_out";
    std::vector<std::string> emits;
    long long pop = 12, searchers = 6, followers = 3, explorers = 3, iters = 40;
    double eta = 0.95, step0 = 1.0, step_min = 0.0, antenna0 = 1.0, antenna_min = 0.0;
    double follower_step = 0.2, explorer_step = 0.3;

    app.add_option("--data", data, "dataset file")->required();
    app.add_option("--format", format, "dataset format")
        ->check(CLI::IsMember({"auto", "libsvm", "delimited"}))
        ->capture_default_str();
    app.add_option("--target-col", target_col,
                   "target column for delimited data (negative counts from the end)")
        ->capture_default_str();
    app.add_option("--n-train", n_train, "training rows per repeat")->required();
    app.add_option("--algs", algs, "algorithms to run")->delimiter(',')->capture_default_str();
    app.add_option("--repeats", repeats, "independent repeats")->capture_default_str();
    app.add_option("--hidden", hidden, "hidden node count")->capture_default_str();
    app.add_option("--activation", activation, "hidden activation")
        ->check(CLI::IsMember({"sigmoid", "tanh", "sine"}))
        ->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--gamma-grid", gamma_grid, "gamma candidates for cross-validation")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--out", out_dir, "output directory")
        ->envname("MELM_OUT_DIR")
        ->capture_default_str();
    app.add_option("--emit", emits, "output formats to write (default: all)")
        ->check(CLI::IsMember({"table", "csv", "json"}));

    app.add_option("--pop", pop, "swarm population (split half/quarter/rest)");
    app.add_option("--searchers", searchers, "searcher count");
    app.add_option("--followers", followers, "follower count");
    app.add_option("--explorers", explorers, "explorer count");
    app.add_option("--iters", iters, "swarm iterations per fold")->capture_default_str();
    app.add_option("--eta", eta, "step/antenna decay factor")->capture_default_str();
    app.add_option("--step0", step0, "initial searcher step")->capture_default_str();
    app.add_option("--step-min", step_min, "searcher step floor")->capture_default_str();
    app.add_option("--antenna0", antenna0, "initial antenna length (default: step0)");
    app.add_option("--antenna-min", antenna_min, "antenna floor")->capture_default_str();
    app.add_option("--follower-step", follower_step, "follower step length")
        ->capture_default_str();
    app.add_option("--explorer-step", explorer_step, "explorer step length")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const melm::RunConfig cfg = build_config(
            app, data, format, target_col, n_train, algs, repeats, hidden, activation, seed,
            gamma_grid, out_dir, emits, pop, searchers, followers, explorers, iters, eta, step0,
            step_min, antenna0, antenna_min, follower_step, explorer_step);
        const melm::BenchmarkResult result = melm::run_benchmark(cfg);
        std::cout << melm::emit_table(result.summary);
        melm::write_outputs(cfg, result);
        return 0;
    } catch (const melm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const melm::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const melm::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <limits>
#include <vector>

#include "melm/dataset.hpp"
#include "melm/elm.hpp"
#include "melm/mbas.hpp"

namespace melm {

/// Composite-fitness settings: F = ||beta|| * K2(H) + gamma * (1 - R2).
struct FitnessSpec {
    double gamma = 1.0;
    Eigen::Index hidden_count = 10;
    Activation activation = Activation::Sigmoid;

    void validate() const {
        if (!(gamma > 0)) throw ConfigError("fitness: gamma must be > 0");
        if (hidden_count < 1) throw ConfigError("fitness: need at least one hidden node");
    }
};

struct BestRecord {
    Vector position;
    double fitness = std::numeric_limits<double>::infinity();
    double rmse = std::numeric_limits<double>::infinity();
};

struct TrainConfig {
    SwarmConfig<double> swarm;
    FitnessSpec fitness;
    std::vector<double> gamma_grid{0.1, 1.0, 10.0, 100.0};
    std::size_t folds = 3;
    std::uint64_t seed = 1;

    void validate() const {
        swarm.validate();
        fitness.validate();
        if (folds != 3) throw ConfigError("train: the pipeline is fixed at 3 folds");
        if (gamma_grid.empty()) throw ConfigError("train: gamma grid must be non-empty");
        if (swarm.bounds.lo < -1.0 || swarm.bounds.hi > 1.0)
            throw ConfigError("train: position bounds must lie within [-1, 1]");
    }
};

/// Flatten hidden-layer parameters into a position vector: all weights grouped
/// by input dimension, then the biases.
inline Vector encode_position(const ElmParams<double>& params) {
    const Eigen::Index hidden = params.hidden_count();
    const Eigen::Index dim = params.input_dim();
    Vector v((dim + 1) * hidden);
    // column-major flatten of the L x d weight matrix gives exactly that order
    v.head(dim * hidden) = Eigen::Map<const Vector>(params.input_weights.data(), dim * hidden);
    v.tail(hidden) = params.biases;
    return v;
}

inline ElmParams<double> decode_position(const Vector& v, Eigen::Index input_dim,
                                         Eigen::Index hidden_count,
                                         Activation activation = Activation::Sigmoid) {
    if (input_dim < 1 || hidden_count < 1)
        throw std::invalid_argument("decode_position: dimensions must be >= 1");
    if (v.size() != (input_dim + 1) * hidden_count)
        throw std::invalid_argument("decode_position: vector of length " +
                                    std::to_string(v.size()) + " cannot hold " +
                                    std::to_string(hidden_count) + " nodes over " +
                                    std::to_string(input_dim) + " inputs (need " +
                                    std::to_string((input_dim + 1) * hidden_count) + ")");
    ElmParams<double> params;
    params.input_weights =
        Eigen::Map<const Matrix>(v.data(), hidden_count, input_dim);
    params.biases = v.tail(hidden_count);
    params.activation = activation;
    return params;
}

struct FitnessResult {
    double value;
    double rmse;
};

/// Eq.-of-merit for a position on one data subset: decode, build H, solve
/// beta, then ||beta|| * K2(H) + gamma * (1 - R2). A rank-deficient H (or any
/// numeric failure) scores +infinity so the swarm treats it as maximally bad.
inline FitnessResult elm_fitness(const Vector& position, const Matrix& features,
                                 const Matrix& targets, const FitnessSpec& spec) {
    spec.validate();
    const auto params =
        decode_position(position, features.cols(), spec.hidden_count, spec.activation);
    try {
        const Matrix hidden = hidden_matrix(features, params);
        const Matrix beta = solve_output_weights(hidden, targets);
        const Matrix pred = hidden * beta;
        const double k2 = condition_number(hidden);
        const double fit = r_squared(pred, targets);
        const double error = rmse(pred, targets);
        if (!std::isfinite(k2)) return {std::numeric_limits<double>::infinity(), error};
        return {l2_norm(beta) * k2 + spec.gamma * (1.0 - fit), error};
    } catch (const NumericError& e) {
        std::clog << "elm_fitness: " << e.what() << " -> infinite fitness\n";
        return {std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    }
}

/// Dual-criterion incumbent rule: adopt the candidate only when both its
/// fitness and its RMSE are strictly smaller.
inline BestRecord update_best(const BestRecord& current, const BestRecord& incumbent) {
    if (current.fitness < incumbent.fitness && current.rmse < incumbent.rmse) return current;
    return incumbent;
}

/// Per-fold winner summary plus the final selection, for run reports.
struct TrainReport {
    struct FoldEntry {
        std::uint64_t position_hash;
        double fitness;  // on the fold's own subset
        double rmse;
        double full_train_fitness;  // re-evaluated on the full training set
    };
    std::array<FoldEntry, 3> folds{};
    std::size_t winning_fold = 0;
    double gamma = 0;
    std::uint64_t model_position_hash = 0;
};

struct TrainResult {
    ElmModel<double> model;
    std::array<BestRecord, 3> fold_bests;
    TrainReport report;
};

inline std::uint64_t position_hash(const Vector& v) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(double));
        std::memcpy(&bits, &v[i], sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xff;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

namespace detail {

inline constexpr std::uint64_t kKfoldStream = 0x6b666f6c64ULL;  // "kfold"

}  // namespace detail

/// 3-fold MBAS-ELM training. Each fold runs a swarm whose fitness is trained
/// and scored on that fold's subset, with the dual-criterion incumbent rule;
/// the fold winners are re-scored on the full training set and the minimizer
/// decides the final hidden-layer parameters, whose output weights are then
/// solved on the full training set.
inline TrainResult train_mbas_elm(const Dataset& train, const TrainConfig& config) {
    config.validate();
    const Eigen::Index hidden = config.fitness.hidden_count;
    if (train.n() < 3 * hidden)
        throw ConfigError("train: need at least " + std::to_string(3 * hidden) +
                          " training samples for 3 folds over " + std::to_string(hidden) +
                          " hidden nodes, got " + std::to_string(train.n()));
    const Eigen::Index dim = (train.dim() + 1) * hidden;

    Rng fold_rng = substream(config.seed, detail::kKfoldStream);
    const auto folds = kfold(train, config.folds, fold_rng);

    TrainResult result;
    result.report.gamma = config.fitness.gamma;
    const auto accept = [](const ScoredFitness<double>& cand, const ScoredFitness<double>& inc) {
        return cand.value < inc.value && cand.aux < inc.aux;
    };
    for (std::size_t r = 0; r < folds.size(); ++r) {
        const Dataset& fold = folds[r];
        auto fitness = [&](const Vector& position) {
            const auto f = elm_fitness(position, fold.X, fold.Y, config.fitness);
            return ScoredFitness<double>{f.value, f.rmse};
        };
        const auto found =
            mbas_search_scored(config.swarm, dim, fitness, derive_seed(config.seed, r), accept);
        result.fold_bests[r] = {found.best_position, found.best.value, found.best.aux};
    }

    std::size_t winner = 0;
    double winner_fitness = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < folds.size(); ++r) {
        const auto& best = result.fold_bests[r];
        const double on_full = elm_fitness(best.position, train.X, train.Y, config.fitness).value;
        result.report.folds[r] = {position_hash(best.position), best.fitness, best.rmse, on_full};
        if (on_full < winner_fitness) {
            winner_fitness = on_full;
            winner = r;
        }
    }
    result.report.winning_fold = winner;

    const auto& chosen = result.fold_bests[winner];
    result.model.params = decode_position(chosen.position, train.dim(), hidden,
                                          config.fitness.activation);
    const Matrix full_hidden = hidden_matrix(train.X, result.model.params);
    result.model.output_weights = solve_output_weights(full_hidden, train.Y);
    result.report.model_position_hash = position_hash(chosen.position);
    return result;
}

/// BAS-ELM is the one-searcher special case of the same pipeline.
inline TrainResult train_bas_elm(const Dataset& train, TrainConfig config) {
    config.swarm.n_searchers = 1;
    config.swarm.n_followers = 0;
    config.swarm.n_explorers = 0;
    return train_mbas_elm(train, config);
}

/// Classic ELM: hidden parameters drawn uniformly from [-1, 1], output
/// weights solved on the full training set.
inline ElmModel<double> train_plain_elm(const Dataset& train, Eigen::Index hidden_count,
                                        Activation activation, Rng& rng) {
    if (hidden_count < 1) throw ConfigError("train: need at least one hidden node");
    ElmModel<double> model;
    model.params.input_weights.resize(hidden_count, train.dim());
    for (Eigen::Index j = 0; j < hidden_count; ++j)
        for (Eigen::Index i = 0; i < train.dim(); ++i)
            model.params.input_weights(j, i) = uniform(rng, -1.0, 1.0);
    model.params.biases = uniform_vector(rng, hidden_count, -1.0, 1.0);
    model.params.activation = activation;
    model.output_weights =
        solve_output_weights(hidden_matrix(train.X, model.params), train.Y);
    return model;
}

struct GammaChoice {
    double gamma;
    double mean_fitness;  // over the three folds, final model position re-scored per fold
    double mean_rmse;
    TrainResult trained;  // the pipeline output for this gamma
};

namespace detail {

inline GammaChoice score_gamma(const Dataset& train, double gamma, TrainConfig config) {
    config.fitness.gamma = gamma;
    GammaChoice out{gamma, 0, 0, train_mbas_elm(train, config)};
    const Vector position = encode_position(out.trained.model.params);
    Rng fold_rng = substream(config.seed, kKfoldStream);
    const auto folds = kfold(train, config.folds, fold_rng);
    for (const auto& fold : folds) {
        const auto f = elm_fitness(position, fold.X, fold.Y, config.fitness);
        out.mean_fitness += f.value / static_cast<double>(folds.size());
        out.mean_rmse += f.rmse / static_cast<double>(folds.size());
    }
    return out;
}

}  // namespace detail

/// Run the 3-fold pipeline once per grid entry on training data only, score
/// each resulting model per fold, and pick the gamma that beats every other
/// on both criteria; when none dominates, fall back to the smallest RMSE.
inline GammaChoice select_gamma_detailed(const Dataset& train, const std::vector<double>& grid,
                                         const TrainConfig& config) {
    if (grid.empty()) throw ConfigError("select_gamma: grid must be non-empty");
    std::vector<GammaChoice> scored;
    scored.reserve(grid.size());
    for (const double gamma : grid) scored.push_back(detail::score_gamma(train, gamma, config));
    if (scored.size() == 1) return std::move(scored.front());

    for (std::size_t i = 0; i < scored.size(); ++i) {
        bool dominates_all = true;
        for (std::size_t j = 0; j < scored.size() && dominates_all; ++j)
            if (i != j)
                dominates_all = scored[i].mean_fitness < scored[j].mean_fitness &&
                                scored[i].mean_rmse < scored[j].mean_rmse;
        if (dominates_all) return std::move(scored[i]);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < scored.size(); ++i)
        if (scored[i].mean_rmse < scored[best].mean_rmse) best = i;
    return std::move(scored[best]);
}

inline double select_gamma(const Dataset& train, const std::vector<double>& grid,
                           const TrainConfig& config) {
    return select_gamma_detailed(train, grid, config).gamma;
}

}  // namespace melm

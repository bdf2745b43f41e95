#pragma once

#include <array>
#include <cstddef>
#include <numeric>
#include <vector>

#include "melm/bas.hpp"

namespace melm {

enum class Role { Searcher, Follower, Explorer };

/// Fixed-population beetle swarm. The embedded BasConfig supplies the
/// searchers' step/antenna decay schedule; its own bounds and max_iters are
/// superseded by the swarm-level `bounds` and `iterations`.
template <typename Scalar = double>
struct SwarmConfig {
    std::size_t n_searchers = 1;
    std::size_t n_followers = 0;
    std::size_t n_explorers = 0;
    Scalar follower_step = Scalar(0.2);   // L_F
    Scalar explorer_step = Scalar(0.3);   // L_E
    BasConfig<Scalar> searcher_bas{};
    std::size_t iterations = 100;         // N_I
    Interval<Scalar> bounds{};

    std::size_t population() const { return n_searchers + n_followers + n_explorers; }

    void validate() const {
        if (n_searchers < 1) throw ConfigError("swarm: need at least one searcher");
        if (iterations < 1) throw ConfigError("swarm: need at least one iteration");
        if (!(follower_step > Scalar(0))) throw ConfigError("swarm: follower step must be > 0");
        if (!(explorer_step > Scalar(0))) throw ConfigError("swarm: explorer step must be > 0");
        bounds.validate();
        BasConfig<Scalar> move = searcher_bas;
        move.bounds = bounds;
        move.validate();
    }
};

/// Default vocation split for a population of n: half searchers, a quarter
/// followers, the rest explorers (rounding favours the earlier group).
inline std::array<std::size_t, 3> default_swarm_split(std::size_t n) {
    const std::size_t searchers = (n + 1) / 2;
    const std::size_t followers = (n + 3) / 4;
    return {searchers, std::min(followers, n - searchers), n - searchers - std::min(followers, n - searchers)};
}

/// Fitness of one evaluation; `aux` carries a secondary criterion for
/// incumbent policies that want one (it defaults to the value itself).
template <typename Scalar = double>
struct ScoredFitness {
    Scalar value;
    Scalar aux;
};

template <typename Scalar = double>
struct Particle {
    std::size_t index;
    Role role = Role::Explorer;
    VectorX<Scalar> position;
    ScoredFitness<Scalar> fitness{};
    Scalar step;     // BAS decay state; persists while the particle is not a searcher
    Scalar antenna;
};

template <typename Scalar = double>
struct SwarmTraceRecord {
    std::size_t iteration;                  // 0 is the initialization pass
    Scalar best_fitness;                    // incumbent after this iteration
    std::size_t best_particle_index;        // particle that produced the incumbent
    std::array<std::size_t, 3> role_counts; // searchers, followers, explorers
};

template <typename Scalar = double>
struct SwarmResult {
    VectorX<Scalar> best_position;
    Scalar best_fitness;
    std::vector<SwarmTraceRecord<Scalar>> trace;
};

template <typename Scalar = double>
struct ScoredSwarmResult {
    VectorX<Scalar> best_position;
    ScoredFitness<Scalar> best;
    std::size_t best_particle_index;
    std::vector<SwarmTraceRecord<Scalar>> trace;
};

/// Rank particles by current fitness (ascending, ties to the lower index) and
/// hand out vocations: best n_searchers search, next n_followers follow, the
/// rest explore. Returns the index into `particles` of the best-ranked one.
template <typename Scalar>
std::size_t assign_roles(std::vector<Particle<Scalar>>& particles, const SwarmConfig<Scalar>& cfg) {
    std::vector<std::size_t> order(particles.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return particles[a].fitness.value < particles[b].fitness.value;
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        Role role = Role::Explorer;
        if (rank < cfg.n_searchers)
            role = Role::Searcher;
        else if (rank < cfg.n_searchers + cfg.n_followers)
            role = Role::Follower;
        particles[order[rank]].role = role;
    }
    return order.front();
}

/// Step of length L_F toward the target, landing exactly on it when closer
/// than L_F; a particle already there stays put.
template <typename Scalar>
void follower_step(Particle<Scalar>& p, const VectorX<Scalar>& target, Scalar step_len,
                   const Interval<Scalar>& bounds) {
    const VectorX<Scalar> diff = target - p.position;
    const Scalar dist = diff.norm();
    if (dist > step_len)
        p.position = bounds.clamp(p.position + (step_len / dist) * diff);
    else if (dist > Scalar(0))
        p.position = bounds.clamp(target);
}

/// Fixed-length move along a fresh random unit direction.
template <typename Scalar>
void explorer_step(Particle<Scalar>& p, Scalar step_len, Rng& rng, const Interval<Scalar>& bounds) {
    const VectorX<Scalar> dir = random_direction<Scalar>(p.position.size(), rng);
    p.position = bounds.clamp(p.position + step_len * dir);
}

/// Swarm search with a caller-supplied incumbent gate. F maps a position to a
/// ScoredFitness; Accept(candidate, incumbent) decides adoption of the
/// iteration's fitness-minimal particle. Each particle draws from its own RNG
/// substream of `seed`, so the population size never changes another
/// particle's randomness.
template <typename Scalar, typename F, typename Accept>
ScoredSwarmResult<Scalar> mbas_search_scored(const SwarmConfig<Scalar>& cfg, Eigen::Index dim,
                                             F&& fitness, std::uint64_t seed, Accept&& accept) {
    cfg.validate();
    if (dim < 1) throw ConfigError("mbas_search: dimension must be >= 1");
    const std::size_t n = cfg.population();
    BasConfig<Scalar> move_cfg = cfg.searcher_bas;
    move_cfg.bounds = cfg.bounds;

    auto eval = [&](const VectorX<Scalar>& at) {
        ScoredFitness<Scalar> s = fitness(at);
        detail::checked_fitness<Scalar>(s.value, at);
        return s;
    };

    std::vector<Rng> streams;
    streams.reserve(n);
    std::vector<Particle<Scalar>> particles;
    particles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        streams.push_back(substream(seed, i));
        Particle<Scalar> p;
        p.index = i;
        p.position = uniform_vector<Scalar>(streams[i], dim, cfg.bounds.lo, cfg.bounds.hi);
        p.fitness = eval(p.position);
        p.step = move_cfg.step0;
        p.antenna = move_cfg.initial_antenna();
        particles.push_back(std::move(p));
    }

    // initial incumbent: fitness-minimal particle, ties to the lower index
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (particles[i].fitness.value < particles[best_idx].fitness.value) best_idx = i;
    VectorX<Scalar> best_position = particles[best_idx].position;
    ScoredFitness<Scalar> best = particles[best_idx].fitness;

    std::size_t best_searcher = assign_roles(particles, cfg);
    auto role_counts = [&] {
        std::array<std::size_t, 3> counts{0, 0, 0};
        for (const auto& p : particles) counts[static_cast<std::size_t>(p.role)]++;
        return counts;
    };

    std::vector<SwarmTraceRecord<Scalar>> trace;
    trace.reserve(cfg.iterations + 1);
    trace.push_back({0, best.value, best_idx, role_counts()});

    for (std::size_t t = 1; t <= cfg.iterations; ++t) {
        // followers first, toward the pre-move position of the best searcher
        const VectorX<Scalar> target = particles[best_searcher].position;
        for (auto& p : particles)
            if (p.role == Role::Follower) {
                follower_step(p, target, cfg.follower_step, cfg.bounds);
                p.fitness = eval(p.position);
            }
        for (auto& p : particles)
            if (p.role == Role::Searcher) {
                BeetleState<Scalar> state{p.position, p.step, p.antenna, p.position,
                                          p.fitness.value};
                // bas_step's last evaluation is the one at the new position
                ScoredFitness<Scalar> last{};
                auto probe = [&](const VectorX<Scalar>& at) {
                    last = fitness(at);
                    return last.value;
                };
                bas_step(state, move_cfg, probe, streams[p.index]);
                p.position = std::move(state.position);
                p.step = state.step;
                p.antenna = state.antenna;
                p.fitness = last;
            }
        for (auto& p : particles)
            if (p.role == Role::Explorer) {
                explorer_step(p, cfg.explorer_step, streams[p.index], cfg.bounds);
                p.fitness = eval(p.position);
            }

        std::size_t cand = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (particles[i].fitness.value < particles[cand].fitness.value) cand = i;
        if (accept(particles[cand].fitness, best)) {
            best = particles[cand].fitness;
            best_position = particles[cand].position;
            best_idx = cand;
        }
        best_searcher = assign_roles(particles, cfg);
        trace.push_back({t, best.value, best_idx, role_counts()});
    }
    return {std::move(best_position), best, best_idx, std::move(trace)};
}

/// Plain swarm minimization: the incumbent is the minimum fitness ever seen.
template <typename Scalar, typename F>
SwarmResult<Scalar> mbas_search(const SwarmConfig<Scalar>& cfg, Eigen::Index dim, F&& fitness,
                                std::uint64_t seed) {
    auto wrapped = [&](const VectorX<Scalar>& at) {
        const Scalar v = fitness(at);
        return ScoredFitness<Scalar>{v, v};
    };
    auto accept = [](const ScoredFitness<Scalar>& cand, const ScoredFitness<Scalar>& inc) {
        return cand.value < inc.value;
    };
    auto res = mbas_search_scored(cfg, dim, wrapped, seed, accept);
    return {std::move(res.best_position), res.best.value, std::move(res.trace)};
}

/// Trace rows as CSV: iteration, best fitness, owning particle, role counts.
template <typename Scalar>
void write_swarm_trace_csv(std::ostream& os, const std::vector<SwarmTraceRecord<Scalar>>& records) {
    os << "iteration,best_fitness,best_particle_index,searchers,followers,explorers\n";
    os << std::setprecision(17);
    for (const auto& r : records)
        os << r.iteration << ',' << r.best_fitness << ',' << r.best_particle_index << ','
           << r.role_counts[0] << ',' << r.role_counts[1] << ',' << r.role_counts[2] << '\n';
}

}  // namespace melm

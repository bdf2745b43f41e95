#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "melm/mbas.hpp"

using melm::Particle;
using melm::Role;
using melm::ScoredFitness;
using melm::SwarmConfig;
using melm::Vector;

namespace {

double sphere(const Vector& x) { return x.squaredNorm(); }

SwarmConfig<double> small_swarm() {
    SwarmConfig<double> cfg;
    cfg.n_searchers = 3;
    cfg.n_followers = 2;
    cfg.n_explorers = 1;
    cfg.follower_step = 0.5;
    cfg.explorer_step = 0.8;
    cfg.iterations = 50;
    cfg.bounds = {-10.0, 10.0};
    cfg.searcher_bas.eta = 0.95;
    cfg.searcher_bas.step0 = 2.0;
    return cfg;
}

std::vector<Particle<double>> particles_with_fitness(std::initializer_list<double> values) {
    std::vector<Particle<double>> out;
    std::size_t i = 0;
    for (const double v : values) {
        Particle<double> p;
        p.index = i++;
        p.position = Vector::Zero(2);
        p.fitness = {v, v};
        out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("roles follow the fitness ranking") {
    SwarmConfig<double> cfg = small_swarm();
    cfg.n_searchers = 1;
    cfg.n_followers = 1;
    cfg.n_explorers = 1;
    auto particles = particles_with_fitness({3.0, 1.0, 2.0});
    const std::size_t best = melm::assign_roles(particles, cfg);
    CHECK(best == 1);
    CHECK(particles[0].role == Role::Explorer);
    CHECK(particles[1].role == Role::Searcher);
    CHECK(particles[2].role == Role::Follower);
}

TEST_CASE("fitness ties are broken by particle index") {
    SwarmConfig<double> cfg = small_swarm();
    cfg.n_searchers = 1;
    cfg.n_followers = 1;
    cfg.n_explorers = 1;
    auto particles = particles_with_fitness({7.0, 7.0, 7.0});
    const std::size_t best = melm::assign_roles(particles, cfg);
    CHECK(best == 0);
    CHECK(particles[0].role == Role::Searcher);
    CHECK(particles[1].role == Role::Follower);
    CHECK(particles[2].role == Role::Explorer);
}

TEST_CASE("with no followers or explorers everyone searches") {
    SwarmConfig<double> cfg = small_swarm();
    cfg.n_searchers = 3;
    cfg.n_followers = 0;
    cfg.n_explorers = 0;
    auto particles = particles_with_fitness({5.0, 2.0, 9.0});
    (void)melm::assign_roles(particles, cfg);
    for (const auto& p : particles) CHECK(p.role == Role::Searcher);
}

TEST_CASE("a far follower moves exactly its step length toward the target") {
    Particle<double> p;
    p.index = 0;
    p.role = Role::Follower;
    p.position = Vector::Zero(2);
    Vector target(2);
    target << 3, 4;
    melm::follower_step(p, target, 1.0, melm::Interval<double>{-10, 10});
    CHECK(p.position[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(p.position[1] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("a follower already at the target stays put") {
    Particle<double> p;
    p.position = Vector::Constant(3, 2.0);
    melm::follower_step(p, Vector::Constant(3, 2.0).eval(), 1.0,
                        melm::Interval<double>{-10, 10});
    CHECK(p.position == Vector::Constant(3, 2.0));
}

TEST_CASE("a close follower lands on the target without overshooting") {
    Particle<double> p;
    p.position = Vector::Zero(1);
    Vector target = Vector::Constant(1, 0.5);
    melm::follower_step(p, target, 2.0, melm::Interval<double>{-10, 10});
    CHECK(p.position[0] == 0.5);
}

TEST_CASE("explorer displacement has exactly the step length away from walls") {
    auto rng = melm::make_rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Particle<double> p;
        p.position = Vector::Zero(4);
        melm::explorer_step(p, 0.75, rng, melm::Interval<double>{-10, 10});
        CHECK(std::abs(p.position.norm() - 0.75) < 1e-12);
    }
}

TEST_CASE("explorer moves are deterministic under a fixed seed") {
    auto a = melm::make_rng(9), b = melm::make_rng(9);
    Particle<double> pa, pb;
    pa.position = pb.position = Vector::Constant(3, 1.0);
    melm::explorer_step(pa, 0.5, a, melm::Interval<double>{-10, 10});
    melm::explorer_step(pb, 0.5, b, melm::Interval<double>{-10, 10});
    CHECK(pa.position == pb.position);
}

TEST_CASE("an explorer at a corner is clamped onto the box") {
    auto rng = melm::make_rng(7);
    const melm::Interval<double> bounds{-1, 1};
    for (int trial = 0; trial < 20; ++trial) {
        Particle<double> p;
        p.position = Vector::Constant(2, 1.0);
        melm::explorer_step(p, 5.0, rng, bounds);
        CHECK(bounds.contains(p.position));
    }
}

TEST_CASE("a degenerate one-searcher swarm bit-matches bas_search") {
    SwarmConfig<double> cfg = small_swarm();
    cfg.n_searchers = 1;
    cfg.n_followers = 0;
    cfg.n_explorers = 0;
    cfg.iterations = 80;
    const std::uint64_t seed = 1234;

    const auto swarm_res = melm::mbas_search(cfg, 4, sphere, seed);

    // replay particle 0's substream: the init draw, then the bas moves
    melm::Rng rng = melm::substream(seed, 0);
    const Vector x0 = melm::uniform_vector(rng, 4, cfg.bounds.lo, cfg.bounds.hi);
    melm::BasConfig<double> bas_cfg = cfg.searcher_bas;
    bas_cfg.bounds = cfg.bounds;
    bas_cfg.max_iters = cfg.iterations;
    const auto bas_res = melm::bas_search(bas_cfg, sphere, x0, rng);

    CHECK(swarm_res.best_fitness == bas_res.best_fitness);
    CHECK(swarm_res.best_position == bas_res.best_position);
}

TEST_CASE("equal seeds give bit-identical swarm traces") {
    const SwarmConfig<double> cfg = small_swarm();
    const auto a = melm::mbas_search(cfg, 5, sphere, 42);
    const auto b = melm::mbas_search(cfg, 5, sphere, 42);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].best_fitness == b.trace[i].best_fitness);
        CHECK(a.trace[i].best_particle_index == b.trace[i].best_particle_index);
    }
    CHECK(a.best_position == b.best_position);
}

TEST_CASE("role counts are exact after every reassignment") {
    const SwarmConfig<double> cfg = small_swarm();
    const auto res = melm::mbas_search(cfg, 5, sphere, 7);
    REQUIRE(res.trace.size() == cfg.iterations + 1);
    for (const auto& rec : res.trace) {
        CHECK(rec.role_counts[0] == cfg.n_searchers);
        CHECK(rec.role_counts[1] == cfg.n_followers);
        CHECK(rec.role_counts[2] == cfg.n_explorers);
    }
}

TEST_CASE("the incumbent never worsens and matches the evaluation minimum") {
    const SwarmConfig<double> cfg = small_swarm();
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        double seen_min = std::numeric_limits<double>::infinity();
        auto counting = [&](const Vector& x) {
            const double v = sphere(x);
            seen_min = std::min(seen_min, v);
            return v;
        };
        const auto res = melm::mbas_search(cfg, 5, counting, seed);
        for (std::size_t i = 1; i < res.trace.size(); ++i)
            CHECK(res.trace[i].best_fitness <= res.trace[i - 1].best_fitness);
        CHECK(res.best_fitness == seen_min);
    }
}

TEST_CASE("every evaluated position stays inside the bounds box") {
    const SwarmConfig<double> cfg = small_swarm();
    auto checked = [&](const Vector& x) {
        REQUIRE(cfg.bounds.contains(x));
        return sphere(x);
    };
    (void)melm::mbas_search(cfg, 6, checked, 11);
}

TEST_CASE("the dual-criterion gate can refuse a pure fitness improvement") {
    SwarmConfig<double> cfg = small_swarm();
    cfg.iterations = 30;
    // aux worsens whenever value improves, so no candidate can ever pass
    auto fitness = [](const Vector& x) {
        const double v = x.squaredNorm();
        return ScoredFitness<double>{v, 1000.0 - v};
    };
    const auto gated = melm::mbas_search_scored(
        cfg, 3, fitness, 21,
        [](const ScoredFitness<double>& cand, const ScoredFitness<double>& inc) {
            return cand.value < inc.value && cand.aux < inc.aux;
        });
    CHECK(gated.trace.front().best_fitness == gated.trace.back().best_fitness);

    const auto plain = melm::mbas_search(cfg, 3, sphere, 21);
    CHECK(plain.best_fitness < gated.best.value);
}

TEST_CASE("population and config validation") {
    SwarmConfig<double> cfg = small_swarm();
    cfg.n_searchers = 0;
    CHECK_THROWS_AS((void)melm::mbas_search(cfg, 3, sphere, 1), melm::ConfigError);
    cfg = small_swarm();
    cfg.follower_step = 0.0;
    CHECK_THROWS_AS((void)melm::mbas_search(cfg, 3, sphere, 1), melm::ConfigError);
    CHECK(melm::default_swarm_split(12) == std::array<std::size_t, 3>{6, 3, 3});
    CHECK(melm::default_swarm_split(1) == std::array<std::size_t, 3>{1, 0, 0});
    CHECK(melm::default_swarm_split(7) == std::array<std::size_t, 3>{4, 2, 1});
}

TEST_CASE("a richer swarm beats a lone beetle on the sphere, same seed") {
    SwarmConfig<double> swarm = small_swarm();
    swarm.n_searchers = 5;
    swarm.n_followers = 3;
    swarm.n_explorers = 2;
    swarm.iterations = 60;
    SwarmConfig<double> lone = swarm;
    lone.n_searchers = 1;
    lone.n_followers = 0;
    lone.n_explorers = 0;
    int swarm_wins = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const double many = melm::mbas_search(swarm, 8, sphere, seed).best_fitness;
        const double one = melm::mbas_search(lone, 8, sphere, seed).best_fitness;
        if (many <= one) ++swarm_wins;
    }
    CHECK(swarm_wins >= 7);
}

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <vector>

#include "melm/errors.hpp"
#include "melm/numerics.hpp"
#include "melm/rng.hpp"

namespace melm {

/// Closed box applied independently to every coordinate.
template <typename Scalar = double>
struct Interval {
    Scalar lo{-1};
    Scalar hi{1};

    Scalar clamp(Scalar x) const { return std::min(std::max(x, lo), hi); }

    template <typename Derived>
    VectorX<Scalar> clamp(const Eigen::MatrixBase<Derived>& v) const {
        return v.cwiseMax(lo).cwiseMin(hi);
    }

    bool contains(const VectorX<Scalar>& v) const {
        return (v.array() >= lo).all() && (v.array() <= hi).all();
    }

    void validate() const {
        if (!(lo < hi)) throw ConfigError("bounds: lo must be strictly below hi");
    }
};

template <typename Scalar = double>
struct BasConfig {
    Scalar eta = Scalar(0.95);        // geometric decay of step and antenna per iteration
    Scalar step0 = Scalar(1);         // initial step length
    Scalar step_min = Scalar(0);      // decay floor for the step
    std::optional<Scalar> antenna0;   // initial antenna length; defaults to step0
    Scalar antenna_min = Scalar(0);   // decay floor for the antenna
    std::size_t max_iters = 100;
    Interval<Scalar> bounds{};
    std::optional<Scalar> target_fitness;  // optional early-stop threshold

    Scalar initial_antenna() const { return antenna0 ? *antenna0 : step0; }

    void validate() const {
        if (!(eta > Scalar(0) && eta < Scalar(1)))
            throw ConfigError("bas: decay factor must satisfy 0 < eta < 1");
        if (!(step_min >= Scalar(0) && step0 > step_min))
            throw ConfigError("bas: need step0 > step_min >= 0");
        if (!(antenna_min >= Scalar(0) && initial_antenna() > antenna_min))
            throw ConfigError("bas: need antenna0 > antenna_min >= 0");
        if (max_iters < 1) throw ConfigError("bas: need at least one iteration");
        bounds.validate();
    }
};

template <typename Scalar = double>
struct BeetleState {
    VectorX<Scalar> position;
    Scalar step;
    Scalar antenna;
    VectorX<Scalar> best_position;
    Scalar best_fitness;
};

template <typename Scalar = double>
struct BasTraceRecord {
    std::size_t iteration;
    VectorX<Scalar> position;
    Scalar fitness;  // fitness at `position`
    Scalar step;
    Scalar antenna;
};

template <typename Scalar = double>
using BasTraceSink = std::function<void(const BasTraceRecord<Scalar>&)>;

template <typename Scalar = double>
struct BasResult {
    VectorX<Scalar> best_position;
    Scalar best_fitness;
};

namespace detail {

template <typename Scalar>
std::string position_str(const VectorX<Scalar>& v) {
    std::ostringstream os;
    os << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << ']';
    return os.str();
}

template <typename Scalar>
Scalar checked_fitness(Scalar f, const VectorX<Scalar>& at) {
    if (std::isnan(f))
        throw NumericError("fitness returned NaN at position " + position_str(at));
    return f;
}

}  // namespace detail

/// Random unit vector; raw components are uniform in [-1, 1] before
/// normalization, an all-zero draw is redrawn.
template <typename Scalar = double>
VectorX<Scalar> random_direction(Eigen::Index k, Rng& rng) {
    if (k < 1) throw std::invalid_argument("random_direction: dimension must be >= 1");
    VectorX<Scalar> dir(k);
    Scalar norm = 0;
    do {
        for (Eigen::Index i = 0; i < k; ++i) dir[i] = uniform<Scalar>(rng, Scalar(-1), Scalar(1));
        norm = dir.norm();
    } while (norm == Scalar(0));
    return dir / norm;
}

/// One antennae probe-and-move. Probes fitness at the clamped right and left
/// antenna points, steps away from the worse one (a tie stays put), evaluates
/// the new position and updates the incumbent, then decays step and antenna
/// down to their floors. Returns the fitness at the new position.
///
/// +/-infinity is a legal "maximally bad/good" fitness; only NaN is an error.
template <typename Scalar, typename F>
Scalar bas_step(BeetleState<Scalar>& state, const BasConfig<Scalar>& cfg, F&& fitness, Rng& rng) {
    const VectorX<Scalar> dir = random_direction<Scalar>(state.position.size(), rng);
    const VectorX<Scalar> right = cfg.bounds.clamp(state.position + state.antenna * dir);
    const VectorX<Scalar> left = cfg.bounds.clamp(state.position - state.antenna * dir);
    const Scalar f_right = detail::checked_fitness<Scalar>(fitness(right), right);
    const Scalar f_left = detail::checked_fitness<Scalar>(fitness(left), left);
    // sign via comparisons so inf probes compare cleanly
    const int sense = (f_right > f_left) - (f_right < f_left);
    if (sense != 0)
        state.position = cfg.bounds.clamp(state.position - state.step * Scalar(sense) * dir);
    const Scalar f_new = detail::checked_fitness<Scalar>(fitness(state.position), state.position);
    if (f_new < state.best_fitness) {
        state.best_position = state.position;
        state.best_fitness = f_new;
    }
    state.step = std::max(cfg.eta * state.step, cfg.step_min);
    state.antenna = std::max(cfg.eta * state.antenna, cfg.antenna_min);
    return f_new;
}

/// Beetle antennae search for a minimum, starting from x0. Runs max_iters
/// steps, or fewer once the incumbent reaches target_fitness if one is set.
template <typename Scalar, typename F>
BasResult<Scalar> bas_search(const BasConfig<Scalar>& cfg, F&& fitness, const VectorX<Scalar>& x0,
                             Rng& rng,
                             const std::type_identity_t<BasTraceSink<Scalar>>& trace = {}) {
    cfg.validate();
    if (!x0.allFinite() || !cfg.bounds.contains(x0))
        throw ConfigError("bas_search: start position is outside the bounds box");
    BeetleState<Scalar> state{x0, cfg.step0, cfg.initial_antenna(), x0,
                              detail::checked_fitness<Scalar>(fitness(x0), x0)};
    if (trace) trace({0, state.position, state.best_fitness, state.step, state.antenna});
    for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
        if (cfg.target_fitness && state.best_fitness <= *cfg.target_fitness) break;
        const Scalar f_new = bas_step(state, cfg, fitness, rng);
        if (trace) trace({t, state.position, f_new, state.step, state.antenna});
    }
    return {state.best_position, state.best_fitness};
}

/// Trace rows as CSV: iteration, fitness, step, antenna, then the coordinates.
template <typename Scalar>
void write_bas_trace_csv(std::ostream& os, const std::vector<BasTraceRecord<Scalar>>& records) {
    os << "iteration,fitness,step,antenna";
    const Eigen::Index dim = records.empty() ? 0 : records.front().position.size();
    for (Eigen::Index i = 0; i < dim; ++i) os << ",x" << i;
    os << '\n';
    os << std::setprecision(17);
    for (const auto& r : records) {
        os << r.iteration << ',' << r.fitness << ',' << r.step << ',' << r.antenna;
        for (Eigen::Index i = 0; i < r.position.size(); ++i) os << ',' << r.position[i];
        os << '\n';
    }
}

}  // namespace melm

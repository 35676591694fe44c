#ifndef POLYQ_TIME_AVERAGE_HPP
#define POLYQ_TIME_AVERAGE_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "polyq/billiard.hpp"
#include "polyq/common.hpp"
#include "polyq/errors.hpp"
#include "polyq/observable.hpp"
#include "polyq/sampling.hpp"

namespace polyq {

// Time average a^T(x, omega) = (1/2T) int_{-T}^{T} a0(x(t)) dt. The backward
// leg runs the forward flow with the direction negated (the billiard flow is
// reversible and a0 is position-only). Per-segment integrals are closed-form
// for constant/trig/indicator observables and adaptive Simpson for bumps.
inline double time_average(const RationalPolygon& poly, const Observable& obs,
                           const PhasePoint& p, double T, const FlowOptions& opts = {}) {
    if (T <= 0.0) throw Error("time_average: T must be positive");
    if (obs.is_constant()) return obs.mean();  // exact for every T and p

    double integral = 0.0;
    auto accumulate = [&](const TrajectorySegment& s) {
        integral += obs.segment_integral(s.start, s.direction, s.length);
    };
    const FlowOutcome fwd = flow(poly, p, T, opts, accumulate);
    if (fwd.vertex) throw VertexEncounter(*fwd.vertex, fwd.elapsed, {});
    const FlowOutcome bwd =
        flow(poly, PhasePoint{p.position, -p.direction}, T, opts, accumulate);
    if (bwd.vertex) throw VertexEncounter(*bwd.vertex, bwd.elapsed, {});
    return integral / (2.0 * T);
}

struct Lemma1Estimate {
    double mean_sq = 0.0;         // Monte Carlo estimate of int |a^T|^2 dmu
    double mean_sq_stderr = 0.0;
    double key_bound = 0.0;       // estimate of int |a^T - abar|^2 dmu
    double key_bound_stderr = 0.0;
    double mean_at = 0.0;         // estimate of int a^T dmu (equals abar in the limit)
    double mean_at_stderr = 0.0;
    double abar = 0.0;
    double T = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::size_t vertex_discards = 0;
};

namespace detail {

inline void mean_and_stderr(const std::vector<double>& v, double& mean, double& se) {
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    mean = sum / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
}

}  // namespace detail

// Monte Carlo estimate of int |a^T|^2 dmu over Liouville draws, plus the
// key-bound quantity int |a^T - abar|^2 dmu. abar is known exactly, so the
// plain mean of squared deviations is already unbiased for the key bound.
// Vertex-hitting samples are discarded and redrawn (count reported).
inline Lemma1Estimate lemma1_functional(const RationalPolygon& poly, const Observable& obs,
                                        double T, std::size_t samples, std::uint64_t seed,
                                        const FlowOptions& opts = {}) {
    if (samples < 100) throw Error("lemma1_functional: need at least 100 samples");
    if (T <= 0.0) throw Error("lemma1_functional: T must be positive");

    Lemma1Estimate est;
    est.abar = obs.abar();
    est.T = T;
    est.seed = seed;
    est.samples = samples;

    if (obs.is_constant()) {
        const double c = obs.mean();
        est.mean_sq = c * c;
        est.key_bound = 0.0;
        est.mean_at = c;
        return est;
    }

    const LiouvilleSampler sampler(poly, seed);
    std::vector<double> values(samples, 0.0);
    std::vector<std::uint32_t> discards(samples, 0);
    constexpr std::uint32_t kMaxRedraws = 1000;

    parallel_for(samples, [&](std::size_t i) {
        auto engine = sampler.engine_for_sample(i);
        for (std::uint32_t attempt = 0;; ++attempt) {
            if (attempt >= kMaxRedraws) throw TooManyVertexEvents(attempt, 1);
            const PhasePoint p = sampler.draw(engine);
            try {
                values[i] = time_average(poly, obs, p, T, opts);
                break;
            } catch (const VertexEncounter&) {
                ++discards[i];
            }
        }
    });

    for (std::uint32_t d : discards) est.vertex_discards += d;
    if (est.vertex_discards * 100 > samples)
        throw TooManyVertexEvents(est.vertex_discards, samples);

    detail::mean_and_stderr(values, est.mean_at, est.mean_at_stderr);

    std::vector<double> squares(samples), deviations(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        squares[i] = values[i] * values[i];
        const double d = values[i] - est.abar;
        deviations[i] = d * d;
    }
    detail::mean_and_stderr(squares, est.mean_sq, est.mean_sq_stderr);
    detail::mean_and_stderr(deviations, est.key_bound, est.key_bound_stderr);
    return est;
}

}  // namespace polyq

#endif  // POLYQ_TIME_AVERAGE_HPP

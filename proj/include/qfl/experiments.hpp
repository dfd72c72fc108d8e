#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <thread>
#include <vector>

#include "qfl/css_code.hpp"
#include "qfl/decoder.hpp"
#include "qfl/foliation.hpp"
#include "qfl/noise.hpp"

namespace qfl::experiments {

// Everything shared read-only by the trial workers of one lattice.
struct Bundle {
    codes::CssCode code;
    foliation::FoliatedLattice lattice;
    foliation::DecodingProblem problem;
};

Bundle make_bundle(const codes::CssCode& code, std::size_t T, bool periodic_time = true);

// Probability that at least one of k physical qubits has an error.
double break_even(double p, std::size_t k);

struct Wilson {
    double low = 0.0, high = 1.0;
};
Wilson wilson_interval(uint64_t failures, uint64_t trials, double z = 1.959963984540054);

// What counts as a failed trial.
enum class FailureRule : uint8_t {
    AnyLogicalFlip,   // decode and test the residual against every logical
    AnyLostLogical,   // erasure-only bookkeeping via lost_logicals
};

struct SweepPoint {
    std::string code;
    std::size_t T = 0;
    noise::NoiseConfig noise;
    uint64_t trials = 0;
    uint64_t failures = 0;
    double p_bar = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
};

// Multi-threaded Monte Carlo driver. make_worker() is called once per
// thread and must return a callable (uint64_t trial) -> bool failure.
// Aggregation is a commutative sum, so results are schedule-independent.
template <typename MakeWorker>
uint64_t run_trials(uint64_t trials, unsigned threads, MakeWorker&& make_worker) {
    if (threads <= 1) {
        auto worker = make_worker();
        uint64_t failures = 0;
        for (uint64_t t = 0; t < trials; ++t)
            if (worker(t)) ++failures;
        return failures;
    }
    std::vector<std::thread> pool;
    std::vector<uint64_t> partial(threads, 0);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            auto worker = make_worker();
            uint64_t local = 0;
            for (uint64_t t = w; t < trials; t += threads)
                if (worker(t)) ++local;
            partial[w] = local;
        });
    }
    uint64_t failures = 0;
    for (unsigned w = 0; w < threads; ++w) {
        pool[w].join();
        failures += partial[w];
    }
    return failures;
}

// Estimates the logical error rate at one noise point. `stream` tags the
// point so that every trial rng derives from (seed, stream, trial).
SweepPoint estimate_point(const Bundle& bundle, const noise::NoiseConfig& cfg, FailureRule rule,
                          uint64_t trials, uint64_t seed, uint64_t stream, unsigned threads);

struct SweepBounds {
    double p_e_min = 5e-4, p_e_max = 3e-3;
    double p_l_min = 1e-2, p_l_max = 1e-1;
};

// (p_e, p_l) for the theta-line parameterisation at position x in [0, 1].
std::pair<double, double> theta_line_point(const SweepBounds& b, double theta, double x);

std::vector<SweepPoint> sweep_line(const Bundle& bundle, double theta,
                                   const std::vector<double>& x_grid, uint64_t trials,
                                   uint64_t seed, unsigned threads,
                                   const SweepBounds& bounds = {});

struct PseudoThresholdResult {
    std::string code;
    std::string axis;          // "error-only", "erasure-only", "theta=...", "loss(N=...)"
    double crossing = 0.0;     // physical value at the crossing
    double bracket_low = 0.0;
    double bracket_high = 0.0;
    std::size_t k = 0;
    uint64_t trials = 0;       // per bisection point
    std::vector<SweepPoint> evaluations;
};

struct BisectOptions {
    double rel_resolution = 0.05;  // stop when bracket width < 5% of midpoint
    std::size_t max_iterations = 24;
};

// Crossing of the measured logical error rate with the break-even curve
// along a theta line of the i.i.d. noise phase space. Throws
// std::runtime_error("no crossing in range") when the rate sits on one side
// over the whole line.
PseudoThresholdResult pseudo_threshold(const Bundle& bundle, double theta, uint64_t trials,
                                       uint64_t seed, unsigned threads,
                                       const SweepBounds& bounds = {},
                                       const BisectOptions& opts = {});

struct RusCurveOptions {
    double loss_low = 1e-3;
    double loss_high = 0.12;
    noise::RusStrategy strategy = noise::RusStrategy::Modified;
    FailureRule rule = FailureRule::AnyLostLogical;
    BisectOptions bisect;
};

// Photon-loss pseudo-threshold (break-even against 1 - eta^k) for each N.
std::vector<PseudoThresholdResult> rus_threshold_curve(const Bundle& bundle,
                                                       const std::vector<int>& n_values,
                                                       uint64_t trials, uint64_t seed,
                                                       unsigned threads,
                                                       const RusCurveOptions& opts = {});

// Toric-style threshold: photon loss where the logical error rates of a
// smaller and a larger lattice cross.
PseudoThresholdResult rus_size_crossing(const Bundle& smaller, const Bundle& larger, int n_value,
                                        uint64_t trials, uint64_t seed, unsigned threads,
                                        const RusCurveOptions& opts = {});

std::vector<SweepPoint> grid_sweep(const Bundle& bundle, const std::vector<double>& p_e_grid,
                                   const std::vector<double>& p_l_grid, uint64_t trials,
                                   uint64_t seed, unsigned threads);

// CSV schema: code,T,kind,p_e,p_l,eta,N,trials,failures,p_bar,ci_low,ci_high
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SweepPoint& p);

std::string pseudo_threshold_json(const PseudoThresholdResult& r);

}  // namespace qfl::experiments

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qfl/foliation.hpp"
#include "qfl/gf2.hpp"

namespace qfl::noise {

enum class NoiseKind : uint8_t { IID, RUS };
enum class RusStrategy : uint8_t { Standard, Modified };

struct NoiseConfig {
    NoiseKind kind = NoiseKind::IID;
    // IID: independent fusion error / erasure rates.
    double p_e = 0.0;
    double p_l = 0.0;
    // RUS: total setup efficiency per photon path, max attempts, strategy.
    double eta = 1.0;
    int max_attempts = 1;
    RusStrategy strategy = RusStrategy::Modified;
};

enum class RusResult : uint8_t { Success, Failure, Loss, Skipped };
enum class RusEndpoint : uint8_t { None, Ancilla, Data, Both };

struct RusOutcome {
    uint32_t fusion = 0;
    RusResult result = RusResult::Success;
    RusEndpoint erased_endpoint = RusEndpoint::None;
    uint32_t attempts = 0;
};

// Sampled noise for one Monte Carlo trial over the decoding problem's
// variables. Erased columns carry uniformly random values in `error` so the
// syndrome reflects the 50% error convention for erasures.
struct TrialNoise {
    gf2::BitVec error;
    std::vector<uint32_t> erased;  // sorted column ids
    std::vector<RusOutcome> rus_log;
};

// Per-trial generator derived from (seed, stream, trial) so trials are
// order-independent and parallel runs reproduce bit-for-bit.
class TrialRng {
public:
    TrialRng(uint64_t seed, uint64_t stream, uint64_t trial);
    uint64_t u64() { return eng_(); }
    bool bit() { return u64() & 1; }
    double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }
    bool coin(double p) { return uniform01() < p; }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

// i.i.d. fusion noise: each fusion bit independently erased with p_l (value
// then uniform), otherwise flipped with p_e. Virtual columns are untouched.
TrialNoise sample_iid(const foliation::DecodingProblem& problem, double p_e, double p_l,
                      TrialRng& rng);

struct RusProbabilities {
    double success = 0.0;
    double failure = 0.0;
    double loss = 0.0;
};

// Closed-form outcome probabilities of a repeat-until-success fusion with
// per-attempt P_s = P_f = eta^2 / 2 and P_l = 1 - eta^2.
RusProbabilities rus_outcome_probabilities(double eta, int max_attempts);

// Samples RUS photon-loss noise over the lattice, layer by layer. Loss
// Z-measures both endpoint spins; exhausted repeats (failure) Z-measure the
// ancilla (standard) or a random endpoint (modified); the modified strategy
// skips fusions whose endpoints are already measured. A Z-measured spin's
// virtual column is erased; fusion outcomes that were never produced enter
// the problem as known values, so no fusion-bit column is erased here.
TrialNoise sample_rus(const foliation::FoliatedLattice& lattice,
                      const foliation::DecodingProblem& problem, double eta, int max_attempts,
                      RusStrategy strategy, TrialRng& rng, bool keep_log = false);

TrialNoise sample(const foliation::FoliatedLattice& lattice,
                  const foliation::DecodingProblem& problem, const NoiseConfig& config,
                  TrialRng& rng);

// Overall physical error rate p = p_l/2 + (1 - p_l) p_e.
double combined_error_rate(double p_e, double p_l);

}  // namespace qfl::noise

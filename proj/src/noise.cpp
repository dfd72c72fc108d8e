#include "qfl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfl::noise {

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(uint64_t seed, uint64_t stream, uint64_t trial) {
    uint64_t state = seed;
    uint64_t a = splitmix64(state);
    state ^= stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    uint64_t b = splitmix64(state);
    state ^= trial * 0x9e3779b97f4a7c15ULL + 1;
    uint64_t c = splitmix64(state);
    eng_.seed(a ^ (b << 1) ^ (c << 2));
}

TrialNoise sample_iid(const foliation::DecodingProblem& problem, double p_e, double p_l,
                      TrialRng& rng) {
    if (p_e < 0 || p_e > 1 || p_l < 0 || p_l > 1)
        throw std::invalid_argument("sample_iid: probabilities must be in [0, 1]");
    TrialNoise out;
    out.error = gf2::BitVec(problem.n_vars);
    for (std::size_t f = 0; f < problem.fusion_column.size(); ++f) {
        uint32_t col = problem.fusion_column[f];
        // Fixed draw count per fusion keeps streams aligned across configs.
        bool erased = rng.coin(p_l);
        bool aux = rng.coin(erased ? 0.5 : p_e);
        if (erased) {
            out.erased.push_back(col);
            if (aux) out.error.flip(col);
        } else if (aux) {
            out.error.flip(col);
        }
    }
    std::sort(out.erased.begin(), out.erased.end());
    return out;
}

RusProbabilities rus_outcome_probabilities(double eta, int max_attempts) {
    if (eta < 0 || eta > 1) throw std::invalid_argument("rus: eta must be in [0, 1]");
    if (max_attempts < 1) throw std::invalid_argument("rus: max_attempts must be >= 1");
    double p_s = 0.5 * eta * eta;
    double p_f = p_s;
    double p_l = 1.0 - eta * eta;
    // p_f <= 1/2, so the geometric sum is always regular.
    double geo = (1.0 - std::pow(p_f, max_attempts)) / (1.0 - p_f);
    return {p_s * geo, std::pow(p_f, max_attempts), p_l * geo};
}

TrialNoise sample_rus(const foliation::FoliatedLattice& lat,
                      const foliation::DecodingProblem& problem, double eta, int max_attempts,
                      RusStrategy strategy, TrialRng& rng, bool keep_log) {
    if (eta < 0 || eta > 1) throw std::invalid_argument("rus: eta must be in [0, 1]");
    if (max_attempts < 1) throw std::invalid_argument("rus: max_attempts must be >= 1");
    double p_s = 0.5 * eta * eta;
    double p_sf = eta * eta;  // success or failure per attempt

    TrialNoise out;
    out.error = gf2::BitVec(problem.n_vars);
    std::vector<uint8_t> dead(lat.n_spins, 0);
    auto kill = [&](uint32_t spin) {
        if (!dead[spin]) {
            dead[spin] = 1;
            out.erased.push_back(problem.spin_column[spin]);
        }
    };

    for (const foliation::Fusion& f : lat.fusions) {
        RusOutcome rec;
        rec.fusion = f.id;
        if (strategy == RusStrategy::Modified && (dead[f.data_spin] || dead[f.ancilla_spin])) {
            rec.result = RusResult::Skipped;
            if (keep_log) out.rus_log.push_back(rec);
            continue;
        }
        RusResult result = RusResult::Failure;
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            ++rec.attempts;
            double u = rng.uniform01();
            if (u < p_s) {
                result = RusResult::Success;
                break;
            }
            if (u >= p_sf) {
                result = RusResult::Loss;
                break;
            }
            // physical failure: emit fresh photons and repeat
        }
        rec.result = result;
        switch (result) {
            case RusResult::Success:
                break;
            case RusResult::Loss:
                kill(f.data_spin);
                kill(f.ancilla_spin);
                rec.erased_endpoint = RusEndpoint::Both;
                break;
            case RusResult::Failure: {
                bool take_ancilla = (strategy == RusStrategy::Standard) ? true : rng.bit();
                kill(take_ancilla ? f.ancilla_spin : f.data_spin);
                rec.erased_endpoint = take_ancilla ? RusEndpoint::Ancilla : RusEndpoint::Data;
                break;
            }
            case RusResult::Skipped:
                break;
        }
        if (keep_log) out.rus_log.push_back(rec);
    }

    std::sort(out.erased.begin(), out.erased.end());
    // Erased virtual outcomes are unknown; give them uniform values for the
    // syndrome so decoding sees the 50% convention.
    for (uint32_t col : out.erased)
        if (rng.bit()) out.error.flip(col);
    return out;
}

TrialNoise sample(const foliation::FoliatedLattice& lat,
                  const foliation::DecodingProblem& problem, const NoiseConfig& config,
                  TrialRng& rng) {
    if (config.kind == NoiseKind::IID) return sample_iid(problem, config.p_e, config.p_l, rng);
    return sample_rus(lat, problem, config.eta, config.max_attempts, config.strategy, rng);
}

double combined_error_rate(double p_e, double p_l) {
    if (p_e < 0 || p_e > 1 || p_l < 0 || p_l > 1)
        throw std::invalid_argument("combined_error_rate: probabilities must be in [0, 1]");
    return p_l / 2.0 + (1.0 - p_l) * p_e;
}

}  // namespace qfl::noise

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfl/foliation.hpp"
#include "qfl/gf2.hpp"
#include "qfl/noise.hpp"

namespace qfl::oracle {

// Pauli operator as i^phase * X^x * Z^z with exact phase tracking.
struct Pauli {
    gf2::BitVec x, z;
    uint8_t phase = 0;  // exponent of i, mod 4

    explicit Pauli(std::size_t n) : x(n), z(n) {}
    static Pauli identity(std::size_t n) { return Pauli(n); }
    void mul_x(std::size_t q) { apply(q, true, false, 0); }
    void mul_z(std::size_t q) { apply(q, false, true, 0); }
    void mul_y(std::size_t q) { apply(q, true, true, 1); }
    void mul(const Pauli& o);
    bool commutes_with(const Pauli& o) const;

private:
    void apply(std::size_t q, bool ax, bool az, uint8_t ph);
};

// Aaronson-Gottesman tableau with destabilizers; supports measurement of
// arbitrary (multi-qubit) Pauli operators.
class StabilizerTableau {
public:
    static StabilizerTableau graph_state(const std::vector<std::vector<uint32_t>>& adjacency);
    // |0..0> + |1..1> with stabilizers X^n and Z_i Z_{i+1}.
    static StabilizerTableau ghz_state(std::size_t n);

    std::size_t num_qubits() const { return n_; }

    struct MeasureResult {
        bool outcome = false;  // true = eigenvalue -1
        bool deterministic = false;
    };
    MeasureResult measure(const Pauli& p, noise::TrialRng& rng);

    // All stabilizer generator pairs commute; used as a property check.
    bool generators_commute() const;

private:
    std::size_t n_ = 0, words_ = 0;
    // Rows 0..n-1 destabilizers, n..2n-1 stabilizers.
    std::vector<uint64_t> x_, z_;
    std::vector<uint8_t> phase_;

    bool anticommutes(std::size_t row, const Pauli& p) const;
    void row_mul(std::size_t dst, std::size_t src);
    Pauli row_pauli(std::size_t row) const;
    void set_row(std::size_t row, const Pauli& p);
};

// Tensor product of every resource state of the lattice: branched data
// chains and ancilla stars, with all fusion photons explicit. Spins keep
// their lattice ids; photons follow.
struct ResourceUnion {
    const foliation::FoliatedLattice* lattice = nullptr;
    std::size_t n_spins = 0;
    std::size_t n_qubits = 0;
    std::vector<std::vector<uint32_t>> adjacency;

    uint32_t data_photon(uint32_t fusion) const {
        return static_cast<uint32_t>(n_spins + 2 * fusion);
    }
    uint32_t ancilla_photon(uint32_t fusion) const {
        return static_cast<uint32_t>(n_spins + 2 * fusion + 1);
    }
};

ResourceUnion build_resource_union(const foliation::FoliatedLattice& lattice);

// Scripted noise events for the semantics checks.
enum class EventKind : uint8_t { FailMeasureAncilla, FailMeasureData, Loss, Skip };
struct ScriptedEvent {
    uint32_t fusion = 0;
    EventKind kind = EventKind::FailMeasureAncilla;
};

enum class OpKind : uint8_t { FusionParityAncilla, FusionParityData, VirtualSpin, PhotonZ, SpinZ };

struct PatternOp {
    OpKind kind;
    uint32_t ref;  // fusion id, spin id, or photon qubit id
    Pauli op;
    bool known = true;  // false only for lost photons
};

struct MeasurementPattern {
    std::vector<PatternOp> ops;
    std::vector<uint8_t> dead_spin;               // spin id -> Z-measured
    std::vector<int8_t> fusion_state;             // fusion id -> -1 ok, else EventKind
    std::vector<int32_t> fusion_op_anc, fusion_op_data;  // fusion id -> op index or -1
    std::vector<int32_t> spin_op;                 // spin id -> op index
};

MeasurementPattern build_pattern(const ResourceUnion& ru, const std::vector<ScriptedEvent>& events);

struct OutcomeRecord {
    std::vector<uint8_t> outcome;        // aligned with pattern.ops
    std::vector<uint8_t> deterministic;  // aligned with pattern.ops
};

OutcomeRecord apply_measurement_pattern(StabilizerTableau& tableau,
                                        const MeasurementPattern& pattern, noise::TrialRng& rng);

struct Report {
    bool pass = true;
    std::vector<std::string> mismatches;
    std::size_t checks = 0;
    std::size_t negative_sign_rows = 0;
    void fail(std::string what) {
        pass = false;
        mismatches.push_back(std::move(what));
    }
};

// Validates the decoding problem against the resource-state algebra:
// (a) every detector and logical row is a deterministic product of measured
//     outcomes at zero noise, (b) single outcome flips flip exactly the rows
//     containing the corresponding column, (c) sampled runs reproduce the
//     predicted resting parities.
Report verify_incidence(const foliation::FoliatedLattice& lattice,
                        const foliation::DecodingProblem& problem);

// Checks that scripted RUS events affect exactly the detector combinations
// predicted by the erased-virtual-column model: rows touching an erased
// virtual column go random, their pairwise supercells (and rows that only
// lost fusion outcomes, which survive via the known single-photon record)
// stay deterministic.
Report verify_event_semantics(const foliation::FoliatedLattice& lattice,
                              const foliation::DecodingProblem& problem,
                              const std::vector<ScriptedEvent>& events);

}  // namespace qfl::oracle

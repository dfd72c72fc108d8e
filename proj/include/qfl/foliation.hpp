#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "qfl/css_code.hpp"
#include "qfl/gf2.hpp"

namespace qfl::foliation {

enum class CheckType : uint8_t { X, Z };

// One data-to-ancilla bond of the foliated lattice, realised as a photonic
// fusion between a leaf of the data branched chain and a leaf of the
// ancilla GHZ state.
struct Fusion {
    uint32_t id = 0;
    uint32_t data_qubit = 0;   // base-code qubit j
    uint32_t check_index = 0;  // base-code check i within its type
    CheckType type = CheckType::Z;
    uint32_t time = 0;   // measurement round t
    uint32_t layer = 0;  // 0 .. 2T-1; even layers are dual (Z), odd primal (X)
    uint32_t data_spin = 0;
    uint32_t ancilla_spin = 0;
};

// Layered node/fusion structure spanning 2T layers. Spins (chain nodes and
// ancilla centers) are virtual qubits: never emitted as photons, so only the
// fusion photons can be noisy. Immutable after construction.
struct FoliatedLattice {
    codes::CssCode code;
    codes::LogicalBasis logicals;  // X-logical representatives of the base code
    std::size_t T = 0;
    bool periodic_time = true;

    std::size_t n = 0;    // base qubits
    std::size_t m_x = 0;  // X checks
    std::size_t m_z = 0;  // Z checks

    std::size_t n_chain_spins = 0;  // n * 2T
    std::size_t n_spins = 0;
    std::vector<uint32_t> ancilla_layer_offset;  // per layer, into spin ids

    std::vector<Fusion> fusions;
    std::vector<std::vector<uint32_t>> spin_fusions;  // spin id -> incident fusion ids

    // Sparse Tanner structure of the base code.
    std::vector<std::vector<uint32_t>> x_check_support, z_check_support;
    std::vector<std::vector<uint32_t>> x_qubit_checks, z_qubit_checks;

    std::size_t layers() const { return 2 * T; }
    static bool layer_is_primal(uint32_t layer) { return layer & 1; }
    uint32_t chain_spin(uint32_t j, uint32_t layer) const {
        return layer * static_cast<uint32_t>(n) + j;
    }
    uint32_t ancilla_spin(uint32_t check, uint32_t layer) const {
        return ancilla_layer_offset[layer] + check;
    }
    bool is_chain_spin(uint32_t spin) const { return spin < n_chain_spins; }
    uint32_t spin_layer(uint32_t spin) const;
    // For chain spins the base qubit j, for ancillas the check index.
    uint32_t spin_owner_index(uint32_t spin) const;
};

// Detector cell support at the node level (Pauli-X support on lattice spins).
struct DetectorCell {
    uint32_t check_index = 0;
    uint32_t time = 0;
    CheckType type = CheckType::X;
    std::vector<uint32_t> support;  // spin ids, duplicates cancelled mod 2
};

enum class VarKind : uint8_t { FusionBit, VirtualChain, VirtualAncilla };

// GF(2) decoding problem over one lattice side. Columns cover one outcome
// bit per fusion (the bit whose flip is seen by this side's detectors) plus
// one virtual outcome per spin. Rows are detector parities; logical rows are
// the correlation surfaces.
struct DecodingProblem {
    CheckType side = CheckType::X;
    std::size_t n_vars = 0;
    std::size_t n_detectors = 0;
    std::size_t k = 0;

    std::vector<std::vector<uint32_t>> det_rows;     // sorted column ids
    std::vector<std::vector<uint32_t>> col_rows;     // column -> rows containing it
    std::vector<std::vector<uint32_t>> logical_rows; // k rows, sorted column ids

    std::vector<VarKind> var_kinds;
    std::vector<uint32_t> fusion_column;  // fusion id -> column
    std::vector<uint32_t> spin_column;    // spin id -> column
    std::vector<int64_t> column_fusion;   // column -> fusion id, -1 for virtual
    std::vector<int64_t> column_spin;     // column -> spin id, -1 for fusion bits

    gf2::BitVec syndrome_of(const gf2::BitVec& error) const;
    bool logical_parity(std::size_t ell, const gf2::BitVec& v) const;
};

FoliatedLattice foliate(const codes::CssCode& code, std::size_t T, bool periodic_time = true);

// X-type cells for all (i, t) followed by Z-type cells; Z cells are kept for
// the oracle and are not decoded.
std::vector<DetectorCell> detector_cells(const FoliatedLattice& lattice);

DecodingProblem build_decoding_problem(const FoliatedLattice& lattice,
                                       CheckType side = CheckType::X);

struct InventoryReport {
    std::size_t chains = 0;
    std::size_t chain_length = 0;  // 2T
    std::map<std::size_t, std::size_t> leaves_per_node;  // histogram
    std::size_t ghz_states = 0;
    std::map<std::size_t, std::size_t> ghz_size;  // histogram
    std::size_t fusions = 0;
    std::size_t fusion_photons = 0;
};

InventoryReport resource_inventory(const FoliatedLattice& lattice);

// Structured text dump (nodes, fusions, detector rows, logical rows).
void dump_lattice(const FoliatedLattice& lattice, const DecodingProblem& problem,
                  std::ostream& out);

}  // namespace qfl::foliation

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qfl/foliation.hpp"
#include "qfl/gf2.hpp"

namespace qfl::decoder {

// Modified union-find decoder: clusters are seeded from erased columns and
// non-zero detectors, validated by Gaussian elimination restricted to the
// cluster, and invalid clusters grow in double steps on the Tanner graph so
// that cluster boundaries are always detectors. One instance per worker;
// instances share the immutable problem and reuse internal scratch.
class UnionFindDecoder {
public:
    explicit UnionFindDecoder(const foliation::DecodingProblem& problem);

    // Returns e with h_det * e = syndrome. Throws std::runtime_error
    // ("undecodable") when the syndrome is outside the row space, which
    // indicates an internal inconsistency, and on dimension mismatch.
    gf2::BitVec decode(const gf2::BitVec& syndrome, const std::vector<uint32_t>& erasures,
                       std::ostream* debug = nullptr);

private:
    struct BasisVec {
        gf2::BitVec dets;           // column restricted to the cluster, global det width
        uint32_t seed_var = 0;      // the variable this column came from
        std::vector<uint32_t> mix;  // store indices XORed in during reduction
        int pivot = -1;
    };
    struct Cluster {
        std::vector<uint32_t> dets;
        std::vector<uint32_t> vars;
        std::vector<BasisVec> store;     // append-only
        std::vector<uint32_t> order;     // store indices sorted by pivot
        std::vector<uint32_t> frontier;  // pending breadth-first variables
        std::size_t frontier_head = 0;
        bool valid = false;
        bool alive = false;
        uint32_t rep = 0;  // smallest detector id, growth tie-break
    };

    uint32_t find(uint32_t c);
    uint32_t unite(uint32_t a, uint32_t b);
    uint32_t new_cluster();
    void reduce_column(Cluster& cl, uint32_t var);
    uint32_t absorb_variable(uint32_t root, uint32_t var);
    bool grow_one(uint32_t root, const gf2::BitVec& syndrome);
    bool cluster_valid(const Cluster& cl, const gf2::BitVec& syndrome) const;
    void solve_cluster(const Cluster& cl, const gf2::BitVec& syndrome, gf2::BitVec& e) const;

    const foliation::DecodingProblem& p_;
    std::vector<Cluster> clusters_;
    std::vector<uint32_t> parent_;
    std::vector<int32_t> det_cluster_;
    std::vector<int32_t> var_cluster_;
};

// Component-wise parities of the logical rows against correction XOR
// true_error. Throws std::invalid_argument when the residual has non-zero
// syndrome (precondition violation).
gf2::BitVec logical_flip(const foliation::DecodingProblem& problem,
                         const gf2::BitVec& correction, const gf2::BitVec& true_error);

// Indices of logicals with no representative supported away from the erased
// columns (Gaussian elimination on the restricted system).
std::vector<uint32_t> lost_logicals(const foliation::DecodingProblem& problem,
                                    const std::vector<uint32_t>& erasures);

}  // namespace qfl::decoder

#include "qfl/decoder.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace qfl::decoder {

UnionFindDecoder::UnionFindDecoder(const foliation::DecodingProblem& problem) : p_(problem) {
    det_cluster_.assign(p_.n_detectors, -1);
    var_cluster_.assign(p_.n_vars, -1);
}

uint32_t UnionFindDecoder::find(uint32_t c) {
    while (parent_[c] != c) {
        parent_[c] = parent_[parent_[c]];
        c = parent_[c];
    }
    return c;
}

uint32_t UnionFindDecoder::new_cluster() {
    uint32_t id = static_cast<uint32_t>(clusters_.size());
    clusters_.emplace_back();
    clusters_.back().alive = true;
    clusters_.back().rep = static_cast<uint32_t>(p_.n_detectors);
    parent_.push_back(id);
    return id;
}

void UnionFindDecoder::reduce_column(Cluster& cl, uint32_t var) {
    BasisVec nv;
    nv.dets = gf2::BitVec(p_.n_detectors);
    nv.seed_var = var;
    for (uint32_t d : p_.col_rows[var]) nv.dets.flip(d);
    for (uint32_t idx : cl.order) {
        const BasisVec& b = cl.store[idx];
        if (nv.dets.get(static_cast<std::size_t>(b.pivot))) {
            nv.dets.xor_with(b.dets);
            nv.mix.push_back(idx);
        }
    }
    nv.pivot = nv.dets.lowest_set();
    if (nv.pivot < 0) return;  // dependent column, solutions never need it
    uint32_t store_idx = static_cast<uint32_t>(cl.store.size());
    auto pos = std::lower_bound(cl.order.begin(), cl.order.end(), nv.pivot,
                                [&](uint32_t i, int piv) { return cl.store[i].pivot < piv; });
    cl.order.insert(pos, store_idx);
    cl.store.push_back(std::move(nv));
}

uint32_t UnionFindDecoder::unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    // Keep the side with more linear-algebra state; re-reduce the other.
    std::size_t wa = clusters_[a].vars.size() + clusters_[a].dets.size();
    std::size_t wb = clusters_[b].vars.size() + clusters_[b].dets.size();
    if (wa < wb || (wa == wb && b < a)) std::swap(a, b);
    parent_[b] = a;
    Cluster& big = clusters_[a];
    Cluster& small = clusters_[b];
    big.dets.insert(big.dets.end(), small.dets.begin(), small.dets.end());
    big.rep = std::min(big.rep, small.rep);
    for (uint32_t v : small.vars) {
        big.vars.push_back(v);
        reduce_column(big, v);
    }
    small = Cluster{};
    big.valid = false;
    return a;
}

uint32_t UnionFindDecoder::absorb_variable(uint32_t root, uint32_t var) {
    // Union first with every cluster already touching the variable's
    // detectors, then attach the remaining free detectors, then reduce the
    // column. Detectors therefore always sit inside the cluster that holds
    // the variable, keeping boundaries on detectors.
    for (uint32_t d : p_.col_rows[var])
        if (det_cluster_[d] >= 0) root = unite(root, static_cast<uint32_t>(det_cluster_[d]));
    Cluster& cl = clusters_[root];
    for (uint32_t d : p_.col_rows[var]) {
        if (det_cluster_[d] < 0) {
            det_cluster_[d] = static_cast<int32_t>(root);
            cl.dets.push_back(d);
            cl.rep = std::min(cl.rep, d);
        }
    }
    var_cluster_[var] = static_cast<int32_t>(root);
    cl.vars.push_back(var);
    reduce_column(cl, var);
    cl.valid = false;
    return root;
}

bool UnionFindDecoder::grow_one(uint32_t root, const gf2::BitVec& syndrome) {
    for (;;) {
        Cluster& cl = clusters_[root];
        if (cl.frontier_head >= cl.frontier.size()) {
            // Next breadth-first ring: variables adjacent to the boundary,
            // in (layer, node) order, which is the column order.
            cl.frontier.clear();
            cl.frontier_head = 0;
            std::vector<uint32_t> dets_now = cl.dets;
            std::sort(dets_now.begin(), dets_now.end());
            for (uint32_t d : dets_now)
                for (uint32_t v : p_.det_rows[d]) {
                    int32_t owner = var_cluster_[v];
                    if (owner < 0 || find(static_cast<uint32_t>(owner)) != root)
                        cl.frontier.push_back(v);
                }
            std::sort(cl.frontier.begin(), cl.frontier.end());
            cl.frontier.erase(std::unique(cl.frontier.begin(), cl.frontier.end()),
                              cl.frontier.end());
            if (cl.frontier.empty()) return false;  // component exhausted
        }
        uint32_t v = cl.frontier[cl.frontier_head++];
        int32_t owner = var_cluster_[v];
        if (owner >= 0) {
            uint32_t other = find(static_cast<uint32_t>(owner));
            if (other == root) continue;  // stale frontier entry
            root = unite(root, other);
        } else {
            root = absorb_variable(root, v);
        }
        clusters_[root].valid = cluster_valid(clusters_[root], syndrome);
        return true;
    }
}

bool UnionFindDecoder::cluster_valid(const Cluster& cl, const gf2::BitVec& syndrome) const {
    gf2::BitVec sigma(p_.n_detectors);
    bool nonzero = false;
    for (uint32_t d : cl.dets)
        if (syndrome.get(d)) {
            sigma.set(d, true);
            nonzero = true;
        }
    if (!nonzero) return true;
    for (uint32_t idx : cl.order) {
        const BasisVec& b = cl.store[idx];
        if (sigma.get(static_cast<std::size_t>(b.pivot))) sigma.xor_with(b.dets);
    }
    return !sigma.any();
}

void UnionFindDecoder::solve_cluster(const Cluster& cl, const gf2::BitVec& syndrome,
                                     gf2::BitVec& e) const {
    gf2::BitVec sigma(p_.n_detectors);
    for (uint32_t d : cl.dets)
        if (syndrome.get(d)) sigma.set(d, true);
    std::vector<uint8_t> used(cl.store.size(), 0);
    for (uint32_t idx : cl.order) {
        const BasisVec& b = cl.store[idx];
        if (sigma.get(static_cast<std::size_t>(b.pivot))) {
            sigma.xor_with(b.dets);
            used[idx] ^= 1;
        }
    }
    if (sigma.any()) throw std::runtime_error("decode: cluster marked valid but unsolvable");
    // Unfold the reduction history into original columns, newest first: each
    // stored vector is its seed column plus older store entries.
    for (std::size_t i = cl.store.size(); i-- > 0;) {
        if (!used[i]) continue;
        e.flip(cl.store[i].seed_var);
        for (uint32_t j : cl.store[i].mix) used[j] ^= 1;
    }
}

gf2::BitVec UnionFindDecoder::decode(const gf2::BitVec& syndrome,
                                     const std::vector<uint32_t>& erasures, std::ostream* debug) {
    if (syndrome.size() != p_.n_detectors)
        throw std::invalid_argument("decode: syndrome length != detector count");

    clusters_.clear();
    parent_.clear();
    std::fill(det_cluster_.begin(), det_cluster_.end(), -1);
    std::fill(var_cluster_.begin(), var_cluster_.end(), -1);

    // Erasure-seeded clusters first.
    for (uint32_t v : erasures) {
        if (v >= p_.n_vars) throw std::invalid_argument("decode: erased column out of range");
        if (var_cluster_[v] >= 0) continue;
        absorb_variable(new_cluster(), v);
    }
    // Non-trivial syndrome bits outside the erasure clusters seed their own.
    for (std::size_t d = 0; d < p_.n_detectors; ++d) {
        if (!syndrome.get(d) || det_cluster_[d] >= 0) continue;
        uint32_t id = new_cluster();
        det_cluster_[d] = static_cast<int32_t>(id);
        clusters_[id].dets.push_back(static_cast<uint32_t>(d));
        clusters_[id].rep = static_cast<uint32_t>(d);
    }

    for (Cluster& cl : clusters_)
        if (cl.alive) cl.valid = cluster_valid(cl, syndrome);

    // Invalid clusters grow node-by-node in breadth-first order, one
    // variable (plus its detectors: the double step) per round, re-validated
    // after every addition so clusters stay as small as the syndrome allows.
    std::size_t round = 0;
    while (true) {
        std::vector<uint32_t> invalid;
        for (uint32_t c = 0; c < clusters_.size(); ++c)
            if (clusters_[c].alive && find(c) == c && !clusters_[c].valid) invalid.push_back(c);
        if (invalid.empty()) break;
        std::sort(invalid.begin(), invalid.end(),
                  [&](uint32_t a, uint32_t b) { return clusters_[a].rep < clusters_[b].rep; });
        if (debug) {
            *debug << "round " << round << ": " << invalid.size() << " invalid cluster(s)\n";
            for (uint32_t c : invalid)
                *debug << "  cluster rep=" << clusters_[c].rep
                       << " dets=" << clusters_[c].dets.size()
                       << " vars=" << clusters_[c].vars.size() << '\n';
        }

        bool grew = false;
        for (uint32_t c : invalid) {
            uint32_t root = find(c);
            if (!clusters_[root].alive || clusters_[root].valid) continue;
            if (grow_one(root)) grew = true;
        }
        if (!grew) throw std::runtime_error("decode: undecodable syndrome (internal bug)");
        ++round;
    }

    gf2::BitVec e(p_.n_vars);
    for (uint32_t c = 0; c < clusters_.size(); ++c)
        if (clusters_[c].alive && find(c) == c) solve_cluster(clusters_[c], syndrome, e);

    // Syndrome consistency is asserted on every decode.
    gf2::BitVec check = p_.syndrome_of(e);
    check.xor_with(syndrome);
    if (check.any()) throw std::runtime_error("decode: correction does not reproduce syndrome");
    if (debug) *debug << "decode: rounds=" << round << " weight=" << e.popcount() << '\n';
    return e;
}

gf2::BitVec logical_flip(const foliation::DecodingProblem& p, const gf2::BitVec& correction,
                         const gf2::BitVec& true_error) {
    gf2::BitVec residual = correction;
    residual.xor_with(true_error);
    if (p.syndrome_of(residual).any())
        throw std::invalid_argument("logical_flip: residual has non-zero syndrome");
    gf2::BitVec flips(p.k);
    for (std::size_t ell = 0; ell < p.k; ++ell)
        if (p.logical_parity(ell, residual)) flips.set(ell, true);
    return flips;
}

std::vector<uint32_t> lost_logicals(const foliation::DecodingProblem& p,
                                    const std::vector<uint32_t>& erasures) {
    std::vector<uint32_t> lost;
    if (erasures.empty()) return lost;

    // Restrict all detector rows to the erased columns and eliminate; a
    // logical is recoverable iff its restriction lies in that row space.
    std::vector<int32_t> col_to_e(p.n_vars, -1);
    for (std::size_t i = 0; i < erasures.size(); ++i)
        col_to_e[erasures[i]] = static_cast<int32_t>(i);

    std::size_t width = erasures.size();
    std::vector<gf2::BitVec> basis;
    std::vector<int> pivots;
    auto reduce = [&](gf2::BitVec v) {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (v.get(static_cast<std::size_t>(pivots[i]))) v.xor_with(basis[i]);
        return v;
    };
    auto restrict_row = [&](const std::vector<uint32_t>& cols) {
        gf2::BitVec v(width);
        for (uint32_t c : cols) {
            int32_t e = col_to_e[c];
            if (e >= 0) v.flip(static_cast<std::size_t>(e));
        }
        return v;
    };
    for (const auto& row : p.det_rows) {
        gf2::BitVec v = reduce(restrict_row(row));
        int piv = v.lowest_set();
        if (piv < 0) continue;
        // Insert sorted by pivot so reduce stays a forward sweep.
        std::size_t pos = 0;
        while (pos < pivots.size() && pivots[pos] < piv) ++pos;
        basis.insert(basis.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
        pivots.insert(pivots.begin() + static_cast<std::ptrdiff_t>(pos), piv);
    }
    for (std::size_t ell = 0; ell < p.k; ++ell) {
        gf2::BitVec v = reduce(restrict_row(p.logical_rows[ell]));
        if (v.any()) lost.push_back(static_cast<uint32_t>(ell));
    }
    return lost;
}

}  // namespace qfl::decoder

#include "qfl/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qfl::oracle {

void Pauli::apply(std::size_t q, bool ax, bool az, uint8_t ph) {
    Pauli single(x.size());
    if (ax) single.x.set(q, true);
    if (az) single.z.set(q, true);
    single.phase = ph;
    mul(single);
}

void Pauli::mul(const Pauli& o) {
    // (i^p X^a Z^b)(i^q X^c Z^d) = i^(p+q) (-1)^(b.c) X^(a^c) Z^(b^d)
    uint8_t cross = o.x.dot(z) ? 2 : 0;
    phase = static_cast<uint8_t>((phase + o.phase + cross) & 3);
    x.xor_with(o.x);
    z.xor_with(o.z);
}

bool Pauli::commutes_with(const Pauli& o) const {
    return !(x.dot(o.z) ^ z.dot(o.x));
}

StabilizerTableau StabilizerTableau::graph_state(const std::vector<std::vector<uint32_t>>& adj) {
    StabilizerTableau t;
    t.n_ = adj.size();
    t.words_ = gf2::words_for(t.n_);
    t.x_.assign(2 * t.n_ * t.words_, 0);
    t.z_.assign(2 * t.n_ * t.words_, 0);
    t.phase_.assign(2 * t.n_, 0);
    for (std::size_t v = 0; v < t.n_; ++v) {
        // Destabilizer Z_v, stabilizer K_v = X_v prod_{w in N(v)} Z_w.
        t.z_[v * t.words_ + (v >> 6)] |= uint64_t(1) << (v & 63);
        std::size_t s = t.n_ + v;
        t.x_[s * t.words_ + (v >> 6)] |= uint64_t(1) << (v & 63);
        for (uint32_t w : adj[v]) t.z_[s * t.words_ + (w >> 6)] |= uint64_t(1) << (w & 63);
    }
    return t;
}

StabilizerTableau StabilizerTableau::ghz_state(std::size_t n) {
    if (n < 2) throw std::invalid_argument("ghz_state: need at least 2 qubits");
    StabilizerTableau t;
    t.n_ = n;
    t.words_ = gf2::words_for(n);
    t.x_.assign(2 * n * t.words_, 0);
    t.z_.assign(2 * n * t.words_, 0);
    t.phase_.assign(2 * n, 0);
    auto set_bit = [&](std::vector<uint64_t>& arr, std::size_t row, std::size_t q) {
        arr[row * t.words_ + (q >> 6)] |= uint64_t(1) << (q & 63);
    };
    // Stabilizers: X...X then Z_{i-1} Z_i; destabilizers Z_0 and X_i..X_{n-1}.
    for (std::size_t q = 0; q < n; ++q) set_bit(t.x_, n, q);
    set_bit(t.z_, 0, 0);
    for (std::size_t i = 1; i < n; ++i) {
        set_bit(t.z_, n + i, i - 1);
        set_bit(t.z_, n + i, i);
        for (std::size_t q = i; q < n; ++q) set_bit(t.x_, i, q);
    }
    return t;
}

bool StabilizerTableau::anticommutes(std::size_t row, const Pauli& p) const {
    uint64_t acc = 0;
    const uint64_t* rx = x_.data() + row * words_;
    const uint64_t* rz = z_.data() + row * words_;
    for (std::size_t w = 0; w < words_; ++w)
        acc ^= (rx[w] & p.z.words()[w]) ^ (rz[w] & p.x.words()[w]);
    return __builtin_parityll(acc);
}

void StabilizerTableau::row_mul(std::size_t dst, std::size_t src) {
    uint64_t* dx = x_.data() + dst * words_;
    uint64_t* dz = z_.data() + dst * words_;
    const uint64_t* sx = x_.data() + src * words_;
    const uint64_t* sz = z_.data() + src * words_;
    uint64_t cross = 0;
    for (std::size_t w = 0; w < words_; ++w) cross ^= dz[w] & sx[w];
    phase_[dst] = static_cast<uint8_t>(
        (phase_[dst] + phase_[src] + (__builtin_parityll(cross) ? 2 : 0)) & 3);
    for (std::size_t w = 0; w < words_; ++w) {
        dx[w] ^= sx[w];
        dz[w] ^= sz[w];
    }
}

Pauli StabilizerTableau::row_pauli(std::size_t row) const {
    Pauli p(n_);
    std::copy(x_.begin() + static_cast<std::ptrdiff_t>(row * words_),
              x_.begin() + static_cast<std::ptrdiff_t>((row + 1) * words_), p.x.words());
    std::copy(z_.begin() + static_cast<std::ptrdiff_t>(row * words_),
              z_.begin() + static_cast<std::ptrdiff_t>((row + 1) * words_), p.z.words());
    p.phase = phase_[row];
    return p;
}

void StabilizerTableau::set_row(std::size_t row, const Pauli& p) {
    std::copy(p.x.words(), p.x.words() + words_, x_.begin() + static_cast<std::ptrdiff_t>(row * words_));
    std::copy(p.z.words(), p.z.words() + words_, z_.begin() + static_cast<std::ptrdiff_t>(row * words_));
    phase_[row] = p.phase;
}

StabilizerTableau::MeasureResult StabilizerTableau::measure(const Pauli& p,
                                                            noise::TrialRng& rng) {
    std::vector<std::size_t> anti_stab;
    for (std::size_t i = 0; i < n_; ++i)
        if (anticommutes(n_ + i, p)) anti_stab.push_back(n_ + i);

    MeasureResult res;
    if (anti_stab.empty()) {
        // Deterministic: the product of stabilizers flagged by anticommuting
        // destabilizers reproduces +-P.
        Pauli acc = Pauli::identity(n_);
        for (std::size_t i = 0; i < n_; ++i)
            if (anticommutes(i, p)) acc.mul(row_pauli(n_ + i));
        if (!(acc.x == p.x) || !(acc.z == p.z))
            throw std::runtime_error("tableau: deterministic measurement failed to decompose");
        uint8_t d = static_cast<uint8_t>((p.phase - acc.phase) & 3);
        if (d & 1) throw std::runtime_error("tableau: non-Hermitian phase mismatch");
        res.deterministic = true;
        res.outcome = (d == 2);
        return res;
    }

    std::size_t pivot = anti_stab.front();
    for (std::size_t r = 0; r < 2 * n_; ++r)
        if (r != pivot && anticommutes(r, p)) row_mul(r, pivot);
    // Old pivot stabilizer becomes the destabilizer of the new generator.
    set_row(pivot - n_, row_pauli(pivot));
    res.outcome = rng.bit();
    Pauli np = p;
    np.phase = static_cast<uint8_t>((np.phase + (res.outcome ? 2 : 0)) & 3);
    set_row(pivot, np);
    return res;
}

bool StabilizerTableau::generators_commute() const {
    for (std::size_t i = 0; i < n_; ++i) {
        Pauli a = row_pauli(n_ + i);
        for (std::size_t j = i + 1; j < n_; ++j)
            if (!a.commutes_with(row_pauli(n_ + j))) return false;
    }
    return true;
}

ResourceUnion build_resource_union(const foliation::FoliatedLattice& lat) {
    ResourceUnion ru;
    ru.lattice = &lat;
    ru.n_spins = lat.n_spins;
    ru.n_qubits = lat.n_spins + 2 * lat.fusions.size();
    if (ru.n_qubits > 20000)
        throw std::runtime_error("build_resource_union: instance too large for tableau oracle");

    // Edges mod 2: a T = 1 periodic chain wraps onto itself and cancels.
    std::vector<std::vector<uint32_t>> adj(ru.n_qubits);
    auto toggle_edge = [&](uint32_t a, uint32_t b) {
        auto tog = [](std::vector<uint32_t>& list, uint32_t v) {
            auto it = std::lower_bound(list.begin(), list.end(), v);
            if (it != list.end() && *it == v)
                list.erase(it);
            else
                list.insert(it, v);
        };
        tog(adj[a], b);
        tog(adj[b], a);
    };
    uint32_t layers = static_cast<uint32_t>(lat.layers());
    for (uint32_t j = 0; j < lat.n; ++j)
        for (uint32_t layer = 0; layer < layers; ++layer) {
            if (layer + 1 == layers && !lat.periodic_time) break;
            toggle_edge(lat.chain_spin(j, layer), lat.chain_spin(j, (layer + 1) % layers));
        }
    for (const foliation::Fusion& f : lat.fusions) {
        toggle_edge(f.data_spin, ru.data_photon(f.id));
        toggle_edge(f.ancilla_spin, ru.ancilla_photon(f.id));
    }
    ru.adjacency = std::move(adj);
    return ru;
}

MeasurementPattern build_pattern(const ResourceUnion& ru,
                                 const std::vector<ScriptedEvent>& events) {
    const foliation::FoliatedLattice& lat = *ru.lattice;
    MeasurementPattern pat;
    pat.dead_spin.assign(lat.n_spins, 0);
    pat.fusion_state.assign(lat.fusions.size(), -1);
    pat.fusion_op_anc.assign(lat.fusions.size(), -1);
    pat.fusion_op_data.assign(lat.fusions.size(), -1);
    pat.spin_op.assign(lat.n_spins, -1);

    for (const ScriptedEvent& ev : events) {
        if (ev.fusion >= lat.fusions.size())
            throw std::invalid_argument("scripted event: fusion id out of range");
        pat.fusion_state[ev.fusion] = static_cast<int8_t>(ev.kind);
        const foliation::Fusion& f = lat.fusions[ev.fusion];
        switch (ev.kind) {
            case EventKind::FailMeasureAncilla:
                pat.dead_spin[f.ancilla_spin] = 1;
                break;
            case EventKind::FailMeasureData:
                pat.dead_spin[f.data_spin] = 1;
                break;
            case EventKind::Loss:
                pat.dead_spin[f.data_spin] = 1;
                pat.dead_spin[f.ancilla_spin] = 1;
                break;
            case EventKind::Skip:
                break;
        }
    }

    std::size_t n = ru.n_qubits;
    for (const foliation::Fusion& f : lat.fusions) {
        uint32_t dp = ru.data_photon(f.id);
        uint32_t ap = ru.ancilla_photon(f.id);
        if (pat.fusion_state[f.id] < 0) {
            Pauli anc(n);  // X on data photon, Y on ancilla photon
            anc.mul_x(dp);
            anc.mul_y(ap);
            pat.fusion_op_anc[f.id] = static_cast<int32_t>(pat.ops.size());
            pat.ops.push_back({OpKind::FusionParityAncilla, f.id, std::move(anc), true});
            Pauli dat(n);
            dat.mul_y(dp);
            dat.mul_x(ap);
            pat.fusion_op_data[f.id] = static_cast<int32_t>(pat.ops.size());
            pat.ops.push_back({OpKind::FusionParityData, f.id, std::move(dat), true});
        } else {
            bool lost = pat.fusion_state[f.id] == static_cast<int8_t>(EventKind::Loss);
            for (uint32_t photon : {dp, ap}) {
                Pauli pz(n);
                pz.mul_z(photon);
                pat.ops.push_back({OpKind::PhotonZ, photon, std::move(pz), !lost});
            }
        }
    }
    // Virtual spin measurements: each successful fusion leaves one S gate on
    // each adjacent spin, so the effective basis is S^deg X S^-deg.
    for (uint32_t s = 0; s < lat.n_spins; ++s) {
        pat.spin_op[s] = static_cast<int32_t>(pat.ops.size());
        if (pat.dead_spin[s]) {
            Pauli pz(n);
            pz.mul_z(s);
            pat.ops.push_back({OpKind::SpinZ, s, std::move(pz), true});
            continue;
        }
        std::size_t deg = 0;
        for (uint32_t f : lat.spin_fusions[s])
            if (pat.fusion_state[f] < 0) ++deg;
        Pauli op(n);
        switch (deg & 3) {
            case 0: op.mul_x(s); break;
            case 1: op.mul_y(s); break;
            case 2: op.mul_x(s); op.phase = 2; break;
            case 3: op.mul_y(s); op.phase = static_cast<uint8_t>((op.phase + 2) & 3); break;
        }
        pat.ops.push_back({OpKind::VirtualSpin, s, std::move(op), true});
    }
    return pat;
}

OutcomeRecord apply_measurement_pattern(StabilizerTableau& t, const MeasurementPattern& pat,
                                        noise::TrialRng& rng) {
    OutcomeRecord rec;
    rec.outcome.resize(pat.ops.size());
    rec.deterministic.resize(pat.ops.size());
    // Pattern ops commute pairwise, so the execution order is irrelevant.
    for (std::size_t i = 0; i < pat.ops.size(); ++i) {
        auto res = t.measure(pat.ops[i].op, rng);
        rec.outcome[i] = res.outcome;
        rec.deterministic[i] = res.deterministic;
    }
    return rec;
}

namespace {

struct Membership {
    bool member = false;
    int sign = 1;
    std::vector<uint32_t> residual;  // known Z outcomes entering the parity
};

// A product of measured operators is deterministic iff it equals a product
// of graph stabilizers times Z's on qubits whose Z outcome is known. For a
// graph state that reduces to: X-support G forces the generator set, and the
// leftover Z-support Gamma(G) xor Z(P) must sit on known-Z qubits.
Membership check_membership(const ResourceUnion& ru, const Pauli& p,
                            const std::vector<uint8_t>& known_z) {
    Membership out;
    std::vector<uint32_t> g = p.x.ones();
    gf2::BitVec gamma(ru.n_qubits);
    for (uint32_t v : g)
        for (uint32_t w : ru.adjacency[v]) gamma.flip(w);
    gamma.xor_with(p.z);
    for (uint32_t s : gamma.ones()) {
        if (s < known_z.size() && known_z[s]) {
            out.residual.push_back(s);
        } else {
            return out;  // needs an unmeasured or unknown Z outcome
        }
    }
    // Sign: compare phases of P with prod_{v in G} K_v times the residual Zs.
    Pauli q = Pauli::identity(ru.n_qubits);
    for (uint32_t v : g) {
        Pauli k(ru.n_qubits);
        k.mul_x(v);
        for (uint32_t w : ru.adjacency[v]) k.mul_z(w);
        q.mul(k);
    }
    for (uint32_t s : out.residual) q.mul_z(s);
    if (!(q.x == p.x) || !(q.z == p.z))
        throw std::runtime_error("oracle: membership bookkeeping is inconsistent");
    uint8_t d = static_cast<uint8_t>((p.phase - q.phase) & 3);
    if (d & 1) throw std::runtime_error("oracle: odd phase in membership check");
    out.member = true;
    out.sign = (d == 2) ? -1 : 1;
    return out;
}

// Index of the pattern op carried by a decoding-problem column, or -1 when
// the outcome does not exist under the pattern's events (evented fusion) or
// the spin is Z-measured.
int32_t column_op(const foliation::FoliatedLattice& lat, const foliation::DecodingProblem& p,
                  const MeasurementPattern& pat, uint32_t col) {
    int64_t f = p.column_fusion[col];
    if (f >= 0) {
        if (pat.fusion_state[static_cast<std::size_t>(f)] >= 0) return -1;
        bool ancilla_side = lat.fusions[static_cast<std::size_t>(f)].type == p.side;
        return ancilla_side ? pat.fusion_op_anc[static_cast<std::size_t>(f)]
                            : pat.fusion_op_data[static_cast<std::size_t>(f)];
    }
    uint32_t spin = static_cast<uint32_t>(p.column_spin[col]);
    if (pat.dead_spin[spin]) return -1;
    return pat.spin_op[spin];
}

Pauli combination_product(const MeasurementPattern& pat, const foliation::FoliatedLattice& lat,
                          const foliation::DecodingProblem& p, const std::vector<uint32_t>& cols,
                          std::size_t n_qubits) {
    Pauli prod = Pauli::identity(n_qubits);
    for (uint32_t c : cols) {
        int32_t idx = column_op(lat, p, pat, c);
        if (idx >= 0) prod.mul(pat.ops[static_cast<std::size_t>(idx)].op);
    }
    return prod;
}

bool sampled_parity(const MeasurementPattern& pat, const foliation::FoliatedLattice& lat,
                    const foliation::DecodingProblem& p, const OutcomeRecord& rec,
                    const std::vector<uint32_t>& cols, const std::vector<uint32_t>& residual,
                    const std::vector<int32_t>& qubit_z_op) {
    bool parity = false;
    for (uint32_t c : cols) {
        int32_t idx = column_op(lat, p, pat, c);
        if (idx >= 0) parity ^= rec.outcome[static_cast<std::size_t>(idx)];
    }
    for (uint32_t q : residual) parity ^= rec.outcome[static_cast<std::size_t>(qubit_z_op[q])];
    return parity;
}

std::vector<int32_t> map_z_ops(const MeasurementPattern& pat, std::size_t n_qubits) {
    std::vector<int32_t> qubit_z_op(n_qubits, -1);
    for (std::size_t i = 0; i < pat.ops.size(); ++i)
        if (pat.ops[i].kind == OpKind::PhotonZ || pat.ops[i].kind == OpKind::SpinZ)
            qubit_z_op[pat.ops[i].ref] = static_cast<int32_t>(i);
    return qubit_z_op;
}

}  // namespace

Report verify_incidence(const foliation::FoliatedLattice& lat,
                        const foliation::DecodingProblem& p) {
    Report rep;
    ResourceUnion ru = build_resource_union(lat);
    MeasurementPattern pat = build_pattern(ru, {});
    std::vector<uint8_t> no_knowns(ru.n_qubits, 0);

    std::size_t total_rows = p.det_rows.size() + p.logical_rows.size();
    std::vector<int> signs(total_rows, 1);
    auto row_cols = [&](std::size_t r) -> const std::vector<uint32_t>& {
        return r < p.det_rows.size() ? p.det_rows[r] : p.logical_rows[r - p.det_rows.size()];
    };
    for (std::size_t r = 0; r < total_rows; ++r) {
        Pauli prod = combination_product(pat, lat, p, row_cols(r), ru.n_qubits);
        Membership m = check_membership(ru, prod, no_knowns);
        ++rep.checks;
        if (!m.member) {
            rep.fail("row " + std::to_string(r) + " is not a deterministic outcome product");
            continue;
        }
        signs[r] = m.sign;
        if (m.sign < 0) ++rep.negative_sign_rows;
    }

    // Column/row adjacency integrity (single-flip incidence).
    std::vector<std::vector<uint32_t>> recomputed(p.n_vars);
    for (std::size_t r = 0; r < p.det_rows.size(); ++r)
        for (uint32_t c : p.det_rows[r]) recomputed[c].push_back(static_cast<uint32_t>(r));
    for (std::size_t c = 0; c < p.n_vars; ++c) {
        ++rep.checks;
        if (recomputed[c] != p.col_rows[c]) {
            int64_t f = p.column_fusion[c];
            rep.fail("column " + std::to_string(c) + (f >= 0 ? " (fusion " + std::to_string(f) + ")" : "") +
                     " adjacency disagrees with detector rows");
        }
    }

    // Sampled runs must sit at the predicted resting parity for every row.
    if (rep.pass) {
        for (uint64_t seed : {1ULL, 2ULL}) {
            StabilizerTableau t = StabilizerTableau::graph_state(ru.adjacency);
            noise::TrialRng rng(0xACE5, 0, seed);
            OutcomeRecord rec = apply_measurement_pattern(t, pat, rng);
            std::vector<int32_t> zmap = map_z_ops(pat, ru.n_qubits);
            for (std::size_t r = 0; r < total_rows; ++r) {
                bool parity = sampled_parity(pat, lat, p, rec, row_cols(r), {}, zmap);
                ++rep.checks;
                if (parity != (signs[r] < 0))
                    rep.fail("row " + std::to_string(r) + " sampled parity differs from predicted sign");
            }
        }
    }
    return rep;
}

Report verify_event_semantics(const foliation::FoliatedLattice& lat,
                              const foliation::DecodingProblem& p,
                              const std::vector<ScriptedEvent>& events) {
    Report rep;
    ResourceUnion ru = build_resource_union(lat);
    MeasurementPattern pat = build_pattern(ru, events);

    std::vector<uint8_t> known_z(ru.n_qubits, 0);
    for (const PatternOp& op : pat.ops)
        if ((op.kind == OpKind::PhotonZ || op.kind == OpKind::SpinZ) && op.known)
            known_z[op.ref] = 1;

    // Erased-virtual-column model: exactly the Z-measured spins' columns die.
    // A skipped fusion with both endpoints alive is a missing bond without a
    // repair measurement; its bit column dies too. The sampler never emits
    // such skips (it only omits fusions next to a measured spin), so under
    // production noise the erasure set stays purely virtual.
    std::vector<uint8_t> col_erased(p.n_vars, 0);
    for (uint32_t s = 0; s < lat.n_spins; ++s)
        if (pat.dead_spin[s]) col_erased[p.spin_column[s]] = 1;
    for (const foliation::Fusion& f : lat.fusions)
        if (pat.fusion_state[f.id] == static_cast<int8_t>(EventKind::Skip) &&
            !pat.dead_spin[f.data_spin] && !pat.dead_spin[f.ancilla_spin])
            col_erased[p.fusion_column[f.id]] = 1;
    auto combo_has_erased = [&](const std::vector<uint32_t>& cols) {
        for (uint32_t c : cols)
            if (col_erased[c]) return true;
        return false;
    };

    struct Combo {
        std::vector<uint32_t> cols;
        std::string label;
    };
    std::vector<Combo> combos;
    for (std::size_t r = 0; r < p.det_rows.size(); ++r)
        combos.push_back({p.det_rows[r], "detector " + std::to_string(r)});
    for (std::size_t ell = 0; ell < p.logical_rows.size(); ++ell)
        combos.push_back({p.logical_rows[ell], "logical " + std::to_string(ell)});
    // Pairwise supercells across every erased column.
    for (uint32_t c = 0; c < p.n_vars; ++c) {
        if (!col_erased[c]) continue;
        const auto& rows = p.col_rows[c];
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = a + 1; b < rows.size(); ++b) {
                std::vector<uint32_t> merged;
                std::set_symmetric_difference(p.det_rows[rows[a]].begin(), p.det_rows[rows[a]].end(),
                                              p.det_rows[rows[b]].begin(), p.det_rows[rows[b]].end(),
                                              std::back_inserter(merged));
                combos.push_back({std::move(merged), "supercell " + std::to_string(rows[a]) + "+" +
                                                         std::to_string(rows[b])});
            }
    }

    std::vector<Membership> memberships(combos.size());
    for (std::size_t i = 0; i < combos.size(); ++i) {
        bool predicted_deterministic = !combo_has_erased(combos[i].cols);
        Pauli prod = combination_product(pat, lat, p, combos[i].cols, ru.n_qubits);
        memberships[i] = check_membership(ru, prod, known_z);
        ++rep.checks;
        if (memberships[i].member != predicted_deterministic)
            rep.fail(combos[i].label + ": oracle says " +
                     (memberships[i].member ? "deterministic" : "random") + ", model predicts " +
                     (predicted_deterministic ? "deterministic" : "random"));
    }

    if (rep.pass) {
        std::vector<int32_t> zmap = map_z_ops(pat, ru.n_qubits);
        for (uint64_t seed : {3ULL, 4ULL}) {
            StabilizerTableau t = StabilizerTableau::graph_state(ru.adjacency);
            noise::TrialRng rng(0xACE5, 1, seed);
            OutcomeRecord rec = apply_measurement_pattern(t, pat, rng);
            for (std::size_t i = 0; i < combos.size(); ++i) {
                if (!memberships[i].member) continue;
                bool parity = sampled_parity(pat, lat, p, rec, combos[i].cols,
                                             memberships[i].residual, zmap);
                ++rep.checks;
                if (parity != (memberships[i].sign < 0))
                    rep.fail(combos[i].label + ": sampled parity differs from predicted sign");
            }
        }
    }
    return rep;
}

}  // namespace qfl::oracle

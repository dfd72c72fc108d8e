#include "qfl/foliation.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace qfl::foliation {

uint32_t FoliatedLattice::spin_layer(uint32_t spin) const {
    if (is_chain_spin(spin)) return spin / static_cast<uint32_t>(n);
    auto it = std::upper_bound(ancilla_layer_offset.begin(), ancilla_layer_offset.end(), spin);
    return static_cast<uint32_t>(it - ancilla_layer_offset.begin()) - 1;
}

uint32_t FoliatedLattice::spin_owner_index(uint32_t spin) const {
    if (is_chain_spin(spin)) return spin % static_cast<uint32_t>(n);
    return spin - ancilla_layer_offset[spin_layer(spin)];
}

namespace {

std::vector<std::vector<uint32_t>> row_supports(const gf2::Gf2Matrix& m) {
    std::vector<std::vector<uint32_t>> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c)) out[r].push_back(static_cast<uint32_t>(c));
    return out;
}

std::vector<std::vector<uint32_t>> col_supports(const gf2::Gf2Matrix& m) {
    std::vector<std::vector<uint32_t>> out(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c)) out[c].push_back(static_cast<uint32_t>(r));
    return out;
}

}  // namespace

FoliatedLattice foliate(const codes::CssCode& code, std::size_t T, bool periodic_time) {
    if (T < 1) throw std::invalid_argument("foliate: T must be >= 1");
    FoliatedLattice lat;
    lat.code = code;
    lat.logicals = codes::logical_operators(code);
    lat.T = T;
    lat.periodic_time = periodic_time;
    lat.n = code.n;
    lat.m_x = code.h_x.rows();
    lat.m_z = code.h_z.rows();
    lat.x_check_support = row_supports(code.h_x);
    lat.z_check_support = row_supports(code.h_z);
    lat.x_qubit_checks = col_supports(code.h_x);
    lat.z_qubit_checks = col_supports(code.h_z);

    lat.n_chain_spins = lat.n * 2 * T;
    lat.ancilla_layer_offset.resize(2 * T);
    uint32_t next = static_cast<uint32_t>(lat.n_chain_spins);
    for (uint32_t layer = 0; layer < 2 * T; ++layer) {
        lat.ancilla_layer_offset[layer] = next;
        next += static_cast<uint32_t>(FoliatedLattice::layer_is_primal(layer) ? lat.m_x : lat.m_z);
    }
    lat.n_spins = next;
    lat.spin_fusions.resize(lat.n_spins);

    // Fusion list in (layer, check index, data index) order; the modified RUS
    // strategy relies on this being the sequential execution order.
    for (uint32_t layer = 0; layer < 2 * T; ++layer) {
        bool primal = FoliatedLattice::layer_is_primal(layer);
        const auto& supports = primal ? lat.x_check_support : lat.z_check_support;
        for (uint32_t i = 0; i < supports.size(); ++i) {
            for (uint32_t j : supports[i]) {
                Fusion f;
                f.id = static_cast<uint32_t>(lat.fusions.size());
                f.data_qubit = j;
                f.check_index = i;
                f.type = primal ? CheckType::X : CheckType::Z;
                f.time = layer / 2;
                f.layer = layer;
                f.data_spin = lat.chain_spin(j, layer);
                f.ancilla_spin = lat.ancilla_spin(i, layer);
                lat.spin_fusions[f.data_spin].push_back(f.id);
                lat.spin_fusions[f.ancilla_spin].push_back(f.id);
                lat.fusions.push_back(f);
            }
        }
    }
    return lat;
}

namespace {

// XOR-accumulating set builder; duplicate insertions cancel, which keeps the
// T = 1 wrap-around (where a cell meets the same layer twice) correct.
class ParitySet {
public:
    void toggle(uint32_t v) {
        auto it = std::lower_bound(items_.begin(), items_.end(), v);
        if (it != items_.end() && *it == v)
            items_.erase(it);
        else
            items_.insert(it, v);
    }
    std::vector<uint32_t> take() { return std::move(items_); }

private:
    std::vector<uint32_t> items_;
};

// The three layers a cell of the given side spans, starting at round t.
struct CellLayers {
    uint32_t first, mid, last;
};

CellLayers cell_layers(const FoliatedLattice& lat, CheckType side, uint32_t t) {
    uint32_t L = static_cast<uint32_t>(lat.layers());
    uint32_t first = (side == CheckType::X) ? 2 * t + 1 : 2 * t;
    return {first % L, (first + 1) % L, (first + 2) % L};
}

}  // namespace

std::vector<DetectorCell> detector_cells(const FoliatedLattice& lat) {
    std::vector<DetectorCell> cells;
    for (CheckType side : {CheckType::X, CheckType::Z}) {
        std::size_t checks = (side == CheckType::X) ? lat.m_x : lat.m_z;
        const auto& supports =
            (side == CheckType::X) ? lat.x_check_support : lat.z_check_support;
        for (uint32_t t = 0; t < lat.T; ++t) {
            CellLayers ly = cell_layers(lat, side, t);
            for (uint32_t i = 0; i < checks; ++i) {
                DetectorCell cell;
                cell.check_index = i;
                cell.time = t;
                cell.type = side;
                ParitySet support;
                support.toggle(lat.ancilla_spin(i, ly.first));
                support.toggle(lat.ancilla_spin(i, ly.last));
                for (uint32_t j : supports[i]) support.toggle(lat.chain_spin(j, ly.mid));
                cell.support = support.take();
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

DecodingProblem build_decoding_problem(const FoliatedLattice& lat, CheckType side) {
    if (!lat.periodic_time)
        throw std::runtime_error(
            "build_decoding_problem: open time boundaries are not supported");

    DecodingProblem p;
    p.side = side;
    p.k = lat.code.k;

    // Columns, layer-major: each layer's fusion bits first, then its chain
    // nodes, then its ancilla centers.
    p.fusion_column.assign(lat.fusions.size(), 0);
    p.spin_column.assign(lat.n_spins, 0);
    uint32_t col = 0;
    auto add_col = [&](VarKind kind, int64_t fusion, int64_t spin) {
        p.var_kinds.push_back(kind);
        p.column_fusion.push_back(fusion);
        p.column_spin.push_back(spin);
        return col++;
    };
    std::size_t fusion_cursor = 0;
    for (uint32_t layer = 0; layer < lat.layers(); ++layer) {
        while (fusion_cursor < lat.fusions.size() && lat.fusions[fusion_cursor].layer == layer) {
            p.fusion_column[fusion_cursor] =
                add_col(VarKind::FusionBit, static_cast<int64_t>(fusion_cursor), -1);
            ++fusion_cursor;
        }
        for (uint32_t j = 0; j < lat.n; ++j) {
            uint32_t s = lat.chain_spin(j, layer);
            p.spin_column[s] = add_col(VarKind::VirtualChain, -1, s);
        }
        std::size_t checks = FoliatedLattice::layer_is_primal(layer) ? lat.m_x : lat.m_z;
        for (uint32_t i = 0; i < checks; ++i) {
            uint32_t s = lat.ancilla_spin(i, layer);
            p.spin_column[s] = add_col(VarKind::VirtualAncilla, -1, s);
        }
    }
    p.n_vars = col;

    // A detector's parity is the product of the virtual outcomes of its cell
    // spins and, per spin, the side-relevant bit of every incident fusion.
    std::size_t checks = (side == CheckType::X) ? lat.m_x : lat.m_z;
    const auto& supports = (side == CheckType::X) ? lat.x_check_support : lat.z_check_support;
    p.n_detectors = checks * lat.T;
    p.det_rows.resize(p.n_detectors);
    auto cell_row = [&](uint32_t i, uint32_t t) {
        CellLayers ly = cell_layers(lat, side, t);
        ParitySet row;
        auto add_spin = [&](uint32_t spin) {
            row.toggle(p.spin_column[spin]);
            for (uint32_t f : lat.spin_fusions[spin]) row.toggle(p.fusion_column[f]);
        };
        add_spin(lat.ancilla_spin(i, ly.first));
        add_spin(lat.ancilla_spin(i, ly.last));
        for (uint32_t j : supports[i]) add_spin(lat.chain_spin(j, ly.mid));
        return row.take();
    };
    for (uint32_t t = 0; t < lat.T; ++t)
        for (uint32_t i = 0; i < checks; ++i)
            p.det_rows[t * checks + i] = cell_row(i, t);

    // Correlation surfaces: one base-logical copy per mid-type layer.
    const gf2::Gf2Matrix& base =
        (side == CheckType::X) ? lat.logicals.x_logicals
                               : codes::z_logical_operators(lat.code).x_logicals;
    uint32_t mid_parity = (side == CheckType::X) ? 0 : 1;  // dual layers carry X surfaces
    p.logical_rows.resize(p.k);
    for (std::size_t ell = 0; ell < p.k; ++ell) {
        ParitySet row;
        for (uint32_t layer = mid_parity; layer < lat.layers(); layer += 2) {
            for (std::size_t j = 0; j < lat.n; ++j) {
                if (!base.get(ell, j)) continue;
                uint32_t spin = lat.chain_spin(static_cast<uint32_t>(j), layer);
                row.toggle(p.spin_column[spin]);
                for (uint32_t f : lat.spin_fusions[spin]) row.toggle(p.fusion_column[f]);
            }
        }
        p.logical_rows[ell] = row.take();
    }

    p.col_rows.resize(p.n_vars);
    for (std::size_t r = 0; r < p.det_rows.size(); ++r)
        for (uint32_t c : p.det_rows[r]) p.col_rows[c].push_back(static_cast<uint32_t>(r));

    // A qubit outside every check of either type leaves fusion-bit columns
    // that no detector can see. (T = 1 also cancels the primal-type bits out
    // of their two coinciding cells; that degenerate case is allowed.)
    for (std::size_t j = 0; j < lat.n; ++j)
        if (lat.x_qubit_checks[j].empty() || lat.z_qubit_checks[j].empty())
            throw std::runtime_error(
                "build_decoding_problem: qubit " + std::to_string(j) +
                " is missing from every " +
                (lat.x_qubit_checks[j].empty() ? std::string("X") : std::string("Z")) +
                " check; its fusion bits would sit outside every detector");
    return p;
}

gf2::BitVec DecodingProblem::syndrome_of(const gf2::BitVec& error) const {
    gf2::BitVec sigma(n_detectors);
    for (uint32_t c : error.ones())
        for (uint32_t r : col_rows[c]) sigma.flip(r);
    return sigma;
}

bool DecodingProblem::logical_parity(std::size_t ell, const gf2::BitVec& v) const {
    bool parity = false;
    for (uint32_t c : logical_rows[ell]) parity ^= v.get(c);
    return parity;
}

InventoryReport resource_inventory(const FoliatedLattice& lat) {
    InventoryReport rep;
    rep.chains = lat.n;
    rep.chain_length = 2 * lat.T;
    rep.fusions = lat.fusions.size();
    rep.fusion_photons = 2 * lat.fusions.size();
    for (uint32_t spin = 0; spin < lat.n_spins; ++spin) {
        std::size_t deg = lat.spin_fusions[spin].size();
        if (lat.is_chain_spin(spin))
            ++rep.leaves_per_node[deg];
        else {
            ++rep.ghz_states;
            ++rep.ghz_size[deg];
        }
    }
    return rep;
}

void dump_lattice(const FoliatedLattice& lat, const DecodingProblem& p, std::ostream& out) {
    out << "lattice code=" << lat.code.name << " n=" << lat.n << " T=" << lat.T
        << " periodic=" << (lat.periodic_time ? 1 : 0) << " spins=" << lat.n_spins
        << " fusions=" << lat.fusions.size() << '\n';
    out << "spins\n";
    for (uint32_t s = 0; s < lat.n_spins; ++s)
        out << s << ' ' << (lat.is_chain_spin(s) ? "chain" : "ancilla") << " layer="
            << lat.spin_layer(s) << " index=" << lat.spin_owner_index(s) << '\n';
    out << "fusions\n";
    for (const Fusion& f : lat.fusions)
        out << f.id << ' ' << (f.type == CheckType::X ? 'X' : 'Z') << " t=" << f.time
            << " layer=" << f.layer << " data=" << f.data_spin << " ancilla=" << f.ancilla_spin
            << '\n';
    out << "detector_rows side=" << (p.side == CheckType::X ? 'X' : 'Z') << '\n';
    for (std::size_t r = 0; r < p.det_rows.size(); ++r) {
        out << r << ':';
        for (uint32_t c : p.det_rows[r]) out << ' ' << c;
        out << '\n';
    }
    out << "logical_rows\n";
    for (std::size_t ell = 0; ell < p.logical_rows.size(); ++ell) {
        out << ell << ':';
        for (uint32_t c : p.logical_rows[ell]) out << ' ' << c;
        out << '\n';
    }
}

}  // namespace qfl::foliation

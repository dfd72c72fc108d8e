#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "qfl/foliation.hpp"

using namespace qfl;
using foliation::CheckType;

namespace {

codes::CssCode bb72() { return codes::build_bb_code(codes::bb_presets().at("bb72").spec, "bb72"); }

}  // namespace

TEST_CASE("bb72 T=6: chains, fusions per layer, totals") {
    foliation::FoliatedLattice lat = foliation::foliate(bb72(), 6);
    CHECK(lat.n_chain_spins == 72 * 12);
    CHECK(lat.fusions.size() == 2592);  // 72 * 3 per layer * 12 layers
    std::map<uint32_t, std::size_t> per_layer;
    for (const auto& f : lat.fusions) ++per_layer[f.layer];
    for (auto [layer, count] : per_layer) {
        CAPTURE(layer);
        CHECK(count == 216);
    }
    // Fusion count conservation: chain-side leaves match ancilla-side leaves
    // within every layer.
    for (uint32_t layer = 0; layer < 12; ++layer) {
        std::size_t chain_leaves = 0, anc_leaves = 0;
        for (uint32_t j = 0; j < lat.n; ++j)
            chain_leaves += lat.spin_fusions[lat.chain_spin(j, layer)].size();
        std::size_t checks = foliation::FoliatedLattice::layer_is_primal(layer) ? lat.m_x : lat.m_z;
        for (uint32_t i = 0; i < checks; ++i)
            anc_leaves += lat.spin_fusions[lat.ancilla_spin(i, layer)].size();
        CHECK(chain_leaves == anc_leaves);
    }
}

TEST_CASE("toric L=3 T=3: 36 fusions per primal layer") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(3), 3);
    std::map<uint32_t, std::size_t> per_layer;
    for (const auto& f : lat.fusions) ++per_layer[f.layer];
    for (uint32_t layer = 1; layer < 6; layer += 2) CHECK(per_layer[layer] == 36);
}

TEST_CASE("T=1 gives exactly one dual and one primal layer") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(2), 1);
    CHECK(lat.layers() == 2);
    std::map<uint32_t, std::size_t> per_layer;
    for (const auto& f : lat.fusions) ++per_layer[f.layer];
    CHECK(per_layer.size() == 2);
    CHECK(lat.fusions[0].type == CheckType::Z);
    CHECK(lat.fusions.back().type == CheckType::X);
}

TEST_CASE("detector cells: counts, support sizes, periodic wrap") {
    foliation::FoliatedLattice lat = foliation::foliate(bb72(), 6);
    auto cells = foliation::detector_cells(lat);
    std::size_t x_cells = 0;
    for (const auto& cell : cells) {
        if (cell.type != CheckType::X) continue;
        ++x_cells;
        CHECK(cell.support.size() == 8);  // 1 + 6 + 1
    }
    CHECK(x_cells == 36 * 6);

    // The final round's cell wraps onto the first layers.
    bool found_wrap = false;
    for (const auto& cell : cells) {
        if (cell.type != CheckType::X || cell.time != 5) continue;
        for (uint32_t s : cell.support)
            if (lat.spin_layer(s) <= 1) found_wrap = true;
    }
    CHECK(found_wrap);

    foliation::FoliatedLattice toric = foliation::foliate(codes::build_toric_code(3), 3);
    for (const auto& cell : foliation::detector_cells(toric))
        CHECK(cell.support.size() == 6);  // 1 + 4 + 1
}

TEST_CASE("decoding problem: shape and column coverage") {
    foliation::FoliatedLattice lat = foliation::foliate(bb72(), 6);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    CHECK(p.n_detectors == 36 * 6);
    CHECK(p.det_rows.size() == p.n_detectors);
    CHECK(p.k == 12);
    CHECK(p.n_vars == lat.fusions.size() + lat.n_spins);

    for (std::size_t c = 0; c < p.n_vars; ++c) {
        if (p.var_kinds[c] != foliation::VarKind::FusionBit) continue;
        const auto& f = lat.fusions[static_cast<std::size_t>(p.column_fusion[c])];
        // X fusions sit in the two cells of their ancilla, Z fusions in the
        // cells of their chain node (one per X check on the qubit).
        if (f.type == CheckType::X)
            CHECK(p.col_rows[c].size() == 2);
        else
            CHECK(p.col_rows[c].size() == 3);
    }
}

TEST_CASE("logical rows live on dual layers, one base copy per round") {
    foliation::FoliatedLattice lat = foliation::foliate(bb72(), 6);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    const gf2::Gf2Matrix& base = lat.logicals.x_logicals;
    for (std::size_t ell = 0; ell < p.k; ++ell) {
        std::map<uint32_t, std::vector<uint32_t>> virtual_by_layer;
        for (uint32_t c : p.logical_rows[ell]) {
            if (p.var_kinds[c] == foliation::VarKind::FusionBit) {
                const auto& f = lat.fusions[static_cast<std::size_t>(p.column_fusion[c])];
                CHECK(f.type == CheckType::Z);  // dual-layer fusions only
            } else {
                uint32_t spin = static_cast<uint32_t>(p.column_spin[c]);
                CHECK(lat.is_chain_spin(spin));
                uint32_t layer = lat.spin_layer(spin);
                CHECK((layer % 2) == 0);
                virtual_by_layer[layer].push_back(lat.spin_owner_index(spin));
            }
        }
        CHECK(virtual_by_layer.size() == lat.T);
        std::size_t expect = 0;
        for (std::size_t j = 0; j < lat.n; ++j)
            if (base.get(ell, j)) ++expect;
        for (auto& [layer, qubits] : virtual_by_layer) CHECK(qubits.size() == expect);
    }
}

TEST_CASE("syndrome: zero error and single flips") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(3), 3);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    gf2::BitVec zero(p.n_vars);
    CHECK_FALSE(p.syndrome_of(zero).any());

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        uint32_t c = static_cast<uint32_t>(rng() % p.n_vars);
        gf2::BitVec e(p.n_vars);
        e.set(c, true);
        gf2::BitVec sigma = p.syndrome_of(e);
        CHECK(sigma.popcount() == p.col_rows[c].size());
        for (uint32_t r : p.col_rows[c]) CHECK(sigma.get(r));
    }
}

TEST_CASE("cyclic time shift permutes syndromes consistently") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(2), 3);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    uint32_t L2 = static_cast<uint32_t>(lat.layers());

    // Column permutation: everything moves forward one round (two layers).
    std::map<std::tuple<uint32_t, uint32_t, uint32_t>, uint32_t> fusion_at;
    for (const auto& f : lat.fusions) fusion_at[{f.layer, f.check_index, f.data_qubit}] = f.id;
    std::vector<uint32_t> col_perm(p.n_vars);
    for (uint32_t c = 0; c < p.n_vars; ++c) {
        if (p.var_kinds[c] == foliation::VarKind::FusionBit) {
            const auto& f = lat.fusions[static_cast<std::size_t>(p.column_fusion[c])];
            uint32_t shifted = fusion_at.at({(f.layer + 2) % L2, f.check_index, f.data_qubit});
            col_perm[c] = p.fusion_column[shifted];
        } else {
            uint32_t spin = static_cast<uint32_t>(p.column_spin[c]);
            uint32_t layer = lat.spin_layer(spin), idx = lat.spin_owner_index(spin);
            uint32_t shifted = lat.is_chain_spin(spin)
                                   ? lat.chain_spin(idx, (layer + 2) % L2)
                                   : lat.ancilla_spin(idx, (layer + 2) % L2);
            col_perm[c] = p.spin_column[shifted];
        }
    }
    std::size_t m = lat.m_x;
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        gf2::BitVec e(p.n_vars);
        for (std::size_t c = 0; c < p.n_vars; ++c)
            if (rng() % 8 == 0) e.set(c, true);
        gf2::BitVec shifted_e(p.n_vars);
        for (uint32_t c = 0; c < p.n_vars; ++c)
            if (e.get(c)) shifted_e.flip(col_perm[c]);
        gf2::BitVec sigma = p.syndrome_of(e);
        gf2::BitVec sigma_shifted = p.syndrome_of(shifted_e);
        for (uint32_t t = 0; t < lat.T; ++t)
            for (uint32_t i = 0; i < m; ++i)
                CHECK(sigma.get(t * m + i) == sigma_shifted.get(((t + 1) % lat.T) * m + i));
    }
}

TEST_CASE("resource inventory matches the construction counts") {
    foliation::InventoryReport r72 = foliation::resource_inventory(foliation::foliate(bb72(), 6));
    CHECK(r72.chains == 72);
    CHECK(r72.chain_length == 12);
    REQUIRE(r72.leaves_per_node.size() == 1);
    CHECK(r72.leaves_per_node.begin()->first == 3);
    CHECK(r72.ghz_states == 432);
    REQUIRE(r72.ghz_size.size() == 1);
    CHECK(r72.ghz_size.begin()->first == 6);

    codes::CssCode bb144 = codes::build_bb_code(codes::bb_presets().at("bb144").spec, "bb144");
    foliation::InventoryReport r144 = foliation::resource_inventory(foliation::foliate(bb144, 12));
    CHECK(r144.chains == 144);
    CHECK(r144.chain_length == 24);
    CHECK(r144.ghz_states == 1728);

    foliation::InventoryReport rt =
        foliation::resource_inventory(foliation::foliate(codes::build_toric_code(3), 3));
    CHECK(rt.chains == 18);
    REQUIRE(rt.leaves_per_node.size() == 1);
    CHECK(rt.leaves_per_node.begin()->first == 2);
    REQUIRE(rt.ghz_size.size() == 1);
    CHECK(rt.ghz_size.begin()->first == 4);
}

TEST_CASE("lattice dump is parseable text") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(2), 2);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    std::ostringstream out;
    foliation::dump_lattice(lat, p, out);
    CHECK(out.str().find("detector_rows side=X") != std::string::npos);
    CHECK(out.str().find("logical_rows") != std::string::npos);
}

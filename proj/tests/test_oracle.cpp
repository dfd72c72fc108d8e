#include <doctest.h>

#include <algorithm>
#include <random>

#include "qfl/oracle.hpp"

using namespace qfl;
using oracle::EventKind;
using oracle::Pauli;
using oracle::StabilizerTableau;

namespace {

codes::CssCode bb72() { return codes::build_bb_code(codes::bb_presets().at("bb72").spec, "bb72"); }

noise::TrialRng rng_at(uint64_t t) { return noise::TrialRng(99, 0, t); }

}  // namespace

TEST_CASE("Pauli multiplication tracks phases") {
    Pauli a(2);
    a.mul_x(0);
    Pauli b(2);
    b.mul_z(0);
    Pauli ab = a;
    ab.mul(b);  // X Z = -i Y
    Pauli y(2);
    y.mul_y(0);  // i X Z
    CHECK(ab.x == y.x);
    CHECK(ab.z == y.z);
    CHECK(((y.phase - ab.phase) & 3) == 1);  // Y = i XZ

    Pauli xx(2), zz(2);
    xx.mul_x(0);
    xx.mul_x(1);
    zz.mul_z(0);
    zz.mul_z(1);
    CHECK(xx.commutes_with(zz));
    Pauli xi(2), zi(2);
    xi.mul_x(0);
    zi.mul_z(0);
    CHECK_FALSE(xi.commutes_with(zi));
}

TEST_CASE("single 3-leaf star: center generator is a +1 stabilizer") {
    std::vector<std::vector<uint32_t>> adj = {{1, 2, 3}, {0}, {0}, {0}};
    StabilizerTableau t = StabilizerTableau::graph_state(adj);
    Pauli k(4);
    k.mul_x(0);
    k.mul_z(1);
    k.mul_z(2);
    k.mul_z(3);
    auto rng = rng_at(0);
    auto res = t.measure(k, rng);
    CHECK(res.deterministic);
    CHECK_FALSE(res.outcome);
}

TEST_CASE("two-node chain with one leaf each: all generators rest at +1") {
    // nodes 0-1 chained, leaves 2 (on 0) and 3 (on 1)
    std::vector<std::vector<uint32_t>> adj = {{1, 2}, {0, 3}, {0}, {1}};
    StabilizerTableau t = StabilizerTableau::graph_state(adj);
    auto rng = rng_at(1);
    for (uint32_t v = 0; v < 4; ++v) {
        Pauli k(4);
        k.mul_x(v);
        for (uint32_t w : adj[v]) k.mul_z(w);
        auto res = t.measure(k, rng);
        CHECK(res.deterministic);
        CHECK_FALSE(res.outcome);
    }
}

TEST_CASE("GHZ-3: X x X x X is deterministic +1") {
    StabilizerTableau t = StabilizerTableau::ghz_state(3);
    Pauli xxx(3);
    for (std::size_t q = 0; q < 3; ++q) xxx.mul_x(q);
    auto rng = rng_at(2);
    auto res = t.measure(xxx, rng);
    CHECK(res.deterministic);
    CHECK_FALSE(res.outcome);
    Pauli zz(3);
    zz.mul_z(0);
    zz.mul_z(1);
    res = t.measure(zz, rng);
    CHECK(res.deterministic);
    CHECK_FALSE(res.outcome);
}

TEST_CASE("graph-state Bell pair: XX random, then ZZ deterministic") {
    std::vector<std::vector<uint32_t>> adj = {{1}, {0}};
    StabilizerTableau t = StabilizerTableau::graph_state(adj);
    Pauli xx(2), zz(2);
    xx.mul_x(0);
    xx.mul_x(1);
    zz.mul_z(0);
    zz.mul_z(1);
    auto rng = rng_at(3);
    auto first = t.measure(xx, rng);
    CHECK_FALSE(first.deterministic);
    auto second = t.measure(zz, rng);
    CHECK(second.deterministic);
    // On CZ|++>, ZZ = -XX so the recorded bits disagree.
    CHECK(second.outcome == !first.outcome);
    CHECK(t.generators_commute());
}

TEST_CASE("tableau generators stay mutually commuting through random measurements") {
    std::mt19937_64 mt(41);
    std::vector<std::vector<uint32_t>> adj(10);
    for (int e = 0; e < 14; ++e) {
        uint32_t a = mt() % 10, b = mt() % 10;
        if (a == b) continue;
        if (std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    StabilizerTableau t = StabilizerTableau::graph_state(adj);
    auto rng = rng_at(4);
    for (int m = 0; m < 30; ++m) {
        Pauli p(10);
        bool nontrivial = false;
        for (std::size_t q = 0; q < 10; ++q) {
            switch (mt() % 4) {
                case 0: break;
                case 1: p.mul_x(q); nontrivial = true; break;
                case 2: p.mul_y(q); nontrivial = true; break;
                case 3: p.mul_z(q); nontrivial = true; break;
            }
        }
        if (!nontrivial) continue;
        t.measure(p, rng);
        CHECK(t.generators_commute());
    }
}

TEST_CASE("resource union: qubit budget and adjacency shape") {
    foliation::FoliatedLattice lat = foliation::foliate(bb72(), 2);
    oracle::ResourceUnion ru = oracle::build_resource_union(lat);
    CHECK(ru.n_qubits == lat.n_spins + 2 * lat.fusions.size());
    for (const auto& f : lat.fusions) {
        CHECK(ru.adjacency[ru.data_photon(f.id)] == std::vector<uint32_t>{f.data_spin});
        CHECK(ru.adjacency[ru.ancilla_photon(f.id)] == std::vector<uint32_t>{f.ancilla_spin});
    }
    StabilizerTableau t = StabilizerTableau::graph_state(ru.adjacency);
    CHECK(t.num_qubits() == ru.n_qubits);

    codes::CssCode bb144 = codes::build_bb_code(codes::bb_presets().at("bb144").spec, "bb144");
    foliation::FoliatedLattice big = foliation::foliate(bb144, 12);
    CHECK_THROWS(oracle::build_resource_union(big));
}

TEST_CASE("verify_incidence: toric L=2 T=2") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(2), 2);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    oracle::Report rep = oracle::verify_incidence(lat, p);
    for (const auto& m : rep.mismatches) MESSAGE(m);
    CHECK(rep.pass);
}

TEST_CASE("verify_incidence: toric L=3 T=3") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(3), 3);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    oracle::Report rep = oracle::verify_incidence(lat, p);
    for (const auto& m : rep.mismatches) MESSAGE(m);
    CHECK(rep.pass);
}

TEST_CASE("verify_incidence: bb72 T=2") {
    foliation::FoliatedLattice lat = foliation::foliate(bb72(), 2);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    oracle::Report rep = oracle::verify_incidence(lat, p);
    for (const auto& m : rep.mismatches) MESSAGE(m);
    CHECK(rep.pass);
}

TEST_CASE("deterministic verdicts are order independent") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(2), 2);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    oracle::ResourceUnion ru = oracle::build_resource_union(lat);
    oracle::MeasurementPattern pat = oracle::build_pattern(ru, {});

    std::mt19937_64 mt(43);
    std::vector<std::size_t> order(pat.ops.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), mt);

    StabilizerTableau t1 = StabilizerTableau::graph_state(ru.adjacency);
    StabilizerTableau t2 = StabilizerTableau::graph_state(ru.adjacency);
    auto r1 = rng_at(5), r2 = rng_at(6);
    std::vector<uint8_t> out1(pat.ops.size()), out2(pat.ops.size());
    for (std::size_t i = 0; i < pat.ops.size(); ++i)
        out1[i] = t1.measure(pat.ops[i].op, r1).outcome;
    for (std::size_t i : order) out2[i] = t2.measure(pat.ops[i].op, r2).outcome;

    // Row parities are deterministic products: identical under both orders.
    for (std::size_t r = 0; r < p.det_rows.size(); ++r) {
        bool a = false, b = false;
        for (uint32_t c : p.det_rows[r]) {
            int64_t f = p.column_fusion[c];
            std::size_t idx;
            if (f >= 0) {
                bool anc = lat.fusions[static_cast<std::size_t>(f)].type == p.side;
                idx = static_cast<std::size_t>(anc ? pat.fusion_op_anc[f] : pat.fusion_op_data[f]);
            } else {
                idx = static_cast<std::size_t>(pat.spin_op[p.column_spin[c]]);
            }
            a ^= out1[idx];
            b ^= out2[idx];
        }
        CHECK(a == b);
    }
}

TEST_CASE("event semantics: failures, losses and skips on the toric lattice") {
    foliation::FoliatedLattice lat = foliation::foliate(codes::build_toric_code(2), 2);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);

    uint32_t z_fusion = 0;
    uint32_t x_fusion = 0;
    for (const auto& f : lat.fusions)
        if (f.type == foliation::CheckType::X) {
            x_fusion = f.id;
            break;
        }

    for (EventKind kind : {EventKind::FailMeasureAncilla, EventKind::FailMeasureData,
                           EventKind::Loss, EventKind::Skip}) {
        for (uint32_t fusion : {z_fusion, x_fusion}) {
            CAPTURE(static_cast<int>(kind));
            CAPTURE(fusion);
            oracle::Report rep = oracle::verify_event_semantics(lat, p, {{fusion, kind}});
            for (const auto& m : rep.mismatches) MESSAGE(m);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("event semantics: composite script on bb72 T=2") {
    foliation::FoliatedLattice lat = foliation::foliate(bb72(), 2);
    foliation::DecodingProblem p = foliation::build_decoding_problem(lat);
    std::vector<oracle::ScriptedEvent> script = {
        {5, EventKind::FailMeasureAncilla},
        {300, EventKind::FailMeasureData},
        {700, EventKind::Loss},
        {701, EventKind::Skip},
    };
    oracle::Report rep = oracle::verify_event_semantics(lat, p, script);
    for (const auto& m : rep.mismatches) MESSAGE(m);
    CHECK(rep.pass);
}

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "qfl/css_code.hpp"

using namespace qfl;

namespace {

codes::CssCode preset(const std::string& name) {
    return codes::build_bb_code(codes::bb_presets().at(name).spec, name);
}

bool single_weight(const std::map<std::size_t, std::size_t>& hist, std::size_t w) {
    return hist.size() == 1 && hist.begin()->first == w;
}

}  // namespace

TEST_CASE("the four reference codes have the right (n, k) and degrees") {
    struct Expect {
        const char* name;
        std::size_t n, k;
    };
    for (Expect e : {Expect{"bb72", 72, 12}, Expect{"bb90", 90, 8}, Expect{"bb108", 108, 8},
                     Expect{"bb144", 144, 12}}) {
        codes::CssCode code = preset(e.name);
        CAPTURE(e.name);
        CHECK(code.n == e.n);
        CHECK(code.k == e.k);
        codes::ValidationReport rep = codes::validate(code);
        CHECK(rep.commutation_ok);
        // Check degree 6 and qubit degree 6, split 3 + 3.
        CHECK(single_weight(rep.row_weights_x, 6));
        CHECK(single_weight(rep.row_weights_z, 6));
        CHECK(single_weight(rep.col_weights_x, 3));
        CHECK(single_weight(rep.col_weights_z, 3));
    }
}

TEST_CASE("bb72 parity-check ranks") {
    codes::CssCode code = preset("bb72");
    CHECK(gf2::rank(code.h_x) == 30);
    CHECK(gf2::rank(code.h_z) == 30);
    CHECK(gf2::nullspace_basis(code.h_z).size() == 72 - 30);
}

TEST_CASE("toric codes: parameters and commutation") {
    for (std::size_t L : {2, 3, 5, 8}) {
        codes::CssCode code = codes::build_toric_code(L);
        CAPTURE(L);
        CHECK(code.n == 2 * L * L);
        CHECK(code.k == 2);
        codes::ValidationReport rep = codes::validate(code);
        CHECK(rep.commutation_ok);
        CHECK(single_weight(rep.row_weights_x, 4));
        CHECK(single_weight(rep.row_weights_z, 4));
        CHECK(single_weight(rep.col_weights_x, 2));
        CHECK(single_weight(rep.col_weights_z, 2));
    }
    CHECK_THROWS(codes::build_toric_code(1));
}

TEST_CASE("validate detects a corrupted check matrix") {
    codes::CssCode code = preset("bb72");
    code.h_x.flip(5, 40);
    codes::ValidationReport rep = codes::validate(code);
    CHECK_FALSE(rep.commutation_ok);
    REQUIRE_FALSE(rep.violations.empty());
    for (auto [rx, rz] : rep.violations) {
        CHECK(rx == 5);  // only the mutated X row can anticommute
        uint64_t acc = 0;
        for (std::size_t c = 0; c < code.n; ++c)
            acc ^= static_cast<uint64_t>(code.h_x.get(rx, c) && code.h_z.get(rz, c));
        CHECK(acc == 1);
    }
}

TEST_CASE("logical operators: counts, commutation, independence, determinism") {
    for (const char* name : {"bb72", "bb144"}) {
        codes::CssCode code = preset(name);
        codes::LogicalBasis basis = codes::logical_operators(code);
        CAPTURE(name);
        REQUIRE(basis.x_logicals.rows() == code.k);
        for (std::size_t ell = 0; ell < code.k; ++ell) {
            gf2::BitVec v = basis.x_logicals.row_vec(ell);
            CHECK_FALSE(code.h_z.mat_vec(v).any());
            CHECK_FALSE(gf2::in_rowspace(code.h_x, v));
        }
        // Stacking the logicals onto H_X raises the rank by exactly k.
        gf2::Gf2Matrix stacked = gf2::vstack(code.h_x, basis.x_logicals);
        CHECK(gf2::rank(stacked) == gf2::rank(code.h_x) + code.k);
        // Determinism.
        codes::LogicalBasis again = codes::logical_operators(code);
        CHECK(again.x_logicals == basis.x_logicals);
    }

    codes::CssCode toric = codes::build_toric_code(2);
    codes::LogicalBasis basis = codes::logical_operators(toric);
    CHECK(basis.x_logicals.rows() == 2);
}

TEST_CASE("cyclic relabeling leaves (n, k) and weight histograms unchanged") {
    codes::BBCodeSpec spec = codes::bb_presets().at("bb72").spec;
    codes::CssCode base = codes::build_bb_code(spec);
    for (auto& t : spec.a_terms) t.first += 1;
    for (auto& t : spec.b_terms) t.first += 1;
    codes::CssCode shifted = codes::build_bb_code(spec);
    CHECK(shifted.n == base.n);
    CHECK(shifted.k == base.k);
    codes::ValidationReport a = codes::validate(base), b = codes::validate(shifted);
    CHECK(a.row_weights_x == b.row_weights_x);
    CHECK(a.col_weights_x == b.col_weights_x);
    CHECK(a.row_weights_z == b.row_weights_z);
    CHECK(a.col_weights_z == b.col_weights_z);
}

TEST_CASE("distance upper bound finds the toric distance quickly") {
    std::mt19937_64 rng(5);
    CHECK(codes::distance_upper_bound(codes::build_toric_code(2), 20, rng) == 2);
    CHECK(codes::distance_upper_bound(codes::build_toric_code(3), 50, rng) == 3);
}

TEST_CASE("code file round trip and error reporting") {
    codes::CssCode code = preset("bb72");
    std::string path = "test_code_roundtrip.txt";
    codes::save_code(code, path);
    codes::CssCode loaded = codes::load_code(path);
    CHECK(loaded.n == code.n);
    CHECK(loaded.k == code.k);
    CHECK(loaded.h_x == code.h_x);
    CHECK(loaded.h_z == code.h_z);
    std::remove(path.c_str());

    CHECK_THROWS(codes::load_code("does_not_exist.txt"));

    // Dimension mismatch between the two matrices.
    {
        std::ofstream out("test_code_bad.txt");
        out << "1 2\n11\n\n1 3\n111\n";
    }
    CHECK_THROWS(codes::load_code("test_code_bad.txt"));
    // Commutation failure.
    {
        std::ofstream out("test_code_bad.txt");
        out << "1 2\n10\n\n1 2\n10\n";
    }
    CHECK_THROWS(codes::load_code("test_code_bad.txt"));
    std::remove("test_code_bad.txt");
}

TEST_CASE("BB spec JSON loads") {
    {
        std::ofstream out("test_bb_spec.json");
        out << R"({"l":6,"m":6,"a_terms":[[3,0],[0,1],[0,2]],"b_terms":[[0,3],[1,0],[2,0]]})";
    }
    codes::BBCodeSpec spec = codes::load_bb_spec("test_bb_spec.json");
    codes::CssCode code = codes::build_bb_code(spec);
    CHECK(code.n == 72);
    CHECK(code.k == 12);
    std::remove("test_bb_spec.json");
}

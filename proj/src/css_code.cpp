#include "qfl/css_code.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qfl::codes {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

// Adds the circulant for monomial x^i y^j into dst (an lm x lm block).
// Index (a, b) -> a*m + b; the monomial maps (a, b) to (a+i, b+j).
void add_monomial(gf2::Gf2Matrix& dst, int l, int m, int i, int j) {
    for (int a = 0; a < l; ++a)
        for (int b = 0; b < m; ++b) {
            std::size_t col = static_cast<std::size_t>(a * m + b);
            std::size_t row = static_cast<std::size_t>(mod(a + i, l) * m + mod(b + j, m));
            dst.flip(row, col);
        }
}

gf2::Gf2Matrix circulant_sum(int l, int m, const std::vector<std::pair<int, int>>& terms) {
    gf2::Gf2Matrix out(static_cast<std::size_t>(l * m), static_cast<std::size_t>(l * m));
    for (auto [i, j] : terms) add_monomial(out, l, m, mod(i, l), mod(j, m));
    return out;
}

void finish_code(CssCode& code) {
    code.n = code.h_x.cols();
    std::size_t rx = gf2::rank(code.h_x);
    std::size_t rz = gf2::rank(code.h_z);
    if (rx + rz > code.n) throw std::runtime_error("code: rank(H_X) + rank(H_Z) exceeds n");
    code.k = code.n - rx - rz;
}

}  // namespace

CssCode build_bb_code(const BBCodeSpec& spec, std::string name) {
    if (spec.l < 1 || spec.m < 1) throw std::invalid_argument("build_bb_code: l, m must be >= 1");
    gf2::Gf2Matrix a = circulant_sum(spec.l, spec.m, spec.a_terms);
    gf2::Gf2Matrix b = circulant_sum(spec.l, spec.m, spec.b_terms);
    CssCode code;
    code.h_x = gf2::hstack(a, b);
    code.h_z = gf2::hstack(b.transposed(), a.transposed());
    code.name = name.empty() ? ("bb_" + std::to_string(2 * spec.l * spec.m)) : std::move(name);
    finish_code(code);
    return code;
}

CssCode build_toric_code(std::size_t L) {
    if (L < 2) throw std::invalid_argument("build_toric_code: L must be >= 2");
    // Qubit layout: horizontal edge h(r,c) = r*L + c, vertical edge
    // v(r,c) = L^2 + r*L + c, all indices mod L.
    auto h_edge = [L](std::size_t r, std::size_t c) { return (r % L) * L + (c % L); };
    auto v_edge = [L](std::size_t r, std::size_t c) { return L * L + (r % L) * L + (c % L); };

    std::size_t n = 2 * L * L;
    gf2::Gf2Matrix hx(L * L, n), hz(L * L, n);
    for (std::size_t r = 0; r < L; ++r)
        for (std::size_t c = 0; c < L; ++c) {
            std::size_t check = r * L + c;
            // X check: star around vertex (r,c).
            hx.set(check, h_edge(r, c), true);
            hx.set(check, h_edge(r, c + L - 1), true);
            hx.set(check, v_edge(r, c), true);
            hx.set(check, v_edge(r + L - 1, c), true);
            // Z check: plaquette with corner at (r,c).
            hz.set(check, h_edge(r, c), true);
            hz.set(check, h_edge(r + 1, c), true);
            hz.set(check, v_edge(r, c), true);
            hz.set(check, v_edge(r, c + 1), true);
        }
    CssCode code;
    code.h_x = std::move(hx);
    code.h_z = std::move(hz);
    code.name = "toric_" + std::to_string(L);
    finish_code(code);
    return code;
}

ValidationReport validate(const CssCode& code) {
    ValidationReport rep;
    rep.n = code.n;
    rep.k = code.k;
    for (std::size_t rx = 0; rx < code.h_x.rows(); ++rx) {
        for (std::size_t rz = 0; rz < code.h_z.rows(); ++rz) {
            uint64_t acc = 0;
            const uint64_t* a = code.h_x.row(rx);
            const uint64_t* b = code.h_z.row(rz);
            for (std::size_t w = 0; w < code.h_x.words_per_row(); ++w) acc ^= a[w] & b[w];
            if (__builtin_parityll(acc)) {
                rep.commutation_ok = false;
                rep.violations.emplace_back(rx, rz);
            }
        }
    }
    auto weight_hists = [](const gf2::Gf2Matrix& m, std::map<std::size_t, std::size_t>& rows,
                           std::map<std::size_t, std::size_t>& cols) {
        std::vector<std::size_t> colw(m.cols(), 0);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            std::size_t w = 0;
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (m.get(r, c)) {
                    ++w;
                    ++colw[c];
                }
            ++rows[w];
        }
        for (std::size_t c = 0; c < m.cols(); ++c) ++cols[colw[c]];
    };
    weight_hists(code.h_x, rep.row_weights_x, rep.col_weights_x);
    weight_hists(code.h_z, rep.row_weights_z, rep.col_weights_z);
    return rep;
}

namespace {

LogicalBasis pick_logicals(const gf2::Gf2Matrix& h_stab, const gf2::Gf2Matrix& h_other,
                           std::size_t k) {
    if (k == 0) throw std::runtime_error("logical_operators: code has k = 0");
    std::vector<gf2::BitVec> kernel = gf2::nullspace_basis(h_other);
    gf2::RowBasis basis(h_stab.cols());
    for (std::size_t r = 0; r < h_stab.rows(); ++r) basis.add(h_stab.row_vec(r));

    gf2::Gf2Matrix logicals(k, h_stab.cols());
    std::size_t found = 0;
    for (const auto& v : kernel) {
        if (found == k) break;
        if (basis.add(v)) logicals.set_row(found++, v);
    }
    if (found != k) throw std::runtime_error("logical_operators: found fewer than k logicals");
    return LogicalBasis{std::move(logicals)};
}

}  // namespace

LogicalBasis logical_operators(const CssCode& code) {
    return pick_logicals(code.h_x, code.h_z, code.k);
}

LogicalBasis z_logical_operators(const CssCode& code) {
    return pick_logicals(code.h_z, code.h_x, code.k);
}

namespace {

// One information-set round: randomly permute columns, reduce the stacked
// (stabilizer | logical) rows, and keep the lightest reduced row that is not
// a pure stabilizer. Sums of row pairs are scanned as well; they often hit
// the minimum earlier on the larger codes.
void distance_round(const gf2::Gf2Matrix& stacked, const gf2::Gf2Matrix& h_stab,
                    std::mt19937_64& rng, std::size_t& best) {
    std::size_t n = stacked.cols();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    gf2::Gf2Matrix work(stacked.rows(), n);
    for (std::size_t r = 0; r < stacked.rows(); ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (stacked.get(r, perm[c])) work.set(r, c, true);

    // Plain RREF on the permuted columns.
    std::size_t rr = 0;
    for (std::size_t c = 0; c < n && rr < work.rows(); ++c) {
        std::size_t pr = rr;
        while (pr < work.rows() && !work.get(pr, c)) ++pr;
        if (pr == work.rows()) continue;
        work.swap_rows(rr, pr);
        for (std::size_t r2 = 0; r2 < work.rows(); ++r2)
            if (r2 != rr && work.get(r2, c)) work.xor_row_into(rr, r2);
        ++rr;
    }

    gf2::RowBasis stab_basis(n);
    for (std::size_t r = 0; r < h_stab.rows(); ++r) {
        gf2::BitVec v(n);
        for (std::size_t c = 0; c < n; ++c)
            if (h_stab.get(r, perm[c])) v.set(c, true);
        stab_basis.add(v);
    }

    auto consider = [&](const gf2::BitVec& v) {
        std::size_t w = v.popcount();
        if (w == 0 || w >= best) return;
        if (!stab_basis.contains(v)) best = w;
    };
    for (std::size_t r = 0; r < rr; ++r) consider(work.row_vec(r));
    for (std::size_t r = 0; r < rr; ++r)
        for (std::size_t r2 = r + 1; r2 < rr; ++r2) {
            gf2::BitVec v = work.row_vec(r);
            v.xor_with(work.row_vec(r2));
            consider(v);
        }
}

}  // namespace

std::size_t distance_upper_bound(const CssCode& code, std::size_t effort, std::mt19937_64& rng) {
    LogicalBasis lx = logical_operators(code);
    LogicalBasis lz = z_logical_operators(code);
    gf2::Gf2Matrix stacked_x = gf2::vstack(code.h_x, lx.x_logicals);
    gf2::Gf2Matrix stacked_z = gf2::vstack(code.h_z, lz.x_logicals);

    std::size_t best = code.n + 1;
    for (std::size_t it = 0; it < effort; ++it) {
        distance_round(stacked_x, code.h_x, rng, best);
        distance_round(stacked_z, code.h_z, rng, best);
    }
    return best;
}

CssCode load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_code: cannot open " + path);
    CssCode code;
    code.h_x = gf2::from_text_stream(in);
    code.h_z = gf2::from_text_stream(in);
    if (code.h_x.cols() != code.h_z.cols())
        throw std::runtime_error("load_code: H_X and H_Z disagree on qubit count");
    code.name = path;
    finish_code(code);
    ValidationReport rep = validate(code);
    if (!rep.commutation_ok) throw std::runtime_error("load_code: H_X H_Z^T != 0");
    return code;
}

void save_code(const CssCode& code, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_code: cannot open " + path);
    out << gf2::to_text(code.h_x) << '\n' << gf2::to_text(code.h_z);
}

BBCodeSpec load_bb_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_bb_spec: cannot open " + path);
    nlohmann::json j;
    in >> j;
    BBCodeSpec spec;
    spec.l = j.at("l").get<int>();
    spec.m = j.at("m").get<int>();
    for (const auto& t : j.at("a_terms")) spec.a_terms.emplace_back(t.at(0).get<int>(), t.at(1).get<int>());
    for (const auto& t : j.at("b_terms")) spec.b_terms.emplace_back(t.at(0).get<int>(), t.at(1).get<int>());
    return spec;
}

const std::map<std::string, CodePreset>& bb_presets() {
    // A = x^3 + y + y^2, B = y^3 + x + x^2 except bb90 which uses
    // A = x^9 + y + y^2, B = 1 + x^2 + x^7.
    static const std::map<std::string, CodePreset> presets = {
        {"bb72", {{6, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}}}, 6}},
        {"bb90", {{15, 3, {{9, 0}, {0, 1}, {0, 2}}, {{0, 0}, {2, 0}, {7, 0}}}, 10}},
        {"bb108", {{9, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}}}, 10}},
        {"bb144", {{12, 6, {{3, 0}, {0, 1}, {0, 2}}, {{0, 3}, {1, 0}, {2, 0}}}, 12}},
    };
    return presets;
}

}  // namespace qfl::codes

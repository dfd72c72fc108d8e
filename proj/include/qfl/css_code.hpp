#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qfl/gf2.hpp"

namespace qfl::codes {

// Bivariate Bicycle code specification: H_X = [A|B], H_Z = [B^T|A^T] with
// A and B sums of monomial circulants x^i y^j, x = S_l (x) I_m, y = I_l (x) S_m.
struct BBCodeSpec {
    int l = 0;
    int m = 0;
    std::vector<std::pair<int, int>> a_terms;  // (x exponent, y exponent)
    std::vector<std::pair<int, int>> b_terms;
};

struct CssCode {
    gf2::Gf2Matrix h_x;  // checks x n
    gf2::Gf2Matrix h_z;
    std::size_t n = 0;
    std::size_t k = 0;
    std::string name;
};

struct ValidationReport {
    bool commutation_ok = true;
    std::vector<std::pair<std::size_t, std::size_t>> violations;  // (row_x, row_z)
    std::size_t n = 0;
    std::size_t k = 0;
    std::map<std::size_t, std::size_t> row_weights_x, row_weights_z;
    std::map<std::size_t, std::size_t> col_weights_x, col_weights_z;
    bool ok() const { return commutation_ok; }
};

// k X-logical representatives of the base code: rows lie in nullspace(H_Z)
// and are independent modulo rowspace(H_X). Selection is deterministic.
struct LogicalBasis {
    gf2::Gf2Matrix x_logicals;  // k x n
};

CssCode build_bb_code(const BBCodeSpec& spec, std::string name = "");

// Standard Toric code on an LxL torus: qubits on edges, X checks on
// vertices, Z checks on plaquettes. n = 2L^2, k = 2.
CssCode build_toric_code(std::size_t L);

ValidationReport validate(const CssCode& code);

LogicalBasis logical_operators(const CssCode& code);

// Z-logical representatives (nullspace(H_X) modulo rowspace(H_Z)); used by
// the distance search to witness both error types.
LogicalBasis z_logical_operators(const CssCode& code);

// Randomized information-set search for a low-weight logical representative.
// Returns the smallest weight found over `effort` randomized eliminations of
// the stacked stabilizer+logical row space (both X and Z sides); always an
// upper bound on the true distance.
std::size_t distance_upper_bound(const CssCode& code, std::size_t effort, std::mt19937_64& rng);

// Text code file: H_X then H_Z in the gf2 text format, separated by a blank
// line. Throws on parse errors, dimension mismatch, or commutation failure.
CssCode load_code(const std::string& path);
void save_code(const CssCode& code, const std::string& path);

// BB spec file: JSON with keys l, m, a_terms, b_terms.
BBCodeSpec load_bb_spec(const std::string& path);

// The four reference codes studied throughout, by name: bb72, bb90, bb108,
// bb144. `rounds_hint` is the memory depth T = d used for them.
struct CodePreset {
    BBCodeSpec spec;
    std::size_t rounds_hint;
};
const std::map<std::string, CodePreset>& bb_presets();

}  // namespace qfl::codes

#include <doctest.h>

#include <random>
#include <sstream>
#include <stdexcept>

#include "qfl/gf2.hpp"

using namespace qfl;

namespace {

// Naive unpacked elimination, kept deliberately independent of the packed
// implementation.
std::size_t naive_rank(std::vector<std::vector<int>> m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = r;
        while (pr < rows && m[pr][c] == 0) ++pr;
        if (pr == rows) continue;
        std::swap(m[r], m[pr]);
        for (std::size_t rr = 0; rr < rows; ++rr)
            if (rr != r && m[rr][c])
                for (std::size_t cc = 0; cc < cols; ++cc) m[rr][cc] ^= m[r][cc];
        ++r;
    }
    return r;
}

gf2::Gf2Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                             double density = 0.5) {
    gf2::Gf2Matrix m(rows, cols);
    std::bernoulli_distribution bit(density);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (bit(rng)) m.set(r, c, true);
    return m;
}

std::vector<std::vector<int>> unpack(const gf2::Gf2Matrix& m) {
    std::vector<std::vector<int>> out(m.rows(), std::vector<int>(m.cols(), 0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.get(r, c);
    return out;
}

gf2::Gf2Matrix identity(std::size_t n) {
    gf2::Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

}  // namespace

TEST_CASE("rank: identity and zero") {
    CHECK(gf2::rank(identity(4)) == 4);
    CHECK(gf2::rank(gf2::Gf2Matrix(3, 5)) == 0);
}

TEST_CASE("rank agrees with the naive oracle on random matrices up to 64x64") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t rows = 1 + rng() % 64, cols = 1 + rng() % 64;
        gf2::Gf2Matrix m = random_matrix(rows, cols, rng);
        CHECK(gf2::rank(m) == naive_rank(unpack(m)));
    }
}

TEST_CASE("rank is invariant under row permutation and row addition") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t rows = 2 + rng() % 20, cols = 1 + rng() % 30;
        gf2::Gf2Matrix m = random_matrix(rows, cols, rng);
        std::size_t base = gf2::rank(m);
        gf2::Gf2Matrix mutated = m;
        for (int op = 0; op < 10; ++op) {
            std::size_t a = rng() % rows, b = rng() % rows;
            if (rng() & 1)
                mutated.swap_rows(a, b);
            else if (a != b)
                mutated.xor_row_into(a, b);
        }
        CHECK(gf2::rank(mutated) == base);
    }
}

TEST_CASE("solve: identity, underdetermined and inconsistent systems") {
    gf2::BitVec e2(3);
    e2.set(2, true);
    auto x = gf2::solve(identity(3), e2);
    REQUIRE(x.has_value());
    CHECK(*x == e2);

    gf2::Gf2Matrix m(1, 2);
    m.set(0, 0, true);
    m.set(0, 1, true);
    gf2::BitVec b(1);
    b.set(0, true);
    auto y = gf2::solve(m, b);
    REQUIRE(y.has_value());
    CHECK(m.mat_vec(*y) == b);  // any valid solution

    gf2::Gf2Matrix bad(2, 2);
    bad.set(0, 0, true);
    bad.set(1, 0, true);
    gf2::BitVec rhs(2);
    rhs.set(0, true);
    CHECK_FALSE(gf2::solve(bad, rhs).has_value());

    gf2::BitVec wrong_len(3);
    CHECK_THROWS_AS((void)gf2::solve(bad, wrong_len), std::invalid_argument);
}

TEST_CASE("solve returns a valid solution on random consistent systems") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t rows = 1 + rng() % 40, cols = 1 + rng() % 40;
        gf2::Gf2Matrix m = random_matrix(rows, cols, rng);
        gf2::BitVec x0(cols);
        for (std::size_t c = 0; c < cols; ++c)
            if (rng() & 1) x0.set(c, true);
        gf2::BitVec b = m.mat_vec(x0);
        auto x = gf2::solve(m, b);
        REQUIRE(x.has_value());
        CHECK(m.mat_vec(*x) == b);
    }
}

TEST_CASE("in_rowspace: trivial members and brute-force agreement") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t rows = 1 + rng() % 10, cols = 1 + rng() % 14;  // <= 2^10 subsets
        gf2::Gf2Matrix m = random_matrix(rows, cols, rng);
        CHECK(gf2::in_rowspace(m, gf2::BitVec(cols)));
        CHECK(gf2::in_rowspace(m, m.row_vec(0)));

        gf2::BitVec v(cols);
        for (std::size_t c = 0; c < cols; ++c)
            if (rng() & 1) v.set(c, true);
        bool brute = false;
        for (uint64_t mask = 0; mask < (uint64_t(1) << rows) && !brute; ++mask) {
            gf2::BitVec acc(cols);
            for (std::size_t r = 0; r < rows; ++r)
                if ((mask >> r) & 1) acc.xor_with(m.row_vec(r));
            brute = (acc == v);
        }
        CHECK(gf2::in_rowspace(m, v) == brute);
    }
}

TEST_CASE("nullspace: examples and properties") {
    CHECK(gf2::nullspace_basis(identity(5)).empty());

    gf2::Gf2Matrix m(1, 2);
    m.set(0, 0, true);
    m.set(0, 1, true);
    auto basis = gf2::nullspace_basis(m);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].get(0));
    CHECK(basis[0].get(1));

    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t rows = 1 + rng() % 30, cols = 1 + rng() % 40;
        gf2::Gf2Matrix a = random_matrix(rows, cols, rng);
        auto ns = gf2::nullspace_basis(a);
        CHECK(ns.size() == cols - gf2::rank(a));
        gf2::Gf2Matrix stacked(ns.size(), cols);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            CHECK_FALSE(a.mat_vec(ns[i]).any());
            stacked.set_row(i, ns[i]);
        }
        CHECK(gf2::rank(stacked) == ns.size());  // linearly independent
    }
}

TEST_CASE("text round trip and parse errors") {
    std::mt19937_64 rng(23);
    gf2::Gf2Matrix m = random_matrix(5, 9, rng);
    std::istringstream in(gf2::to_text(m));
    CHECK(gf2::from_text_stream(in) == m);

    std::istringstream bad("2 3\n010\n0a0\n");
    CHECK_THROWS(gf2::from_text_stream(bad));
    std::istringstream shortrow("1 4\n01\n");
    CHECK_THROWS(gf2::from_text_stream(shortrow));
}

TEST_CASE("RowBasis reduces consistently with matrix rank") {
    std::mt19937_64 rng(29);
    gf2::Gf2Matrix m = random_matrix(12, 20, rng);
    gf2::RowBasis basis(20);
    for (std::size_t r = 0; r < m.rows(); ++r) basis.add(m.row_vec(r));
    CHECK(basis.size() == gf2::rank(m));
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Bit-packed linear algebra over GF(2). Matrices are row-major with 64
// qubits/entries per word. All elimination routines work on copies; inputs
// are never mutated and can be shared read-only across threads.

namespace qfl::gf2 {

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_(words_for(n), 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i, bool v) {
        uint64_t mask = uint64_t(1) << (i & 63);
        if (v)
            w_[i >> 6] |= mask;
        else
            w_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    void xor_with(const BitVec& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    }

    bool any() const {
        for (uint64_t x : w_)
            if (x) return true;
        return false;
    }

    std::size_t popcount() const {
        std::size_t s = 0;
        for (uint64_t x : w_) s += static_cast<std::size_t>(__builtin_popcountll(x));
        return s;
    }

    // Parity of the AND with another vector of the same length.
    bool dot(const BitVec& o) const {
        uint64_t acc = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
        return __builtin_parityll(acc);
    }

    int lowest_set() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return static_cast<int>(i * 64 + static_cast<std::size_t>(__builtin_ctzll(w_[i])));
        return -1;
    }

    std::vector<uint32_t> ones() const {
        std::vector<uint32_t> out;
        for (std::size_t i = 0; i < w_.size(); ++i) {
            uint64_t x = w_[i];
            while (x) {
                out.push_back(static_cast<uint32_t>(i * 64 + static_cast<std::size_t>(__builtin_ctzll(x))));
                x &= x - 1;
            }
        }
        return out;
    }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

    uint64_t* words() { return w_.data(); }
    const uint64_t* words() const { return w_.data(); }
    std::size_t word_count() const { return w_.size(); }

private:
    std::size_t n_ = 0;
    std::vector<uint64_t> w_;
};

class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_(words_for(cols)), bits_(rows * wpr_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (bits_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        uint64_t mask = uint64_t(1) << (c & 63);
        if (v)
            bits_[r * wpr_ + (c >> 6)] |= mask;
        else
            bits_[r * wpr_ + (c >> 6)] &= ~mask;
    }
    void flip(std::size_t r, std::size_t c) { bits_[r * wpr_ + (c >> 6)] ^= uint64_t(1) << (c & 63); }

    uint64_t* row(std::size_t r) { return bits_.data() + r * wpr_; }
    const uint64_t* row(std::size_t r) const { return bits_.data() + r * wpr_; }
    std::size_t words_per_row() const { return wpr_; }

    BitVec row_vec(std::size_t r) const {
        BitVec v(cols_);
        std::copy(row(r), row(r) + wpr_, v.words());
        return v;
    }
    void set_row(std::size_t r, const BitVec& v) { std::copy(v.words(), v.words() + wpr_, row(r)); }

    void xor_row_into(std::size_t src, std::size_t dst) {
        uint64_t* d = row(dst);
        const uint64_t* s = row(src);
        for (std::size_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < wpr_; ++i) std::swap(row(a)[i], row(b)[i]);
    }

    Gf2Matrix transposed() const;

    // y = M x (mod 2)
    BitVec mat_vec(const BitVec& x) const;

    bool operator==(const Gf2Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> bits_;
};

Gf2Matrix vstack(const Gf2Matrix& top, const Gf2Matrix& bottom);
Gf2Matrix hstack(const Gf2Matrix& left, const Gf2Matrix& right);
Gf2Matrix multiply(const Gf2Matrix& a, const Gf2Matrix& b);

std::size_t rank(const Gf2Matrix& m);

// Any x with M x = b, free variables set to zero; nullopt when inconsistent.
// Throws std::invalid_argument on dimension mismatch.
std::optional<BitVec> solve(const Gf2Matrix& m, const BitVec& b);

// True iff v is a GF(2) combination of the rows of M.
bool in_rowspace(const Gf2Matrix& m, const BitVec& v);

// cols - rank(M) independent vectors x with M x = 0, in the deterministic
// order given by ascending free-column index of the RREF.
std::vector<BitVec> nullspace_basis(const Gf2Matrix& m);

// Incremental row basis kept in echelon form; used wherever repeated
// independence / membership queries against a growing row set are needed.
class RowBasis {
public:
    explicit RowBasis(std::size_t cols) : cols_(cols) {}

    // Reduces v against the basis in place; returns the residue.
    BitVec reduce(BitVec v) const;

    // Adds v if independent. Returns true when the basis grew.
    bool add(const BitVec& v);

    bool contains(const BitVec& v) const { return !reduce(v).any(); }
    std::size_t size() const { return rows_.size(); }

private:
    std::size_t cols_;
    std::vector<BitVec> rows_;  // each with a unique pivot, sorted by pivot
    std::vector<int> pivots_;
};

// Text matrix format: first line "rows cols", then one line of 0/1 characters
// per row.
std::string to_text(const Gf2Matrix& m);
Gf2Matrix from_text_stream(std::istream& in);

}  // namespace qfl::gf2

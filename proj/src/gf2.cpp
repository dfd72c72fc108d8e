#include "qfl/gf2.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

namespace qfl::gf2 {

Gf2Matrix Gf2Matrix::transposed() const {
    Gf2Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const uint64_t* src = row(r);
        for (std::size_t w = 0; w < wpr_; ++w) {
            uint64_t x = src[w];
            while (x) {
                std::size_t c = w * 64 + static_cast<std::size_t>(__builtin_ctzll(x));
                t.set(c, r, true);
                x &= x - 1;
            }
        }
    }
    return t;
}

BitVec Gf2Matrix::mat_vec(const BitVec& x) const {
    if (x.size() != cols_) throw std::invalid_argument("mat_vec: dimension mismatch");
    BitVec y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        uint64_t acc = 0;
        const uint64_t* rw = row(r);
        const uint64_t* xw = x.words();
        for (std::size_t i = 0; i < wpr_; ++i) acc ^= rw[i] & xw[i];
        if (__builtin_parityll(acc)) y.set(r, true);
    }
    return y;
}

Gf2Matrix vstack(const Gf2Matrix& top, const Gf2Matrix& bottom) {
    if (top.cols() != bottom.cols()) throw std::invalid_argument("vstack: column mismatch");
    Gf2Matrix out(top.rows() + bottom.rows(), top.cols());
    for (std::size_t r = 0; r < top.rows(); ++r)
        std::copy(top.row(r), top.row(r) + top.words_per_row(), out.row(r));
    for (std::size_t r = 0; r < bottom.rows(); ++r)
        std::copy(bottom.row(r), bottom.row(r) + bottom.words_per_row(), out.row(top.rows() + r));
    return out;
}

Gf2Matrix hstack(const Gf2Matrix& left, const Gf2Matrix& right) {
    if (left.rows() != right.rows()) throw std::invalid_argument("hstack: row mismatch");
    Gf2Matrix out(left.rows(), left.cols() + right.cols());
    for (std::size_t r = 0; r < left.rows(); ++r) {
        for (std::size_t c = 0; c < left.cols(); ++c)
            if (left.get(r, c)) out.set(r, c, true);
        for (std::size_t c = 0; c < right.cols(); ++c)
            if (right.get(r, c)) out.set(r, left.cols() + c, true);
    }
    return out;
}

Gf2Matrix multiply(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
    Gf2Matrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const uint64_t* ar = a.row(r);
        uint64_t* outr = out.row(r);
        for (std::size_t w = 0; w < a.words_per_row(); ++w) {
            uint64_t x = ar[w];
            while (x) {
                std::size_t k = w * 64 + static_cast<std::size_t>(__builtin_ctzll(x));
                const uint64_t* bk = b.row(k);
                for (std::size_t i = 0; i < b.words_per_row(); ++i) outr[i] ^= bk[i];
                x &= x - 1;
            }
        }
    }
    return out;
}

namespace {

// In-place reduced row echelon form; returns pivot column per pivot row.
std::vector<int> rref(Gf2Matrix& m) {
    std::vector<int> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t pr = r;
        while (pr < m.rows() && !m.get(pr, c)) ++pr;
        if (pr == m.rows()) continue;
        m.swap_rows(r, pr);
        for (std::size_t rr = 0; rr < m.rows(); ++rr)
            if (rr != r && m.get(rr, c)) m.xor_row_into(r, rr);
        pivot_cols.push_back(static_cast<int>(c));
        ++r;
    }
    return pivot_cols;
}

}  // namespace

std::size_t rank(const Gf2Matrix& m) {
    Gf2Matrix copy = m;
    return rref(copy).size();
}

std::optional<BitVec> solve(const Gf2Matrix& m, const BitVec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs length != rows");
    // Augment with b as an extra column and reduce.
    Gf2Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c)) aug.set(r, c, true);
        aug.set(r, m.cols(), b.get(r));
    }
    std::vector<int> pivots = rref(aug);
    BitVec x(m.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == static_cast<int>(m.cols())) return std::nullopt;  // 0 = 1 row
        if (aug.get(i, m.cols())) x.set(static_cast<std::size_t>(pivots[i]), true);
    }
    return x;
}

bool in_rowspace(const Gf2Matrix& m, const BitVec& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("in_rowspace: length mismatch");
    RowBasis basis(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) basis.add(m.row_vec(r));
    return basis.contains(v);
}

std::vector<BitVec> nullspace_basis(const Gf2Matrix& m) {
    Gf2Matrix copy = m;
    std::vector<int> pivots = rref(copy);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;

    std::vector<BitVec> basis;
    for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        BitVec x(m.cols());
        x.set(free_col, true);
        // Pivot variables follow from the reduced rows.
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (copy.get(i, free_col)) x.set(static_cast<std::size_t>(pivots[i]), true);
        basis.push_back(std::move(x));
    }
    return basis;
}

BitVec RowBasis::reduce(BitVec v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        int p = pivots_[i];
        if (v.get(static_cast<std::size_t>(p))) v.xor_with(rows_[i]);
    }
    return v;
}

bool RowBasis::add(const BitVec& v) {
    BitVec r = reduce(v);
    int p = r.lowest_set();
    if (p < 0) return false;
    // Keep sorted by pivot so reduce stays a single forward sweep.
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
    return true;
}

std::string to_text(const Gf2Matrix& m) {
    std::ostringstream out;
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out << (m.get(r, c) ? '1' : '0');
        out << '\n';
    }
    return out.str();
}

Gf2Matrix from_text_stream(std::istream& in) {
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw std::runtime_error("matrix text: missing 'rows cols' header");
    std::string line;
    std::getline(in, line);
    Gf2Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw std::runtime_error("matrix text: unexpected end of input");
        if (line.size() < cols) throw std::runtime_error("matrix text: short row");
        for (std::size_t c = 0; c < cols; ++c) {
            char ch = line[c];
            if (ch == '1')
                m.set(r, c, true);
            else if (ch != '0')
                throw std::runtime_error("matrix text: entry must be 0 or 1");
        }
    }
    return m;
}

}  // namespace qfl::gf2

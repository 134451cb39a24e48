#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cpldpc/errors.hpp"
#include "cpldpc/rng.hpp"

namespace cpldpc {

/// Packed GF(2) vector.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    void operator^=(const BitVec& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    }

    bool any() const {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool operator==(const BitVec& o) const { return size_ == o.size_ && words_ == o.words_; }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    static BitVec from_string(const std::string& s) {
        BitVec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                v.set(i, true);
            else if (s[i] != '0')
                throw config_error("bit string: invalid character");
        }
        return v;
    }

    static BitVec random(std::size_t n, Rng& rng) {
        BitVec v(n);
        for (std::size_t i = 0; i < n; ++i) v.set(i, rng.bit());
        return v;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Sparse binary matrix, per-row sorted column indices. Immutable once built;
/// elimination works on packed dense copies (sparsity dies there anyway).
class SparseBinMatrix {
  public:
    SparseBinMatrix() = default;
    SparseBinMatrix(std::size_t rows, std::size_t cols, std::vector<std::vector<std::uint32_t>> row_cols)
        : rows_(rows), cols_(cols), row_cols_(std::move(row_cols)) {
        if (row_cols_.size() != rows_) throw config_error("sparse matrix: row count mismatch");
        for (const auto& r : row_cols_) {
            for (std::size_t k = 0; k < r.size(); ++k) {
                if (r[k] >= cols_) throw config_error("sparse matrix: column index out of range");
                if (k > 0 && r[k] <= r[k - 1])
                    throw config_error("sparse matrix: columns not strictly increasing");
            }
        }
    }

    static SparseBinMatrix identity(std::size_t n) {
        std::vector<std::vector<std::uint32_t>> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = {static_cast<std::uint32_t>(i)};
        return SparseBinMatrix(n, n, std::move(rows));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<std::uint32_t>& row(std::size_t r) const { return row_cols_[r]; }

    std::size_t entry_count() const {
        std::size_t c = 0;
        for (const auto& r : row_cols_) c += r.size();
        return c;
    }

    SparseBinMatrix transposed() const {
        std::vector<std::vector<std::uint32_t>> t(cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::uint32_t c : row_cols_[r]) t[c].push_back(static_cast<std::uint32_t>(r));
        return SparseBinMatrix(cols_, rows_, std::move(t));
    }

    bool operator==(const SparseBinMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && row_cols_ == o.row_cols_;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::vector<std::uint32_t>> row_cols_;
};

/// m * v over GF(2): output bit r is the XOR of v over row r's columns.
inline BitVec matvec(const SparseBinMatrix& m, const BitVec& v) {
    if (v.size() != m.cols()) throw config_error("matvec: dimension mismatch");
    BitVec out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        unsigned acc = 0;
        for (std::uint32_t c : m.row(r)) acc ^= static_cast<unsigned>(v.get(c));
        if (acc) out.set(r, true);
    }
    return out;
}

/// v * m over GF(2) (row vector times matrix), i.e. XOR of rows selected by v.
inline BitVec vecmat(const BitVec& v, const SparseBinMatrix& m) {
    if (v.size() != m.rows()) throw config_error("vecmat: dimension mismatch");
    BitVec out(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (v.get(r))
            for (std::uint32_t c : m.row(r)) out.flip(c);
    return out;
}

namespace detail {

inline std::vector<BitVec> to_dense_rows(const SparseBinMatrix& m) {
    std::vector<BitVec> rows(m.rows(), BitVec(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::uint32_t c : m.row(r)) rows[r].set(c, true);
    return rows;
}

}  // namespace detail

inline std::size_t rank(const SparseBinMatrix& m) {
    std::vector<BitVec> rows = detail::to_dense_rows(m);
    std::size_t r = 0;
    for (std::size_t col = 0; col < m.cols() && r < rows.size(); ++col) {
        std::size_t pivot = r;
        while (pivot < rows.size() && !rows[pivot].get(col)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        for (std::size_t i = r + 1; i < rows.size(); ++i)
            if (rows[i].get(col)) rows[i] ^= rows[r];
        ++r;
    }
    return r;
}

/// Basis of {v : m v = 0}; size is cols - rank.
inline std::vector<BitVec> nullspace_basis(const SparseBinMatrix& m) {
    std::vector<BitVec> rows = detail::to_dense_rows(m);
    const std::size_t cols = m.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows.size(); ++col) {
        std::size_t pivot = r;
        while (pivot < rows.size() && !rows[pivot].get(col)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i].get(col)) rows[i] ^= rows[r];
        pivot_col.push_back(col);
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::vector<BitVec> basis;
    basis.reserve(cols - pivot_col.size());
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        BitVec v(cols);
        v.set(f, true);
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            if (rows[i].get(f)) v.set(pivot_col[i], true);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Uniform element of the span of `basis`.
inline BitVec random_combination(const std::vector<BitVec>& basis, std::size_t len, Rng& rng) {
    BitVec v(len);
    for (const BitVec& b : basis)
        if (rng.bit()) v ^= b;
    return v;
}

// ---- alist serialization (MacKay format, 1-indexed) ----
//
//   n m
//   max_col_degree max_row_degree
//   per-column degrees       (n entries)
//   per-row degrees          (m entries)
//   per-column row lists     (one line per column)
//   per-row column lists     (one line per row)
//
// Zero padding in the adjacency lists (used by some writers for irregular
// codes) is accepted on read and not produced on write.

inline void write_alist(std::ostream& os, const SparseBinMatrix& m) {
    const SparseBinMatrix t = m.transposed();  // rows of t = columns of m
    os << m.cols() << ' ' << m.rows() << '\n';
    std::size_t max_col = 0, max_row = 0;
    for (std::size_t c = 0; c < t.rows(); ++c) max_col = std::max(max_col, t.row(c).size());
    for (std::size_t r = 0; r < m.rows(); ++r) max_row = std::max(max_row, m.row(r).size());
    os << max_col << ' ' << max_row << '\n';
    for (std::size_t c = 0; c < t.rows(); ++c) os << t.row(c).size() << (c + 1 < t.rows() ? ' ' : '\n');
    for (std::size_t r = 0; r < m.rows(); ++r) os << m.row(r).size() << (r + 1 < m.rows() ? ' ' : '\n');
    // Empty lists are written as a lone padding zero so every list occupies
    // one line.
    for (std::size_t c = 0; c < t.rows(); ++c) {
        for (std::size_t k = 0; k < t.row(c).size(); ++k)
            os << (t.row(c)[k] + 1) << (k + 1 < t.row(c).size() ? ' ' : '\n');
        if (t.row(c).empty()) os << "0\n";
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t k = 0; k < m.row(r).size(); ++k)
            os << (m.row(r)[k] + 1) << (k + 1 < m.row(r).size() ? ' ' : '\n');
        if (m.row(r).empty()) os << "0\n";
    }
}

inline SparseBinMatrix read_alist(std::istream& is) {
    // Adjacency lists are parsed line by line so zero-padded files (every
    // list line filled up to the max degree) read the same as unpadded ones.
    auto next_ints = [&is]() {
        std::string line;
        while (std::getline(is, line)) {
            std::istringstream ls(line);
            std::vector<long long> vals;
            long long v;
            while (ls >> v) vals.push_back(v);
            if (!vals.empty()) return vals;
        }
        throw config_error("alist: truncated file");
    };
    auto header = next_ints();
    if (header.size() != 2 || header[0] < 0 || header[1] < 0)
        throw config_error("alist: bad header");
    const long long n = header[0], mm = header[1];
    next_ints();  // max degrees, informational
    std::vector<long long> col_deg, row_deg;
    while (static_cast<long long>(col_deg.size()) < n) {
        auto v = next_ints();
        col_deg.insert(col_deg.end(), v.begin(), v.end());
    }
    while (static_cast<long long>(row_deg.size()) < mm) {
        auto v = next_ints();
        row_deg.insert(row_deg.end(), v.begin(), v.end());
    }
    if (static_cast<long long>(col_deg.size()) != n || static_cast<long long>(row_deg.size()) != mm)
        throw config_error("alist: degree list length mismatch");
    // Column lists: consumed for cross-validation of the entry count only.
    std::size_t col_entries = 0;
    for (long long c = 0; c < n; ++c) {
        auto vals = next_ints();
        for (long long r : vals) {
            if (r < 0 || r > mm) throw config_error("alist: row index out of range");
            if (r > 0) ++col_entries;
        }
    }
    std::vector<std::vector<std::uint32_t>> rows(static_cast<std::size_t>(mm));
    std::size_t row_entries = 0;
    for (long long r = 0; r < mm; ++r) {
        auto vals = next_ints();
        auto& out = rows[static_cast<std::size_t>(r)];
        for (long long c : vals) {
            if (c < 0 || c > n) throw config_error("alist: column index out of range");
            if (c > 0) out.push_back(static_cast<std::uint32_t>(c - 1));  // 0 entries are padding
        }
        row_entries += out.size();
        std::sort(out.begin(), out.end());
        if (std::adjacent_find(out.begin(), out.end()) != out.end())
            throw config_error("alist: duplicate entry in row list");
    }
    if (col_entries != row_entries) throw config_error("alist: row/column lists disagree");
    return SparseBinMatrix(static_cast<std::size_t>(mm), static_cast<std::size_t>(n), std::move(rows));
}

inline std::string alist_string(const SparseBinMatrix& m) {
    std::ostringstream os;
    write_alist(os, m);
    return os.str();
}

}  // namespace cpldpc

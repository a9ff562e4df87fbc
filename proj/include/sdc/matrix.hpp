#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace sdc {

using Vector = std::vector<elem_t>;

inline std::size_t hamming_weight(std::span<const elem_t> v) noexcept {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](elem_t x) { return x != 0; }));
}

inline elem_t dot(const PrimeField& f, std::span<const elem_t> x, std::span<const elem_t> y) {
    if (x.size() != y.size()) throw invalid_argument("dot product of vectors of different length");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::uint64_t{x[i]} * y[i];
        if (acc >= (std::uint64_t{1} << 62)) acc %= f.q();
    }
    return static_cast<elem_t>(acc % f.q());
}

/// Dense row-major matrix over a prime field.
class FqMatrix {
  public:
    FqMatrix(PrimeField f, std::size_t rows, std::size_t cols)
        : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    FqMatrix(PrimeField f, std::size_t rows, std::size_t cols, std::vector<elem_t> entries)
        : field_(f), rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows * cols) throw invalid_argument("matrix entry count does not match shape");
        for (auto& x : data_)
            if (x >= f.q()) throw invalid_argument("matrix entry out of range [0, q-1]");
    }

    static FqMatrix from_rows(PrimeField f, const std::vector<std::vector<std::int64_t>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.front().size() : 0;
        FqMatrix m(f, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw invalid_argument("ragged row list");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = f.reduce(rows[i][j]);
        }
        return m;
    }

    static FqMatrix identity(PrimeField f, std::size_t n) {
        FqMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % f.q();
        return m;
    }

    static FqMatrix scalar(PrimeField f, std::size_t n, elem_t s) {
        FqMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = s % f.q();
        return m;
    }

    const PrimeField& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    const std::vector<elem_t>& entries() const noexcept { return data_; }

    elem_t& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    elem_t operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<const elem_t> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<elem_t> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    Vector row_vector(std::size_t i) const { return Vector(row(i).begin(), row(i).end()); }

    FqMatrix transpose() const {
        FqMatrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    FqMatrix scaled(elem_t s) const {
        FqMatrix m = *this;
        for (auto& x : m.data_) x = field_.mul(x, s % field_.q());
        return m;
    }

    FqMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw invalid_argument("submatrix out of range");
        FqMatrix m(field_, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
        return m;
    }

    FqMatrix select_columns(std::span<const std::size_t> cols) const {
        FqMatrix m(field_, rows_, cols.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = (*this)(i, cols[j]);
        return m;
    }

    void append_row(std::span<const elem_t> r) {
        if (rows_ > 0 && r.size() != cols_) throw invalid_argument("appended row has wrong length");
        if (rows_ == 0) cols_ = r.size();
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    friend bool operator==(const FqMatrix& a, const FqMatrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    bool is_identity() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != (i == j ? 1u : 0u)) return false;
        return true;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](elem_t x) { return x == 0; });
    }

  private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<elem_t> data_;
};

inline FqMatrix operator*(const FqMatrix& a, const FqMatrix& b) {
    if (a.cols() != b.rows()) throw invalid_argument("matrix product: inner dimensions differ");
    if (!(a.field() == b.field())) throw invalid_argument("matrix product: fields differ");
    const auto& f = a.field();
    FqMatrix c(f, a.rows(), b.cols());
    std::vector<std::uint64_t> acc(b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const std::uint64_t x = a(i, l);
            if (x == 0) continue;
            const auto brow = b.row(l);
            for (std::size_t j = 0; j < b.cols(); ++j) acc[j] += x * brow[j];
            // q <= 2^20 so each term is < 2^40; flush well before overflow.
            if ((l & 0xFFF) == 0xFFF)
                for (auto& v : acc) v %= f.q();
        }
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = static_cast<elem_t>(acc[j] % f.q());
    }
    return c;
}

inline FqMatrix operator+(const FqMatrix& a, const FqMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw invalid_argument("matrix sum: shapes differ");
    FqMatrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field().add(a(i, j), b(i, j));
    return c;
}

/// Row vector times matrix.
inline Vector operator*(std::span<const elem_t> v, const FqMatrix& m) {
    if (v.size() != m.rows()) throw invalid_argument("vector-matrix product: length mismatch");
    std::vector<std::uint64_t> acc(m.cols(), 0);
    for (std::size_t l = 0; l < v.size(); ++l) {
        if (v[l] == 0) continue;
        const auto r = m.row(l);
        for (std::size_t j = 0; j < m.cols(); ++j) acc[j] += std::uint64_t{v[l]} * r[j];
    }
    Vector out(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] = static_cast<elem_t>(acc[j] % m.field().q());
    return out;
}

inline FqMatrix hstack(const FqMatrix& a, const FqMatrix& b) {
    if (a.rows() != b.rows()) throw invalid_argument("hstack: row counts differ");
    FqMatrix c(a.field(), a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::copy(a.row(i).begin(), a.row(i).end(), c.row(i).begin());
        std::copy(b.row(i).begin(), b.row(i).end(), c.row(i).begin() + static_cast<std::ptrdiff_t>(a.cols()));
    }
    return c;
}

inline FqMatrix vstack(const FqMatrix& a, const FqMatrix& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw invalid_argument("vstack: column counts differ");
    FqMatrix c = a;
    for (std::size_t i = 0; i < b.rows(); ++i) c.append_row(b.row(i));
    return c;
}

/// Block-diagonal matrix with the given blocks.
inline FqMatrix block_diagonal(const std::vector<FqMatrix>& blocks) {
    if (blocks.empty()) throw invalid_argument("block_diagonal of no blocks");
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) r += b.rows(), c += b.cols();
    FqMatrix m(blocks.front().field(), r, c);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
        r0 += b.rows();
        c0 += b.cols();
    }
    return m;
}

// Gaussian elimination ------------------------------------------------------

/// In-place Gauss-Jordan elimination keeping all rows. Pivot columns are searched in the order
/// given by `column_order` (left to right when empty); in each column the first nonzero row
/// from the top is the pivot, which makes the result deterministic. Returns the pivot column of
/// each of the leading rows; rows past the pivot count are zero on every searched column.
inline std::vector<std::size_t> eliminate(FqMatrix& m, std::span<const std::size_t> column_order = {}) {
    const auto& f = m.field();
    std::vector<std::size_t> order;
    if (column_order.empty()) {
        order.resize(m.cols());
        std::iota(order.begin(), order.end(), std::size_t{0});
    } else {
        order.assign(column_order.begin(), column_order.end());
    }
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col : order) {
        if (r == m.rows()) break;
        std::size_t p = r;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        const elem_t inv = f.inv(m(r, col));
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, col) == 0) continue;
            const elem_t factor = m(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

struct RowEchelon {
    FqMatrix reduced;                 // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;  // pivot column of each row
    std::size_t rank() const noexcept { return pivots.size(); }
};

inline RowEchelon row_echelon(FqMatrix m, std::span<const std::size_t> column_order = {}) {
    auto pivots = eliminate(m, column_order);
    const std::size_t r = pivots.size();
    return {m.submatrix(0, 0, r, m.cols()), std::move(pivots)};
}

inline std::size_t rank(const FqMatrix& m) { return row_echelon(m).rank(); }

inline elem_t determinant(FqMatrix m) {
    if (!m.is_square()) throw invalid_argument("determinant of a non-square matrix");
    const auto& f = m.field();
    const std::size_t n = m.rows();
    elem_t det = 1 % f.q();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = f.neg(det);
        }
        det = f.mul(det, m(c, c));
        const elem_t inv = f.inv(m(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            const elem_t factor = f.mul(m(i, c), inv);
            for (std::size_t j = c; j < n; ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(c, j)));
        }
    }
    return det;
}

inline FqMatrix inverse(const FqMatrix& m) {
    if (!m.is_square()) throw invalid_argument("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    auto e = row_echelon(hstack(m, FqMatrix::identity(m.field(), n)));
    if (e.rank() < n || e.pivots[n - 1] != n - 1) throw not_found("matrix is singular");
    return e.reduced.submatrix(0, n, n, n);
}

/// Basis of the right null space {x : m x^T = 0}, as rows.
inline FqMatrix null_space(const FqMatrix& m) {
    const auto& f = m.field();
    auto e = row_echelon(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    FqMatrix basis(f, 0, m.cols());
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivots[i]] = f.neg(e.reduced(i, free));
        basis.append_row(v);
    }
    return basis;
}

// Orthogonality --------------------------------------------------------------

inline bool is_orthogonal(const FqMatrix& a) {
    if (!a.is_square()) throw invalid_argument("orthogonality test needs a square matrix");
    return (a * a.transpose()).is_identity();
}

inline bool is_neg_orthogonal(const FqMatrix& a) {
    if (!a.is_square()) throw invalid_argument("negative-orthogonality test needs a square matrix");
    const auto g = a * a.transpose();
    const elem_t minus_one = a.field().neg(1 % a.field().q());
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (g(i, j) != (i == j ? minus_one : 0u)) return false;
    return true;
}

/// Matrix sending e_i to e_{perm[i]}: row i has its 1 in column perm[i].
inline FqMatrix permutation_matrix(std::span<const std::size_t> perm, const PrimeField& f) {
    const std::size_t n = perm.size();
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) throw invalid_argument("permutation_matrix: input is not a bijection");
        seen[p] = true;
    }
    FqMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, perm[i]) = 1;
    return m;
}

/// A {0,1}-vector of length n and weight exactly 4, stored as its support.
class BinaryVector4 {
  public:
    BinaryVector4(std::size_t n, std::array<std::size_t, 4> support) : n_(n), support_(support) {
        std::sort(support_.begin(), support_.end());
        if (std::adjacent_find(support_.begin(), support_.end()) != support_.end())
            throw invalid_argument("weight-4 vector support has repeated indices");
        if (support_.back() >= n) throw invalid_argument("weight-4 vector support does not fit in length n");
    }

    /// Support {0, 1, 2, 3}.
    static BinaryVector4 leading(std::size_t n) { return BinaryVector4(n, {0, 1, 2, 3}); }

    std::size_t length() const noexcept { return n_; }
    const std::array<std::size_t, 4>& support() const noexcept { return support_; }
    bool contains(std::size_t i) const noexcept {
        return std::find(support_.begin(), support_.end(), i) != support_.end();
    }
    Vector to_vector() const {
        Vector v(n_, 0);
        for (auto i : support_) v[i] = 1;
        return v;
    }

  private:
    std::size_t n_;
    std::array<std::size_t, 4> support_;
};

/// T = I + u^T u for q = 2, I + theta u^T u otherwise. Symmetric involution.
inline FqMatrix transvection_matrix(const BinaryVector4& u, const PrimeField& f) {
    const std::size_t n = u.length();
    if (n < 4) throw invalid_argument("transvection needs n >= 4");
    const elem_t scale = f.is_odd() ? theta(f) : 1;
    FqMatrix t = FqMatrix::identity(f, n);
    for (auto i : u.support())
        for (auto j : u.support()) t(i, j) = f.add(t(i, j), scale);
    return t;
}

// Text format -----------------------------------------------------------------
// "q rows cols" then one line per row, single spaces, LF, no trailing whitespace.

inline std::string to_text(const FqMatrix& m) {
    std::string s = std::to_string(m.field().q()) + ' ' + std::to_string(m.rows()) + ' ' + std::to_string(m.cols()) + '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) s += ' ';
            s += std::to_string(m(i, j));
        }
        s += '\n';
    }
    return s;
}

inline FqMatrix matrix_from_text(std::istream& in) {
    std::uint64_t q = 0;
    std::size_t rows = 0, cols = 0;
    if (!(in >> q >> rows >> cols)) throw invalid_argument("matrix text: bad header");
    PrimeField f(q);
    std::vector<elem_t> data(rows * cols);
    for (auto& x : data) {
        std::int64_t v;
        if (!(in >> v)) throw invalid_argument("matrix text: too few entries");
        if (v < 0 || static_cast<std::uint64_t>(v) >= q) throw invalid_argument("matrix text: entry out of range");
        x = static_cast<elem_t>(v);
    }
    return FqMatrix(f, rows, cols, std::move(data));
}

inline FqMatrix matrix_from_text(const std::string& s) {
    std::istringstream in(s);
    return matrix_from_text(in);
}

inline std::ostream& operator<<(std::ostream& os, const FqMatrix& m) { return os << to_text(m); }

}  // namespace sdc

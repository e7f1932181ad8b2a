#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "field.hpp"

namespace lsa {

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Vector {
public:
    Vector() = default;
    Vector(const Field& f, std::size_t n) : f_(&f), v_(n, 0) {}
    Vector(const Field& f, std::vector<Bits> v) : f_(&f), v_(std::move(v)) {
        for (Bits b : v_)
            if (!f.contains(b)) throw FieldError("entry " + f.literal(b) + " not in " + f.describe());
    }
    static Vector unit(const Field& f, std::size_t n, std::size_t i) {
        Vector v(f, n);
        v.v_.at(i) = 1;
        return v;
    }

    const Field& field() const { return *f_; }
    const Field* field_ptr() const { return f_; }
    std::size_t size() const { return v_.size(); }
    Bits operator[](std::size_t i) const { return v_[i]; }
    Bits& operator[](std::size_t i) { return v_[i]; }
    const std::vector<Bits>& data() const { return v_; }

    bool is_zero() const {
        return std::all_of(v_.begin(), v_.end(), [](Bits b) { return b == 0; });
    }

    Vector& operator+=(const Vector& o) {
        check(o);
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] ^= o.v_[i];
        return *this;
    }
    Vector operator+(const Vector& o) const {
        Vector r = *this;
        r += o;
        return r;
    }
    Vector operator-(const Vector& o) const { return *this + o; }
    Vector scaled(Bits s) const {
        Vector r = *this;
        for (auto& b : r.v_) b = f_->mul(b, s);
        return r;
    }
    // this += s * o
    void axpy(Bits s, const Vector& o) {
        check(o);
        if (s == 0) return;
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] ^= f_->mul(s, o.v_[i]);
    }
    Bits dot(const Vector& o) const {
        check(o);
        Bits acc = 0;
        for (std::size_t i = 0; i < v_.size(); ++i) acc ^= f_->mul(v_[i], o.v_[i]);
        return acc;
    }
    bool operator==(const Vector& o) const { return f_ == o.f_ && v_ == o.v_; }
    bool operator!=(const Vector& o) const { return !(*this == o); }
    bool operator<(const Vector& o) const { return v_ < o.v_; }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < v_.size(); ++i) {
            if (i) s += ",";
            s += f_->literal(v_[i]);
        }
        return s + ")";
    }

private:
    void check(const Vector& o) const {
        if (f_ != o.f_) throw FieldError("vector field mismatch");
        if (v_.size() != o.v_.size())
            throw DimensionError("vector length mismatch: " + std::to_string(v_.size()) + " vs " +
                                 std::to_string(o.v_.size()));
    }
    const Field* f_ = nullptr;
    std::vector<Bits> v_;
};

// Dense row-major matrix. Operators act on column vectors: column j is the image of e_j.
class Matrix {
public:
    Matrix() = default;
    Matrix(const Field& f, std::size_t rows, std::size_t cols) : f_(&f), r_(rows), c_(cols), a_(rows * cols, 0) {}
    static Matrix identity(const Field& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }
    static Matrix from_rows(const Field& f, const std::vector<std::vector<Bits>>& rows) {
        std::size_t c = rows.empty() ? 0 : rows[0].size();
        Matrix m(f, rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw DimensionError("ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j) {
                if (!f.contains(rows[i][j])) throw FieldError("entry out of field");
                m.set(i, j, rows[i][j]);
            }
        }
        return m;
    }
    static Matrix from_columns(const Field& f, std::size_t rows, const std::vector<Vector>& cols) {
        Matrix m(f, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
        return m;
    }
    static Matrix from_row_vectors(const Field& f, std::size_t cols, const std::vector<Vector>& rows) {
        Matrix m(f, rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
        return m;
    }

    const Field& field() const { return *f_; }
    const Field* field_ptr() const { return f_; }
    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Bits at(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    void set(std::size_t i, std::size_t j, Bits v) { a_[i * c_ + j] = v; }

    Vector row(std::size_t i) const {
        Vector v(*f_, c_);
        for (std::size_t j = 0; j < c_; ++j) v[j] = at(i, j);
        return v;
    }
    Vector col(std::size_t j) const {
        Vector v(*f_, r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = at(i, j);
        return v;
    }
    void set_row(std::size_t i, const Vector& v) {
        if (v.size() != c_) throw DimensionError("row length mismatch");
        for (std::size_t j = 0; j < c_; ++j) set(i, j, v[j]);
    }
    void set_col(std::size_t j, const Vector& v) {
        if (v.size() != r_) throw DimensionError("column length mismatch");
        for (std::size_t i = 0; i < r_; ++i) set(i, j, v[i]);
    }

    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](Bits b) { return b == 0; });
    }

    Matrix operator*(const Matrix& o) const {
        if (f_ != o.f_) throw FieldError("matrix field mismatch");
        if (c_ != o.r_) throw DimensionError("matrix product shape mismatch");
        Matrix m(*f_, r_, o.c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t k = 0; k < c_; ++k) {
                Bits a = at(i, k);
                if (!a) continue;
                for (std::size_t j = 0; j < o.c_; ++j) m.a_[i * o.c_ + j] ^= f_->mul(a, o.at(k, j));
            }
        return m;
    }
    Vector operator*(const Vector& v) const {
        if (v.size() != c_) throw DimensionError("matrix-vector shape mismatch");
        if (f_ != v.field_ptr()) throw FieldError("matrix-vector field mismatch");
        Vector out(*f_, r_);
        for (std::size_t i = 0; i < r_; ++i) {
            Bits acc = 0;
            for (std::size_t j = 0; j < c_; ++j) acc ^= f_->mul(at(i, j), v[j]);
            out[i] = acc;
        }
        return out;
    }
    Matrix operator+(const Matrix& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw DimensionError("matrix sum shape mismatch");
        Matrix m = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] ^= o.a_[i];
        return m;
    }
    Matrix operator-(const Matrix& o) const { return *this + o; }
    Matrix scaled(Bits s) const {
        Matrix m = *this;
        for (auto& b : m.a_) b = f_->mul(b, s);
        return m;
    }
    Matrix transpose() const {
        Matrix m(*f_, c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m.set(j, i, at(i, j));
        return m;
    }
    bool operator==(const Matrix& o) const { return f_ == o.f_ && r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < r_; ++i) {
            if (i) s += ";";
            for (std::size_t j = 0; j < c_; ++j) s += (j ? " " : "") + f_->literal(at(i, j));
        }
        return s + "]";
    }

private:
    const Field* f_ = nullptr;
    std::size_t r_ = 0, c_ = 0;
    std::vector<Bits> a_;
};

struct Rref {
    Matrix reduced;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row, increasing
};

// Pivot = first nonzero entry scanning columns left to right, rows top to bottom.
inline Rref rref(Matrix m) {
    const Field& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m.at(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                Bits t = m.at(p, j);
                m.set(p, j, m.at(row, j));
                m.set(row, j, t);
            }
        Bits inv = f.inv(m.at(row, col));
        for (std::size_t j = 0; j < m.cols(); ++j) m.set(row, j, f.mul(m.at(row, j), inv));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row) continue;
            Bits s = m.at(i, col);
            if (!s) continue;
            for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, m.at(i, j) ^ f.mul(s, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

// Basis of {v : m v = 0}, one vector per free column, free entry set to 1.
inline std::vector<Vector> kernel(const Matrix& m) {
    Rref r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : r.pivots) is_pivot[p] = true;
    std::vector<Vector> out;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v(m.field(), m.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = r.reduced.at(i, free);
        out.push_back(std::move(v));
    }
    return out;
}

inline std::optional<Vector> solve(const Matrix& m, const Vector& b) {
    if (b.size() != m.rows()) throw DimensionError("solve: rhs length mismatch");
    Matrix aug(m.field(), m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
        aug.set(i, m.cols(), b[i]);
    }
    Rref r = rref(aug);
    if (!r.pivots.empty() && r.pivots.back() == m.cols()) return std::nullopt;
    Vector x(m.field(), m.cols());
    for (std::size_t i = 0; i < r.pivots.size(); ++i) x[r.pivots[i]] = r.reduced.at(i, m.cols());
    return x;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("inverse of non-square matrix");
    std::size_t n = m.rows();
    Matrix aug(m.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.set(i, j, m.at(i, j));
        aug.set(i, n + i, 1);
    }
    Rref r = rref(aug);
    if (r.pivots.size() < n || r.pivots[n - 1] != n - 1) return std::nullopt;
    Matrix inv(m.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.set(i, j, r.reduced.at(i, n + j));
    return inv;
}

// Delta with B(Delta e_i, e_j) = target(e_i, e_j), i.e. Delta^T * gram = target.
inline std::optional<Matrix> solve_bilinear(const Matrix& gram, const Matrix& target) {
    if (gram.rows() != gram.cols() || target.rows() != gram.rows() || target.cols() != gram.cols())
        throw DimensionError("solve_bilinear: shape mismatch");
    auto gi = inverse(gram.transpose());
    if (!gi) return std::nullopt;
    return *gi * target.transpose();
}

// Subspace of F^n stored as a reduced row-echelon basis, so equality is exact comparison.
class Subspace {
public:
    Subspace() = default;
    Subspace(const Field& f, std::size_t ambient) : f_(&f), n_(ambient), rows_(f, 0, ambient) {}

    static Subspace span(const Field& f, std::size_t ambient, const std::vector<Vector>& vs) {
        Subspace s(f, ambient);
        if (vs.empty()) return s;
        Matrix m = Matrix::from_row_vectors(f, ambient, vs);
        Rref r = rref(m);
        std::vector<Vector> basis;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) basis.push_back(r.reduced.row(i));
        s.rows_ = Matrix::from_row_vectors(f, ambient, basis);
        s.pivots_ = r.pivots;
        return s;
    }
    static Subspace whole(const Field& f, std::size_t n) {
        std::vector<Vector> vs;
        for (std::size_t i = 0; i < n; ++i) vs.push_back(Vector::unit(f, n, i));
        return span(f, n, vs);
    }
    // {v : rows * v = 0}
    static Subspace solutions(const Matrix& constraints) {
        return span(constraints.field(), constraints.cols(), kernel(constraints));
    }

    const Field& field() const { return *f_; }
    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return rows_.rows(); }
    bool is_zero() const { return dim() == 0; }
    std::vector<Vector> basis() const {
        std::vector<Vector> out;
        for (std::size_t i = 0; i < dim(); ++i) out.push_back(rows_.row(i));
        return out;
    }
    const Matrix& basis_rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool contains(const Vector& v) const {
        Vector r = v;
        for (std::size_t i = 0; i < dim(); ++i) {
            Bits c = r[pivots_[i]];
            if (c) r.axpy(c, rows_.row(i));
        }
        return r.is_zero();
    }
    bool contains(const Subspace& o) const {
        for (const auto& v : o.basis())
            if (!contains(v)) return false;
        return true;
    }
    Subspace operator+(const Subspace& o) const {
        auto vs = basis();
        for (auto& v : o.basis()) vs.push_back(v);
        return span(*f_, n_, vs);
    }
    // Annihilator under the standard pairing.
    Subspace annihilator() const {
        if (dim() == 0) return whole(*f_, n_);
        return span(*f_, n_, kernel(rows_));
    }
    Subspace intersect(const Subspace& o) const { return (annihilator() + o.annihilator()).annihilator(); }
    bool operator==(const Subspace& o) const { return n_ == o.n_ && rows_ == o.rows_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    // Coordinates of v in the stored basis; v must lie in the subspace.
    std::optional<Vector> coordinates(const Vector& v) const {
        Vector c(*f_, dim());
        Vector r = v;
        for (std::size_t i = 0; i < dim(); ++i) {
            c[i] = r[pivots_[i]];
            if (c[i]) r.axpy(c[i], rows_.row(i));
        }
        if (!r.is_zero()) return std::nullopt;
        return c;
    }

    // Extends the stored basis to a basis of F^n with unit vectors, first-fit.
    std::vector<Vector> complement_basis() const {
        std::vector<bool> used(n_, false);
        for (auto p : pivots_) used[p] = true;
        std::vector<Vector> out;
        for (std::size_t j = 0; j < n_; ++j)
            if (!used[j]) out.push_back(Vector::unit(*f_, n_, j));
        return out;
    }

private:
    const Field* f_ = nullptr;
    std::size_t n_ = 0;
    Matrix rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace lsa

#pragma once

// Elements of V(x)V and V(x)V(x)V as dense coefficient arrays.

#include <string>
#include <vector>

#include "linalg.hpp"

namespace lsa {

// t = sum t(i,j) e_i (x) e_j, stored as an n x n matrix.
class Tensor2 {
public:
    Tensor2(const Field& f, std::size_t n) : m_(f, n, n) {}
    explicit Tensor2(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw DimensionError("Tensor2 needs a square coefficient array");
    }
    static Tensor2 pure(const Vector& a, const Vector& b) {
        Tensor2 t(a.field(), a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) t.m_.set(i, j, a.field().mul(a[i], b[j]));
        return t;
    }

    const Field& field() const { return m_.field(); }
    std::size_t dim() const { return m_.rows(); }
    Bits at(std::size_t i, std::size_t j) const { return m_.at(i, j); }
    void set(std::size_t i, std::size_t j, Bits v) { m_.set(i, j, v); }
    const Matrix& matrix() const { return m_; }
    bool is_zero() const { return m_.is_zero(); }
    bool is_symmetric() const { return m_ == m_.transpose(); }

    Tensor2 operator+(const Tensor2& o) const { return Tensor2(m_ + o.m_); }
    Tensor2 scaled(Bits s) const { return Tensor2(m_.scaled(s)); }
    Tensor2 twisted() const { return Tensor2(m_.transpose()); }
    bool operator==(const Tensor2& o) const { return m_ == o.m_; }
    bool operator!=(const Tensor2& o) const { return !(*this == o); }

    // (A (x) B) t for operators given as matrices.
    Tensor2 apply(const Matrix& a, const Matrix& b) const { return Tensor2(a * m_ * b.transpose()); }
    // Module action through an operator acting as a derivation: A(x)1 + 1(x)A.
    Tensor2 act(const Matrix& a) const { return Tensor2(a * m_ + m_ * a.transpose()); }
    // Contraction of the first leg with a covector: sum f(e_i) t(i,j) e_j.
    Vector contract_first(const Vector& f) const { return m_.transpose() * f; }
    Vector contract_second(const Vector& f) const { return m_ * f; }

    std::string str() const { return m_.str(); }

private:
    Matrix m_;
};

class Tensor3 {
public:
    Tensor3(const Field& f, std::size_t n) : f_(&f), n_(n), a_(n * n * n, 0) {}
    const Field& field() const { return *f_; }
    std::size_t dim() const { return n_; }
    Bits at(std::size_t i, std::size_t j, std::size_t k) const { return a_[(i * n_ + j) * n_ + k]; }
    void add(std::size_t i, std::size_t j, std::size_t k, Bits v) { a_[(i * n_ + j) * n_ + k] ^= v; }
    bool is_zero() const {
        for (auto v : a_)
            if (v) return false;
        return true;
    }
    bool operator==(const Tensor3& o) const { return f_ == o.f_ && n_ == o.n_ && a_ == o.a_; }
    Tensor3 operator+(const Tensor3& o) const {
        Tensor3 t = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) t.a_[i] ^= o.a_[i];
        return t;
    }
    // First nonzero coefficient, for diagnostics.
    std::string first_nonzero(const std::vector<std::string>& names) const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k)
                    if (at(i, j, k))
                        return f_->literal(at(i, j, k)) + " " + names[i] + "(x)" + names[j] + "(x)" + names[k];
        return "0";
    }

private:
    const Field* f_;
    std::size_t n_;
    std::vector<Bits> a_;
};

}  // namespace lsa

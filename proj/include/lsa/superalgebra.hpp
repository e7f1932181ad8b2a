#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "field.hpp"
#include "linalg.hpp"
#include "report.hpp"

namespace lsa {

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

inline Parity operator+(Parity a, Parity b) {
    return static_cast<Parity>(static_cast<unsigned>(a) ^ static_cast<unsigned>(b));
}
inline const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }
inline int digit(Parity p) { return p == Parity::Even ? 0 : 1; }

struct BasisVector {
    std::string name;
    Parity parity;
};

class InvariantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Structure constants in char 2: the bracket table is symmetric with zero diagonal,
// odd basis vectors carry a squaring. For odd x = sum l_i e_i,
//   s(x) = sum l_i^2 s(e_i) + sum_{i<j} l_i l_j [e_i,e_j],
// so brackets of odd pairs are the polarization of s by construction.
//
// Basis-level checks suffice for verify(): both sides of the Jacobi identity are
// trilinear; [s(x),y] + [x,[x,y]] is quadratic in x with polarization equal to the
// Jacobi expression on (x, x', y), so it vanishes iff it vanishes on odd basis
// vectors and the ordinary Jacobi identity holds.
class LieSuperAlgebra {
public:
    LieSuperAlgebra() = default;
    LieSuperAlgebra(const Field& f, std::vector<BasisVector> basis, bool super = true)
        : f_(&f), basis_(std::move(basis)), super_(super) {
        const std::size_t n = basis_.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (basis_[i].name == basis_[j].name) throw InvariantError("duplicate basis name '" + basis_[i].name + "'");
        br_.assign(n * n * n, 0);
        sq_.assign(n * n, 0);
    }

    const Field& field() const { return *f_; }
    std::size_t dim() const { return basis_.size(); }
    bool is_super() const { return super_; }
    const std::vector<BasisVector>& basis() const { return basis_; }
    const std::string& name(std::size_t i) const { return basis_[i].name; }
    Parity parity(std::size_t i) const { return basis_[i].parity; }
    std::vector<Parity> parities() const {
        std::vector<Parity> p;
        for (auto& b : basis_) p.push_back(b.parity);
        return p;
    }
    std::size_t dim_of(Parity p) const {
        std::size_t c = 0;
        for (auto& b : basis_) c += b.parity == p;
        return c;
    }
    std::vector<std::size_t> indices(Parity p) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < dim(); ++i)
            if (basis_[i].parity == p) out.push_back(i);
        return out;
    }
    std::optional<std::size_t> index_of(const std::string& n) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (basis_[i].name == n) return i;
        return std::nullopt;
    }

    Bits c(std::size_t i, std::size_t j, std::size_t k) const { return br_[(i * dim() + j) * dim() + k]; }
    Bits q(std::size_t i, std::size_t k) const { return sq_[i * dim() + k]; }

    Vector zero() const { return Vector(*f_, dim()); }
    Vector unit(std::size_t i) const { return Vector::unit(*f_, dim(), i); }

    void set_bracket(std::size_t i, std::size_t j, const Vector& v) {
        check_vec(v);
        if (i == j && !v.is_zero())
            throw InvariantError("[" + name(i) + "," + name(i) + "] must vanish");
        for (std::size_t k = 0; k < dim(); ++k) {
            br_[(i * dim() + j) * dim() + k] = v[k];
            br_[(j * dim() + i) * dim() + k] = v[k];
        }
    }
    void set_square(std::size_t i, const Vector& v) {
        check_vec(v);
        if (!super_) throw InvariantError("graded Lie algebra carries no squaring");
        if (parity(i) != Parity::Odd && !v.is_zero())
            throw InvariantError("squaring defined on odd basis only, '" + name(i) + "' is even");
        for (std::size_t k = 0; k < dim(); ++k) sq_[i * dim() + k] = v[k];
    }

    Vector bracket_basis(std::size_t i, std::size_t j) const {
        Vector v(*f_, dim());
        for (std::size_t k = 0; k < dim(); ++k) v[k] = c(i, j, k);
        return v;
    }
    Vector square_basis(std::size_t i) const {
        Vector v(*f_, dim());
        for (std::size_t k = 0; k < dim(); ++k) v[k] = q(i, k);
        return v;
    }

    Vector bracket(const Vector& x, const Vector& y) const {
        check_vec(x);
        check_vec(y);
        const std::size_t n = dim();
        Vector out(*f_, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!x[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (!y[j]) continue;
                Bits s = f_->mul(x[i], y[j]);
                const Bits* row = &br_[(i * n + j) * n];
                for (std::size_t k = 0; k < n; ++k)
                    if (row[k]) out[k] ^= f_->mul(s, row[k]);
            }
        }
        return out;
    }

    Vector squaring(const Vector& x) const {
        check_vec(x);
        if (!super_) throw InvariantError("squaring requested on a graded Lie algebra");
        for (std::size_t i = 0; i < dim(); ++i)
            if (x[i] && parity(i) == Parity::Even)
                throw InvariantError("squaring is defined on odd elements only");
        Vector out(*f_, dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            if (!x[i]) continue;
            out.axpy(f_->square(x[i]), square_basis(i));
            for (std::size_t j = i + 1; j < dim(); ++j)
                if (x[j]) out.axpy(f_->mul(x[i], x[j]), bracket_basis(i, j));
        }
        return out;
    }

    // Matrix of ad_x, columns are [x, e_j].
    Matrix ad(const Vector& x) const {
        Matrix m(*f_, dim(), dim());
        for (std::size_t j = 0; j < dim(); ++j) m.set_col(j, bracket(x, unit(j)));
        return m;
    }

    bool is_homogeneous(const Vector& v, Parity p) const {
        for (std::size_t i = 0; i < dim(); ++i)
            if (v[i] && parity(i) != p) return false;
        return true;
    }
    std::optional<Parity> parity_of(const Vector& v) const {
        if (is_homogeneous(v, Parity::Even)) return Parity::Even;
        if (is_homogeneous(v, Parity::Odd)) return Parity::Odd;
        return std::nullopt;
    }
    Vector part(const Vector& v, Parity p) const {
        Vector out = v;
        for (std::size_t i = 0; i < dim(); ++i)
            if (parity(i) != p) out[i] = 0;
        return out;
    }

    // Structural invariants: zero diagonal, homogeneity of brackets and squares.
    void validate() const {
        const std::size_t n = dim();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (c(i, i, k)) throw InvariantError("[" + name(i) + "," + name(i) + "] must vanish");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (c(i, j, k) != c(j, i, k)) throw InvariantError("bracket table is not symmetric");
                    if (c(i, j, k) && parity(k) != parity(i) + parity(j))
                        throw InvariantError("bracket [" + name(i) + "," + name(j) + "] has a component on " +
                                             name(k) + " of the wrong parity");
                }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (q(i, k)) {
                    if (!super_) throw InvariantError("graded Lie algebra carries a squaring");
                    if (parity(i) != Parity::Odd) throw InvariantError("squaring of even '" + name(i) + "'");
                    if (parity(k) != Parity::Even)
                        throw InvariantError("s(" + name(i) + ") has an odd component on " + name(k));
                }
    }

    bool same_tables(const LieSuperAlgebra& o) const {
        return f_ == o.f_ && super_ == o.super_ && br_ == o.br_ && sq_ == o.sq_ && parities() == o.parities();
    }
    bool operator==(const LieSuperAlgebra& o) const {
        if (!same_tables(o) || dim() != o.dim()) return false;
        for (std::size_t i = 0; i < dim(); ++i)
            if (basis_[i].name != o.basis_[i].name) return false;
        return true;
    }

    std::string show(const Vector& v) const {
        std::string s;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (!v[i]) continue;
            if (!s.empty()) s += "+";
            s += (v[i] == 1 ? "" : f_->literal(v[i]) + "*") + name(i);
        }
        return s.empty() ? "0" : s;
    }

private:
    void check_vec(const Vector& v) const {
        if (v.size() != dim()) throw DimensionError("element has wrong length for this algebra");
        if (v.field_ptr() != f_) throw FieldError("element over a different field");
    }

    const Field* f_ = nullptr;
    std::vector<BasisVector> basis_;
    bool super_ = true;
    std::vector<Bits> br_;
    std::vector<Bits> sq_;
};

inline Report verify(const LieSuperAlgebra& g) {
    Report rep;
    const std::size_t n = g.dim();
    rep.pass("jacobi");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Vector x = g.unit(i), y = g.unit(j), z = g.unit(k);
                Vector s = g.bracket(x, g.bracket_basis(j, k)) + g.bracket(y, g.bracket_basis(k, i)) +
                           g.bracket(z, g.bracket_basis(i, j));
                if (!s.is_zero())
                    rep.fail("jacobi", "(" + g.name(i) + "," + g.name(j) + "," + g.name(k) + ") -> " + g.show(s));
            }
    // Triples with a repeated entry reduce to [x,[x,y]] + [x,[y,x]] = 0 by symmetry.
    if (!g.is_super()) return rep;
    rep.pass("squaring-jacobi");
    for (std::size_t i : g.indices(Parity::Odd))
        for (std::size_t j = 0; j < n; ++j) {
            Vector lhs = g.bracket(g.square_basis(i), g.unit(j));
            Vector rhs = g.bracket(g.unit(i), g.bracket_basis(i, j));
            if (lhs != rhs)
                rep.fail("squaring-jacobi", "x=" + g.name(i) + " y=" + g.name(j) + ": " + g.show(lhs) +
                                                " vs " + g.show(rhs));
        }
    return rep;
}

// The graded Lie algebra F(g): same brackets, squaring forgotten.
inline LieSuperAlgebra desuperize(const LieSuperAlgebra& g) {
    LieSuperAlgebra h(g.field(), g.basis(), false);
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i + 1; j < g.dim(); ++j) h.set_bracket(i, j, g.bracket_basis(i, j));
    return h;
}

inline Subspace graded_part(const LieSuperAlgebra& g, Parity p) {
    std::vector<Vector> vs;
    for (std::size_t i : g.indices(p)) vs.push_back(g.unit(i));
    return Subspace::span(g.field(), g.dim(), vs);
}

inline bool is_graded(const LieSuperAlgebra& g, const Subspace& v) {
    return v.dim() == v.intersect(graded_part(g, Parity::Even)).dim() +
                          v.intersect(graded_part(g, Parity::Odd)).dim();
}

// Homogeneous basis of a graded subspace: even vectors first.
inline std::vector<Vector> homogeneous_basis(const LieSuperAlgebra& g, const Subspace& v) {
    if (!is_graded(g, v)) throw InvariantError("subspace is not graded");
    auto out = v.intersect(graded_part(g, Parity::Even)).basis();
    for (auto& w : v.intersect(graded_part(g, Parity::Odd)).basis()) out.push_back(w);
    return out;
}

inline Subspace center(const LieSuperAlgebra& g) {
    const std::size_t n = g.dim();
    Matrix m(g.field(), n * n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) m.set(j * n + k, i, g.c(i, j, k));
    return Subspace::solutions(m);
}

// span{[u,v] : u,v in V} + span{s(v) : v in V_1}
inline Subspace derived_of(const LieSuperAlgebra& g, const Subspace& v) {
    auto b = homogeneous_basis(g, v);
    std::vector<Vector> out;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) out.push_back(g.bracket(b[i], b[j]));
    if (g.is_super())
        for (auto& w : b)
            if (g.is_homogeneous(w, Parity::Odd) && !w.is_zero()) out.push_back(g.squaring(w));
    return Subspace::span(g.field(), g.dim(), out);
}

// g^(0) = g, g^(i+1) = [g^(i), g^(i)] + s(g^(i)_1); stops once stable.
inline std::vector<Subspace> derived_series(const LieSuperAlgebra& g) {
    std::vector<Subspace> out{Subspace::whole(g.field(), g.dim())};
    while (true) {
        Subspace next = derived_of(g, out.back());
        if (next == out.back()) break;
        out.push_back(next);
    }
    return out;
}

inline Subspace derived_algebra(const LieSuperAlgebra& g, std::size_t i) {
    Subspace cur = Subspace::whole(g.field(), g.dim());
    for (std::size_t k = 0; k < i; ++k) cur = derived_of(g, cur);
    return cur;
}

inline bool is_ideal(const LieSuperAlgebra& g, const Subspace& v) {
    if (!is_graded(g, v)) return false;
    for (auto& w : v.basis())
        for (std::size_t j = 0; j < g.dim(); ++j)
            if (!v.contains(g.bracket(w, g.unit(j)))) return false;
    if (g.is_super())
        for (auto& w : homogeneous_basis(g, v))
            if (g.is_homogeneous(w, Parity::Odd) && !v.contains(g.squaring(w))) return false;
    return true;
}

inline bool is_subalgebra(const LieSuperAlgebra& g, const Subspace& v) {
    if (!is_graded(g, v)) return false;
    auto b = homogeneous_basis(g, v);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            if (!v.contains(g.bracket(b[i], b[j]))) return false;
    if (g.is_super())
        for (auto& w : b)
            if (g.is_homogeneous(w, Parity::Odd) && !v.contains(g.squaring(w))) return false;
    return true;
}

inline std::string fresh_name(const std::vector<BasisVector>& used, std::string n) {
    auto taken = [&](const std::string& s) {
        for (auto& b : used)
            if (b.name == s) return true;
        return false;
    };
    while (taken(n)) n += "'";
    return n;
}

inline LieSuperAlgebra direct_sum(const LieSuperAlgebra& g, const LieSuperAlgebra& k) {
    if (&g.field() != &k.field()) throw FieldError("direct_sum over different fields");
    if (g.is_super() != k.is_super()) throw InvariantError("direct_sum of a superalgebra and a graded Lie algebra");
    std::vector<BasisVector> basis = g.basis();
    for (auto b : k.basis()) {
        b.name = fresh_name(basis, b.name);
        basis.push_back(b);
    }
    LieSuperAlgebra s(g.field(), basis, g.is_super());
    const std::size_t n = g.dim(), m = k.dim();
    auto embed = [&](const Vector& v, std::size_t off) {
        Vector w = s.zero();
        for (std::size_t i = 0; i < v.size(); ++i) w[off + i] = v[i];
        return w;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) s.set_bracket(i, j, embed(g.bracket_basis(i, j), 0));
        if (g.is_super() && g.parity(i) == Parity::Odd) s.set_square(i, embed(g.square_basis(i), 0));
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) s.set_bracket(n + i, n + j, embed(k.bracket_basis(i, j), n));
        if (k.is_super() && k.parity(i) == Parity::Odd) s.set_square(n + i, embed(k.square_basis(i), n));
    }
    s.validate();
    return s;
}

// Subalgebra spanned by the given homogeneous, independent vectors, in that basis.
inline LieSuperAlgebra restrict(const LieSuperAlgebra& g, const std::vector<Vector>& vectors,
                                std::vector<std::string> names = {}) {
    Subspace v = Subspace::span(g.field(), g.dim(), vectors);
    if (v.dim() != vectors.size()) throw InvariantError("restrict: vectors are linearly dependent");
    if (names.empty())
        for (std::size_t i = 0; i < vectors.size(); ++i) names.push_back("v" + std::to_string(i));
    if (names.size() != vectors.size()) throw DimensionError("restrict: name count mismatch");
    std::vector<BasisVector> basis;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        auto p = g.parity_of(vectors[i]);
        if (!p) throw InvariantError("restrict: vector " + g.show(vectors[i]) + " is not homogeneous");
        if (vectors[i].is_zero()) throw InvariantError("restrict: zero vector");
        basis.push_back({names[i], *p});
    }
    Matrix cols = Matrix::from_columns(g.field(), g.dim(), vectors);
    auto coords = [&](const Vector& w) {
        auto c = solve(cols, w);
        if (!c) throw InvariantError("restrict: subspace not closed, " + g.show(w) + " escapes");
        return *c;
    };
    LieSuperAlgebra r(g.field(), basis, g.is_super());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) r.set_bracket(i, j, coords(g.bracket(vectors[i], vectors[j])));
        if (g.is_super() && basis[i].parity == Parity::Odd) r.set_square(i, coords(g.squaring(vectors[i])));
    }
    r.validate();
    return r;
}

// Operator homogeneous with respect to the grading; column j is the image of e_j.
struct GradedOperator {
    Matrix matrix;
    Parity parity = Parity::Even;
};

inline std::optional<Parity> operator_parity(const std::vector<Parity>& from, const std::vector<Parity>& to,
                                             const Matrix& m) {
    bool even = true, odd = true;
    for (std::size_t k = 0; k < m.rows(); ++k)
        for (std::size_t i = 0; i < m.cols(); ++i)
            if (m.at(k, i)) {
                if (to[k] != from[i]) even = false;
                else odd = false;
            }
    if (even) return Parity::Even;
    if (odd) return Parity::Odd;
    return std::nullopt;
}

inline GradedOperator make_operator(const LieSuperAlgebra& g, const Matrix& m, std::optional<Parity> declared = {}) {
    if (m.rows() != g.dim() || m.cols() != g.dim()) throw DimensionError("operator shape does not match the algebra");
    auto ps = g.parities();
    if (declared) {
        for (std::size_t k = 0; k < m.rows(); ++k)
            for (std::size_t i = 0; i < m.cols(); ++i)
                if (m.at(k, i) && ps[k] != ps[i] + *declared)
                    throw InvariantError(std::string("operator is not ") + to_string(*declared) + ": entry (" +
                                         g.name(k) + "," + g.name(i) + ")");
        return {m, *declared};
    }
    auto p = operator_parity(ps, ps, m);
    if (!p) throw InvariantError("operator is not parity-homogeneous");
    return {m, *p};
}

}  // namespace lsa

#pragma once

// Left-symmetric products x*y = D^{-1}[x, D y] from invertible derivations, and
// the squaring x -> x*x that turns a graded Lie algebra into a Lie superalgebra.

#include <optional>
#include <string>
#include <vector>

#include "derivations.hpp"
#include "doubleext.hpp"
#include "superalgebra.hpp"

namespace lsa {

// Bilinear product given by its values on basis pairs.
class ProductTable {
public:
    ProductTable(const Field& f, std::size_t n) : f_(&f), n_(n), t_(n * n, Vector(f, n)) {}

    const Field& field() const { return *f_; }
    std::size_t dim() const { return n_; }
    const Vector& at(std::size_t i, std::size_t j) const { return t_[i * n_ + j]; }
    Vector& at(std::size_t i, std::size_t j) { return t_[i * n_ + j]; }

    Vector operator()(const Vector& x, const Vector& y) const {
        Vector out(*f_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (!x[i]) continue;
            for (std::size_t j = 0; j < n_; ++j)
                if (y[j]) out.axpy(f_->mul(x[i], y[j]), at(i, j));
        }
        return out;
    }

    // (x*y)*z + x*(y*z)
    Vector associator(const Vector& x, const Vector& y, const Vector& z) const {
        return (*this)((*this)(x, y), z) + (*this)(x, (*this)(y, z));
    }

private:
    const Field* f_;
    std::size_t n_;
    std::vector<Vector> t_;
};

class StarProduct {
public:
    StarProduct(const LieSuperAlgebra& g, GradedOperator delta)
        : g_(g), delta_(std::move(delta)), inverse_(checked_inverse(delta_, g_)), table_(g.field(), g.dim()) {
        for (std::size_t i = 0; i < g_.dim(); ++i)
            for (std::size_t j = 0; j < g_.dim(); ++j)
                table_.at(i, j) = inverse_ * g_.bracket(g_.unit(i), delta_.matrix.col(j));
    }

    const LieSuperAlgebra& algebra() const { return g_; }
    const GradedOperator& delta() const { return delta_; }
    const Matrix& delta_inverse() const { return inverse_; }
    const ProductTable& table() const { return table_; }

    Vector operator()(const Vector& x, const Vector& y) const { return table_(x, y); }
    Vector associator(const Vector& x, const Vector& y, const Vector& z) const { return table_.associator(x, y, z); }

private:
    static Matrix checked_inverse(const GradedOperator& d, const LieSuperAlgebra& g) {
        auto inv = inverse(d.matrix);
        if (!inv) throw PreconditionError("star product: the derivation is singular");
        auto rep = derivation_report(d, desuperize(g));
        if (!rep.ok()) throw PreconditionError("star product: not a derivation: " + rep.first_failure());
        return *inv;
    }

    LieSuperAlgebra g_;
    GradedOperator delta_;
    Matrix inverse_;
    ProductTable table_;
};

// Asso(x,y,z) = Asso(y,x,z) on basis triples.
inline Report left_symmetry_report(const ProductTable& p) {
    Report rep;
    rep.pass("left-symmetric");
    const std::size_t n = p.dim();
    auto e = [&](std::size_t i) { return Vector::unit(p.field(), n, i); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (p.associator(e(i), e(j), e(k)) != p.associator(e(j), e(i), e(k)))
                    rep.fail("left-symmetric", "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")");
    return rep;
}

inline bool is_left_symmetric(const ProductTable& p) { return left_symmetry_report(p).ok(); }

// Asso(x,x,z) = 0 for all x: basis instances plus the symmetrized bilinears.
inline Report left_alternating_report(const ProductTable& p) {
    Report rep;
    rep.pass("left-alternating");
    const std::size_t n = p.dim();
    auto e = [&](std::size_t i) { return Vector::unit(p.field(), n, i); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (!p.associator(e(i), e(i), e(k)).is_zero())
                rep.fail("left-alternating", "Asso(e" + std::to_string(i) + ",e" + std::to_string(i) + ",e" + std::to_string(k) + ")");
            for (std::size_t j = i + 1; j < n; ++j)
                if (!(p.associator(e(i), e(j), e(k)) + p.associator(e(j), e(i), e(k))).is_zero())
                    rep.fail("left-alternating", "polar (e" + std::to_string(i) + ",e" + std::to_string(j) + ",e" + std::to_string(k) + ")");
        }
    return rep;
}

inline bool is_left_alternating(const ProductTable& p) { return left_alternating_report(p).ok(); }

struct Superization {
    std::optional<LieSuperAlgebra> algebra;
    std::string witness;  // first nonzero Asso(x,x,y)
    Report checks;
};

namespace detail {

// Brackets of g with s(e_i) = e_i * e_i on odd basis vectors; not validated.
inline LieSuperAlgebra superized_tables(const StarProduct& star) {
    const LieSuperAlgebra& g = star.algebra();
    LieSuperAlgebra out(g.field(), g.basis());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        for (std::size_t j = i + 1; j < g.dim(); ++j) out.set_bracket(i, j, g.bracket_basis(i, j));
        if (g.parity(i) == Parity::Odd) out.set_square(i, star.table().at(i, i));
    }
    return out;
}

}  // namespace detail

// The graded Lie algebra underlying g (its squaring, if any, is ignored) with an
// even invertible derivation.
inline Superization superize(const LieSuperAlgebra& g, const GradedOperator& delta) {
    if (delta.parity != Parity::Even || operator_parity(g.parities(), g.parities(), delta.matrix) != Parity::Even)
        throw PreconditionError("superize: the derivation must preserve the grading");
    LieSuperAlgebra graded = desuperize(g);
    StarProduct star(graded, delta);
    Superization out;
    Report& rep = out.checks;
    const std::size_t n = g.dim();
    auto odd = g.indices(Parity::Odd);

    rep.pass("obstruction");
    for (std::size_t a = 0; a < odd.size(); ++a)
        for (std::size_t y = 0; y < n; ++y) {
            Vector x = g.unit(odd[a]);
            Vector v = star.associator(x, x, g.unit(y));
            if (!v.is_zero()) {
                std::string w = "Asso(" + g.name(odd[a]) + "," + g.name(odd[a]) + "," + g.name(y) + ") = " + g.show(v);
                if (out.witness.empty()) out.witness = w;
                rep.fail("obstruction", w);
            }
            for (std::size_t b = a + 1; b < odd.size(); ++b) {
                Vector u = g.unit(odd[b]);
                Vector p = star.associator(x, u, g.unit(y)) + star.associator(u, x, g.unit(y));
                if (!p.is_zero()) rep.fail("obstruction", "polar (" + g.name(odd[a]) + "," + g.name(odd[b]) + "," + g.name(y) + ")");
            }
        }
    if (!rep.ok()) return out;

    // s(x+y) + s(x) + s(y) = [x,y] on odd pairs, straight from the product.
    rep.pass("polarization");
    for (std::size_t a = 0; a < odd.size(); ++a)
        for (std::size_t b = a + 1; b < odd.size(); ++b) {
            Vector x = g.unit(odd[a]), y = g.unit(odd[b]);
            if (star(x + y, x + y) + star(x, x) + star(y, y) != graded.bracket(x, y))
                rep.fail("polarization", "(" + g.name(odd[a]) + "," + g.name(odd[b]) + ")");
        }
    LieSuperAlgebra s = detail::superized_tables(star);
    s.validate();
    rep.merge(verify(s));
    if (!rep.ok()) throw ConsistencyError("superize: vanishing obstruction but " + rep.first_failure());
    out.algebra = std::move(s);
    return out;
}

// First invertible derivation of the given parity found by enumerating
// combinations of a basis of der_p(g), or absent within the budget.
inline std::optional<GradedOperator> find_invertible_derivation(const LieSuperAlgebra& g, Parity p, std::uint64_t budget = 1u << 16) {
    auto basis = derivation_space(g, p);
    const Field& f = g.field();
    std::vector<std::size_t> idx(basis.size(), 0);
    const auto elems = f.elements();
    for (std::uint64_t tried = 0; tried < budget; ++tried) {
        Matrix m(f, g.dim(), g.dim());
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (Bits c = elems[idx[k]]) m = m + basis[k].matrix.scaled(c);
        if (inverse(m)) return GradedOperator{m, p};
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == elems.size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return std::nullopt;
}

}  // namespace lsa

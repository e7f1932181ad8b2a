#pragma once

#include <string>
#include <vector>

#include "superalgebra.hpp"

namespace lsa {

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

// Der1: D[x,y] = [Dx,y] + [x,Dy] on basis pairs.
// Der2: D(s(x)) = [Dx,x] on odd basis vectors; with Der1 on odd pairs this covers
// every odd x, since both sides are quadratic with matching polarizations.
inline Report derivation_report(const GradedOperator& d, const LieSuperAlgebra& g) {
    Report rep;
    const std::size_t n = g.dim();
    if (d.matrix.rows() != n || d.matrix.cols() != n) throw DimensionError("operator shape does not match the algebra");
    const Matrix& m = d.matrix;
    rep.pass("der1");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Vector lhs = m * g.bracket_basis(i, j);
            Vector rhs = g.bracket(m.col(i), g.unit(j)) + g.bracket(g.unit(i), m.col(j));
            if (lhs != rhs)
                rep.fail("der1", "(" + g.name(i) + "," + g.name(j) + "): " + g.show(lhs) + " vs " + g.show(rhs));
        }
    if (!g.is_super()) return rep;
    rep.pass("der2");
    for (std::size_t i : g.indices(Parity::Odd)) {
        Vector lhs = m * g.square_basis(i);
        Vector rhs = g.bracket(m.col(i), g.unit(i));
        if (lhs != rhs) rep.fail("der2", g.name(i) + ": " + g.show(lhs) + " vs " + g.show(rhs));
    }
    return rep;
}

inline bool is_derivation(const GradedOperator& d, const LieSuperAlgebra& g) { return derivation_report(d, g).ok(); }

// Basis of der_p(g), solved as one linear system on the parity-allowed entries.
inline std::vector<GradedOperator> derivation_space(const LieSuperAlgebra& g, Parity p) {
    const std::size_t n = g.dim();
    const Field& f = g.field();
    std::vector<long> slot(n * n, -1);
    std::vector<std::pair<std::size_t, std::size_t>> entries;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (g.parity(a) == g.parity(b) + p) {
                slot[a * n + b] = long(entries.size());
                entries.push_back({a, b});
            }
    std::vector<std::vector<Bits>> rows;
    auto add = [&](std::vector<Bits>& row, std::size_t a, std::size_t b, Bits coef) {
        long s = slot[a * n + b];
        if (s >= 0 && coef) row[std::size_t(s)] ^= coef;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                std::vector<Bits> row(entries.size(), 0);
                for (std::size_t b = 0; b < n; ++b) add(row, k, b, g.c(i, j, b));
                for (std::size_t a = 0; a < n; ++a) {
                    add(row, a, i, g.c(a, j, k));
                    add(row, a, j, g.c(i, a, k));
                }
                rows.push_back(std::move(row));
            }
    if (g.is_super())
        for (std::size_t i : g.indices(Parity::Odd))
            for (std::size_t k = 0; k < n; ++k) {
                std::vector<Bits> row(entries.size(), 0);
                for (std::size_t b = 0; b < n; ++b) add(row, k, b, g.q(i, b));
                for (std::size_t a = 0; a < n; ++a) add(row, a, i, g.c(a, i, k));
                rows.push_back(std::move(row));
            }
    std::vector<GradedOperator> out;
    if (entries.empty()) return out;
    std::vector<Vector> sols;
    if (rows.empty()) {
        for (std::size_t e = 0; e < entries.size(); ++e) sols.push_back(Vector::unit(f, entries.size(), e));
    } else {
        sols = kernel(Matrix::from_rows(f, rows));
    }
    for (auto& s : sols) {
        Matrix m(f, n, n);
        for (std::size_t e = 0; e < entries.size(); ++e) m.set(entries[e].first, entries[e].second, s[e]);
        out.push_back({m, p});
    }
    return out;
}

struct Eigenspace {
    Bits eigenvalue;
    Subspace space;
};

// Nonzero eigenvalues in field enumeration order, each with its eigenspace cut
// down to the given subspace; empty intersections are skipped.
inline std::vector<Eigenspace> find_eigen_in(const Matrix& d, const Subspace& within) {
    const Field& f = d.field();
    std::vector<Eigenspace> out;
    for (Bits lambda : f.elements()) {
        if (!lambda) continue;
        Matrix shifted = d + Matrix::identity(f, d.rows()).scaled(lambda);
        Subspace e = Subspace::solutions(shifted).intersect(within);
        if (!e.is_zero()) out.push_back({lambda, e});
    }
    return out;
}

}  // namespace lsa

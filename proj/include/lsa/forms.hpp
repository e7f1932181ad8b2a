#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "derivations.hpp"
#include "superalgebra.hpp"

namespace lsa {

enum class FormParity { Even, Odd, Mixed };

inline const char* to_string(FormParity p) {
    switch (p) {
    case FormParity::Even: return "even";
    case FormParity::Odd: return "odd";
    default: return "mixed";
    }
}

struct BilinearForm {
    Matrix gram;  // gram(i,j) = B(e_i, e_j)
    std::vector<Parity> parities;
    FormParity parity = FormParity::Even;

    const Field& field() const { return gram.field(); }
    std::size_t dim() const { return gram.rows(); }
    Bits operator()(const Vector& x, const Vector& y) const { return x.dot(gram * y); }
    Bits at(std::size_t i, std::size_t j) const { return gram.at(i, j); }
    bool operator==(const BilinearForm& o) const {
        return gram == o.gram && parities == o.parities && parity == o.parity;
    }
};

inline FormParity infer_form_parity(const std::vector<Parity>& ps, const Matrix& gram) {
    bool even = true, odd = true;
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j)
            if (gram.at(i, j)) {
                if (ps[i] == ps[j]) odd = false;
                else even = false;
            }
    if (even) return FormParity::Even;
    if (odd) return FormParity::Odd;
    return FormParity::Mixed;
}

inline BilinearForm make_form(const LieSuperAlgebra& g, const Matrix& gram, std::optional<FormParity> declared = {}) {
    if (gram.rows() != g.dim() || gram.cols() != g.dim()) throw DimensionError("form shape does not match the algebra");
    auto ps = g.parities();
    FormParity inferred = infer_form_parity(ps, gram);
    FormParity p = inferred;
    if (declared && *declared != FormParity::Mixed) {
        // A zero form is both even and odd; otherwise the blocks must agree.
        bool zero = gram.is_zero();
        if (!zero && inferred != *declared)
            throw InvariantError(std::string("form declared ") + to_string(*declared) + " but its Gram blocks are " +
                                 to_string(inferred));
        p = *declared;
    } else if (declared) {
        p = FormParity::Mixed;
    }
    return {gram, ps, p};
}

struct SymmetryClass {
    bool symmetric = false;
    bool even_antisymmetric = false;  // symmetric, zero diagonal on the odd-odd block
    bool odd_antisymmetric = false;   // symmetric, zero diagonal on the even-even block
    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        if (symmetric) out.push_back("symmetric");
        if (even_antisymmetric) out.push_back("even-antisymmetric");
        if (odd_antisymmetric) out.push_back("odd-antisymmetric");
        if (out.empty()) out.push_back("none");
        return out;
    }
};

inline SymmetryClass classify_symmetry(const BilinearForm& b) {
    SymmetryClass s;
    s.symmetric = b.gram == b.gram.transpose();
    if (!s.symmetric) return s;
    bool odd_diag = true, even_diag = true;
    for (std::size_t i = 0; i < b.dim(); ++i) {
        if (!b.at(i, i)) continue;
        if (b.parities[i] == Parity::Odd) odd_diag = false;
        else even_diag = false;
    }
    s.even_antisymmetric = odd_diag;
    s.odd_antisymmetric = even_diag;
    return s;
}

inline Report invariance_report(const BilinearForm& b, const LieSuperAlgebra& g) {
    Report rep;
    rep.pass("invariant");
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j)
            for (std::size_t k = 0; k < g.dim(); ++k) {
                Bits l = b(g.bracket_basis(i, j), g.unit(k));
                Bits r = b(g.unit(i), g.bracket_basis(j, k));
                if (l != r) rep.fail("invariant", "B([" + g.name(i) + "," + g.name(j) + "]," + g.name(k) + ")");
            }
    return rep;
}

inline bool is_invariant(const BilinearForm& b, const LieSuperAlgebra& g) { return invariance_report(b, g).ok(); }

inline bool is_nondegenerate(const BilinearForm& b) { return rank(b.gram) == b.dim(); }

// 2-cocycle plus the squaring condition w(s(x),z) = w(x,[x,z]) on odd x, checked on
// odd basis vectors and on sums of two of them (the condition is quadratic in x).
inline Report closed_report(const BilinearForm& w, const LieSuperAlgebra& g) {
    Report rep;
    if (!rep.check("parity", w.parity != FormParity::Mixed, [] { return std::string("mixed-parity form"); }))
        return rep;
    const std::size_t n = g.dim();
    rep.pass("cocycle");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Bits s = w(g.bracket_basis(i, j), g.unit(k)) ^ w(g.bracket_basis(k, i), g.unit(j)) ^
                         w(g.bracket_basis(j, k), g.unit(i));
                if (s) rep.fail("cocycle", "(" + g.name(i) + "," + g.name(j) + "," + g.name(k) + ")");
            }
    if (!g.is_super()) return rep;
    rep.pass("squaring-closed");
    auto odd = g.indices(Parity::Odd);
    auto test = [&](const Vector& x, const std::string& label) {
        for (std::size_t k = 0; k < n; ++k) {
            Vector z = g.unit(k);
            if (w(g.squaring(x), z) != w(x, g.bracket(x, z)))
                rep.fail("squaring-closed", "x=" + label + " z=" + g.name(k));
        }
    };
    for (std::size_t a = 0; a < odd.size(); ++a) {
        test(g.unit(odd[a]), g.name(odd[a]));
        for (std::size_t b = a + 1; b < odd.size(); ++b)
            test(g.unit(odd[a]) + g.unit(odd[b]), g.name(odd[a]) + "+" + g.name(odd[b]));
    }
    return rep;
}

inline bool is_closed(const BilinearForm& w, const LieSuperAlgebra& g) { return closed_report(w, g).ok(); }

inline Report nis_report(const BilinearForm& b, const LieSuperAlgebra& g) {
    Report rep;
    rep.check("parity", b.parity != FormParity::Mixed, [] { return std::string("mixed-parity form"); });
    rep.check("nondegenerate", is_nondegenerate(b),
              [&] { return "rank " + std::to_string(rank(b.gram)) + " < " + std::to_string(b.dim()); });
    rep.merge(invariance_report(b, g));
    auto s = classify_symmetry(b);
    rep.check("even-antisymmetric", s.even_antisymmetric, [&] {
        return s.symmetric ? std::string("nonzero diagonal on the odd block") : std::string("not symmetric");
    });
    return rep;
}

struct NisVerdict {
    bool ok = false;
    FormParity parity = FormParity::Mixed;
    std::string kind;  // "ortho-orthogonal" for even forms, "periplectic" for odd ones
    std::string diagnostic;
};

inline NisVerdict is_NIS(const BilinearForm& b, const LieSuperAlgebra& g) {
    Report r = nis_report(b, g);
    NisVerdict v;
    v.ok = r.ok();
    v.parity = b.parity;
    if (b.parity == FormParity::Even) v.kind = "ortho-orthogonal";
    else if (b.parity == FormParity::Odd) v.kind = "periplectic";
    v.diagnostic = r.first_failure();
    return v;
}

// B(Dx,y) = B(x,Dy) and, in char 2, B(Da,a) = 0 on even a (basis diagonal suffices
// once the symmetry holds).
inline Report delta_invariance_report(const BilinearForm& b, const Matrix& d) {
    Report rep;
    const std::size_t n = b.dim();
    Matrix w = d.transpose() * b.gram;  // w(i,j) = B(D e_i, e_j)
    Matrix v = b.gram * d;              // v(i,j) = B(e_i, D e_j)
    rep.check("delta-symmetric", w == v, [&] { return std::string("B(Dx,y) != B(x,Dy)"); });
    rep.pass("delta-even-diagonal");
    for (std::size_t i = 0; i < n; ++i)
        if (b.parities[i] == Parity::Even && w.at(i, i))
            rep.fail("delta-even-diagonal", "B(D e" + std::to_string(i) + ", e" + std::to_string(i) + ") != 0");
    return rep;
}

struct DeltaResult {
    std::optional<GradedOperator> delta;
    std::string diagnostic;
};

// Solves w(x,y) = B(Delta x, y); the failed property is named in order:
// nondegenerate, even, derivation, invertible, delta-invariant.
inline DeltaResult form_to_delta(const BilinearForm& b, const BilinearForm& w, const LieSuperAlgebra& g) {
    auto sol = solve_bilinear(b.gram, w.gram);
    if (!sol) return {std::nullopt, "nondegenerate: B is degenerate"};
    auto p = operator_parity(g.parities(), g.parities(), *sol);
    if (!p || *p != Parity::Even) return {std::nullopt, "even: Delta is not even"};
    GradedOperator d{*sol, Parity::Even};
    Report der = derivation_report(d, g);
    if (!der.ok()) return {std::nullopt, "derivation: " + der.first_failure()};
    if (!inverse(*sol)) return {std::nullopt, "invertible: Delta is singular"};
    Report inv = delta_invariance_report(b, *sol);
    if (!inv.ok()) return {std::nullopt, "delta-invariant: " + inv.first_failure()};
    return {d, ""};
}

class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// w(x,y) = B(Delta x, y). When Delta is an invertible even derivation leaving B
// invariant, the result must be closed and odd-antisymmetric; a violation throws.
inline BilinearForm delta_to_form(const BilinearForm& b, const GradedOperator& d, const LieSuperAlgebra& g) {
    Matrix w = d.matrix.transpose() * b.gram;
    BilinearForm out = make_form(g, w);
    if (out.parity == FormParity::Mixed || w.is_zero()) out.parity = b.parity;
    bool qualifies = d.parity == Parity::Even && is_derivation(d, g) && inverse(d.matrix).has_value() &&
                     delta_invariance_report(b, d.matrix).ok() && is_NIS(b, g).ok;
    if (qualifies) {
        if (!is_closed(out, g)) throw ConsistencyError("delta_to_form: result is not closed");
        if (!classify_symmetry(out).odd_antisymmetric)
            throw ConsistencyError("delta_to_form: result is not odd-antisymmetric");
    }
    return out;
}

// alpha(x) = sum l_i^2 alpha(e_i) + sum_{i<j} l_i l_j polar(e_i,e_j) on the odd part.
struct QuadraticForm {
    Vector values;  // alpha(e_i) at odd indices, zero elsewhere
    Matrix polar;   // symmetric, zero diagonal, supported on the odd-odd block
    std::vector<Parity> parities;

    Bits operator()(const Vector& x) const {
        const Field& f = values.field();
        Bits acc = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!x[i]) continue;
            if (parities[i] != Parity::Odd) throw InvariantError("quadratic form evaluated on a non-odd element");
            acc ^= f.mul(f.square(x[i]), values[i]);
            for (std::size_t j = i + 1; j < x.size(); ++j)
                if (x[j]) acc ^= f.mul(f.mul(x[i], x[j]), polar.at(i, j));
        }
        return acc;
    }
    Bits bilinear(const Vector& x, const Vector& y) const { return x.dot(polar * y); }
    bool operator==(const QuadraticForm& o) const { return values == o.values && polar == o.polar; }
};

inline QuadraticForm zero_quadratic(const LieSuperAlgebra& g) {
    return {g.zero(), Matrix(g.field(), g.dim(), g.dim()), g.parities()};
}

enum class PolarSide { Left, Right };  // Left: B(Da,b); Right: B(a,Db)

struct QuadraticResult {
    std::optional<QuadraticForm> form;
    std::string diagnostic;
};

inline QuadraticResult quadratic_from_derivation(const BilinearForm& b, const Matrix& d, PolarSide side,
                                                 const Vector& values) {
    const std::size_t n = b.dim();
    Matrix pol(b.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (b.parities[i] != Parity::Odd || b.parities[j] != Parity::Odd) continue;
            Vector ei = Vector::unit(b.field(), n, i), ej = Vector::unit(b.field(), n, j);
            pol.set(i, j, side == PolarSide::Left ? b(d * ei, ej) : b(ei, d * ej));
        }
    for (std::size_t i = 0; i < n; ++i) {
        if (pol.at(i, i))
            return {std::nullopt, "polar form has a nonzero diagonal at e" + std::to_string(i)};
        for (std::size_t j = i + 1; j < n; ++j)
            if (pol.at(i, j) != pol.at(j, i))
                return {std::nullopt, "polar form is not symmetric at (e" + std::to_string(i) + ",e" +
                                          std::to_string(j) + ")"};
    }
    Vector v = values;
    for (std::size_t i = 0; i < n; ++i)
        if (b.parities[i] != Parity::Odd && v[i]) return {std::nullopt, "value given on an even basis vector"};
    return {QuadraticForm{v, pol, b.parities}, ""};
}

// {v : B(v,w) = 0 for all w in V}
inline Subspace orthogonal_complement(const BilinearForm& b, const Subspace& v) {
    if (v.is_zero()) return Subspace::whole(b.field(), b.dim());
    std::vector<Vector> rows;
    for (auto& w : v.basis()) rows.push_back(b.gram * w);
    return Subspace::solutions(Matrix::from_row_vectors(b.field(), b.dim(), rows));
}

// span{s(x) : x odd} = span{s(e_i), [e_i,e_j] : i,j odd}
inline Subspace squares_span(const LieSuperAlgebra& g) {
    std::vector<Vector> vs;
    auto odd = g.indices(Parity::Odd);
    for (std::size_t a = 0; a < odd.size(); ++a) {
        vs.push_back(g.square_basis(odd[a]));
        for (std::size_t b = a + 1; b < odd.size(); ++b) vs.push_back(g.bracket_basis(odd[a], odd[b]));
    }
    return Subspace::span(g.field(), g.dim(), vs);
}

inline Subspace special_center(const LieSuperAlgebra& g, const BilinearForm& b) {
    return center(g).intersect(orthogonal_complement(b, squares_span(g)));
}

// x odd with B(s(x), s(t)) = 0 for every odd t.
inline bool cone_contains(const LieSuperAlgebra& g, const BilinearForm& b, const Vector& x) {
    if (!g.is_homogeneous(x, Parity::Odd)) return false;
    Vector sx = g.squaring(x);
    for (auto& w : squares_span(g).basis())
        if (b(sx, w)) return false;
    return true;
}

// Every element of an odd subspace V lies in the cone: x -> B(s(x),w) is quadratic,
// so check basis values and polarizations B([v_i,v_j],w).
inline bool cone_contains_subspace(const LieSuperAlgebra& g, const BilinearForm& b, const Subspace& v) {
    auto vs = v.basis();
    for (auto& x : vs)
        if (!g.is_homogeneous(x, Parity::Odd)) return false;
    auto ws = squares_span(g).basis();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        Vector si = g.squaring(vs[i]);
        for (auto& w : ws)
            if (b(si, w)) return false;
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            Vector br = g.bracket(vs[i], vs[j]);
            for (auto& w : ws)
                if (b(br, w)) return false;
        }
    }
    return true;
}

enum class Tri { Yes, No, Unknown };

inline const char* to_string(Tri t) {
    switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
    }
}

// Orthogonal splittings g = I + J into ideals correspond to idempotents P that are
// even, commute with every ad_x, are B-symmetric and respect squaring. Those P form
// the solution set of a linear system; its elements are enumerated exhaustively
// when |F|^dim(solutions) <= 2^20, otherwise the answer is Unknown.
inline Tri is_irreducible(const LieSuperAlgebra& g, const BilinearForm& b) {
    const std::size_t n = g.dim();
    const Field& f = g.field();
    std::vector<std::pair<std::size_t, std::size_t>> entries;
    std::vector<long> slot(n * n, -1);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
            if (g.parity(a) == g.parity(c)) {
                slot[a * n + c] = long(entries.size());
                entries.push_back({a, c});
            }
    std::vector<std::vector<Bits>> rows;
    auto add = [&](std::vector<Bits>& row, std::size_t a, std::size_t c, Bits coef) {
        long s = slot[a * n + c];
        if (s >= 0 && coef) row[std::size_t(s)] ^= coef;
    };
    // P[e_i,e_j] = [e_i, P e_j]
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                std::vector<Bits> row(entries.size(), 0);
                for (std::size_t m = 0; m < n; ++m) add(row, k, m, g.c(i, j, m));
                for (std::size_t a = 0; a < n; ++a) add(row, a, j, g.c(i, a, k));
                rows.push_back(std::move(row));
            }
    // B(P e_i, e_j) = B(e_i, P e_j)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Bits> row(entries.size(), 0);
            for (std::size_t a = 0; a < n; ++a) {
                add(row, a, i, b.at(a, j));
                add(row, a, j, b.at(i, a));
            }
            rows.push_back(std::move(row));
        }
    auto sols = kernel(Matrix::from_rows(f, rows));
    double log2_count = double(sols.size()) * f.degree();
    if (log2_count > 20) return Tri::Unknown;
    const Matrix id = Matrix::identity(f, n);
    std::vector<Bits> coef(sols.size(), 0);
    while (true) {
        Vector flat(f, entries.size());
        for (std::size_t s = 0; s < sols.size(); ++s) flat.axpy(coef[s], sols[s]);
        Matrix p(f, n, n);
        for (std::size_t e = 0; e < entries.size(); ++e) p.set(entries[e].first, entries[e].second, flat[e]);
        if (!p.is_zero() && p != id && p * p == p) {
            bool squares_ok = true;
            if (g.is_super())
                for (std::size_t i : g.indices(Parity::Odd))
                    if (p * g.square_basis(i) != g.squaring(p.col(i))) {
                        squares_ok = false;
                        break;
                    }
            if (squares_ok) return Tri::No;
        }
        std::size_t k = 0;
        while (k < coef.size()) {
            if (++coef[k] < f.order()) break;
            coef[k] = 0;
            ++k;
        }
        if (k == coef.size()) break;
    }
    return Tri::Yes;
}

}  // namespace lsa

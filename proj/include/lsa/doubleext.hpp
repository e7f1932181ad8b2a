#pragma once

#include <optional>
#include <string>
#include <vector>

#include "derivations.hpp"
#include "forms.hpp"
#include "superalgebra.hpp"

namespace lsa {

// Named by (parity of D, parity of B).
//   EvenEven: x, x* even.     OddEven: x, x* odd.
//   OddOdd:   x even, e odd.  EvenOdd: x odd, e even.
enum class DextVariant { EvenEven, OddEven, OddOdd, EvenOdd };

inline const char* to_string(DextVariant v) {
    switch (v) {
    case DextVariant::EvenEven: return "even-even";
    case DextVariant::OddEven: return "odd-even";
    case DextVariant::OddOdd: return "odd-odd";
    default: return "even-odd";
    }
}
inline Parity d_parity(DextVariant v) {
    return (v == DextVariant::OddEven || v == DextVariant::OddOdd) ? Parity::Odd : Parity::Even;
}
inline FormParity b_parity(DextVariant v) {
    return (v == DextVariant::EvenEven || v == DextVariant::OddEven) ? FormParity::Even : FormParity::Odd;
}
inline Parity x_parity(DextVariant v) {
    return (v == DextVariant::EvenEven || v == DextVariant::OddOdd) ? Parity::Even : Parity::Odd;
}
// Parity of the partner x* (or e).
inline Parity partner_parity(DextVariant v) {
    return (v == DextVariant::EvenEven || v == DextVariant::EvenOdd) ? Parity::Even : Parity::Odd;
}
inline bool has_alpha(DextVariant v) { return v == DextVariant::EvenEven || v == DextVariant::OddOdd; }
inline bool has_a0(DextVariant v) { return v == DextVariant::OddEven || v == DextVariant::OddOdd; }

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DextSeed {
    DextVariant variant = DextVariant::EvenEven;
    LieSuperAlgebra a;
    BilinearForm b;
    GradedOperator d;
    Vector alpha_values;  // alpha(e_i) on odd basis vectors; EvenEven, OddOdd
    Vector a0;            // s(x*) (OddEven) or the a-part of s(e) (OddOdd)
    Bits m = 0;           // x-coefficient of s(e), OddOdd
    Bits c = 0;           // B(x*,x*), EvenEven
};

struct DoubleExtension {
    DextSeed seed;
    QuadraticForm alpha;  // zero for variants without one
    LieSuperAlgebra g;    // basis [x, a..., partner]
    BilinearForm b;
    std::size_t partner_index() const { return g.dim() - 1; }
};

namespace detail {

inline Vector lift_vec(const LieSuperAlgebra& g, const Vector& v) {
    Vector w = g.zero();
    for (std::size_t i = 0; i < v.size(); ++i) w[i + 1] = v[i];
    return w;
}

inline Vector a_part(const Vector& w) {
    Vector v(w.field(), w.size() - 2);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i + 1];
    return v;
}

inline std::string join_vec(const LieSuperAlgebra& a, const Vector& v) { return a.show(v); }

// F quadratic on odd vectors of a: vanishes iff it vanishes on odd basis vectors and
// on sums of two of them.
template <class Fn>
void check_quadratic(Report& rep, const std::string& id, const LieSuperAlgebra& a, Fn&& fn) {
    rep.pass(id);
    auto odd = a.indices(Parity::Odd);
    for (std::size_t i = 0; i < odd.size(); ++i) {
        if (fn(a.unit(odd[i]))) rep.fail(id, "at " + a.name(odd[i]));
        for (std::size_t j = i + 1; j < odd.size(); ++j)
            if (fn(a.unit(odd[i]) + a.unit(odd[j]))) rep.fail(id, "at " + a.name(odd[i]) + "+" + a.name(odd[j]));
    }
}

inline Matrix ad_matrix(const LieSuperAlgebra& a, const Vector& v) { return a.ad(v); }

}  // namespace detail

inline QuadraticResult seed_alpha(const DextSeed& s) {
    if (!has_alpha(s.variant)) return {zero_quadratic(s.a), ""};
    PolarSide side = s.variant == DextVariant::EvenEven ? PolarSide::Right : PolarSide::Left;
    return quadratic_from_derivation(s.b, s.d.matrix, side, s.alpha_values);
}

inline Report dext_preconditions(const DextSeed& s) {
    Report rep;
    const LieSuperAlgebra& a = s.a;
    const Field& f = a.field();
    const std::size_t n = a.dim();
    auto shape = [&](const Matrix& m) { return m.rows() == n && m.cols() == n; };
    if (!rep.check("shape", shape(s.d.matrix) && shape(s.b.gram), [] { return std::string("D or B has the wrong shape"); }))
        return rep;
    rep.check("d-parity", s.d.parity == d_parity(s.variant) &&
                              operator_parity(a.parities(), a.parities(), s.d.matrix).has_value() &&
                              (s.d.matrix.is_zero() ||
                               *operator_parity(a.parities(), a.parities(), s.d.matrix) == d_parity(s.variant)),
              [&] { return std::string("D must be ") + to_string(d_parity(s.variant)); });
    rep.check("b-parity", s.b.parity == b_parity(s.variant) || s.b.gram.is_zero(),
              [&] { return std::string("B must be ") + to_string(b_parity(s.variant)); });
    rep.merge(verify(a), "a.");
    rep.merge(nis_report(s.b, a), "b.");
    rep.merge(derivation_report(s.d, a), "d.");
    const Matrix& d = s.d.matrix;
    Matrix left = d.transpose() * s.b.gram;  // left(i,j) = B(D e_i, e_j)
    Matrix right = s.b.gram * d;             // right(i,j) = B(e_i, D e_j)
    // char 2: B(Da,b) + B(a,Db) = 0 and B(Da,b) = B(a,Db) coincide.
    rep.check("D1", left == right, [] { return std::string("B(Da,b) != B(a,Db)"); });
    if (s.variant == DextVariant::EvenEven || s.variant == DextVariant::OddOdd) {
        rep.pass("D1-diagonal");
        for (std::size_t i : a.indices(Parity::Even))
            if (left.at(i, i)) rep.fail("D1-diagonal", "B(D " + a.name(i) + ", " + a.name(i) + ") != 0");
    }
    if (has_alpha(s.variant)) {
        if (s.alpha_values.size() != n) {
            rep.fail("alpha", "alpha needs one value per basis vector of a");
        } else {
            auto q = seed_alpha(s);
            rep.check("alpha", q.form.has_value(), [&] { return q.diagnostic; });
        }
    }
    if (has_a0(s.variant)) {
        if (!rep.check("a0", s.a0.size() == n && a.is_homogeneous(s.a0, Parity::Even),
                       [] { return std::string("a0 must be an even element of a"); }))
            return rep;
        rep.check("D2", d * d == a.ad(s.a0), [&] { return std::string("D^2 != ad_a0"); });
        rep.check("D3", (d * s.a0).is_zero(), [&] { return "D(a0) = " + a.show(d * s.a0); });
    }
    if (s.variant != DextVariant::EvenEven && s.c)
        rep.fail("c", "B(x*,x*) is only free in the even-even variant");
    if (s.variant != DextVariant::OddOdd && s.m) rep.fail("m", "m is only used in the odd-odd variant");
    (void)f;
    return rep;
}

inline DoubleExtension double_extend(const DextSeed& s) {
    Report pre = dext_preconditions(s);
    if (!pre.ok()) throw PreconditionError(std::string("dext ") + to_string(s.variant) + ": " + pre.first_failure());
    const LieSuperAlgebra& a = s.a;
    const Field& f = a.field();
    const std::size_t n = a.dim();
    std::vector<BasisVector> basis;
    std::string xn = fresh_name(a.basis(), "x");
    basis.push_back({xn, x_parity(s.variant)});
    for (auto& b : a.basis()) basis.push_back(b);
    bool has_star = s.variant == DextVariant::EvenEven || s.variant == DextVariant::OddEven;
    std::string yn = fresh_name(basis, has_star ? xn + "*" : "e");
    basis.push_back({yn, partner_parity(s.variant)});
    LieSuperAlgebra g(f, basis);
    const std::size_t y = n + 1;
    const Matrix& d = s.d.matrix;
    QuadraticForm alpha = *seed_alpha(s).form;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Vector v = detail::lift_vec(g, a.bracket_basis(i, j));
            v[0] = s.b(d * a.unit(i), a.unit(j));
            g.set_bracket(i + 1, j + 1, v);
        }
        g.set_bracket(y, i + 1, detail::lift_vec(g, d.col(i)));
        if (a.parity(i) == Parity::Odd) {
            Vector sq = detail::lift_vec(g, a.square_basis(i));
            if (has_alpha(s.variant)) sq[0] = alpha.values[i];
            g.set_square(i + 1, sq);
        }
    }
    if (s.variant == DextVariant::OddEven) g.set_square(y, detail::lift_vec(g, s.a0));
    if (s.variant == DextVariant::OddOdd) {
        Vector sq = detail::lift_vec(g, s.a0);
        sq[0] = s.m;
        g.set_square(y, sq);
    }
    g.validate();

    Matrix gram(f, n + 2, n + 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gram.set(i + 1, j + 1, s.b.at(i, j));
    gram.set(0, y, 1);
    gram.set(y, 0, 1);
    gram.set(y, y, s.c);
    BilinearForm bg = make_form(g, gram, b_parity(s.variant));

    Report post = verify(g);
    if (!post.ok()) throw ConsistencyError(std::string("dext ") + to_string(s.variant) + " output fails verify: " + post.first_failure());
    auto nis = is_NIS(bg, g);
    if (!nis.ok) throw ConsistencyError(std::string("dext ") + to_string(s.variant) + " output form is not NIS: " + nis.diagnostic);
    return {s, alpha, std::move(g), std::move(bg)};
}

inline DoubleExtension dext_even_even(const LieSuperAlgebra& a, const BilinearForm& b, const GradedOperator& d,
                                      const Vector& alpha_values, Bits c = 0) {
    return double_extend({DextVariant::EvenEven, a, b, d, alpha_values, a.zero(), 0, c});
}
inline DoubleExtension dext_odd_even(const LieSuperAlgebra& a, const BilinearForm& b, const GradedOperator& d,
                                     const Vector& a0) {
    return double_extend({DextVariant::OddEven, a, b, d, a.zero(), a0, 0, 0});
}
inline DoubleExtension dext_odd_odd(const LieSuperAlgebra& a, const BilinearForm& b, const GradedOperator& d,
                                    const Vector& a0, Bits m, const Vector& alpha_values) {
    return double_extend({DextVariant::OddOdd, a, b, d, alpha_values, a0, m, 0});
}
inline DoubleExtension dext_even_odd(const LieSuperAlgebra& a, const BilinearForm& b, const GradedOperator& d) {
    return double_extend({DextVariant::EvenOdd, a, b, d, a.zero(), a.zero(), 0, 0});
}

// Lifting an invertible derivation of a to the double extension.
//   EvenEven: Dx = lx, Dx* = lx* + shift,      shift in a_0
//   OddEven:  Dx = lx, Dx* = lx* + shift + mu x, shift in a_1
//   OddOdd:   Dx = lx, De = le + shift,        shift in a_1
//   EvenOdd:  Dx = lx, De = le + shift,        shift in a_0
// and Da = D~a + B(a, shift) x in every case.
struct LiftData {
    GradedOperator delta_a;
    Bits lambda = 1;
    Vector shift;
    Bits mu = 0;
};

inline Parity shift_parity(DextVariant v) {
    return (v == DextVariant::EvenEven || v == DextVariant::EvenOdd) ? Parity::Even : Parity::Odd;
}

inline Report lift_preconditions(const DoubleExtension& ext, const LiftData& l) {
    Report rep;
    const DextSeed& s = ext.seed;
    const LieSuperAlgebra& a = s.a;
    const Field& f = a.field();
    const std::size_t n = a.dim();
    const Matrix& dt = l.delta_a.matrix;
    const Matrix& d = s.d.matrix;
    if (!rep.check("shape", dt.rows() == n && dt.cols() == n && l.shift.size() == n,
                   [] { return std::string("lift data has the wrong shape"); }))
        return rep;
    rep.check("lambda", l.lambda != 0, [] { return std::string("lambda must be nonzero"); });
    rep.check("delta-even", l.delta_a.parity == Parity::Even &&
                                operator_parity(a.parities(), a.parities(), dt) == std::optional<Parity>(Parity::Even),
              [] { return std::string("Delta~ must be even"); });
    rep.merge(derivation_report(l.delta_a, a), "delta.");
    rep.check("delta-invertible", inverse(dt).has_value(), [] { return std::string("Delta~ is singular"); });
    rep.merge(delta_invariance_report(s.b, dt));
    rep.check("shift-parity", a.is_homogeneous(l.shift, shift_parity(s.variant)),
              [&] { return std::string("shift must be ") + to_string(shift_parity(s.variant)); });
    rep.check("mu", l.mu == 0 || s.variant == DextVariant::OddEven,
              [] { return std::string("mu is only free in the odd-even variant"); });
    if (s.variant == DextVariant::EvenEven)
        rep.check("c", s.c == 0, [] { return std::string("B(x*,x*) must vanish"); });
    Matrix lhs = commutator(dt, d);
    Matrix rhs = d.scaled(l.lambda) + a.ad(l.shift);
    rep.check("commutator", lhs == rhs, [] { return std::string("[D~,D] != lambda D + ad_shift"); });
    if (has_alpha(s.variant)) {
        // lambda alpha(a) + B(D D~ a, a) + B(s(a), shift) = 0 on odd a.
        detail::check_quadratic(rep, "alpha-compat", a, [&](const Vector& v) {
            return f.mul(l.lambda, ext.alpha(v)) ^ s.b(d * (dt * v), v) ^ s.b(a.squaring(v), l.shift);
        });
    }
    if (has_a0(s.variant)) {
        rep.check("a0-compat", dt * s.a0 == d * l.shift,
                  [&] { return "D~(a0) = " + a.show(dt * s.a0) + ", D(shift) = " + a.show(d * l.shift); });
    }
    if (s.variant == DextVariant::OddOdd) {
        Bits want = l.lambda ? f.div(s.b(s.a0, l.shift), l.lambda) : 0;
        rep.check("m", s.m == want, [&] { return "m = " + f.literal(s.m) + ", need " + f.literal(want); });
    }
    return rep;
}

struct LiftedExtension {
    DoubleExtension ext;
    LiftData data;
    GradedOperator delta;
    BilinearForm omega;
};

inline LiftedExtension lift_delta(const DoubleExtension& ext, const LiftData& l) {
    Report pre = lift_preconditions(ext, l);
    if (!pre.ok())
        throw PreconditionError(std::string("lift ") + to_string(ext.seed.variant) + ": " + pre.first_failure());
    const LieSuperAlgebra& g = ext.g;
    const LieSuperAlgebra& a = ext.seed.a;
    const std::size_t n = a.dim(), y = n + 1;
    Matrix m(g.field(), n + 2, n + 2);
    m.set(0, 0, l.lambda);
    Vector dy = detail::lift_vec(g, l.shift);
    dy[y] = l.lambda;
    dy[0] = l.mu;
    m.set_col(y, dy);
    for (std::size_t i = 0; i < n; ++i) {
        Vector col = detail::lift_vec(g, l.delta_a.matrix.col(i));
        col[0] = ext.seed.b(a.unit(i), l.shift);
        m.set_col(i + 1, col);
    }
    GradedOperator delta{m, Parity::Even};
    Report der = derivation_report(delta, g);
    if (!der.ok()) throw ConsistencyError("lifted Delta is not a derivation: " + der.first_failure());
    if (!inverse(m)) throw ConsistencyError("lifted Delta is singular");
    Report inv = delta_invariance_report(ext.b, m);
    if (!inv.ok()) throw ConsistencyError("B is not Delta-invariant: " + inv.first_failure());
    BilinearForm omega = delta_to_form(ext.b, delta, g);
    return {ext, l, delta, omega};
}

// Converse: recover (a, D, ...) and the lift data from (g, B, w).
struct Reconstruction {
    bool ok = false;
    std::string diagnostic;
    DextVariant variant = DextVariant::EvenEven;
    Matrix basis;  // columns: x, basis of a, partner, in coordinates of g
    std::optional<LiftedExtension> lifted;
    Bits eigenvalue = 0;
};

namespace detail {

inline std::optional<LiftedExtension> try_candidate(const LieSuperAlgebra& g, const BilinearForm& b,
                                                    const BilinearForm& w, const Matrix& delta, DextVariant variant,
                                                    const Vector& x, Bits lambda, Matrix& basis_out,
                                                    std::string& why) {
    const Field& f = g.field();
    const std::size_t n = g.dim();
    if (b(x, x)) {
        why = "B(x,x) != 0";
        return std::nullopt;
    }
    Parity py = partner_parity(variant);
    std::optional<Vector> y;
    for (std::size_t j : g.indices(py)) {
        Bits v = b(x, g.unit(j));
        if (v) {
            y = g.unit(j).scaled(f.inv(v));
            break;
        }
    }
    if (!y) {
        why = "no partner pairs with x";
        return std::nullopt;
    }
    Subspace kperp = orthogonal_complement(b, Subspace::span(f, n, {x}));
    if (variant == DextVariant::EvenEven && b(*y, *y)) {
        Bits c = b(*y, *y);
        bool fixed = false;
        for (auto& v : kperp.intersect(graded_part(g, Parity::Even)).basis()) {
            Bits d = b(v, v);
            if (!d) continue;
            y->axpy(f.sqrt(f.div(c, d)), v);
            fixed = true;
            break;
        }
        if (!fixed) {
            why = "cannot make B(x*,x*) vanish";
            return std::nullopt;
        }
    }
    Subspace asp = orthogonal_complement(b, Subspace::span(f, n, {x, *y}));
    if (asp.dim() + 2 != n) {
        why = "(K+K*)^perp has the wrong dimension";
        return std::nullopt;
    }
    auto abasis = homogeneous_basis(g, asp);
    std::vector<Vector> cols{x};
    for (auto& v : abasis) cols.push_back(v);
    cols.push_back(*y);
    Matrix p = Matrix::from_columns(f, n, cols);
    auto pinv = inverse(p);
    if (!pinv) {
        why = "x, a, partner do not form a basis";
        return std::nullopt;
    }
    basis_out = p;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < cols.size(); ++i) names.push_back("b" + std::to_string(i));
    LieSuperAlgebra gt = restrict(g, cols, names);
    Matrix bt = p.transpose() * b.gram * p;
    Matrix wt = p.transpose() * w.gram * p;
    Matrix dt = *pinv * delta * p;
    const std::size_t na = n - 2, yi = n - 1;

    std::vector<BasisVector> abasis_named;
    for (std::size_t i = 0; i < na; ++i) {
        std::string nm = "a" + std::to_string(i);
        for (std::size_t k = 0; k < n; ++k)
            if (abasis[i] == g.unit(k)) nm = g.name(k);
        abasis_named.push_back({nm, gt.parity(i + 1)});
    }
    LieSuperAlgebra a(f, abasis_named);
    auto clean = [&](const Vector& v, bool allow_x, const char* what) -> std::optional<Vector> {
        if (v[yi] || (!allow_x && v[0])) {
            why = std::string("unexpected component in ") + what;
            return std::nullopt;
        }
        return a_part(v);
    };
    Matrix d(f, na, na);
    Vector alpha_values = a.zero();
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = i + 1; j < na; ++j) {
            auto v = clean(gt.bracket_basis(i + 1, j + 1), true, "[a,a]");
            if (!v) return std::nullopt;
            a.set_bracket(i, j, *v);
        }
        auto dv = clean(gt.bracket_basis(yi, i + 1), false, "[partner,a]");
        if (!dv) return std::nullopt;
        d.set_col(i, *dv);
        if (a.parity(i) == Parity::Odd) {
            Vector sq = gt.square_basis(i + 1);
            auto v = clean(sq, has_alpha(variant), "s(a)");
            if (!v) return std::nullopt;
            a.set_square(i, *v);
            alpha_values[i] = sq[0];
        }
    }
    try {
        a.validate();
    } catch (const InvariantError& e) {
        why = std::string("extracted a is malformed: ") + e.what();
        return std::nullopt;
    }
    Matrix ba(f, na, na);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) ba.set(i, j, bt.at(i + 1, j + 1));
    DextSeed seed;
    seed.variant = variant;
    seed.a = a;
    seed.b = make_form(a, ba, b_parity(variant));
    auto dp = operator_parity(a.parities(), a.parities(), d);
    seed.d = {d, d.is_zero() ? d_parity(variant) : dp.value_or(d_parity(variant))};
    seed.alpha_values = has_alpha(variant) ? alpha_values : a.zero();
    seed.a0 = a.zero();
    if (variant == DextVariant::EvenEven) seed.c = bt.at(yi, yi);
    if (has_a0(variant)) {
        Vector sq = gt.square_basis(yi);
        if (sq[yi] || (variant == DextVariant::OddEven && sq[0])) {
            why = "s(partner) has an unexpected component";
            return std::nullopt;
        }
        seed.a0 = a_part(sq);
        if (variant == DextVariant::OddOdd) seed.m = sq[0];
    }
    LiftData l;
    Matrix da(f, na, na);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) da.set(i, j, dt.at(i + 1, j + 1));
    l.delta_a = {da, Parity::Even};
    l.lambda = dt.at(yi, yi);
    l.shift = a_part(dt.col(yi));
    l.mu = dt.at(0, yi);
    try {
        DoubleExtension ext = double_extend(seed);
        LiftedExtension lifted = lift_delta(ext, l);
        if (!lifted.ext.g.same_tables(gt)) {
            why = "re-extension differs from g";
            return std::nullopt;
        }
        if (lifted.ext.b.gram != bt || lifted.omega.gram != wt || lifted.delta.matrix != dt) {
            why = "re-extension forms differ";
            return std::nullopt;
        }
        (void)lambda;
        return lifted;
    } catch (const std::exception& e) {
        why = e.what();
        return std::nullopt;
    }
}

}  // namespace detail

inline Reconstruction reconstruct(const LieSuperAlgebra& g, const BilinearForm& b, const BilinearForm& w,
                                  DextVariant variant) {
    Reconstruction r;
    r.variant = variant;
    if (b.parity != b_parity(variant)) {
        r.diagnostic = std::string("variant ") + to_string(variant) + " needs an " + to_string(b_parity(variant)) + " form";
        return r;
    }
    auto dr = form_to_delta(b, w, g);
    if (!dr.delta) {
        r.diagnostic = "form_to_delta: " + dr.diagnostic;
        return r;
    }
    const Matrix& delta = dr.delta->matrix;
    Subspace locus = variant == DextVariant::EvenEven ? special_center(g, b) : center(g);
    locus = locus.intersect(graded_part(g, x_parity(variant)));
    if (locus.is_zero()) {
        r.diagnostic = "central locus is zero";
        return r;
    }
    std::string why = "no eigenvector of Delta in the central locus";
    bool squares_blocked = false;
    for (auto& es : find_eigen_in(delta, locus)) {
        for (auto& x : es.space.basis()) {
            if (x_parity(variant) == Parity::Odd) {
                if (!g.squaring(x).is_zero()) {
                    squares_blocked = true;
                    why = "s(x) != 0";
                    continue;
                }
                if (variant == DextVariant::OddEven && !cone_contains(g, b, x)) {
                    why = "x outside the cone";
                    continue;
                }
            }
            Matrix basis;
            auto lifted = detail::try_candidate(g, b, w, delta, variant, x, es.eigenvalue, basis, why);
            if (lifted) {
                r.ok = true;
                r.basis = basis;
                r.lifted = std::move(lifted);
                r.eigenvalue = es.eigenvalue;
                return r;
            }
        }
    }
    r.diagnostic = why;
    if (squares_blocked && variant == DextVariant::OddEven) r.diagnostic += " (central odd x squares to nonzero; try even-even)";
    if (squares_blocked && variant == DextVariant::EvenOdd) r.diagnostic += " (central odd x squares to nonzero; try odd-odd)";
    return r;
}

}  // namespace lsa

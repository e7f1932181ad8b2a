#pragma once

// r-matrices on a Lie superalgebra g. A tensor r = sum r(i,j) e_i (x) e_j is read
// as sum_i a_i (x) b_i with a_i = e_i and b_i = sum_j r(i,j) e_j. Brackets of
// tensor legs use the structure constants of the underlying graded Lie algebra.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "doubleext.hpp"
#include "forms.hpp"
#include "report.hpp"
#include "superalgebra.hpp"
#include "tensor.hpp"

namespace lsa {

class BudgetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void check_tensor(const LieSuperAlgebra& g, const Tensor2& r) {
    if (&r.field() != &g.field() || r.dim() != g.dim()) throw DimensionError("tensor does not match the algebra");
}

// gr(a_i) = gr(b_i): no entries between basis vectors of different parity.
inline bool is_even_tensor(const LieSuperAlgebra& g, const Tensor2& r) {
    check_tensor(g, r);
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = 0; j < g.dim(); ++j)
            if (r.at(i, j) && g.parity(i) != g.parity(j)) return false;
    return true;
}

// [r12,r13] + [r12,r23] + [r13,r23].
inline Tensor3 cybo(const LieSuperAlgebra& g, const Tensor2& r) {
    check_tensor(g, r);
    const Field& f = g.field();
    const std::size_t n = g.dim();
    Tensor3 out(f, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            Bits rik = r.at(i, k);
            if (!rik) continue;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l) {
                    Bits c = f.mul(rik, r.at(j, l));
                    if (!c) continue;
                    for (std::size_t m = 0; m < n; ++m) {
                        // [e_i,e_j] (x) e_k (x) e_l
                        if (Bits v = g.c(i, j, m)) out.add(m, k, l, f.mul(c, v));
                        // e_i (x) [e_k,e_j] (x) e_l
                        if (Bits v = g.c(k, j, m)) out.add(i, m, l, f.mul(c, v));
                        // e_i (x) e_j (x) [e_k,e_l]
                        if (Bits v = g.c(k, l, m)) out.add(i, j, m, f.mul(c, v));
                    }
                }
        }
    return out;
}

inline bool is_r_matrix(const LieSuperAlgebra& g, const Tensor2& r) { return cybo(g, r).is_zero(); }

inline std::vector<std::string> basis_names(const LieSuperAlgebra& g) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.dim(); ++i) out.push_back(g.name(i));
    return out;
}

inline std::vector<std::string> dual_names(const LieSuperAlgebra& g) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.dim(); ++i) out.push_back(g.name(i) + "*");
    return out;
}

// x . r = sum [x,a_i] (x) b_i + a_i (x) [x,b_i].
inline Tensor2 delta_r(const LieSuperAlgebra& g, const Tensor2& r, const Vector& x) {
    check_tensor(g, r);
    return r.act(g.ad(x));
}

// (H): (delta_r)^t(f (x) f) = 0 for all f, certified by the values on dual basis
// vectors and the polarization bilinears. (F): every delta_r(e_k) lies in
// Im(1 + tau), i.e. is symmetric with zero diagonal. (I): e_k . (r + tau(r)) = 0.
inline Report quasitriangular_conditions(const LieSuperAlgebra& g, const Tensor2& r) {
    check_tensor(g, r);
    Report rep;
    const std::size_t n = g.dim();
    auto names = dual_names(g);
    rep.pass("H");
    rep.pass("F");
    rep.pass("I");
    Tensor2 sym = r + r.twisted();
    std::vector<Matrix> dk;
    for (std::size_t k = 0; k < n; ++k) dk.push_back(delta_r(g, r, g.unit(k)).matrix());
    // Q(f)(e_k) = f^T D_k f.
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t k = 0; k < n; ++k)
            if (dk[k].at(a, a)) {
                rep.fail("H", "Q(" + names[a] + ") is nonzero at " + g.name(k));
                break;
            }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t k = 0; k < n; ++k)
                if (dk[k].at(a, b) != dk[k].at(b, a)) {
                    rep.fail("H", "polar(" + names[a] + "," + names[b] + ") is nonzero at " + g.name(k));
                    break;
                }
    for (std::size_t k = 0; k < n; ++k) {
        Tensor2 d(dk[k]);
        bool in_image = d.is_symmetric();
        for (std::size_t i = 0; i < n && in_image; ++i) in_image = !d.at(i, i);
        if (!in_image) rep.fail("F", "delta_r(" + g.name(k) + ") is not in Im(1+tau)");
        if (!sym.act(g.ad(g.unit(k))).is_zero()) rep.fail("I", g.name(k) + " . (r + tau(r)) != 0");
    }
    return rep;
}

namespace detail {

// Odd probe vectors of a space with the given parities: basis vectors and pair sums.
inline std::vector<std::pair<Vector, std::string>> odd_probes_of(const Field& f, const std::vector<Parity>& ps,
                                                                 const std::vector<std::string>& names) {
    std::vector<std::pair<Vector, std::string>> out;
    const std::size_t n = ps.size();
    std::vector<std::size_t> odd;
    for (std::size_t i = 0; i < n; ++i)
        if (ps[i] == Parity::Odd) odd.push_back(i);
    for (std::size_t i = 0; i < odd.size(); ++i) {
        out.push_back({Vector::unit(f, n, odd[i]), names[odd[i]]});
        for (std::size_t j = i + 1; j < odd.size(); ++j)
            out.push_back({Vector::unit(f, n, odd[i]) + Vector::unit(f, n, odd[j]), names[odd[i]] + "+" + names[odd[j]]});
    }
    return out;
}

}  // namespace detail

// x . c(x) = c(s(x)) on odd basis vectors, x . c(y) + y . c(x) = c([x,y]) on odd
// pairs, with c = delta_r.
inline Report coboundary_cocycle_report(const LieSuperAlgebra& g, const Tensor2& r) {
    check_tensor(g, r);
    Report rep;
    rep.pass("cocycle-sq");
    auto c = [&](const Vector& x) { return delta_r(g, r, x); };
    for (auto& [x, label] : detail::odd_probes_of(g.field(), g.parities(), basis_names(g))) {
        if (c(x).act(g.ad(x)) != c(g.squaring(x))) rep.fail("cocycle-sq", "at " + label);
    }
    return rep;
}

inline bool coboundary_is_cocycle(const LieSuperAlgebra& g, const Tensor2& r) {
    return coboundary_cocycle_report(g, r).ok();
}

// <[f,h]_{g*}, x> = <f (x) h, delta_r(x)>.
inline Vector dual_bracket_r(const LieSuperAlgebra& g, const Tensor2& r, const Vector& f, const Vector& h) {
    Vector out(g.field(), g.dim());
    for (std::size_t k = 0; k < g.dim(); ++k) out[k] = f.dot(delta_r(g, r, g.unit(k)).matrix() * h);
    return out;
}

// s_{g*}(f)(x) = sum_i f([x,a_i]) f(b_i).
inline Vector dual_square_r(const LieSuperAlgebra& g, const Tensor2& r, const Vector& f) {
    check_tensor(g, r);
    Vector out(g.field(), g.dim());
    Vector mf = r.matrix() * f;  // (M f)_i = f(b_i)
    for (std::size_t k = 0; k < g.dim(); ++k) out[k] = f.dot(g.ad(g.unit(k)) * mf);
    return out;
}

struct DualAssembly {
    std::optional<LieSuperAlgebra> algebra;
    std::string diagnostic;
};

namespace detail {

inline DualAssembly assemble_dual_tables(const LieSuperAlgebra& g,
                                         const std::function<Vector(const Vector&, const Vector&)>& bracket,
                                         const std::function<Vector(const Vector&)>& square) {
    const std::size_t n = g.dim();
    const Field& f = g.field();
    std::vector<BasisVector> basis;
    auto names = dual_names(g);
    for (std::size_t i = 0; i < n; ++i) basis.push_back({fresh_name(basis, names[i]), g.parity(i)});
    LieSuperAlgebra d(f, basis);
    try {
        for (std::size_t i = 0; i < n; ++i) {
            Vector ei = Vector::unit(f, n, i);
            if (!bracket(ei, ei).is_zero()) return {std::nullopt, "[" + names[i] + "," + names[i] + "] != 0"};
            for (std::size_t j = i + 1; j < n; ++j) {
                Vector ej = Vector::unit(f, n, j);
                Vector v = bracket(ei, ej);
                if (v != bracket(ej, ei))
                    return {std::nullopt, "dual bracket not symmetric at (" + names[i] + "," + names[j] + ")"};
                d.set_bracket(i, j, v);
            }
            if (g.parity(i) == Parity::Odd) d.set_square(i, square(ei));
        }
        d.validate();
    } catch (const std::exception& e) {
        return {std::nullopt, e.what()};
    }
    return {std::move(d), ""};
}

inline void dual_jacobi(Report& rep, const std::string& id, std::size_t n,
                        const std::function<Vector(const Vector&, const Vector&)>& bracket, const Field& f,
                        const std::vector<std::string>& names) {
    rep.pass(id);
    auto e = [&](std::size_t i) { return Vector::unit(f, n, i); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Vector v = bracket(e(i), bracket(e(j), e(k))) + bracket(e(j), bracket(e(k), e(i))) +
                           bracket(e(k), bracket(e(i), e(j)));
                if (!v.is_zero()) rep.fail(id, "(" + names[i] + "," + names[j] + "," + names[k] + ")");
            }
}

}  // namespace detail

// g* with the bracket dual to delta_r and the squaring s_{g*}; absent when the
// tables cannot form a superalgebra (e.g. r not symmetric on the odd block).
inline DualAssembly assemble_dual(const LieSuperAlgebra& g, const Tensor2& r) {
    check_tensor(g, r);
    return detail::assemble_dual_tables(
        g, [&](const Vector& a, const Vector& b) { return dual_bracket_r(g, r, a, b); },
        [&](const Vector& a) { return dual_square_r(g, r, a); });
}

// The squaring Jacobi identity on g* in terms of r:
//   sum_{i,j} f(b_j) ( f([[x,a_i],a_j]) h(b_i) + f([a_i,a_j]) h([x,b_i]) )
//   = sum_{i,j} f([x,a_i]) ( f([b_i,a_j]) h(b_j) + f(a_j) h([b_i,b_j]) )
//   + sum_{i,j} f(a_i) ( f([[x,b_i],a_j]) h(b_j) + f(a_j) h([[x,b_i],b_j]) )
// for odd f (basis and pair sums), all basis h and x. "dual-jacobi" is the
// ordinary Jacobi identity of the dual bracket, which the squaring identity
// presupposes; "dual-shape" records whether the tables can be stored at all.
inline Report jacobi_obstruction(const LieSuperAlgebra& g, const Tensor2& r) {
    check_tensor(g, r);
    Report rep;
    const Field& F = g.field();
    const std::size_t n = g.dim();
    auto names = dual_names(g);
    auto shape = assemble_dual(g, r);
    rep.check("dual-shape", shape.algebra.has_value(), [&] { return shape.diagnostic; });
    detail::dual_jacobi(
        rep, "dual-jacobi", n, [&](const Vector& a, const Vector& b) { return dual_bracket_r(g, r, a, b); }, F,
        names);

    std::vector<Vector> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = g.unit(i);
        b[i] = r.matrix().row(i);
    }
    auto br = [&](const Vector& u, const Vector& v) { return g.bracket(u, v); };
    rep.pass("JIsqdual");
    for (auto& [f, label] : detail::odd_probes_of(F, g.parities(), names))
        for (std::size_t hk = 0; hk < n; ++hk)
            for (std::size_t xk = 0; xk < n; ++xk) {
                Vector h = Vector::unit(F, n, hk);
                Vector x = g.unit(xk);
                Bits lhs = 0, rhs = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    Vector xai = br(x, a[i]), xbi = br(x, b[i]);
                    Bits f_xai = f.dot(xai), f_ai = f.dot(a[i]), h_bi = h.dot(b[i]), h_xbi = h.dot(xbi);
                    for (std::size_t j = 0; j < n; ++j) {
                        Bits f_bj = f.dot(b[j]), f_aj = f.dot(a[j]), h_bj = h.dot(b[j]);
                        lhs ^= F.mul(f_bj, F.mul(f.dot(br(xai, a[j])), h_bi) ^ F.mul(f.dot(br(a[i], a[j])), h_xbi));
                        rhs ^= F.mul(f_xai, F.mul(f.dot(br(b[i], a[j])), h_bj) ^ F.mul(f_aj, h.dot(br(b[i], b[j]))));
                        rhs ^= F.mul(f_ai, F.mul(f.dot(br(xbi, a[j])), h_bj) ^ F.mul(f_aj, h.dot(br(xbi, b[j]))));
                    }
                }
                if (lhs != rhs) rep.fail("JIsqdual", "(x,f,h) = (" + g.name(xk) + "," + label + "," + names[hk] + ")");
            }
    return rep;
}

// R(f) = sum f(a_i) b_i, i.e. the matrix r^T.
inline Matrix r_to_R(const Tensor2& r) { return r.matrix().transpose(); }
inline Tensor2 R_to_r(const Matrix& R) { return Tensor2(R.transpose()); }

// R even, (i) <f,R(h)> = <h,R(f)>, (ii) the cyclic sum on basis triples.
inline Report ijr_check(const LieSuperAlgebra& g, const Matrix& R) {
    Report rep;
    const std::size_t n = g.dim();
    if (R.rows() != n || R.cols() != n) throw DimensionError("R does not match the algebra");
    auto names = dual_names(g);
    auto p = operator_parity(g.parities(), g.parities(), R);
    rep.check("even", R.is_zero() || p == Parity::Even, [] { return std::string("R is not even"); });
    rep.check("i", R == R.transpose(), [&] {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (R.at(i, j) != R.at(j, i)) return "<" + names[i] + ",R(" + names[j] + ")> differs";
        return std::string();
    });
    std::vector<Vector> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = R.col(i);
    rep.pass("ii");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                Bits v = g.bracket(img[b], img[c])[a] ^ g.bracket(img[a], img[b])[c] ^ g.bracket(img[c], img[a])[b];
                if (v) rep.fail("ii", "(f,h,l) = (" + names[a] + "," + names[b] + "," + names[c] + ")");
            }
    return rep;
}

// f o ad_y as a covector: x -> f([y,x]).
inline Vector covector_ad(const LieSuperAlgebra& g, const Vector& f, const Vector& y) { return g.ad(y).transpose() * f; }

inline Vector dual_bracket_R(const LieSuperAlgebra& g, const Matrix& R, const Vector& f, const Vector& h) {
    return covector_ad(g, h, R * f) + covector_ad(g, f, R * h);
}
inline Vector dual_square_R(const LieSuperAlgebra& g, const Matrix& R, const Vector& f) {
    return covector_ad(g, f, R * f);
}

inline DualAssembly dual_structure_via_R(const LieSuperAlgebra& g, const Matrix& R) {
    return detail::assemble_dual_tables(
        g, [&](const Vector& a, const Vector& b) { return dual_bracket_R(g, R, a, b); },
        [&](const Vector& a) { return dual_square_R(g, R, a); });
}

// Whether R : (g*, R-built structure) -> g preserves the bracket and the squaring.
inline Report r_morphism_report(const LieSuperAlgebra& g, const Matrix& R) {
    Report rep;
    const Field& F = g.field();
    const std::size_t n = g.dim();
    auto names = dual_names(g);
    rep.pass("R-bracket-morphism");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Vector f = Vector::unit(F, n, i), h = Vector::unit(F, n, j);
            if (R * dual_bracket_R(g, R, f, h) != g.bracket(R * f, R * h))
                rep.fail("R-bracket-morphism", "(" + names[i] + "," + names[j] + ")");
        }
    rep.pass("R-square-morphism");
    for (auto& [f, label] : detail::odd_probes_of(F, g.parities(), names))
        if (R * dual_square_R(g, R, f) != g.squaring(R * f)) rep.fail("R-square-morphism", "at " + label);
    return rep;
}

// R^{-1}(s_g(R(f))) for invertible R.
inline Vector transported_square(const LieSuperAlgebra& g, const Matrix& R, const Vector& f) {
    auto inv = inverse(R);
    if (!inv) throw PreconditionError("R is not invertible");
    return *inv * g.squaring(R * f);
}

enum class Sqgdual2Form { Derived, AsPrinted };

// Squaring Jacobi of the R-built dual, for odd f (basis and pairs), basis h, x:
//   h([R(f o ad_Rf), x]) + f([Rf,[Rh,x]])
//   = h([Rf,[Rf,x]]) + f([Rh,[Rf,x]]) + f([R(h o ad_Rf), x]) + f([R(f o ad_Rh), x]).
// AsPrinted replaces f([Rf,[Rh,x]]) by f([[Rh,Rf],x]) on the left.
inline Report sqgdual2_report(const LieSuperAlgebra& g, const Matrix& R, Sqgdual2Form form = Sqgdual2Form::Derived) {
    Report rep;
    const Field& F = g.field();
    const std::size_t n = g.dim();
    auto names = dual_names(g);
    detail::dual_jacobi(
        rep, "dual-jacobi", n, [&](const Vector& a, const Vector& b) { return dual_bracket_R(g, R, a, b); }, F, names);
    rep.pass("sqgdual2");
    auto br = [&](const Vector& u, const Vector& v) { return g.bracket(u, v); };
    for (auto& [f, label] : detail::odd_probes_of(F, g.parities(), names))
        for (std::size_t hk = 0; hk < n; ++hk)
            for (std::size_t xk = 0; xk < n; ++xk) {
                Vector h = Vector::unit(F, n, hk), x = g.unit(xk);
                Vector Rf = R * f, Rh = R * h;
                Bits lhs = h.dot(br(R * covector_ad(g, f, Rf), x));
                lhs ^= form == Sqgdual2Form::Derived ? f.dot(br(Rf, br(Rh, x))) : f.dot(br(br(Rh, Rf), x));
                Bits rhs = h.dot(br(Rf, br(Rf, x))) ^ f.dot(br(Rh, br(Rf, x))) ^
                           f.dot(br(R * covector_ad(g, h, Rf), x)) ^ f.dot(br(R * covector_ad(g, f, Rh), x));
                if (lhs != rhs) rep.fail("sqgdual2", "(x,f,h) = (" + g.name(xk) + "," + label + "," + names[hk] + ")");
            }
    return rep;
}

struct ImRForm {
    Subspace image;
    std::vector<Vector> basis;  // homogeneous basis of Im(R)
    Matrix omega;               // omega(basis[a], basis[b])
    Report checks;
};

// omega(R(f), R(h)) = <h, R(f)> on Im(R), treated as a graded Lie algebra.
inline ImRForm imR_form(const LieSuperAlgebra& g, const Matrix& R) {
    const Field& F = g.field();
    const std::size_t n = g.dim();
    std::vector<Vector> cols;
    for (std::size_t i = 0; i < n; ++i) cols.push_back(R.col(i));
    Subspace im = Subspace::span(F, n, cols);
    auto basis = homogeneous_basis(g, im);
    const std::size_t m = basis.size();
    ImRForm out{im, basis, Matrix(F, m, m), {}};
    Report& rep = out.checks;
    auto pre = [&](const Vector& y) { return solve(R, y); };
    // omega(u, y) = <pre(y), u>
    auto omega = [&](const Vector& u, const Vector& y) -> std::optional<Bits> {
        auto p = pre(y);
        if (!p) return std::nullopt;
        return p->dot(u);
    };
    // Well-definedness: <k, R(h)> = 0 for k in ker R.
    rep.pass("well-defined");
    for (auto& k : kernel(R))
        for (std::size_t i = 0; i < n; ++i)
            if (k.dot(R.col(i))) rep.fail("well-defined", "kernel vector pairs nontrivially with R(e^" + std::to_string(i) + ")");
    rep.pass("closed-under-bracket");
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (!im.contains(g.bracket(basis[a], basis[b])))
                rep.fail("closed-under-bracket", "[" + g.show(basis[a]) + "," + g.show(basis[b]) + "]");
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) out.omega.set(a, b, *omega(basis[a], basis[b]));
    rep.check("antisymmetric", out.omega == out.omega.transpose(), [] { return std::string("omega is not symmetric"); });
    for (std::size_t a = 0; a < m; ++a)
        if (g.is_homogeneous(basis[a], Parity::Even) && out.omega.at(a, a))
            rep.fail("antisymmetric", "omega(" + g.show(basis[a]) + "," + g.show(basis[a]) + ") != 0");
    rep.check("nondegenerate", rank(out.omega) == m, [&] { return "rank " + std::to_string(rank(out.omega)); });
    rep.pass("closed");
    if (rep.ok("closed-under-bracket"))
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                for (std::size_t c = 0; c < m; ++c) {
                    Bits v = *omega(basis[a], g.bracket(basis[b], basis[c])) ^
                             *omega(basis[c], g.bracket(basis[a], basis[b])) ^
                             *omega(basis[b], g.bracket(basis[c], basis[a]));
                    if (v)
                        rep.fail("closed", "(" + g.show(basis[a]) + "," + g.show(basis[b]) + "," + g.show(basis[c]) + ")");
                }
    else
        rep.fail("closed", "Im(R) is not a subalgebra");
    return out;
}

// ---------------------------------------------------------------------------
// Deformations through U = R o Phi, Phi(x) = B(x, .)

struct Deformation {
    LieSuperAlgebra algebra;
    Matrix U;
    Matrix R;
    Report checks;
};

inline Report u_invariance_check(const LieSuperAlgebra& g, const BilinearForm& b, const Matrix& U) {
    Report rep;
    const std::size_t n = g.dim();
    if (U.rows() != n || U.cols() != n) throw DimensionError("U does not match the algebra");
    auto p = operator_parity(g.parities(), g.parities(), U);
    rep.check("U-even", U.is_zero() || p == Parity::Even, [] { return std::string("U is not even"); });
    rep.check("B-even", b.parity == FormParity::Even, [] { return std::string("the form must be even"); });
    rep.check("U-symmetric", U.transpose() * b.gram == b.gram * U, [] { return std::string("B(Ux,y) != B(x,Uy)"); });
    return rep;
}

namespace detail {

inline LieSuperAlgebra deformed_algebra(const LieSuperAlgebra& g, const Matrix& U) {
    LieSuperAlgebra d(g.field(), g.basis());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        Vector ui = U.col(i);
        for (std::size_t j = i + 1; j < g.dim(); ++j) d.set_bracket(i, j, g.bracket(ui, g.unit(j)) + g.bracket(g.unit(i), U.col(j)));
        if (g.parity(i) == Parity::Odd) d.set_square(i, g.bracket(ui, g.unit(i)));
    }
    d.validate();
    return d;
}

inline Report morphism_report(const LieSuperAlgebra& from, const LieSuperAlgebra& to, const Matrix& U) {
    Report rep;
    rep.pass("U-bracket-morphism");
    rep.pass("U-square-morphism");
    for (std::size_t i = 0; i < from.dim(); ++i)
        for (std::size_t j = i + 1; j < from.dim(); ++j)
            if (U * from.bracket_basis(i, j) != to.bracket(U.col(i), U.col(j)))
                rep.fail("U-bracket-morphism", "(" + from.name(i) + "," + from.name(j) + ")");
    for (auto& [x, label] : odd_probes_of(from.field(), from.parities(), basis_names(from)))
        if (U * from.squaring(x) != to.squaring(U * x)) rep.fail("U-square-morphism", "at " + label);
    return rep;
}

}  // namespace detail

// g with a NIS and an even symmetric r-matrix with R invertible.
inline Deformation deform(const LieSuperAlgebra& g, const BilinearForm& b, const Tensor2& r) {
    check_tensor(g, r);
    Report pre;
    pre.merge(nis_report(b, g), "B.");
    pre.check("B-even", b.parity == FormParity::Even, [] { return std::string("the form must be even"); });
    pre.check("r-even", is_even_tensor(g, r), [] { return std::string("r is not even"); });
    pre.check("r-symmetric", r.is_symmetric(), [] { return std::string("r is not symmetric"); });
    pre.check("r-matrix", is_r_matrix(g, r), [&] { return "CYBO(r) has " + cybo(g, r).first_nonzero(basis_names(g)); });
    Matrix R = r_to_R(r);
    pre.check("R-invertible", inverse(R).has_value(), [] { return std::string("R is singular"); });
    if (!pre.ok()) throw PreconditionError("deform: " + pre.first_failure());
    Matrix U = R * b.gram.transpose();
    LieSuperAlgebra d = detail::deformed_algebra(g, U);
    Report checks = verify(d);
    checks.merge(detail::morphism_report(d, g, U));
    checks.merge(u_invariance_check(g, b, U));
    // U(s~(x)) = s(U(x)) is reported, not asserted: it amounts to R(f o ad_R(f)) = s(R(f)),
    // which fails already for R = id on a 1|1 algebra with s(o) = e.
    for (auto& c : checks.checks())
        if (!c.pass && c.id != "U-square-morphism")
            throw ConsistencyError("deform: " + c.id + (c.witnesses.empty() ? "" : ": " + c.witnesses.front()));
    return {std::move(d), U, R, std::move(checks)};
}

// The converse direction: any even B-symmetric U. The report carries verify()
// of the deformed tables, whether U is a morphism, and whether R = U o Phi^{-1}
// comes from an r-matrix.
inline Deformation build_from_symmetric_U(const LieSuperAlgebra& g, const BilinearForm& b, const Matrix& U) {
    Report pre = u_invariance_check(g, b, U);
    pre.merge(nis_report(b, g), "B.");
    if (!pre.ok()) throw PreconditionError("deformation by U: " + pre.first_failure());
    LieSuperAlgebra d = detail::deformed_algebra(g, U);
    Matrix R = U * *inverse(b.gram.transpose());
    Report checks = verify(d);
    checks.merge(detail::morphism_report(d, g, U));
    checks.merge(ijr_check(g, R), "R.");
    return {std::move(d), U, R, std::move(checks)};
}

// ---------------------------------------------------------------------------
// Exhaustive search

struct RConstraints {
    bool even = false, symmetric = false, cybe = false, hajj = false, feldvoss = false;

    static RConstraints parse(const std::vector<std::string>& names) {
        RConstraints c;
        for (auto& n : names) {
            if (n == "even" || n == "graded") c.even = true;
            else if (n == "symmetric") c.symmetric = true;
            else if (n == "cybe") c.cybe = true;
            else if (n == "hajj") c.hajj = true;
            else if (n == "feldvoss") c.feldvoss = true;
            else throw std::invalid_argument("unknown r-matrix constraint '" + n + "'");
        }
        return c;
    }
};

inline std::vector<Tensor2> search_r_matrices(const LieSuperAlgebra& g, const RConstraints& c, std::uint64_t budget) {
    const Field& F = g.field();
    const std::size_t n = g.dim();
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = c.symmetric ? i : 0; j < n; ++j)
            if (!c.even || g.parity(i) == g.parity(j)) slots.push_back({i, j});
    // |F|^slots <= budget
    long double count = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        count *= F.order();
        if (count > static_cast<long double>(budget))
            throw BudgetError("search space " + std::to_string(F.order()) + "^" + std::to_string(slots.size()) +
                              " exceeds the budget " + std::to_string(budget));
    }
    std::vector<Tensor2> out;
    const auto elems = F.elements();
    std::vector<std::size_t> idx(slots.size(), 0);
    while (true) {
        Tensor2 r(F, n);
        for (std::size_t s = 0; s < slots.size(); ++s) {
            auto [i, j] = slots[s];
            Bits v = elems[idx[s]];
            r.set(i, j, v);
            if (c.symmetric) r.set(j, i, v);
        }
        bool keep = true;
        if (keep && c.cybe) keep = is_r_matrix(g, r);
        if (keep && (c.hajj || c.feldvoss)) {
            Report q = quasitriangular_conditions(g, r);
            if (c.hajj) keep = keep && q.ok("H");
            if (c.feldvoss) keep = keep && q.ok("F");
        }
        if (keep) out.push_back(r);
        std::size_t s = 0;
        while (s < slots.size() && ++idx[s] == elems.size()) idx[s++] = 0;
        if (s == slots.size()) break;
    }
    return out;
}

}  // namespace lsa

#pragma once

// Generator of valid double-extension seeds for tests: abelian NIS bases up to
// dimension 8 plus extensions of the small ones, invertible Delta~ from the
// invariant part of der_0, and (D, alpha, shift) drawn from the solution space of
// the linear conditions. Every seed passes the full precondition checks.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lsa/catalog.hpp"
#include "lsa/doubleext.hpp"

namespace seeds {

using namespace lsa;

struct Base {
    std::string label;
    LieSuperAlgebra a;
    BilinearForm b;
};

struct Seed {
    std::string label;
    DextSeed dext;
    LiftData lift;
};

inline Matrix hyperbolic(const Field& f, std::size_t pairs) {
    Matrix m(f, 2 * pairs, 2 * pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        m.set(2 * i, 2 * i + 1, 1);
        m.set(2 * i + 1, 2 * i, 1);
    }
    return m;
}

// Gram matrix pairing index i with index pair[i].
inline Matrix pairing(const Field& f, const std::vector<std::size_t>& pair) {
    Matrix m(f, pair.size(), pair.size());
    for (std::size_t i = 0; i < pair.size(); ++i) m.set(i, pair[i], 1);
    return m;
}

inline std::vector<Base> abelian_bases(const Field& f, FormParity p) {
    std::vector<Base> out;
    auto add = [&](std::string label, LieSuperAlgebra a, Matrix gram) {
        auto b = make_form(a, gram, p);
        if (is_NIS(b, a).ok) out.push_back({std::move(label), std::move(a), std::move(b)});
    };
    if (p == FormParity::Even) {
        add("ab(1|0)", catalog::abelian(1, 0, f), Matrix::identity(f, 1));
        add("ab(2|0)h", catalog::abelian(2, 0, f), hyperbolic(f, 1));
        add("ab(2|0)i", catalog::abelian(2, 0, f), Matrix::identity(f, 2));
        add("ab(0|2)", catalog::abelian(0, 2, f), hyperbolic(f, 1));
        add("ab(1|2)", catalog::abelian(1, 2, f), pairing(f, {0, 2, 1}));
        add("ab(2|2)", catalog::abelian(2, 2, f), hyperbolic(f, 2));
        add("ab(0|4)", catalog::abelian(0, 4, f), hyperbolic(f, 2));
        add("ab(4|0)", catalog::abelian(4, 0, f), hyperbolic(f, 2));
        add("ab(2|4)", catalog::abelian(2, 4, f), hyperbolic(f, 3));
        add("ab(4|2)", catalog::abelian(4, 2, f), hyperbolic(f, 3));
        add("ab(4|4)", catalog::abelian(4, 4, f), hyperbolic(f, 4));
    } else {
        add("oddpair", catalog::oddpair(f), pairing(f, {1, 0}));
        add("ab(2|2)o", catalog::abelian(2, 2, f), pairing(f, {2, 3, 0, 1}));
        add("ab(2|2)x", catalog::abelian(2, 2, f), pairing(f, {3, 2, 1, 0}));
        add("ab(3|3)", catalog::abelian(3, 3, f), pairing(f, {3, 4, 5, 0, 1, 2}));
    }
    return out;
}

// Invertible even derivations leaving B invariant. The invariance conditions are
// linear, so der_0(a) is first cut down to the invariant subspace, which is then
// enumerated (or sampled past the cap).
inline std::vector<Matrix> invertible_deltas(const LieSuperAlgebra& a, const BilinearForm& b, std::size_t cap = 4096) {
    const Field& f = a.field();
    auto der = derivation_space(a, Parity::Even);
    const Matrix& g = b.gram;
    auto conditions = [&](const Matrix& m) {
        Matrix gm = g * m;
        std::vector<Bits> out;
        for (std::size_t i = 0; i < a.dim(); ++i) {
            for (std::size_t j = i + 1; j < a.dim(); ++j) out.push_back(gm.at(i, j) ^ gm.at(j, i));
            if (a.parity(i) == Parity::Even) out.push_back(gm.at(i, i));
        }
        return Vector(f, out);
    };
    std::vector<Matrix> basis;
    if (!der.empty()) {
        std::vector<Vector> cols;
        for (auto& d : der) cols.push_back(conditions(d.matrix));
        for (auto& k : kernel(Matrix::from_columns(f, cols[0].size(), cols))) {
            Matrix m(f, a.dim(), a.dim());
            for (std::size_t i = 0; i < der.size(); ++i) m = m + der[i].matrix.scaled(k[i]);
            basis.push_back(m);
        }
    }
    std::vector<Matrix> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < basis.size() && total <= cap; ++i) total *= f.order();
    std::mt19937 rng(1234);
    std::set<std::string> seen;
    auto consider = [&](const std::vector<Bits>& c) {
        Matrix m(f, a.dim(), a.dim());
        for (std::size_t i = 0; i < c.size(); ++i) m = m + basis[i].scaled(c[i]);
        if (!inverse(m) || !delta_invariance_report(b, m).ok()) return;
        if (seen.insert(m.str()).second) out.push_back(m);
    };
    std::vector<Bits> c(basis.size(), 0);
    if (total <= cap) {
        while (true) {
            consider(c);
            std::size_t k = 0;
            while (k < c.size() && ++c[k] == f.order()) c[k++] = 0;
            if (k == c.size()) break;
        }
    } else {
        for (std::size_t t = 0; t < cap; ++t) {
            for (auto& x : c) x = rng() % f.order();
            consider(c);
        }
    }
    return out;
}

[[maybe_unused]] inline Vector random_vec(const LieSuperAlgebra& a, std::optional<Parity> p, std::mt19937& rng) {
    Vector v = a.zero();
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (!p || a.parity(i) == *p) v[i] = rng() % a.field().order();
    return v;
}

inline std::string key(const Seed& s) {
    return s.label + "|" + s.dext.d.matrix.str() + s.dext.alpha_values.str() + s.dext.a0.str() +
           s.lift.delta_a.matrix.str() + s.dext.a.field().literal(s.lift.lambda) + s.lift.shift.str() +
           s.dext.a.field().literal(s.lift.mu) + s.dext.a.field().literal(s.dext.c);
}

// For fixed (Delta~, lambda) every condition except those involving a0 is linear in
// u = (D, shift, alpha). The residual map is assembled column by column, its kernel
// is sampled, and a0 is then forced by D~(a0) = D(shift); the full precondition
// checks decide acceptance.
struct Unknowns {
    std::vector<std::pair<std::size_t, std::size_t>> d_slots;
    std::vector<std::size_t> shift_slots, alpha_slots;
    std::size_t size() const { return d_slots.size() + shift_slots.size() + alpha_slots.size(); }
};

inline void unpack(const Unknowns& u, const Vector& v, const LieSuperAlgebra& a, Matrix& d, Vector& shift,
                   Vector& alpha) {
    const Field& f = a.field();
    d = Matrix(f, a.dim(), a.dim());
    shift = a.zero();
    alpha = a.zero();
    std::size_t k = 0;
    for (auto& [r, c] : u.d_slots) d.set(r, c, v[k++]);
    for (auto i : u.shift_slots) shift[i] = v[k++];
    for (auto i : u.alpha_slots) alpha[i] = v[k++];
}

inline Vector residual(DextVariant var, const Base& base, const Matrix& dt, Bits lambda, const Matrix& d,
                       const Vector& shift, const Vector& alpha) {
    const LieSuperAlgebra& a = base.a;
    const Field& f = a.field();
    const std::size_t n = a.dim();
    std::vector<Bits> out;
    auto push = [&](const Vector& v) { out.insert(out.end(), v.data().begin(), v.data().end()); };
    auto push_m = [&](const Matrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i) push(m.row(i));
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            push(d * a.bracket_basis(i, j) + a.bracket(d.col(i), a.unit(j)) + a.bracket(a.unit(i), d.col(j)));
    for (std::size_t i : a.indices(Parity::Odd)) push(d * a.square_basis(i) + a.bracket(d.col(i), a.unit(i)));
    Matrix left = d.transpose() * base.b.gram;
    push_m(left + base.b.gram * d);
    for (std::size_t i = 0; i < n; ++i) out.push_back(left.at(i, i));
    push_m(commutator(dt, d) + d.scaled(lambda) + a.ad(shift));
    if (has_alpha(var)) {
        auto odd = a.indices(Parity::Odd);
        // alpha on a sum of two basis vectors uses the polar form B(e_i, D e_j).
        auto alpha_at = [&](const Vector& v) {
            Bits acc = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!v[i]) continue;
                acc ^= f.mul(f.square(v[i]), alpha[i]);
                for (std::size_t j = i + 1; j < n; ++j)
                    if (v[j]) acc ^= f.mul(f.mul(v[i], v[j]), base.b(a.unit(i), d * a.unit(j)));
            }
            return acc;
        };
        auto fval = [&](const Vector& v) {
            return f.mul(lambda, alpha_at(v)) ^ base.b(d * (dt * v), v) ^ base.b(a.squaring(v), shift);
        };
        for (std::size_t i = 0; i < odd.size(); ++i) {
            out.push_back(fval(a.unit(odd[i])));
            for (std::size_t j = i + 1; j < odd.size(); ++j) out.push_back(fval(a.unit(odd[i]) + a.unit(odd[j])));
        }
    }
    return Vector(f, out);
}

// Samples until `want` distinct valid seeds are found for one base, or the
// attempt budget runs out. D = 0 draws are capped so nontrivial D dominate.
inline void sample_base(const Base& base, DextVariant v, std::size_t want, std::mt19937& rng,
                        std::vector<Seed>& out, std::set<std::string>& seen, std::size_t attempts = 400) {
    const LieSuperAlgebra& a = base.a;
    const Field& f = a.field();
    const std::size_t n = a.dim();
    auto deltas = invertible_deltas(a, base.b);
    if (deltas.empty()) return;
    Unknowns u;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (a.parity(r) == a.parity(c) + d_parity(v)) u.d_slots.push_back({r, c});
    for (std::size_t i = 0; i < n; ++i) {
        if (a.parity(i) == shift_parity(v)) u.shift_slots.push_back(i);
        if (has_alpha(v) && a.parity(i) == Parity::Odd) u.alpha_slots.push_back(i);
    }
    // Kernels for every (Delta~, lambda); pairs admitting D != 0 are drawn first.
    struct System {
        const Matrix* dt;
        Bits lambda;
        std::vector<Vector> sols;
    };
    std::vector<System> rich, poor;
    std::shuffle(deltas.begin(), deltas.end(), rng);
    if (deltas.size() > 256) deltas.resize(256);
    for (auto& dt : deltas)
        for (Bits lambda = 1; lambda < f.order(); ++lambda) {
            std::vector<Vector> cols;
            for (std::size_t k = 0; k < u.size(); ++k) {
                Matrix d;
                Vector shift, alpha;
                unpack(u, Vector::unit(f, u.size(), k), a, d, shift, alpha);
                cols.push_back(residual(v, base, dt, lambda, d, shift, alpha));
            }
            System sys{&dt, lambda, {}};
            if (!cols.empty()) sys.sols = kernel(Matrix::from_columns(f, cols[0].size(), cols));
            bool has_d = false;
            for (auto& x : sys.sols) {
                Matrix d;
                Vector shift, alpha;
                unpack(u, x, a, d, shift, alpha);
                has_d = has_d || !d.is_zero();
            }
            (has_d ? rich : poor).push_back(std::move(sys));
        }
    std::size_t found = 0, trivial = 0;
    for (std::size_t t = 0; t < attempts && found < want; ++t) {
        bool use_rich = !rich.empty() && (poor.empty() || rng() % 5 != 0);
        const System& sys = use_rich ? rich[rng() % rich.size()] : poor[rng() % poor.size()];
        const Matrix& dt = *sys.dt;
        Bits lambda = sys.lambda;
        const auto& sols = sys.sols;
        Vector pick(f, u.size());
        for (auto& s : sols) pick.axpy(rng() % f.order(), s);
        Seed s;
        s.label = base.label;
        Matrix d;
        Vector shift, alpha;
        unpack(u, pick, a, d, shift, alpha);
        if (d.is_zero() && trivial >= 2) continue;
        s.dext.variant = v;
        s.dext.a = a;
        s.dext.b = base.b;
        s.dext.d = {d, d_parity(v)};
        s.dext.alpha_values = alpha;
        s.dext.a0 = a.zero();
        if (has_a0(v)) s.dext.a0 = *inverse(dt) * (d * shift);
        s.lift.delta_a = {dt, Parity::Even};
        s.lift.lambda = lambda;
        s.lift.shift = shift;
        s.lift.mu = v == DextVariant::OddEven ? rng() % f.order() : 0;
        if (v == DextVariant::EvenEven && rng() % 3 == 0) s.dext.c = 0;
        if (v == DextVariant::OddOdd) s.dext.m = f.div(base.b(s.dext.a0, shift), lambda);
        if (!dext_preconditions(s.dext).ok()) continue;
        DoubleExtension ext = double_extend(s.dext);
        if (!lift_preconditions(ext, s.lift).ok()) continue;
        if (!seen.insert(key(s)).second) continue;
        if (d.is_zero()) ++trivial;
        out.push_back(std::move(s));
        ++found;
    }
}

// Valid seeds for one variant over one field: abelian bases first, then the
// 4-dimensional nonabelian algebras obtained by extending the 2-dimensional ones.
inline std::vector<Seed> corpus(DextVariant v, const Field& f, std::size_t per_base = 8, unsigned rng_seed = 99) {
    std::mt19937 rng(rng_seed);
    std::vector<Seed> out;
    std::set<std::string> seen;
    auto bases = abelian_bases(f, b_parity(v));
    for (auto& b : bases) sample_base(b, v, per_base, rng, out, seen);
    // Second level: extensions of 2-dimensional bases are 4-dimensional seeds.
    std::vector<Base> level2;
    for (auto& s : std::vector<Seed>(out)) {
        if (s.dext.a.dim() != 2) continue;
        auto lifted = lift_delta(double_extend(s.dext), s.lift);
        if (!is_NIS(lifted.ext.b, lifted.ext.g).ok) continue;
        level2.push_back({"dext(" + s.label + ")", lifted.ext.g, lifted.ext.b});
        if (level2.size() >= 3) break;
    }
    for (auto& b : level2) sample_base(b, v, per_base / 2 + 1, rng, out, seen);
    return out;
}

}  // namespace seeds

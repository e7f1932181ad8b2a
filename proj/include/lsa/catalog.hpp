#pragma once

#include <string>
#include <vector>

#include "forms.hpp"
#include "manin.hpp"
#include "superalgebra.hpp"

namespace lsa::catalog {

// hei(0|2): p, q odd, z even; [p,q] = z, s(p) = s(q) = 0.
inline LieSuperAlgebra hei2(const Field& f = Field::gf(1)) {
    LieSuperAlgebra g(f, {{"p", Parity::Odd}, {"q", Parity::Odd}, {"z", Parity::Even}});
    g.set_bracket(0, 1, g.unit(2));
    g.validate();
    return g;
}

// Dual algebra of hei(0|2) with [p*,z*] = s q* + t p*, [q*,z*] = u q* + v p*.
inline LieSuperAlgebra hei2_dual(const Field& f, Bits s, Bits t, Bits u, Bits v) {
    LieSuperAlgebra g(f, {{"p*", Parity::Odd}, {"q*", Parity::Odd}, {"z*", Parity::Even}});
    Vector a = g.zero(), b = g.zero();
    a[0] = t;
    a[1] = s;
    b[0] = v;
    b[1] = u;
    g.set_bracket(0, 2, a);
    g.set_bracket(1, 2, b);
    g.validate();
    return g;
}

// abelian(m|n): m even basis vectors e0.., n odd basis vectors o0.., zero structure.
inline LieSuperAlgebra abelian(std::size_t m, std::size_t n, const Field& f = Field::gf(1)) {
    std::vector<BasisVector> basis;
    for (std::size_t i = 0; i < m; ++i) basis.push_back({"e" + std::to_string(i), Parity::Even});
    for (std::size_t i = 0; i < n; ++i) basis.push_back({"o" + std::to_string(i), Parity::Odd});
    return LieSuperAlgebra(f, basis);
}

// 1|1 abelian seed u (even), v (odd) with the odd form B(u,v) = 1.
inline LieSuperAlgebra oddpair(const Field& f = Field::gf(1)) {
    return LieSuperAlgebra(f, {{"u", Parity::Even}, {"v", Parity::Odd}});
}

inline BilinearForm oddpair_form(const LieSuperAlgebra& g) {
    return make_form(g, Matrix::from_rows(g.field(), {{0, 1}, {1, 0}}), FormParity::Odd);
}

inline DualPair hei2_pair(const Field& f, Bits s, Bits t, Bits u, Bits v) { return {hei2(f), hei2_dual(f, s, t, u, v)}; }

// The Manin triple hei(0|2) + hei(0|2)*, basis p, q, z, p*, q*, z*.
inline ManinTriple hei2_manin(const Field& f, Bits s, Bits t, Bits u, Bits v) {
    return build_manin(hei2_pair(f, s, t, u, v));
}

// a2 D2 + a4 D4 + a9 D9 + a10 D10 + (a9 + a10) D11 on the dual-abelian triple,
// D2: q -> q*, D4: p -> p*, D9 = id on {p, q*, z}, D10 = id on {q, p*, z},
// D11 = id on {p*, q*, z*}.
inline GradedOperator hei2_deriv(const Field& f, Bits a2, Bits a4, Bits a9, Bits a10) {
    for (Bits a : {a2, a4, a9, a10})
        if (!f.contains(a)) throw std::invalid_argument("hei2-deriv: " + f.literal(a) + " not in " + f.describe());
    if (a9 <= 1 || a10 <= 1) throw std::invalid_argument("hei2-deriv: a9 and a10 must lie outside {0, 1}");
    enum { p, q, z, ps, qs, zs };
    Matrix m(f, 6, 6);
    auto add = [&](int from, int to, Bits c) { m.set(to, from, m.at(to, from) ^ c); };
    add(q, qs, a2);
    add(p, ps, a4);
    for (int i : {p, qs, z}) add(i, i, a9);
    for (int i : {q, ps, z}) add(i, i, a10);
    for (int i : {qs, ps, zs}) add(i, i, f.add(a9, a10));
    return {m, Parity::Even};
}

}  // namespace lsa::catalog

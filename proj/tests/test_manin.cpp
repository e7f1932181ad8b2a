#include <gtest/gtest.h>

#include <functional>

#include "lsa/catalog.hpp"
#include "lsa/manin.hpp"
#include "manin_corpus.hpp"

using namespace lsa;

namespace {

const Field& F2 = Field::gf(1);
const Field& F4 = Field::gf(2);

enum { P, Q, Z, PS, QS, ZS };

// Operators spanned by `basis` on which every residual vanishes; GF(2) only.
std::vector<Matrix> kernel_combos(const std::vector<GradedOperator>& basis,
                                  const std::function<std::vector<Bits>(const Matrix&)>& residual) {
    std::vector<Vector> cols;
    for (auto& b : basis) cols.push_back(Vector(F2, residual(b.matrix)));
    std::vector<Matrix> out;
    if (basis.empty()) return out;
    std::size_t rows = cols.front().size();
    Matrix m = Matrix::from_columns(F2, rows, cols);
    std::vector<Matrix> gens;
    for (auto& k : kernel(m)) {
        Matrix d(F2, basis[0].matrix.rows(), basis[0].matrix.cols());
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (k[i]) d = d + basis[i].matrix;
        gens.push_back(d);
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << gens.size()); ++mask) {
        Matrix d(F2, basis[0].matrix.rows(), basis[0].matrix.cols());
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (mask >> i & 1) d = d + gens[i];
        out.push_back(d);
    }
    return out;
}

std::vector<Bits> flatten(const Matrix& m) {
    std::vector<Bits> v;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
    return v;
}

}  // namespace

TEST(Manin, CoadjointMaps) {
    auto pair = catalog::hei2_pair(F2, 0, 0, 0, 0);
    const auto& g = pair.g;
    const auto& k = pair.gstar;
    // z*(o ad_p): q -> z*([p,q]) = 1.
    EXPECT_EQ(coad_right(pair, k.unit(2), g.unit(0)), k.unit(1));
    EXPECT_TRUE(coad_right(pair, k.unit(0), g.unit(2)).is_zero());  // z central
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(coad_left(pair, g.unit(i), k.unit(j)).is_zero());
    auto full = catalog::hei2_pair(F2, 1, 1, 0, 1);
    // p o ad_z*: coordinate on e_i is p([z*, e^i]); [z*,p*] = s q* + t p*, [z*,q*] = u q* + v p*.
    EXPECT_EQ(coad_left(full, g.unit(0), k.unit(2)), g.unit(0) + g.unit(1));
}

TEST(Manin, HeisenbergAllParameters) {
    for (unsigned bits = 0; bits < 16; ++bits) {
        Bits s = bits & 1, t = bits >> 1 & 1, u = bits >> 2 & 1, v = bits >> 3 & 1;
        auto pair = catalog::hei2_pair(F2, s, t, u, v);
        ASSERT_TRUE(check_manin_conditions(pair).ok()) << check_manin_conditions(pair).render();
        ASSERT_TRUE(cocycle_check(pair).ok());
        auto tr = build_manin(pair);
        const auto& h = tr.h;
        auto vec = [&](std::initializer_list<std::pair<int, Bits>> terms) {
            Vector w = h.zero();
            for (auto [i, c] : terms) w[i] ^= c;
            return w;
        };
        EXPECT_EQ(h.bracket_basis(P, PS), vec({{Z, t}}));
        EXPECT_EQ(h.bracket_basis(P, QS), vec({{Z, v}}));
        EXPECT_EQ(h.bracket_basis(P, ZS), vec({{P, t}, {Q, v}, {QS, 1}}));
        EXPECT_EQ(h.bracket_basis(Q, PS), vec({{Z, s}}));
        EXPECT_EQ(h.bracket_basis(Q, QS), vec({{Z, u}}));
        EXPECT_EQ(h.bracket_basis(Q, ZS), vec({{P, s}, {Q, u}, {PS, 1}}));
        EXPECT_EQ(h.bracket_basis(P, Q), vec({{Z, 1}}));
        EXPECT_EQ(h.bracket_basis(PS, ZS), vec({{PS, t}, {QS, s}}));
        EXPECT_EQ(h.bracket_basis(QS, ZS), vec({{PS, v}, {QS, u}}));
        for (unsigned c = 0; c < 16; ++c) {
            Bits a1 = c & 1, a2 = c >> 1 & 1, a3 = c >> 2 & 1, a4 = c >> 3 & 1;
            Vector x = vec({{P, a1}, {Q, a2}, {PS, a3}, {QS, a4}});
            Bits zc = (a1 & a2) ^ (a1 & a3 & t) ^ (a1 & a4 & v) ^ (a2 & a3 & s) ^ (a2 & a4 & u);
            EXPECT_EQ(h.squaring(x), vec({{Z, zc}}));
        }
        EXPECT_TRUE(manin_triple_report(tr).ok());
        EXPECT_EQ(h.name(PS), "p*");
    }
}

TEST(Manin, HeisenbergOverGF4) {
    for (Bits s : F4.elements())
        for (Bits v : F4.elements()) {
            auto pair = catalog::hei2_pair(F4, s, 0x2, 0x3, v);
            EXPECT_TRUE(check_manin_conditions(pair).ok());
            EXPECT_TRUE(cocycle_check(pair).ok());
            EXPECT_NO_THROW(build_manin(pair));
        }
}

TEST(Manin, RestrictionLaws) {
    auto pair = catalog::hei2_pair(F2, 1, 0, 1, 1);
    auto h = build_manin(pair).h;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) {
                EXPECT_EQ(h.c(i, j, k), pair.g.c(i, j, k));
                EXPECT_EQ(h.c(i, j, k + 3), 0u);
                EXPECT_EQ(h.c(i + 3, j + 3, k + 3), pair.gstar.c(i, j, k));
                EXPECT_EQ(h.c(i + 3, j + 3, k), 0u);
            }
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_EQ(h.q(i, k), pair.g.q(i, k));
            EXPECT_EQ(h.q(i + 3, k + 3), pair.gstar.q(i, k));
        }
    }
}

// h([x, y o ad_f]) = [f, h o ad_x](y) on all basis quadruples.
TEST(Manin, CoadjointExchangeIdentity) {
    for (unsigned bits = 0; bits < 16; ++bits) {
        auto pair = catalog::hei2_pair(F2, bits & 1, bits >> 1 & 1, bits >> 2 & 1, bits >> 3 & 1);
        const auto& g = pair.g;
        const auto& k = pair.gstar;
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t y = 0; y < 3; ++y)
                for (std::size_t f = 0; f < 3; ++f)
                    for (std::size_t hh = 0; hh < 3; ++hh) {
                        Bits lhs = k.unit(hh).dot(g.bracket(g.unit(x), coad_left(pair, g.unit(y), k.unit(f))));
                        Bits rhs = g.unit(y).dot(k.bracket(k.unit(f), coad_right(pair, k.unit(hh), g.unit(x))));
                        EXPECT_EQ(lhs, rhs);
                    }
    }
}

TEST(Manin, AbelianPair) {
    DualPair p{catalog::abelian(1, 2), catalog::abelian(1, 2)};
    EXPECT_TRUE(check_manin_conditions(p).ok());
    EXPECT_TRUE(cocycle_check(p).ok());
    auto t = build_manin(p);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j) EXPECT_TRUE(t.h.bracket_basis(i, j).is_zero());
        if (t.h.parity(i) == Parity::Odd) EXPECT_TRUE(t.h.square_basis(i).is_zero());
    }
    EXPECT_EQ(t.h.name(3), "e0'");
}

TEST(Manin, CocycleImageSymmetric) {
    auto pair = catalog::hei2_pair(F2, 1, 1, 1, 0);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(dual_cobracket(pair.g, pair.gstar, pair.g.unit(i)).is_symmetric());
        EXPECT_TRUE(dual_cobracket(pair.gstar, pair.g, pair.gstar.unit(i)).is_symmetric());
    }
}

TEST(Manin, CorruptedPairLocalized) {
    auto pair = catalog::hei2_pair(F2, 0, 0, 0, 0);
    // s(p*) = z* breaks (Sq*) at f = p*.
    pair.gstar.set_square(0, pair.gstar.unit(2));
    auto rep = check_manin_conditions(pair);
    EXPECT_FALSE(rep.ok());
    EXPECT_TRUE(rep.ok("Bra"));
    EXPECT_TRUE(rep.ok("Sq"));
    EXPECT_FALSE(rep.ok("Sq*"));
    EXPECT_NE(rep.render().find("f = p*"), std::string::npos) << rep.render();
    EXPECT_THROW(build_manin(pair), ManinError);
}

TEST(Manin, CheckersAgreeOnMutationCorpus) {
    auto corpus = pairs::with_mutations();
    const std::size_t base = pairs::base().size();
    ASSERT_GE(corpus.size(), 200u);
    std::size_t valid = 0, invalid = 0;
    for (auto& p : corpus) {
        bool a = check_manin_conditions(p).ok();
        bool b = cocycle_check(p).ok();
        EXPECT_EQ(a, b) << p.g.name(0) << " / " << p.gstar.name(0);
        (a ? valid : invalid)++;
    }
    EXPECT_GT(valid, base - 1);
    EXPECT_GT(invalid, 100u);
}

TEST(Manin, DextEvenRoundTrip) {
    auto t = catalog::hei2_manin(F2, 0, 0, 0, 0);
    const auto& h = t.h;
    // D = ad_{z*}: p -> q*, q -> p*.
    GradedOperator d{h.ad(h.unit(ZS)), Parity::Even};
    auto ext = manin_dext_even(t, d, h.zero());
    EXPECT_TRUE(ext.checks.ok("D(k1)"));
    EXPECT_TRUE(manin_triple_report(ext.triple).ok());
    const auto& g = ext.ext.g;
    EXPECT_EQ(g.bracket_basis(P + 1, Q + 1), g.unit(Z + 1) + g.unit(0));
    auto r = manin_reduce(ext.triple, Parity::Even);
    ASSERT_TRUE(r.ok) << r.diagnostic;
    EXPECT_FALSE(r.x_in_k);
    EXPECT_TRUE(r.reduced.h.same_tables(h));
    EXPECT_EQ(r.reduced.b.gram, t.b.gram);
    EXPECT_EQ(r.reduced.g, t.g);
    EXPECT_EQ(r.reduced.k, t.k);
    EXPECT_EQ(r.seed.d.matrix, d.matrix);
    EXPECT_TRUE(r.seed.alpha_values.is_zero());
}

TEST(Manin, DextEvenTrivialSplits) {
    auto t = catalog::hei2_manin(F2, 1, 0, 0, 1);
    auto ext = manin_dext_even(t, {Matrix(F2, 6, 6), Parity::Even}, t.h.zero());
    EXPECT_TRUE(manin_triple_report(ext.triple).ok());
    auto r = manin_reduce(ext.triple, Parity::Even);
    ASSERT_TRUE(r.ok) << r.diagnostic;
    EXPECT_TRUE(r.reduced.h.same_tables(t.h));
    EXPECT_TRUE(r.seed.d.matrix.is_zero());
}

TEST(Manin, DextEvenRejectsAlphaOnK1) {
    auto t = catalog::hei2_manin(F2, 0, 0, 0, 0);
    Vector alpha = t.h.zero();
    alpha[PS] = 1;  // alpha(p*) != 0 with D = 0
    EXPECT_THROW(manin_dext_even(t, {Matrix(F2, 6, 6), Parity::Even}, alpha), ManinError);
    alpha[PS] = 0;
    alpha[P] = 1;  // alpha on g_1 is allowed
    EXPECT_NO_THROW(manin_dext_even(t, {Matrix(F2, 6, 6), Parity::Even}, alpha));
}

TEST(Manin, DextOddRoundTrip) {
    auto t = catalog::hei2_manin(F2, 0, 0, 0, 0);
    const auto& h = t.h;
    auto odd = derivation_space(h, Parity::Odd);
    auto candidates = kernel_combos(odd, [&](const Matrix& d) {
        auto r = flatten(d.transpose() * t.b.gram + t.b.gram * d);
        // D(k) in k: no g-coordinates on images of k.
        for (std::size_t j = 3; j < 6; ++j)
            for (std::size_t i = 0; i < 3; ++i) r.push_back(d.at(i, j));
        return r;
    });
    std::size_t found = 0;
    for (auto& m : candidates) {
        if (m.is_zero()) continue;
        for (Vector a0 : {h.zero(), h.unit(ZS)}) {
            if (m * m != h.ad(a0) || !(m * a0).is_zero()) continue;
            auto ext = manin_dext_odd(t, {m, Parity::Odd}, a0);
            EXPECT_TRUE(manin_triple_report(ext.triple).ok());
            auto r = manin_reduce(ext.triple, Parity::Odd);
            ASSERT_TRUE(r.ok) << r.diagnostic;
            EXPECT_TRUE(r.reduced.h.same_tables(h));
            EXPECT_EQ(r.reduced.g, t.g);
            EXPECT_EQ(r.reduced.k, t.k);
            EXPECT_EQ(r.seed.d.matrix, m);
            EXPECT_EQ(r.seed.a0, a0);
            ++found;
        }
    }
    EXPECT_GT(found, 0u);
}

TEST(Manin, DextOddPreconditions) {
    auto t = catalog::hei2_manin(F2, 0, 0, 0, 0);
    // a0 = p* is not even.
    EXPECT_THROW(manin_dext_odd(t, {Matrix(F2, 6, 6), Parity::Odd}, t.h.unit(PS)), PreconditionError);
}

TEST(Manin, ReduceAbsentWithoutOddCenter) {
    // [[t,v],[s,u]] invertible: no odd central vector.
    auto t = catalog::hei2_manin(F2, 1, 1, 1, 0);
    auto r = manin_reduce(t, Parity::Odd);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.diagnostic.empty());
}

// In the dual-abelian triple p* is odd, central and squares to zero.
TEST(Manin, ReduceOddFromKWing) {
    auto t = catalog::hei2_manin(F2, 0, 0, 0, 0);
    auto r = manin_reduce(t, Parity::Odd);
    ASSERT_TRUE(r.ok) << r.diagnostic;
    EXPECT_TRUE(r.x_in_k);
    EXPECT_EQ(r.basis.col(0), t.h.unit(PS));
    EXPECT_EQ(r.basis.col(5), t.h.unit(P));
    EXPECT_EQ(r.reduced.h.dim(), 4u);
}

TEST(Manin, ReduceFindsCentralVectorInK) {
    auto t = build_manin(pairs::affine_pair());
    auto r = manin_reduce(t, Parity::Even);
    ASSERT_TRUE(r.ok) << r.diagnostic;
    EXPECT_TRUE(r.x_in_k);
    EXPECT_EQ(r.reduced.h.dim(), 2u);
}

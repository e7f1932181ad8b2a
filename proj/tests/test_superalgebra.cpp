#include <gtest/gtest.h>

#include "lsa/catalog.hpp"
#include "lsa/superalgebra.hpp"

using namespace lsa;

namespace {

LieSuperAlgebra broken_jacobi() {
    const Field& f = Field::gf(1);
    LieSuperAlgebra g(f, {{"x", Parity::Even}, {"y", Parity::Even}, {"z", Parity::Even}});
    g.set_bracket(0, 1, g.unit(0));
    g.set_bracket(1, 2, g.unit(1));
    return g;
}

std::vector<Vector> all_vectors(const Field& f, std::size_t n) {
    std::vector<Vector> out;
    std::vector<Bits> c(n, 0);
    while (true) {
        out.emplace_back(f, c);
        std::size_t k = 0;
        while (k < n && ++c[k] == f.order()) c[k++] = 0;
        if (k == n) break;
    }
    return out;
}

}  // namespace

TEST(Superalgebra, HeisenbergVerifies) {
    auto g = catalog::hei2();
    EXPECT_TRUE(verify(g).ok()) << verify(g).render();
    EXPECT_EQ(g.squaring(g.unit(0) + g.unit(1)), g.unit(2));
    EXPECT_EQ(center(g), Subspace::span(g.field(), 3, {g.unit(2)}));
}

TEST(Superalgebra, JacobiFailurePinpointed) {
    Report r = verify(broken_jacobi());
    EXPECT_FALSE(r.ok("jacobi"));
    EXPECT_NE(r.render().find("CHECK jacobi FAIL (x,y,z)"), std::string::npos) << r.render();
}

TEST(Superalgebra, SquaringJacobiFailure) {
    const Field& f = Field::gf(1);
    LieSuperAlgebra g(f, {{"p", Parity::Odd}, {"z", Parity::Even}});
    g.set_square(0, g.unit(1));
    g.set_bracket(0, 1, g.unit(0));
    Report r = verify(g);
    EXPECT_TRUE(r.ok("jacobi"));
    EXPECT_FALSE(r.ok("squaring-jacobi"));
    // F(g) only checks the ordinary identity.
    EXPECT_TRUE(verify(desuperize(g)).ok());
}

TEST(Superalgebra, InvariantsRejected) {
    const Field& f = Field::gf(1);
    LieSuperAlgebra g(f, {{"p", Parity::Odd}, {"z", Parity::Even}});
    EXPECT_THROW(g.set_bracket(0, 0, g.unit(1)), InvariantError);
    EXPECT_THROW(g.set_square(1, g.unit(1)), InvariantError);
    g.set_square(0, g.unit(0));
    EXPECT_THROW(g.validate(), InvariantError);
    EXPECT_THROW(LieSuperAlgebra(f, {{"a", Parity::Even}, {"a", Parity::Odd}}), InvariantError);
}

TEST(Superalgebra, SquaringIsQuadraticWithBracketPolarization) {
    const Field& f = Field::gf(2);
    auto g = catalog::hei2(f);
    std::vector<Vector> odd;
    for (auto& v : all_vectors(f, 3))
        if (v[2] == 0) odd.push_back(v);
    for (auto& x : odd) {
        for (Bits l : f.elements()) EXPECT_EQ(g.squaring(x.scaled(l)), g.squaring(x).scaled(f.square(l)));
        for (auto& y : odd) EXPECT_EQ(g.squaring(x + y), g.squaring(x) + g.squaring(y) + g.bracket(x, y));
    }
}

TEST(Superalgebra, DerivedSeriesAndIdeals) {
    auto g = catalog::hei2();
    auto series = derived_series(g);
    ASSERT_EQ(series.size(), 3u);
    EXPECT_EQ(series[1].dim(), 1u);
    EXPECT_EQ(series[2].dim(), 0u);
    EXPECT_TRUE(is_ideal(g, center(g)));
    EXPECT_FALSE(is_ideal(g, Subspace::span(g.field(), 3, {g.unit(0)})));
    EXPECT_FALSE(is_graded(g, Subspace::span(g.field(), 3, {g.unit(0) + g.unit(2)})));
}

TEST(Superalgebra, DirectSumAndRestrict) {
    auto g = catalog::hei2();
    auto s = direct_sum(g, g);
    EXPECT_EQ(s.dim(), 6u);
    EXPECT_EQ(s.name(3), "p'");
    EXPECT_TRUE(verify(s).ok());
    EXPECT_EQ(center(s).dim(), 2u);
    auto r = restrict(s, {s.unit(3), s.unit(4), s.unit(5)}, {"p", "q", "z"});
    EXPECT_EQ(r, g);
    EXPECT_THROW(restrict(s, {s.unit(0), s.unit(1)}), InvariantError);
}

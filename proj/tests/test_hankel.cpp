#include <gtest/gtest.h>

#include <pwlab/hankel.hpp>

#include <cstdio>
#include <filesystem>

using namespace pwlab;

namespace {

const ConvexBody disc = ConvexBody::ball(Vec::Zero(2), 1.0);

} // namespace

TEST(Schatten, Anchors)
{
    EXPECT_NEAR(schatten_norm({3, 4}, 2), 5.0, 1e-14);
    EXPECT_EQ(schatten_norm({3, 4}, infinity), 4.0);
    for (double p : {1.0, 2.0, 3.5, 6.0})
        EXPECT_NEAR(schatten_norm(std::vector<double>(7, 1.0), p), std::pow(7.0, 1.0 / p), 1e-13);
    EXPECT_THROW(schatten_norm({1.0}, 0.5), Error);
    EXPECT_EQ(conjugate_exponent(1.0), infinity);
    EXPECT_NEAR(1.0 / 3.0 + 1.0 / conjugate_exponent(3.0), 1.0, 1e-15);
}

TEST(Schatten, RankOne)
{
    Eigen::VectorXcd u(5), v(4);
    u << cplx(1, 2), 0.5, cplx(0, -1), 2, 0.1;
    v << 3, cplx(1, 1), -1, cplx(0, 0.5);
    const Eigen::MatrixXcd m = u * v.adjoint();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    std::vector<double> sv(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    for (double p : {1.0, 2.0, 4.0, infinity})
        EXPECT_NEAR(schatten_norm(sv, p), u.norm() * v.norm(), 1e-12);
}

TEST(HankelMatrix, SymmetricAndConsistent)
{
    const HankelMatrix h(disc, GridSpec::cube(2, -1, 1, 16), random_symbol(3));
    const auto& a = h.matrix();
    EXPECT_EQ((a - a.transpose()).norm(), 0.0);
    for (const auto& x : h.nodes())
        EXPECT_LT(x.norm(), 1.0);
    const auto& sv = h.singular_values();
    ASSERT_EQ(sv.size(), h.size());
    EXPECT_TRUE(std::is_sorted(sv.begin(), sv.end(), std::greater<>()));
    EXPECT_GE(sv.back(), 0.0);
    const double f2 = a.squaredNorm();
    EXPECT_NEAR(std::pow(schatten_norm(sv, 2), 2), f2, 1e-8 * f2);
    double prev = schatten_norm(sv, 1);
    for (double p : {1.5, 2.0, 3.0, 4.0, 6.0, 10.0, infinity}) {
        const double s = schatten_norm(sv, p);
        EXPECT_LE(s, prev * (1 + 1e-12));
        prev = s;
    }
}

TEST(HankelMatrix, RealSymbolMatchesGeneralSvd)
{
    const HankelMatrix h(disc, GridSpec::cube(2, -1, 1, 12), BumpSymbol{make_vec({0.3, -0.2}), 1.1});
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(h.matrix());
    const auto& sv = h.singular_values();
    for (std::size_t k = 0; k < sv.size(); ++k)
        EXPECT_NEAR(sv[k], svd.singularValues()[static_cast<Eigen::Index>(k)], 1e-12 * sv[0]);
}

TEST(HsIdentity, TrivialCases)
{
    const auto grid = GridSpec::cube(2, -1, 1, 20);
    const auto zero = hs_identity_check(disc, [](const Vec&) { return cplx{}; }, grid);
    EXPECT_EQ(zero.frobenius, 0.0);
    EXPECT_EQ(zero.integral, 0.0);
    const BumpSymbol b{make_vec({0.5, 0.5}), 0.7};
    const auto one = hs_identity_check(disc, b, grid);
    const auto three = hs_identity_check(disc, [&](const Vec& x) { return cplx(0, -3) * b(x); }, grid);
    EXPECT_NEAR(three.frobenius, 3 * one.frobenius, 1e-12 * three.frobenius);
    EXPECT_NEAR(three.integral, 3 * one.integral, 1e-12 * three.integral);
    // direct sum against the assembled matrix
    EXPECT_NEAR(one.frobenius, HankelMatrix(disc, grid, b).frobenius(), 1e-12 * one.frobenius);
}

TEST(HsIdentity, ConvergesUnderRefinement)
{
    for (const FrequencyFn& f : {FrequencyFn(BumpSymbol{make_vec({1, 0}), 0.5}), random_symbol(11)}) {
        const auto coarse = hs_identity_check(disc, f, GridSpec::cube(2, -1, 1, 40));
        const auto fine = hs_identity_check(disc, f, GridSpec::cube(2, -1, 1, 80));
        EXPECT_LE(coarse.rel_err, 0.02);
        EXPECT_LT(fine.rel_err, coarse.rel_err);
        EXPECT_NEAR(fine.integral, coarse.integral, 1e-3 * fine.integral);
    }
}

TEST(Russo, RandomSymbols)
{
    const auto grid = GridSpec::cube(2, -1, 1, 20);
    for (std::uint64_t s = 0; s < 10; ++s)
        for (double p : {3.0, 6.0}) {
            const auto r = russo_bound_check(disc, random_symbol(100 + s), grid, p);
            EXPECT_TRUE(r.holds) << "seed " << s << " p " << p << ": " << r.lhs << " > " << r.mixed;
            EXPECT_GT(r.continuum, 0.0);
        }
}

TEST(Russo, ConstantKernelAndZero)
{
    const auto square = ConvexBody::hpolytope(2, {{make_vec({1, 0}), 1}, {make_vec({-1, 0}), 0}, {make_vec({0, 1}), 1}, {make_vec({0, -1}), 0}});
    const auto grid = GridSpec::cube(2, 0, 1, 10);
    for (double p : {3.0, 4.0, 6.0}) {
        const auto r = russo_bound_check(square, [](const Vec&) { return cplx{1.0}; }, grid, p);
        EXPECT_NEAR(r.mixed, 1.0, 1e-12);
        EXPECT_NEAR(r.lhs, 1.0, 1e-12);
        EXPECT_TRUE(r.holds);
    }
    const auto z = russo_bound_check(disc, [](const Vec&) { return cplx{}; }, GridSpec::cube(2, -1, 1, 10), 6);
    EXPECT_EQ(z.lhs, 0.0);
    EXPECT_EQ(z.mixed, 0.0);
    EXPECT_TRUE(z.holds);
    EXPECT_THROW(russo_bound_check(disc, random_symbol(1), GridSpec::cube(2, -1, 1, 10), 2.0), Error);
}

TEST(OrthogonalSum, AntipodalBoundaryBumps)
{
    const BumpSymbol east{make_vec({1.5, 0}), 0.4};
    const BumpSymbol west{make_vec({-1.5, 0}), 0.4};
    const auto r = orthogonal_sum_check(disc, {supported(east), supported(west)}, GridSpec::cube(2, -1, 1, 30));
    EXPECT_TRUE(r.matches) << r.max_rel_diff;
    EXPECT_GT(r.compared, 10u);
}

TEST(OrthogonalSum, SingleAndOverlapping)
{
    const BumpSymbol b{make_vec({0.0, 1.4}), 0.5};
    EXPECT_TRUE(orthogonal_sum_check(disc, {supported(b)}, GridSpec::cube(2, -1, 1, 20)).matches);
    EXPECT_THROW(orthogonal_sum_check(disc, {supported(b), supported(b)}, GridSpec::cube(2, -1, 1, 20)), Error);
}

TEST(SymbolBound, BumpSup)
{
    const auto grid = GridSpec::cube(2, -1, 1, 24);
    const BumpSymbol b{make_vec({0.4, 0.2}), 0.8};
    const auto fine = GridSpec::cube(2, -2, 2, 256);
    const double sup = synthesize_max_abs(GridFunction::sample(fine, b), 0.05);
    const auto r = symbol_bound_check(disc, sup, b, grid);
    EXPECT_TRUE(r.holds) << r.sigma_max << " vs " << r.sup;
    const auto r2 = symbol_bound_check(disc, 2 * sup, [&](const Vec& x) { return 2.0 * b(x); }, grid);
    EXPECT_NEAR(r2.sigma_max, 2 * r.sigma_max, 1e-12 * r2.sigma_max);
    EXPECT_TRUE(symbol_bound_check(disc, 0.0, [](const Vec&) { return cplx{}; }, grid).holds);
}

TEST(Dump, RoundTrip)
{
    const auto path = (std::filesystem::temp_directory_path() / "pwlab_sv.bin").string();
    const std::vector<double> sv{3.5, 1.25, 1e-300, 0.0};
    write_singular_values(path, sv);
    EXPECT_EQ(std::filesystem::file_size(path), 8u + 4 * 8u);
    EXPECT_EQ(read_singular_values(path), sv);
    std::remove(path.c_str());
}

#include <gtest/gtest.h>

#include <pwlab/fourier.hpp>

using namespace pwlab;

namespace {

cplx tent(const Vec& x)
{
    double v = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        v *= std::max(0.0, 1.0 - std::abs(x[i]));
    return v;
}

GridFunction tent_grid(int n, int points)
{
    return GridFunction::sample(GridSpec::cube(n, -1, 1, points), tent, Side::frequency);
}

} // namespace

TEST(Bump, Anchors)
{
    EXPECT_EQ(bump_hat(make_vec({0.3, 0})), 1.0);
    EXPECT_EQ(bump_hat(make_vec({0, 1.2})), 0.0);
    EXPECT_NEAR(bump_hat(make_vec({0.75})), 0.5, 1e-15);
    EXPECT_EQ(bump_hat(make_vec({0.5, 0})), 1.0);
    EXPECT_EQ(bump_hat(make_vec({1.0, 0})), 0.0);
}

TEST(Bump, RadialProperties)
{
    double prev = 1.0;
    for (int k = 0; k <= 10000; ++k) {
        const double r = 1.2 * k / 10000.0;
        const double v = bump_profile(r);
        EXPECT_LE(v, prev + 1e-15);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        if (r <= 0.5) {
            EXPECT_EQ(v, 1.0);
        }
        if (r >= 1.0) {
            EXPECT_EQ(v, 0.0);
        }
        prev = v;
    }
}

TEST(GridFunction, DeclaredSupportIsChecked)
{
    const auto spec = GridSpec::cube(2, -2, 2, 40);
    const BumpSymbol b{make_vec({0.5, 0}), 1.0};
    EXPECT_NO_THROW(GridFunction::sample(spec, b, Side::frequency, ConvexBody::ball(b.center, 1.0)));
    EXPECT_THROW(GridFunction::sample(spec, b, Side::frequency, ConvexBody::ball(b.center, 0.5)), Error);
    EXPECT_THROW(GridFunction::sample(spec, [](const Vec&) { return cplx{NAN, 0}; }), Error);
}

TEST(Quad, Anchors)
{
    EXPECT_NEAR(quad_integral([](const Vec&) { return 1.0; }, GridSpec::cube(2, 0, 1, 37)), 1.0, 1e-12);
    const double t = quad_integral([](const Vec& x) { return tent(x).real(); }, GridSpec::cube(1, -1, 1, 200));
    EXPECT_NEAR(t, 1.0, 1e-4);
    // |x| on (-1,1) with the kink at a node: error h^2/4 from one cell
    const auto f = [](const Vec& x) { return std::abs(x[0]); };
    const double e1 = std::abs(quad_integral(f, GridSpec::cube(1, -1, 1, 101)) - 1.0);
    const double e2 = std::abs(quad_integral(f, GridSpec::cube(1, -1, 1, 203)) - 1.0);
    EXPECT_GE(std::log(e1 / e2) / std::log(203.0 / 101.0), 1.0);
}

TEST(Quad, SmoothOrder)
{
    const auto f = [](const Vec& x) { return std::exp(x[0]) * std::cos(x[1]); };
    const double exact = (std::exp(1.0) - 1.0) * std::sin(1.0);
    const double e1 = std::abs(quad_integral(f, GridSpec::cube(2, 0, 1, 20)) - exact);
    const double e2 = std::abs(quad_integral(f, GridSpec::cube(2, 0, 1, 40)) - exact);
    EXPECT_GE(std::log2(e1 / e2), 1.9);
}

TEST(Synthesis, MatchesDirectSum)
{
    // fast path against the defining sum, integrated directly over the same final box
    const auto spec = GridSpec::cube(1, -1, 1, 128);
    const BumpSymbol b{make_vec({0.1}), 0.6};
    const auto g = GridFunction::sample(spec, b);
    const auto res = synthesize_l1(g, 4, 256);
    const double big = res.halfwidth;
    const int m = 4096;
    double direct = 0;
    for (int j = 0; j < m; ++j) {
        const double t = -big + (j + 0.5) * 2 * big / m;
        cplx s{};
        for (std::size_t k = 0; k < g.values.size(); ++k)
            s += g.values[k] * std::polar(1.0, 2 * pi * spec.coordinate(0, static_cast<int>(k)) * t) * spec.spacing(0);
        direct += std::abs(s) * 2 * big / m;
    }
    EXPECT_NEAR(res.l1, direct, 2e-3 * direct);
}

TEST(Synthesis, TentGivesSincSquared)
{
    const auto r1 = synthesize_l1(tent_grid(1, 2000), 8, 256);
    EXPECT_NEAR(r1.l1, 1.0, 0.01);
    EXPECT_LT(r1.tail_estimate, 0.005 * r1.l1);
    const auto r2 = synthesize_l1(tent_grid(2, 256), 8, 128);
    EXPECT_NEAR(r2.l1, 1.0, 0.02);
}

TEST(Synthesis, AtLeastValueAtZero)
{
    const auto spec = GridSpec::cube(2, -1, 1, 128);
    const auto g = GridFunction::sample(spec, BumpSymbol{make_vec({0.2, -0.1}), 0.7});
    const auto r = synthesize_l1(g, 4, 64);
    // f(0) = sum of the samples times h^2
    cplx f0{};
    for (const auto& v : g.values)
        f0 += v * spec.cell_volume();
    EXPECT_GE(r.l1, std::abs(f0));
}

TEST(Synthesis, ModulationInvariance)
{
    const auto spec = GridSpec::cube(2, -2, 2, 256);
    const double h = spec.spacing(0);
    const auto a = GridFunction::sample(spec, BumpSymbol{make_vec({0.0, 0.0}), 0.8});
    const auto b = GridFunction::sample(spec, BumpSymbol{make_vec({10 * h, -6 * h}), 0.8});
    const double la = synthesize_l1(a, 4, 64).l1;
    const double lb = synthesize_l1(b, 4, 64).l1;
    EXPECT_NEAR(la, lb, 1e-6 * la);
}

TEST(Synthesis, BudgetAndErrors)
{
    EXPECT_THROW(synthesize_l1(tent_grid(1, 16), 8, 64), Error);
    SynthesisOptions tiny;
    tiny.max_fft_points = 1000;
    EXPECT_THROW(synthesize_l1(tent_grid(2, 64), 4, 64, tiny), Error);
}

TEST(Dilation, SupportAndL1Invariance)
{
    const auto spec = GridSpec::cube(1, -1, 1, 4000);
    const auto g = GridFunction::sample(spec, tent, Side::frequency, ConvexBody::ball(Vec::Zero(1), 1.0));
    const auto same = dilate_toward(g, Vec::Zero(1), 1.0);
    for (std::size_t k = 0; k < g.values.size(); k += 97)
        EXPECT_NEAR(std::abs(same.values[k] - g.values[k]), 0.0, 1e-12);
    const auto half = dilate_toward(g, Vec::Zero(1), 0.5);
    for (std::size_t k = 0; k < half.values.size(); ++k)
        if (std::abs(spec.coordinate(0, static_cast<int>(k))) >= 0.5) {
            EXPECT_EQ(std::abs(half.values[k]), 0.0);
        }
    ASSERT_TRUE(half.support.has_value());
    EXPECT_FALSE(membership(*half.support, make_vec({0.6})));
    const double a = synthesize_l1(g, 8, 256).l1;
    const double b = synthesize_l1(half, 16, 256).l1;
    EXPECT_NEAR(a, b, 0.01 * a);
    const auto moved = dilate_toward(g, make_vec({0.2}), 0.5);
    EXPECT_NEAR(synthesize_l1(moved, 16, 256).l1, b, 1e-3 * b);
    EXPECT_THROW(dilate_toward(g, Vec::Zero(1), 0.0), Error);
    EXPECT_THROW(dilate_toward(g, Vec::Zero(1), 1.5), Error);
}

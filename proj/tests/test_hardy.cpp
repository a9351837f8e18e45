#include <gtest/gtest.h>

#include <pwlab/hardy.hpp>

using namespace pwlab;

namespace {

ConvexBody unit_square()
{
    return ConvexBody::hpolytope(2, {{make_vec({1, 0}), 1}, {make_vec({-1, 0}), 0}, {make_vec({0, 1}), 1}, {make_vec({0, -1}), 0}});
}

ConvexBody similar_image(const ConvexBody& body, double scale, double angle, const Vec& shift)
{
    Mat a(2, 2);
    a << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    a *= scale;
    std::vector<Vec> verts;
    for (const auto& v : vertices_of(body))
        verts.push_back(a * v + shift);
    return ConvexBody::vpolytope(verts);
}

} // namespace

TEST(Tent, ExactAnchors)
{
    const auto one = tent_ratio(1);
    EXPECT_NEAR(one.integral, 2.0, 1e-12);
    EXPECT_NEAR(one.ratio, 2.0, 0.02);
    const auto two = tent_ratio(2);
    EXPECT_NEAR(two.integral, 4.0, 1e-12);
    EXPECT_NEAR(two.ratio, 4.0, 0.04);
    EXPECT_NEAR(two.l1, 1.0, 0.005);
    EXPECT_NEAR(tent_ratio(2, 0.0).ratio, 1.0, 0.01);
    // int tent^{1-d} = 2/(2-d) per axis
    EXPECT_NEAR(tent_ratio(1, 0.5, 4000).integral, 4.0 / 3.0, 1e-3);
}

TEST(Halfline, BumpsStayBelowPi)
{
    const auto spec = halfline_grid(0.05);
    const BumpSymbol b{make_vec({0.5}), 0.5};
    const auto g = GridFunction::sample(spec, b);
    const auto r = halfline_ratio(g, g);
    EXPECT_LT(r.ratio, pi);
    EXPECT_GT(r.ratio, 0.0);
    const auto scaled = GridFunction::sample(spec, [&](const Vec& x) { return cplx(0, 7.5) * b(x); });
    EXPECT_NEAR(halfline_ratio(scaled, g).ratio, r.ratio, 1e-9 * r.ratio);
}

TEST(Halfline, RandomTrials)
{
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto r = random_halfline_trial(3, k);
        EXPECT_LE(r.ratio, pi + 0.05);
        EXPECT_GT(r.ratio, 0.0);
    }
    // the power profiles push towards the constant as the inner scale shrinks
    const auto spec = halfline_grid(1e-3);
    const auto p = GridFunction::sample(spec, PowerProfile{0.5, 1e-3, 0.2});
    const auto sharp = halfline_ratio(p, p);
    EXPECT_GE(sharp.ratio, 2.0);
    EXPECT_LE(sharp.ratio, pi);
    EXPECT_LT(sharp.tail, 0.005 * sharp.l1);
}

TEST(Halfline, SupportViolations)
{
    const auto bad = GridFunction::sample(GridSpec(make_vec({-0.5}), make_vec({1.0}), {64}), BumpSymbol{make_vec({0.5}), 0.3});
    EXPECT_THROW(halfline_ratio(bad, bad), Error);
    const auto a = GridFunction::sample(halfline_grid(0.1, 256), BumpSymbol{make_vec({0.5}), 0.3});
    const auto b = GridFunction::sample(halfline_grid(0.1, 300), BumpSymbol{make_vec({0.5}), 0.3});
    EXPECT_THROW(halfline_ratio(a, b), Error);
}

TEST(Corner, ScalingLaws)
{
    const auto sq = unit_square();
    const auto ts = geometric_grid(1e-3, 1e-1, 5);
    const auto d1 = corner_family(sq, 1.0, ts);
    EXPECT_LE(d1.max_over_min, 2.0);
    EXPECT_NEAR(corner_family(sq, 1.5, ts).fit.slope, -0.5, 0.01);
    EXPECT_NEAR(corner_family(sq, 0.5, ts).fit.slope, 0.5, 0.01);
    const auto cp = corner_point(sq, 0.01);
    EXPECT_NEAR(cp.omega, 0.01, 1e-12);
    EXPECT_THROW(corner_point(sq, 1e-30), Error);
}

TEST(Corner, SimilarityCovariance)
{
    const auto sq = unit_square();
    const double scale = 1.7;
    const auto moved = similar_image(sq, scale, 0.4, make_vec({0.3, -1.1}));
    // the first vertex of the image is the image of some vertex of the square
    Mat a(2, 2);
    a << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
    const auto vm = vertices_of(moved);
    const auto vs = vertices_of(sq);
    int match = -1;
    for (std::size_t i = 0; i < vs.size(); ++i)
        if ((scale * a * vs[i] + make_vec({0.3, -1.1}) - vm[0]).norm() < 1e-9)
            match = static_cast<int>(i);
    ASSERT_GE(match, 0);
    const double det = scale * scale;
    for (double d : {0.5, 1.0, 1.5}) {
        const double r0 = corner_family_ratio(sq, d, 0.01, match);
        const double r1 = corner_family_ratio(moved, d, 0.01, 0);
        EXPECT_NEAR(r1, r0 * std::pow(det, 1.0 - d), 1e-6 * r1) << "d " << d;
    }
}

TEST(Corner, NondecreasingInDForUnitVolume)
{
    for (const auto& body : {unit_square(), unit_volume(ConvexBody::vpolytope({make_vec({0, 0}), make_vec({2, 0.3}), make_vec({0.5, 1.4})}))}) {
        EXPECT_NEAR(volume(body), 1.0, 1e-12);
        for (double t : {0.05, 0.003}) {
            double prev = 0;
            for (double d = 0.0; d <= 2.0; d += 0.25) {
                const double r = corner_family_ratio(body, d, t);
                EXPECT_GE(r, prev * (1 - 1e-12));
                prev = r;
            }
        }
    }
}

TEST(Report, Verdicts)
{
    const auto sq = adjusted_integrability_report(unit_square(), {1.0, 1.5});
    EXPECT_EQ(sq[0].verdict, Verdict::holds_evidence);
    EXPECT_EQ(sq[1].verdict, Verdict::fails_evidence);
    EXPECT_EQ(sq[0].method, "corner-family");
    const auto ball = adjusted_integrability_report(ConvexBody::ball(Vec::Zero(2), 1.0), {0.5, 0.8});
    EXPECT_EQ(ball[0].verdict, Verdict::holds_evidence);
    EXPECT_LT(ball[0].last_change, 0.01);
    EXPECT_EQ(ball[1].verdict, Verdict::fails_evidence);
    EXPECT_GT(ball[1].last_change, 0.10);
}

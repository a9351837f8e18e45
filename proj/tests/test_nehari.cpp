#include <gtest/gtest.h>

#include <pwlab/nehari.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

using namespace pwlab;

namespace {

const Calibration& cal()
{
    static const Calibration c = calibrate();
    return c;
}

} // namespace

TEST(Packing, Counts)
{
    EXPECT_EQ(pack_boundary_disc(0.5).size(), 5u);
    EXPECT_EQ(pack_boundary_disc(0.4).size(), 7u);
    EXPECT_EQ(pack_boundary_disc(0.05).size(), 62u);
    EXPECT_THROW(pack_boundary_disc(1.0), Error);
    const double eps = 1e-3;
    EXPECT_NEAR(pack_boundary_disc(eps).size() * eps / pi, 1.0, 2e-3);
    for (double e = 0.02; e < 0.9; e *= 1.17) {
        const auto ys = pack_boundary_disc(e);
        EXPECT_GT(min_pairwise_distance(ys), 2 * e);
        // one more point would break the chord condition
        const double n1 = static_cast<double>(ys.size() + 1);
        EXPECT_LE(std::sin(pi / n1), e);
    }
}

TEST(Calibration, ConstantsAndDeterminism)
{
    const auto& c = cal();
    EXPECT_NEAR(c.disc_threshold, disc_constant_closed_form(c.eps0), 0.02 * disc_constant_closed_form(c.eps0));
    EXPECT_LT(c.c, c.disc_threshold);
    EXPECT_NEAR(c.c1, c.c / std::sqrt(2.0), 1e-15);
    const auto again = calibrate();
    EXPECT_EQ(again.disc_threshold, c.disc_threshold);
    EXPECT_EQ(again.c2, c.c2);
    for (double eps : {0.3, 0.1, 0.01}) {
        EXPECT_EQ(disc_containment_check(c.c, eps, 20000, 5), 0u);
        EXPECT_EQ(disc_containment_check(0.5 * c.c, eps, 20000, 5), 0u);
        EXPECT_GT(disc_containment_check(2 * c.c, eps, 20000, 5), 0u);
    }
    for (double eps : {0.4, 0.05, 0.002})
        EXPECT_LE(bump_support_sup_omega(c.c, c.c1, eps), c.c2 * std::pow(eps, 3));
}

TEST(Bumps, SupportsAndCenters)
{
    const double eps = 0.2;
    const auto bumps = build_bumps(pack_boundary_disc(eps), eps, cal().c, cal().c1);
    ASSERT_EQ(bumps.size(), 15u);
    for (const auto& b : bumps) {
        EXPECT_EQ(b(b.center), cplx(1.0));
        EXPECT_NEAR(b.radius, 2 * cal().c1 * eps * eps, 1e-15);
        EXPECT_LT(b.center.norm() + b.radius, 2.0);
    }
    EXPECT_THROW(build_bumps(pack_boundary_disc(eps), eps, cal().c, 10 * cal().c), Error);
    EXPECT_THROW(build_bumps({make_vec({1, 0}), make_vec({1, 1e-4})}, eps, cal().c, cal().c1), Error);
}

TEST(RadialTransform, AgainstBesselOracle)
{
    const auto& t = default_radial_transform();
    const double mass = unit_disc_integral([](const Vec& v) { return bump_hat(v); });
    EXPECT_NEAR(t.values()[0], mass, 1e-3 * mass); // first cell centre is u = step/2
    for (double u : {0.5, 1.7, 3.25, 9.0}) {
        const auto j = static_cast<std::size_t>(u / t.step());
        const double uc = (j + 0.5) * t.step();
        const double oracle = 2 * pi *
                              boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                  [&](double rho) { return bump_profile(rho) * std::cyl_bessel_j(0.0, 2 * pi * rho * uc) * rho; }, 0.0, 1.0, 12, 1e-13);
        EXPECT_NEAR(t.values()[j], oracle, 1e-9);
    }
    EXPECT_GT(t.l1(), mass);
    EXPECT_LT(t.tail(), 1e-4 * t.l1());
}

TEST(PsiL1, FactorizationMatchesGridSynthesis)
{
    std::vector<Vec> centers;
    for (int k = 0; k < 3; ++k)
        centers.push_back(1.2 * make_vec({std::cos(2 * pi * k / 3 + 0.3), std::sin(2 * pi * k / 3 + 0.3)}));
    const double s = 0.8;
    const auto fast = psi_l1_factorized(centers, s, 200000, 9);
    const auto spec = GridSpec::cube(2, -2, 2, 512);
    const auto g = GridFunction::sample(spec, [&](const Vec& x) {
        cplx v{};
        for (const auto& c : centers)
            v += BumpSymbol{c, s}(x);
        return v;
    });
    const auto slow = synthesize_l1(g, 8, 256);
    EXPECT_NEAR(fast.value, slow.l1, 0.01 * slow.l1) << "stderr " << fast.stderr_;
    EXPECT_LT(fast.stderr_, 0.005 * fast.value);
    EXPECT_LE(fast.value, 3 * default_radial_transform().l1());
}

TEST(BumpFamily, SingleBumpReproducible)
{
    NehariConfig coarse;
    coarse.cal = cal();
    coarse.p = 6;
    coarse.angular_nodes = 32;
    NehariConfig fine = coarse;
    fine.angular_nodes = 256;
    const std::vector<Vec> one{make_vec({0, 1})};
    const auto a = bump_family_ratio(coarse, 0.3, &one);
    const auto b = bump_family_ratio(fine, 0.3, &one);
    EXPECT_EQ(a.n, 1);
    EXPECT_NEAR(a.ratio, b.ratio, 0.01 * b.ratio);
    // with one bump |S| = 1 and the L1 norm is the reference norm
    EXPECT_NEAR(a.psi_l1, default_radial_transform().l1(), 1e-12);
    EXPECT_TRUE(a.checks_ok);
}

TEST(BumpFamily, RowInvariants)
{
    NehariConfig cfg;
    cfg.cal = cal();
    cfg.p = 6;
    cfg.mc_samples = 50000;
    const auto row = bump_family_ratio(cfg, 0.15);
    EXPECT_EQ(row.n, 20);
    EXPECT_TRUE(row.checks_ok);
    EXPECT_GT(row.min_distance, 0.3);
    EXPECT_LE(row.psi_l1, row.n * default_radial_transform().l1());
    EXPECT_GE(row.ratio, 0.95 * row.negation_bound);
    EXPECT_LE(row.a_max, row.a_bound);
    for (double v : {row.numerator, row.psi_l1, row.proxy, row.ratio})
        EXPECT_TRUE(std::isfinite(v) && v > 0);
    EXPECT_THROW(bump_family_ratio(cfg, 0.9), Error);
}

TEST(Sweep, ShortSweepAndRowCount)
{
    NehariConfig cfg;
    cfg.cal = cal();
    cfg.p = 6;
    cfg.mc_samples = 50000;
    cfg.epsilons = {0.4, 0.2, 0.1, 0.05};
    const auto rep = sweep_and_fit(cfg, 30);
    EXPECT_EQ(rep.rows.size(), 4u);
    EXPECT_TRUE(rep.orthogonal_sum_ok);
    EXPECT_GT(rep.fit.slope, 0.0);
    cfg.epsilons = {0.4, 0.2, 0.1};
    EXPECT_THROW(sweep_and_fit(cfg, 30), Error);
}

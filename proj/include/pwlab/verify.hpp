#ifndef PWLAB_VERIFY_HPP
#define PWLAB_VERIFY_HPP

#include <pwlab/hankel.hpp>
#include <pwlab/hardy.hpp>
#include <pwlab/nehari.hpp>
#include <pwlab/simplicial.hpp>

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace pwlab {

struct CheckLine {
    std::string suite;
    std::string name;
    bool ok = false;
    std::string detail;
};

namespace verify_detail {

inline ConvexBody square01()
{
    return ConvexBody::hpolytope(2, {{make_vec({1, 0}), 1}, {make_vec({-1, 0}), 0}, {make_vec({0, 1}), 1}, {make_vec({0, -1}), 0}});
}

inline ConvexBody cube_pm1(int n)
{
    std::vector<Halfspace> hs;
    for (int i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) {
            Vec a = Vec::Zero(n);
            a[i] = s;
            hs.push_back({a, 1.0});
        }
    return ConvexBody::hpolytope(n, hs);
}

inline ConvexBody cross_polytope(int n)
{
    std::vector<Vec> v;
    for (int i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) {
            Vec e = Vec::Zero(n);
            e[i] = s;
            v.push_back(e);
        }
    return ConvexBody::vpolytope(v);
}

inline std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

class Collector {
public:
    explicit Collector(std::string suite) : suite_(std::move(suite)) {}

    // exceptions inside a check count as failures, with the message as detail
    void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& body)
    {
        try {
            auto [ok, detail] = body();
            lines_.push_back({suite_, name, ok, detail});
        } catch (const std::exception& e) {
            lines_.push_back({suite_, name, false, std::string("threw: ") + e.what()});
        }
    }

    std::vector<CheckLine> take() { return std::move(lines_); }

private:
    std::string suite_;
    std::vector<CheckLine> lines_;
};

} // namespace verify_detail

inline std::vector<CheckLine> verify_geometry(std::uint64_t seed)
{
    using namespace verify_detail;
    Collector c("geometry");
    c.check("polar-involution", [&] {
        bool ok = true;
        for (const auto& b : {cube_pm1(3), cross_polytope(3), cube_pm1(2)})
            ok = ok && same_point_set(vertices_of(polar_dual(polar_dual(b))), vertices_of(b), 1e-9);
        return std::pair{ok, std::string("cube, cross-polytope, square")};
    });
    c.check("pyramid-inscribed-ball", [&] {
        bool ok = true;
        for (double a : {0.5, 1.0, 2.0})
            for (double b : {0.5, 1.0, 2.0})
                for (double t : {0.55, 0.75, 0.95})
                    ok = ok && pyramid_ball_check(a, b, t * b) && pyramid_ball_check(a, b, t * b, 3);
        return std::pair{ok, std::string("27 parameter triples, n = 2 and 3")};
    });
    c.check("disc-containment", [&] {
        std::size_t bad = 0, over = 0;
        for (double eps : {0.1, 0.05}) {
            bad += disc_containment_check(0.98 * disc_constant_closed_form(eps), eps, 20000, seed);
            over += disc_containment_check(1.1 * disc_constant_closed_form(eps), eps, 20000, seed);
        }
        return std::pair{bad == 0 && over > 0, "violations below/above threshold: " + std::to_string(bad) + "/" + std::to_string(over)};
    });
    c.check("certificate-anchor", [&] {
        Mat mu = Mat::Constant(2, 2, 0.5);
        const auto cert = solve_certificate(make_vec({0.1, 0.1}), mu, 0);
        const double err = std::abs(cert.rho[0] - 21.0 / 22.0) + std::abs(cert.rho[1] - 1.0 / 22.0);
        return std::pair{err <= 1e-12, "error " + fmt(err)};
    });
    return c.take();
}

inline std::vector<CheckLine> verify_omega(std::uint64_t seed)
{
    using namespace verify_detail;
    Collector c("omega");
    const auto sq = square01();
    c.check("box-vs-polytope", [&] {
        double worst = 0;
        for (std::uint64_t k = 0; k < 50; ++k) {
            SampleStream rng(seed, k);
            const Vec x = make_vec({rng.uniform(-0.2, 2.2), rng.uniform(-0.2, 2.2)});
            worst = std::max(worst, std::abs(omega_box(make_vec({0, 0}), make_vec({1, 1}), x) - omega_polytope_exact(to_hpolytope(sq), x)));
        }
        return std::pair{worst <= 1e-10, "max diff " + fmt(worst)};
    });
    c.check("lens-closed-form", [&] {
        double worst = 0;
        for (int k = 0; k < 100; ++k) {
            const double s = 2.0 * (k + 0.5) / 100.0;
            const double lens = 2 * std::acos(s / 2) - (s / 2) * std::sqrt(4 - s * s);
            worst = std::max(worst, std::abs(omega_ball(2, 1.0, make_vec({s, 0})) - lens));
        }
        return std::pair{worst <= 1e-8, "max diff " + fmt(worst)};
    });
    c.check("ball-edge-constant", [&] {
        const double r = omega_ball(2, 1.0, make_vec({1.95, 0})) / std::pow(0.05, 1.5);
        return std::pair{std::abs(r / (4.0 / 3.0) - 1) <= 0.05, "ratio " + fmt(r)};
    });
    c.check("triangle-bound-and-translation", [&] {
        const auto tri = ConvexBody::vpolytope({make_vec({0, 0}), make_vec({1, 0}), make_vec({0, 1})});
        const OmegaEvaluator w(tri);
        bool ok = true;
        for (std::uint64_t k = 0; k < 50; ++k) {
            SampleStream rng(seed + 1, k);
            const Vec x = make_vec({rng.uniform(-0.1, 2.1), rng.uniform(-0.1, 2.1)});
            ok = ok && w(x) >= 0.0 && w(x) <= 0.5 + 1e-9;
            const Vec v = make_vec({0.3, -0.2});
            const auto moved = ConvexBody::vpolytope({v, make_vec({1.3, -0.2}), make_vec({0.3, 0.8})});
            ok = ok && std::abs(OmegaEvaluator(moved)(x + 2 * v) - w(x)) <= 1e-9;
        }
        return std::pair{ok, std::string("50 probes")};
    });
    c.check("mc-agrees-with-exact", [&] {
        const Vec x = make_vec({0.5, 1.0});
        const auto est = omega_mc(sq, x, 200000, seed);
        const double z = std::abs(est.value - 0.5) / est.stderr_;
        return std::pair{z <= 3.0, "z " + fmt(z)};
    });
    c.check("interval-sublevel-exponent", [&] {
        const auto e = sublevel_fit(ConvexBody::hpolytope(1, {{make_vec({1}), 1}, {make_vec({-1}), 0}}), 1e-3, 1e-1, 5, 100000, seed);
        return std::pair{std::abs(e.fitted_exponent - 1.0) <= 0.02, "exponent " + fmt(e.fitted_exponent)};
    });
    return c.take();
}

inline std::vector<CheckLine> verify_fourier(std::uint64_t)
{
    using namespace verify_detail;
    Collector c("fourier");
    c.check("tent-l1", [&] {
        const auto t = tent_ratio(1);
        return std::pair{std::abs(t.l1 - 1.0) <= 0.01, "||sinc^2||_1 = " + fmt(t.l1)};
    });
    c.check("bump-l1-scaling", [&] {
        // ||f||_1 of a dilated symbol does not change
        const auto a = synthesize_l1(GridFunction::sample(GridSpec::cube(1, -1, 1, 512), BumpSymbol{make_vec({0}), 1.0}), 8, 256);
        const auto b = synthesize_l1(GridFunction::sample(GridSpec::cube(1, -1, 1, 512), BumpSymbol{make_vec({0}), 0.5}), 16, 256);
        return std::pair{std::abs(a.l1 / b.l1 - 1) <= 0.01, fmt(a.l1) + " vs " + fmt(b.l1)};
    });
    return c.take();
}

inline std::vector<CheckLine> verify_hankel(std::uint64_t)
{
    using namespace verify_detail;
    Collector c("hankel");
    const auto disc = ConvexBody::ball(Vec::Zero(2), 1.0);
    c.check("hs-identity", [&] {
        const BumpSymbol b{Vec::Zero(2), 1.0};
        const auto coarse = hs_identity_check(disc, b, GridSpec::cube(2, -1, 1, 40));
        const auto fine = hs_identity_check(disc, b, GridSpec::cube(2, -1, 1, 80));
        return std::pair{coarse.rel_err <= 0.02 && fine.rel_err < coarse.rel_err, "rel_err " + fmt(coarse.rel_err) + " -> " + fmt(fine.rel_err)};
    });
    c.check("russo-bound", [&] {
        bool ok = true;
        for (std::uint64_t s = 0; s < 5; ++s)
            for (double p : {3.0, 6.0})
                ok = ok && russo_bound_check(disc, random_symbol(500 + s), GridSpec::cube(2, -1, 1, 20), p).holds;
        return std::pair{ok, std::string("5 symbols, p = 3 and 6")};
    });
    c.check("orthogonal-sum", [&] {
        const auto r = orthogonal_sum_check(disc, {supported(BumpSymbol{make_vec({1.5, 0}), 0.4}), supported(BumpSymbol{make_vec({-1.5, 0}), 0.4})},
                                            GridSpec::cube(2, -1, 1, 30));
        return std::pair{r.matches, "max rel diff " + fmt(r.max_rel_diff)};
    });
    return c.take();
}

inline std::vector<CheckLine> verify_nehari(std::uint64_t seed)
{
    using namespace verify_detail;
    Collector c("nehari");
    const Calibration cal = calibrate();
    c.check("calibration-deterministic", [&] {
        const auto again = calibrate();
        return std::pair{again.c == cal.c && again.c2 == cal.c2, "C " + fmt(cal.c) + ", C2 " + fmt(cal.c2)};
    });
    c.check("calibrated-containment", [&] {
        std::size_t bad = 0;
        for (double eps : {0.1, 0.05, 0.01})
            bad += disc_containment_check(cal.c, eps, 20000, seed);
        return std::pair{bad == 0, std::to_string(bad) + " violations"};
    });
    c.check("row-invariants", [&] {
        NehariConfig cfg;
        cfg.cal = cal;
        cfg.mc_samples = 50000;
        cfg.seed = seed;
        const auto row = bump_family_ratio(cfg, 0.2);
        const bool ok = row.checks_ok && row.a_max <= row.a_bound && row.ratio >= 0.95 * row.negation_bound;
        return std::pair{ok, "N " + std::to_string(row.n) + ", ratio " + fmt(row.ratio)};
    });
    return c.take();
}

inline std::vector<CheckLine> verify_hardy(std::uint64_t seed)
{
    using namespace verify_detail;
    Collector c("hardy");
    c.check("tent-anchors", [&] {
        const double r1 = tent_ratio(1).ratio, r2 = tent_ratio(2).ratio;
        return std::pair{std::abs(r1 / 2 - 1) <= 0.01 && std::abs(r2 / 4 - 1) <= 0.01, fmt(r1) + ", " + fmt(r2)};
    });
    c.check("halfline-constant", [&] {
        double worst = 0;
        for (std::uint64_t k = 0; k < 20; ++k)
            worst = std::max(worst, random_halfline_trial(seed, k).ratio);
        return std::pair{worst <= pi * 1.02, "max ratio " + fmt(worst)};
    });
    c.check("corner-slope", [&] {
        const auto rep = corner_family(square01(), 1.5, geometric_grid(1e-3, 1e-1, 5));
        return std::pair{std::abs(rep.fit.slope + 0.5) <= 0.15, "slope " + fmt(rep.fit.slope)};
    });
    return c.take();
}

inline std::vector<CheckLine> verify_simplicial(std::uint64_t seed)
{
    using namespace verify_detail;
    Collector c("simplicial");
    std::vector<Vec> pv{make_vec({1, 1, 0}), make_vec({-1, 1, 0}), make_vec({-1, -1, 0}), make_vec({1, -1, 0}), make_vec({0, 0, 1.5})};
    for (auto& v : pv)
        v -= make_vec({0, 0, 0.3});
    const auto pyramid = ConvexBody::vpolytope(pv);
    c.check("nested-sequence", [&] {
        const auto seq = simplicial_sequence(pyramid, {0.2, 0.1, 0.05}, seed);
        bool ok = true;
        for (const auto& a : seq.approximations)
            ok = ok && a.contains_p && a.within_eps && a.simplicial && a.max_reconstruction_error <= 1e-8;
        for (double m : seq.nesting_margins)
            ok = ok && m > 1e-10;
        return std::pair{ok, "halvings " + std::to_string(seq.halvings)};
    });
    c.check("dual-is-simple", [&] {
        const auto d = dual_pipeline_check(pyramid, 0.05, seed);
        return std::pair{d.q_simplicial && d.dual_simple, std::to_string(d.facet_counts.size()) + " dual vertices"};
    });
    return c.take();
}

inline const std::vector<std::string>& verify_suite_names()
{
    static const std::vector<std::string> names{"geometry", "omega", "fourier", "hankel", "nehari", "hardy", "simplicial", "all"};
    return names;
}

inline std::vector<CheckLine> run_verify_suite(const std::string& suite, std::uint64_t seed)
{
    using Fn = std::vector<CheckLine> (*)(std::uint64_t);
    const std::vector<std::pair<std::string, Fn>> table{{"geometry", verify_geometry}, {"omega", verify_omega},   {"fourier", verify_fourier},
                                                         {"hankel", verify_hankel},     {"nehari", verify_nehari}, {"hardy", verify_hardy},
                                                         {"simplicial", verify_simplicial}};
    std::vector<CheckLine> out;
    bool known = false;
    for (const auto& [name, fn] : table)
        if (suite == "all" || suite == name) {
            known = true;
            auto lines = fn(seed);
            out.insert(out.end(), lines.begin(), lines.end());
        }
    require(known, ErrorCode::precondition, "unknown suite " + suite);
    return out;
}

} // namespace pwlab

#endif // PWLAB_VERIFY_HPP

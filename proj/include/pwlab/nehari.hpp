#ifndef PWLAB_NEHARI_HPP
#define PWLAB_NEHARI_HPP

#include <pwlab/fit.hpp>
#include <pwlab/hankel.hpp>

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

namespace pwlab {

// ---------------------------------------------------------------------------
// calibrated constants on the unit disc

struct Calibration {
    double eps0 = 0.5;          // largest admissible eps
    double disc_threshold = 0;  // bisection result for the containment constant at eps0
    double c = 0;               // containment constant used for x_eps = (1 - C eps^2) y
    double c1 = 0;              // bump radius r = C1 eps^2
    double c2 = 0;              // sup of omega over a bump support <= C2 eps^3
    double safety = 0.95;
    std::uint64_t seed = 20240611;
    std::size_t samples = 100000;
    int bisection_steps = 30;
};

/// Largest C in (0, 1] with no containment violations at eps, by bisection.
inline double calibrate_disc_constant(double eps, std::size_t samples, std::uint64_t seed, int steps)
{
    const auto ok = [&](double c) { return disc_containment_check(c, eps, samples, seed) == 0; };
    double lo = 1e-3, hi = 1.0;
    require(ok(lo), ErrorCode::precondition, "containment fails even for tiny C");
    require(!ok(hi), ErrorCode::precondition, "containment never fails on (0, 1]; bisection has no boundary");
    for (int k = 0; k < steps; ++k) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    // a non-monotone predicate shows up as a failure below the boundary
    for (double f : {0.25, 0.5, 0.75})
        require(ok(f * lo), ErrorCode::precondition, "containment is not monotone in C");
    return lo;
}

/// sup of omega over the support 2B(x_eps, r): attained at the point nearest the origin.
inline double bump_support_sup_omega(double c, double c1, double eps)
{
    const double nearest = 2.0 * (1.0 - c * eps * eps) - 2.0 * c1 * eps * eps;
    return omega_ball_radial(2, 1.0, std::max(0.0, nearest));
}

inline Calibration calibrate(double eps0 = 0.5, std::size_t samples = 100000, std::uint64_t seed = 20240611)
{
    Calibration cal;
    cal.eps0 = eps0;
    cal.samples = samples;
    cal.seed = seed;
    cal.disc_threshold = calibrate_disc_constant(eps0, samples, seed, cal.bisection_steps);
    cal.c = cal.safety * cal.disc_threshold;
    // ball of the right-angle cone at y with apex depth C eps^2
    cal.c1 = cal.c * Pyramid{1.0, 1.0, 2}.axis_ball_radius(0.0);
    for (double eps : geometric_grid(1e-3, eps0, 60))
        cal.c2 = std::max(cal.c2, bump_support_sup_omega(cal.c, cal.c1, eps) / std::pow(eps, 3));
    cal.c2 *= 1.01;
    return cal;
}

// ---------------------------------------------------------------------------
// packing and bumps

/// Largest N with chord 2 sin(pi/N) > 2 eps; N equally spaced unit vectors from angle 0.
inline std::vector<Vec> pack_boundary_disc(double eps)
{
    require(eps > 0.0 && eps < 1.0, ErrorCode::out_of_range, "eps must lie in (0, 1)");
    int n = static_cast<int>(std::floor(pi / std::asin(eps)));
    while (n > 1 && !(std::sin(pi / n) > eps))
        --n;
    std::vector<Vec> ys;
    for (int k = 0; k < n; ++k)
        ys.push_back(make_vec({std::cos(2 * pi * k / n), std::sin(2 * pi * k / n)}));
    return ys;
}

inline double min_pairwise_distance(const std::vector<Vec>& pts)
{
    double best = infinity;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::min(best, (pts[i] - pts[j]).norm());
    return best;
}

/// phi_i hat(x) = bump((x - 2 x_i)/(2 r)) with x_i = (1 - C eps^2) y_i and r = C1 eps^2.
inline std::vector<BumpSymbol> build_bumps(const std::vector<Vec>& ys, double eps, double c, double c1)
{
    const double r = c1 * eps * eps;
    std::vector<BumpSymbol> out;
    for (const auto& y : ys) {
        const Vec center = 2.0 * (1.0 - c * eps * eps) * y;
        require(center.norm() + 2.0 * r < 2.0, ErrorCode::precondition, "bump support leaves the doubled disc");
        out.push_back(BumpSymbol{center, 2.0 * r});
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            require((out[i].center - out[j].center).norm() > out[i].radius + out[j].radius, ErrorCode::precondition,
                    "bump supports overlap");
    return out;
}

// ---------------------------------------------------------------------------
// the reference bump and its radial transform

/// phi(u) for the unit bump, |u| in [0, extent], from the projection
/// P(s) = int bump(s, t) dt by phi(u) = 2 int_0^1 P(s) cos(2 pi s u) ds.
class RadialTransform {
public:
    explicit RadialTransform(double step = 1.0 / 64, double extent = 64.0, int projection_nodes = 4096)
        : step_(step)
    {
        require(step > 0.0 && extent > step, ErrorCode::precondition, "bad radial table");
        std::vector<double> proj(static_cast<std::size_t>(projection_nodes));
        const double hs = 1.0 / projection_nodes;
        for (int k = 0; k < projection_nodes; ++k) {
            const double s = (k + 0.5) * hs;
            // plateau |(s, t)| <= 1/2 exactly, quadrature over the transition only
            const double flat = std::sqrt(std::max(0.0, 0.25 - s * s));
            proj[static_cast<std::size_t>(k)] = 2.0 * (flat + boost::math::quadrature::gauss<double, 30>::integrate(
                                                                  [s](double t) { return bump_profile(std::hypot(s, t)); }, flat, std::sqrt(1.0 - s * s)));
        }
        const auto cells = static_cast<std::size_t>(std::ceil(extent / step));
        values_ = map_chunks<double>(cells, 1, [&](std::size_t j, std::size_t) {
            const double u = (static_cast<double>(j) + 0.5) * step;
            CompensatedSum acc;
            for (int k = 0; k < projection_nodes; ++k)
                acc += proj[static_cast<std::size_t>(k)] * std::cos(2 * pi * (k + 0.5) * hs * u);
            return 2.0 * hs * acc.value();
        });
        // radial mass 2 pi u |phi(u)| du per cell
        CompensatedSum total;
        cdf_.reserve(cells);
        for (std::size_t j = 0; j < cells; ++j) {
            const double u = (static_cast<double>(j) + 0.5) * step;
            const double m = 2 * pi * u * std::abs(values_[j]) * step;
            total += m;
            cdf_.push_back(total.value());
            if (2 * j >= cells)
                tail_ += m;
        }
    }

    double step() const noexcept { return step_; }
    double extent() const noexcept { return step_ * static_cast<double>(values_.size()); }
    double l1() const noexcept { return cdf_.back(); }
    /// mass in the outer half of the table
    double tail() const noexcept { return tail_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Radius drawn from the density 2 pi u |phi(u)| / l1, cells uniform inside.
    double sample_radius(double v1, double v2) const
    {
        const double target = v1 * l1();
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), target);
        const auto cell = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
        return (static_cast<double>(cell) + v2) * step_;
    }

private:
    double step_;
    std::vector<double> values_;
    std::vector<double> cdf_;
    double tail_ = 0.0;
};

inline const RadialTransform& default_radial_transform()
{
    static const RadialTransform table;
    return table;
}

/// Polar product rule on the unit disc: Gauss-Legendre radially on [0, 1/2] and [1/2, 1]
/// (the bump's kink-free seam), midpoint in angle.
template <class F>
double unit_disc_integral(F&& fn, int angular = 128)
{
    using gauss = boost::math::quadrature::gauss<double, 30>;
    CompensatedSum acc;
    for (int a = 0; a < angular; ++a) {
        const double theta = 2 * pi * (a + 0.5) / angular;
        const Vec dir = make_vec({std::cos(theta), std::sin(theta)});
        for (const auto& [lo, hi] : {std::pair{0.0, 0.5}, std::pair{0.5, 1.0}})
            acc += gauss::integrate([&](double rho) { return fn(Vec(rho * dir)) * rho; }, lo, hi);
    }
    return acc.value() * 2 * pi / angular;
}

struct PsiL1 {
    double value = 0.0;
    double stderr_ = 0.0;
    double tail = 0.0;
};

/// ||psi||_1 for psi hat = sum_i bump((x - c_i)/s). Every term has the same profile, so
/// psi(t) = s^2 phi(s t) S(t) with S(t) = sum_i e^{2 pi i <c_i, t>}, and
/// ||psi||_1 = ||phi||_1 E|S(u/s)| with u drawn from |phi|; the expectation is sampled.
inline PsiL1 psi_l1_factorized(const std::vector<Vec>& centers, double s, std::size_t samples, std::uint64_t seed,
                               const RadialTransform& table = default_radial_transform())
{
    require(!centers.empty() && s > 0.0 && samples >= 2, ErrorCode::precondition, "need centers, a radius and samples");
    const auto parts = map_chunks<std::pair<double, double>>(samples, 1u << 12, [&](std::size_t begin, std::size_t end) {
        CompensatedSum m1, m2;
        for (std::size_t k = begin; k < end; ++k) {
            SampleStream rng(seed, k);
            const double u = table.sample_radius(rng.uniform(), rng.uniform());
            const double theta = rng.uniform(0.0, 2 * pi);
            const double t0 = u * std::cos(theta) / s, t1 = u * std::sin(theta) / s;
            cplx acc{};
            for (const auto& c : centers)
                acc += std::polar(1.0, 2 * pi * (c[0] * t0 + c[1] * t1));
            const double a = std::abs(acc);
            m1 += a;
            m2 += a * a;
        }
        return std::pair{m1.value(), m2.value()};
    });
    CompensatedSum m1, m2;
    for (const auto& [a, b] : parts) {
        m1 += a;
        m2 += b;
    }
    const double n = static_cast<double>(samples);
    const double mean = m1.value() / n;
    const double var = std::max(0.0, m2.value() / n - mean * mean) * n / (n - 1.0);
    return {table.l1() * mean, table.l1() * std::sqrt(var / n), table.tail() * static_cast<double>(centers.size())};
}

// ---------------------------------------------------------------------------
// the ratio sweep

struct NehariConfig {
    double p = 6.0;
    std::vector<double> epsilons{0.4, 0.3, 0.2, 0.15, 0.1, 0.07, 0.05};
    Calibration cal;
    std::size_t mc_samples = 200000;
    std::size_t overlap_samples = 10000;
    int angular_nodes = 128;
    std::uint64_t seed = 1;
};

struct NehariRow {
    double eps = 0;
    int n = 0;
    double r = 0;
    double min_distance = 0;
    double numerator = 0;        // sum ||phi_i hat||_2^2
    double psi_l1 = 0;
    double psi_stderr = 0;
    double psi_tail = 0;
    double proxy = 0;            // (sum ||phi_i hat omega^{1/p}||_{p'}^p)^{1/p}
    double ratio = 0;
    double a_max = 0;
    double a_bound = 0;          // C2 eps^3
    double negation_bound = 0;   // ratio lower bound with the denominator replaced by N a (area)^{p-1}
    bool checks_ok = false;
};

struct SweepReport {
    double p = 0;
    std::vector<NehariRow> rows;
    LineFit fit;
    double a_max = 0;
    bool orthogonal_sum_ok = false;
    double orthogonal_sum_max_rel_diff = 0;
};

namespace detail {

/// D-set disjointness for the rotation-symmetric family: pairs (0, k) represent all pairs.
inline bool interaction_regions_disjoint(const std::vector<BumpSymbol>& bumps, std::size_t samples, std::uint64_t seed)
{
    const auto disc = ConvexBody::ball(Vec::Zero(2), 1.0);
    for (std::size_t k = 1; k < bumps.size(); ++k)
        if (interaction_overlap(disc, bumps[0].support(), bumps[k].support(), samples, mix64(seed + k)) != 0)
            return false;
    return true;
}

} // namespace detail

/// One row of the ratio for the packed family at eps.
inline NehariRow bump_family_ratio(const NehariConfig& cfg, double eps, const std::vector<Vec>* ys_override = nullptr)
{
    const double p = cfg.p;
    require(p > 1.0, ErrorCode::out_of_range, "p must exceed 1");
    require(eps > 0.0 && eps <= cfg.cal.eps0, ErrorCode::out_of_range, "eps outside the calibrated range");
    const auto ys = ys_override ? *ys_override : pack_boundary_disc(eps);
    const auto bumps = build_bumps(ys, eps, cfg.cal.c, cfg.cal.c1);
    const double q = conjugate_exponent(p);

    NehariRow row;
    row.eps = eps;
    row.n = static_cast<int>(ys.size());
    row.r = cfg.cal.c1 * eps * eps;
    row.min_distance = ys.size() > 1 ? min_pairwise_distance(ys) : infinity;
    const double s = 2.0 * row.r;

    const double ref_l2 = unit_disc_integral([](const Vec& v) { return std::pow(bump_hat(v), 2); }, cfg.angular_nodes);
    row.numerator = row.n * s * s * ref_l2;

    std::vector<Vec> centers;
    for (const auto& b : bumps)
        centers.push_back(b.center);
    const auto psi = psi_l1_factorized(centers, s, cfg.mc_samples, mix64(cfg.seed ^ std::bit_cast<std::uint64_t>(eps)));
    row.psi_l1 = psi.value;
    row.psi_stderr = psi.stderr_;
    row.psi_tail = psi.tail;
    require(row.psi_tail <= 0.01 * row.psi_l1, ErrorCode::budget_exceeded, "spatial tail exceeds 1% of the L1 mass");

    // every bump is a rotation of the first, and omega is radial
    CompensatedSum terms;
    for (const auto& b : bumps) {
        const double one = s * s * unit_disc_integral(
                                       [&](const Vec& v) {
                                           const double f = bump_hat(v);
                                           return f == 0.0 ? 0.0 : std::pow(f, q) * std::pow(omega_ball(2, 1.0, Vec(b.center + s * v)), q / p);
                                       },
                                       cfg.angular_nodes);
        terms += std::pow(one, p / q);
    }
    row.proxy = std::pow(terms.value(), 1.0 / p);
    row.ratio = row.numerator / (row.psi_l1 * row.proxy);

    row.a_max = bump_support_sup_omega(cfg.cal.c, cfg.cal.c1, eps);
    row.a_bound = cfg.cal.c2 * std::pow(eps, 3);
    const double area = pi * s * s;
    row.negation_bound = row.numerator / (row.psi_l1 * std::pow(row.n * row.a_max * std::pow(area, p - 1.0), 1.0 / p));

    row.checks_ok = row.min_distance > 2 * eps && row.a_max <= row.a_bound && row.ratio >= 0.95 * row.negation_bound &&
                    row.psi_l1 <= row.n * default_radial_transform().l1() * (1 + 1e-12) &&
                    detail::interaction_regions_disjoint(bumps, cfg.overlap_samples, cfg.seed);
    return row;
}

inline SweepReport sweep_and_fit(const NehariConfig& cfg, int orthogonal_grid = 50)
{
    SweepReport rep;
    rep.p = cfg.p;
    for (double eps : cfg.epsilons)
        rep.rows.push_back(bump_family_ratio(cfg, eps));
    std::vector<double> ns, ratios;
    for (const auto& r : rep.rows)
        if (r.checks_ok && std::isfinite(r.ratio) && r.ratio > 0) {
            ns.push_back(r.n);
            ratios.push_back(r.ratio);
            rep.a_max = std::max(rep.a_max, r.a_max);
        }
    require(ns.size() >= 4, ErrorCode::budget_exceeded, "fewer than 4 valid sweep rows");
    rep.fit = fit_loglog(ns, ratios);

    // orthogonal-sum law for the family at the coarsest eps
    const double eps = *std::max_element(cfg.epsilons.begin(), cfg.epsilons.end());
    std::vector<SupportedSymbol> symbols;
    for (const auto& b : build_bumps(pack_boundary_disc(eps), eps, cfg.cal.c, cfg.cal.c1))
        symbols.push_back(supported(b));
    const auto os = orthogonal_sum_check(ConvexBody::ball(Vec::Zero(2), 1.0), symbols, GridSpec::cube(2, -1, 1, orthogonal_grid),
                                         cfg.seed, cfg.overlap_samples);
    rep.orthogonal_sum_ok = os.matches;
    rep.orthogonal_sum_max_rel_diff = os.max_rel_diff;
    return rep;
}

} // namespace pwlab

#endif // PWLAB_NEHARI_HPP

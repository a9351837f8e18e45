#ifndef PWLAB_HARDY_HPP
#define PWLAB_HARDY_HPP

#include <pwlab/fit.hpp>
#include <pwlab/nehari.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace pwlab {

inline constexpr double omega_floor = 1e-12;

// ---------------------------------------------------------------------------
// exact tents

struct TentRatio {
    double integral = 0;  // int |fhat| / omega^d over [-1, 1]^n
    double l1 = 0;        // ||f||_1, product of one-dimensional syntheses
    double ratio = 0;
};

/// fhat = prod (1 - |x_i|)_+ on [-1, 1]^n, the autocorrelation of [-1/2, 1/2]^n, so for
/// d = 1 the integrand is identically 1. f is a product, so ||f||_1 is the product of the
/// one-dimensional norms.
inline TentRatio tent_ratio(int n, double d = 1.0, int quad_points = 200)
{
    require(n >= 1 && n <= 3, ErrorCode::unsupported, "tent products are evaluated for n <= 3");
    require(d < 2.0, ErrorCode::out_of_range, "the tent integral diverges for d >= 2");
    const auto tent = [](const Vec& x) {
        double v = 1.0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            v *= std::max(0.0, 1.0 - std::abs(x[i]));
        return v;
    };
    TentRatio out;
    out.integral = quad_integral(
        [&](const Vec& x) {
            const double w = tent(x);
            return w < omega_floor ? 0.0 : w * std::pow(w, -d);
        },
        GridSpec::cube(n, -1, 1, quad_points));
    SynthesisOptions opt;
    opt.increment_tolerance = 1e-3;
    opt.max_doublings = 6;
    const auto axis = GridFunction::sample(GridSpec::cube(1, -1, 1, 4096), [&](const Vec& x) { return cplx{tent(x)}; });
    out.l1 = std::pow(synthesize_l1(axis, 8, 1024, opt).l1, n);
    out.ratio = out.integral / out.l1;
    return out;
}

// ---------------------------------------------------------------------------
// the half-line

struct HalflineRatio {
    double integral = 0;  // int_0^2 |fhat(x)| / x dx
    double l1 = 0;
    double tail = 0;
    double ratio = 0;
};

/// fhat = ghat * hhat by FFT convolution; ghat and hhat share one grid inside [0, 1].
/// With nodes (k + 1/2) h the convolution lives on the nodes (m + 1) h.
inline HalflineRatio halfline_ratio(const GridFunction& ghat, const GridFunction& hhat)
{
    require(ghat.dim() == 1 && hhat.dim() == 1, ErrorCode::dimension_mismatch, "half-line data is one-dimensional");
    const GridSpec& spec = ghat.spec;
    require(hhat.spec.lower[0] == spec.lower[0] && hhat.spec.upper[0] == spec.upper[0] && hhat.spec.points == spec.points,
            ErrorCode::precondition, "both factors must share one grid");
    require(spec.lower[0] == 0.0 && spec.upper[0] <= 1.0, ErrorCode::precondition, "factors must be supported in (0, 1)");
    const int m = spec.points[0];
    const double h = spec.spacing(0);

    const int k = detail::next_pow2(2.0 * m);
    detail::FftwBuffer a(static_cast<std::size_t>(k)), b(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const cplx g = j < m ? ghat.values[static_cast<std::size_t>(j)] : cplx{};
        const cplx q = j < m ? hhat.values[static_cast<std::size_t>(j)] : cplx{};
        a.data[j][0] = g.real(), a.data[j][1] = g.imag();
        b.data[j][0] = q.real(), b.data[j][1] = q.imag();
    }
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_plan pa = fftw_plan_dft_1d(k, a.data, a.data, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_plan pb = fftw_plan_dft_1d(k, b.data, b.data, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(pa);
        fftw_execute(pb);
        for (int j = 0; j < k; ++j) {
            const cplx prod = cplx(a.data[j][0], a.data[j][1]) * cplx(b.data[j][0], b.data[j][1]);
            a.data[j][0] = prod.real(), a.data[j][1] = prod.imag();
        }
        fftw_plan pi_ = fftw_plan_dft_1d(k, a.data, a.data, FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_execute(pi_);
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pi_);
    }
    GridFunction f{GridSpec(make_vec({0.5 * h}), make_vec({(2 * m + 0.5) * h}), {2 * m}), std::vector<cplx>(static_cast<std::size_t>(2 * m)),
                   Side::frequency, std::nullopt};
    HalflineRatio out;
    CompensatedSum num;
    for (int j = 0; j < 2 * m; ++j) {
        const cplx v = j < 2 * m - 1 ? cplx(a.data[j][0], a.data[j][1]) * (h / k) : cplx{};
        f.values[static_cast<std::size_t>(j)] = v;
        num += std::abs(v) / ((j + 1) * h) * h;
    }
    out.integral = num.value();

    // f oscillates at frequencies below 2; the box reaches the synthesis period
    SynthesisOptions opt;
    opt.max_doublings = 3;
    opt.throw_on_budget = false;
    const double half = 1.0 / (16.0 * h);
    const auto syn = synthesize_l1(f, half, static_cast<int>(std::ceil(2.0 * half / 0.05)), opt);
    out.l1 = syn.l1;
    out.tail = syn.tail_estimate;
    out.ratio = out.integral / out.l1;
    return out;
}

/// x^{-a} times smooth cutoffs rising on (eta, 2 eta) and falling on (1 - w, 1).
struct PowerProfile {
    double a = 0.5;
    double eta = 0.01;
    double w = 0.2;
    cplx operator()(const Vec& x) const
    {
        const double t = x[0];
        if (t <= eta || t >= 1.0)
            return {};
        return std::pow(t, -a) * smooth_step((t - eta) / eta) * smooth_step((1.0 - t) / w);
    }
};

/// Grid on [0, 1] fine enough for the profile's inner scale.
inline GridSpec halfline_grid(double inner_scale, int min_points = 256)
{
    const int m = std::max(min_points, static_cast<int>(std::ceil(20.0 / inner_scale)));
    return GridSpec(make_vec({0.0}), make_vec({1.0}), {m});
}

/// One randomized product: either bumps inside (0, 1) or power profiles with a random
/// inner scale, random complex amplitudes throughout.
inline HalflineRatio random_halfline_trial(std::uint64_t seed, std::uint64_t index)
{
    SampleStream rng(seed, index);
    const bool power = rng.uniform() < 0.5;
    FrequencyFn g, q;
    double inner = 0.05;
    if (power) {
        inner = std::exp(rng.uniform(std::log(1e-3), std::log(0.2)));
        const PowerProfile pg{rng.uniform(0.25, 0.6), inner, rng.uniform(0.02, 0.4)};
        const PowerProfile ph{rng.uniform(0.25, 0.6), inner * rng.uniform(1.0, 3.0), rng.uniform(0.02, 0.4)};
        const cplx ag = std::polar(1.0, rng.uniform(0.0, 2 * pi));
        g = [pg, ag](const Vec& x) { return ag * pg(x); };
        q = ph;
    } else {
        const auto bump = [&rng, &inner] {
            const double r = rng.uniform(0.03, 0.5);
            const double c = rng.uniform(r, 1.0 - r);
            inner = std::min(inner, r);
            return BumpSymbol{make_vec({c}), r, std::polar(rng.uniform(0.1, 1.0), rng.uniform(0.0, 2 * pi))};
        };
        const BumpSymbol g1 = bump(), g2 = bump(), h1 = bump();
        g = [g1, g2](const Vec& x) { return g1(x) + g2(x); };
        q = h1;
    }
    const auto spec = halfline_grid(inner);
    return halfline_ratio(GridFunction::sample(spec, g), GridFunction::sample(spec, q));
}

// ---------------------------------------------------------------------------
// the corner family

/// Same polytope scaled about the origin to volume 1.
inline ConvexBody unit_volume(const ConvexBody& body)
{
    const HPolytope h = to_hpolytope(body);
    const double s = std::pow(polytope_volume(h), -1.0 / h.dim);
    std::vector<Halfspace> hs;
    for (const auto& f : h.halfspaces)
        hs.push_back({f.normal, f.offset * s});
    return ConvexBody::hpolytope(h.dim, hs);
}

/// L1 norm of the unit bump's inverse transform in dimension n.
inline double reference_bump_l1(int n)
{
    if (n == 2)
        return default_radial_transform().l1();
    require(n == 1, ErrorCode::unsupported, "the corner family is evaluated for n <= 2");
    static const double one = [] {
        SynthesisOptions opt;
        opt.increment_tolerance = 1e-4;
        return synthesize_l1(GridFunction::sample(GridSpec::cube(1, -1, 1, 2048), [](const Vec& x) { return cplx{bump_hat(x)}; }), 16, 1024, opt).l1;
    }();
    return one;
}

struct CornerPoint {
    Vec x;          // 2v + t^{1/n} 2(c - v)
    Vec center;     // centre of the doubled inscribed ball of P cap (x - P)
    double radius = 0;
    double omega = 0;  // omega_P(x)
};

inline CornerPoint corner_point(const ConvexBody& body, double t, int vertex = 0)
{
    require(t > 0.0 && t < 1.0, ErrorCode::out_of_range, "t must lie in (0, 1)");
    const HPolytope h = to_hpolytope(body);
    const int n = h.dim;
    const auto verts = vertices_of(body);
    require(vertex >= 0 && vertex < static_cast<int>(verts.size()), ErrorCode::out_of_range, "vertex index");
    const Vec& v = verts[static_cast<std::size_t>(vertex)];
    const Vec c = chebyshev_ball(h).center;
    CornerPoint out;
    out.x = 2.0 * v + std::pow(t, 1.0 / n) * 2.0 * (c - v);
    std::vector<Halfspace> both = h.halfspaces;
    for (const auto& f : h.halfspaces)
        both.push_back({Vec(-f.normal), f.offset - f.normal.dot(out.x)});
    const auto ball = chebyshev_ball(HPolytope{n, both});
    out.center = 2.0 * ball.center;
    out.radius = 2.0 * ball.radius;
    out.omega = omega_exact(body, out.x);
    require(out.omega > 1e3 * omega_floor && out.radius > 0.0, ErrorCode::out_of_range, "omega at the corner point is below the floor");
    return out;
}

/// (int |phi_t hat| / omega^d) / ||phi_t||_1 with phi_t hat the bump on the doubled
/// inscribed ball; the L1 norm is that of the reference bump.
inline double corner_family_ratio(const ConvexBody& body, double d, double t, int vertex = 0, int angular = 128)
{
    const int n = body.dim();
    const auto cp = corner_point(body, t, vertex);
    const OmegaEvaluator om(body);
    const auto integrand = [&](const Vec& u) {
        const double f = bump_hat(u);
        if (f == 0.0)
            return 0.0;
        const double w = om(Vec(cp.center + cp.radius * u));
        return w < omega_floor ? 0.0 : f * std::pow(w, -d);
    };
    double integral = 0.0;
    if (n == 2) {
        integral = unit_disc_integral(integrand, angular);
    } else {
        require(n == 1, ErrorCode::unsupported, "the corner family is evaluated for n <= 2");
        integral = quad_integral(integrand, GridSpec::cube(1, -1, 1, 64 * angular));
    }
    return std::pow(cp.radius, n) * integral / reference_bump_l1(n);
}

struct HardyRow {
    double scale = 0;
    double ratio = 0;
};

struct HardyReport {
    std::vector<HardyRow> rows;
    LineFit fit;
    double max_over_min = 0;
};

inline HardyReport corner_family(const ConvexBody& body, double d, const std::vector<double>& ts, int vertex = 0)
{
    HardyReport rep;
    std::vector<double> xs, ys;
    for (double t : ts) {
        const double r = corner_family_ratio(body, d, t, vertex);
        require(std::isfinite(r) && r > 0.0, ErrorCode::non_finite, "corner ratio is not positive and finite");
        rep.rows.push_back({t, r});
        xs.push_back(t);
        ys.push_back(r);
    }
    if (xs.size() >= 2)
        rep.fit = fit_loglog(xs, ys);
    rep.max_over_min = *std::max_element(ys.begin(), ys.end()) / *std::min_element(ys.begin(), ys.end());
    return rep;
}

// ---------------------------------------------------------------------------
// verdicts

enum class Verdict { holds_evidence, fails_evidence, inconclusive };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::holds_evidence: return "holds-evidence";
    case Verdict::fails_evidence: return "fails-evidence";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct IntegrabilityRow {
    double d = 0;
    std::string method;            // "corner-family" or "integrability"
    double corner_slope = NAN;     // log-log slope of the corner ratio in t
    double corner_max_over_min = NAN;
    std::vector<double> integrals; // omega^{-d} integrals under refinement
    double last_change = NAN;      // relative change at the final refinement
    Verdict verdict = Verdict::inconclusive;
};

/// Polytopes: a corner family whose ratio grows like a negative power of t is a divergent
/// family; a ratio that stays within a factor 2 or decays is consistent with the bound.
/// Other bodies: omega^{-d} integrals that settle (< 1% change) versus grow (> 10%).
inline std::vector<IntegrabilityRow> adjusted_integrability_report(const ConvexBody& body, const std::vector<double>& ds,
                                                                  const std::vector<double>& ts = geometric_grid(1e-3, 1e-1, 7))
{
    std::vector<IntegrabilityRow> out;
    for (double d : ds) {
        IntegrabilityRow row;
        row.d = d;
        if (body.is_polytope()) {
            row.method = "corner-family";
            const auto rep = corner_family(unit_volume(body), d, ts);
            row.corner_slope = rep.fit.slope;
            row.corner_max_over_min = rep.max_over_min;
            if (rep.fit.slope < -0.1 && rep.max_over_min > 2.0)
                row.verdict = Verdict::fails_evidence;
            else if (rep.max_over_min <= 2.0 || rep.fit.slope > 0.1)
                row.verdict = Verdict::holds_evidence;
        } else {
            row.method = "integrability";
            row.integrals = omega_inverse_integral(body, d);
            const auto& v = row.integrals;
            row.last_change = std::abs(v.back() - v[v.size() - 2]) / std::abs(v[v.size() - 2]);
            if (row.last_change < 0.01)
                row.verdict = Verdict::holds_evidence;
            else if (row.last_change > 0.10)
                row.verdict = Verdict::fails_evidence;
        }
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace pwlab

#endif // PWLAB_HARDY_HPP

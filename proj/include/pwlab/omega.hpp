#ifndef PWLAB_OMEGA_HPP
#define PWLAB_OMEGA_HPP

#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "fit.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "random.hpp"

namespace pwlab {

// ---------------------------------------------------------------------------
// closed forms

/// omega of B(0, radius) in R^n at x. With s = |x|/r the slice formula
/// 2 kappa_{n-1} int_{s/2}^1 (1 - t^2)^{(n-1)/2} dt becomes, under t = cos(theta),
/// 2 kappa_{n-1} int_0^{acos(s/2)} sin^n(theta) d theta, a smooth integral on a short
/// interval; 30-point Gauss-Legendre is exact to rounding for the dimensions used.
inline double omega_ball_radial(int n, double radius, double dist)
{
    require(n >= 1, ErrorCode::dimension_mismatch, "dimension must be positive");
    require(radius > 0.0, ErrorCode::precondition, "radius must be positive");
    const double s = dist / radius;
    if (!(s < 2.0))
        return 0.0;
    const double a = std::acos(0.5 * s);
    const double integral = boost::math::quadrature::gauss<double, 30>::integrate(
        [n](double th) { return std::pow(std::sin(th), n); }, 0.0, a);
    return 2.0 * unit_ball_volume(n - 1) * integral * std::pow(radius, n);
}

inline double omega_ball(int n, double radius, const Vec& x)
{
    require(x.size() == n, ErrorCode::dimension_mismatch, "point length");
    return omega_ball_radial(n, radius, x.norm());
}

/// omega of the box prod (lo_i, hi_i): a product of one-dimensional tents.
inline double omega_box(const Vec& lo, const Vec& hi, const Vec& x)
{
    require(x.size() == lo.size() && lo.size() == hi.size(), ErrorCode::dimension_mismatch, "box/point length");
    double w = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double len = hi[i] - lo[i];
        w *= std::max(0.0, len - std::abs(x[i] - (lo[i] + hi[i])));
        if (w == 0.0)
            return 0.0;
    }
    return w;
}

/// omega of prod (0, L_i).
inline double omega_box(const std::vector<double>& edges, const Vec& x)
{
    Vec hi(static_cast<Eigen::Index>(edges.size()));
    for (std::size_t i = 0; i < edges.size(); ++i) {
        require(edges[i] > 0.0, ErrorCode::precondition, "box edges must be positive");
        hi[static_cast<Eigen::Index>(i)] = edges[i];
    }
    return omega_box(Vec::Zero(hi.size()), hi, x);
}

/// The box an H-polytope describes, if every normal is a coordinate direction.
inline std::optional<Box> as_axis_box(const HPolytope& p)
{
    const int n = p.dim;
    Vec lo = Vec::Constant(n, -std::numeric_limits<double>::infinity());
    Vec hi = Vec::Constant(n, std::numeric_limits<double>::infinity());
    for (const auto& h : normalized_unique(p.halfspaces)) {
        Eigen::Index axis = 0;
        const double big = h.normal.cwiseAbs().maxCoeff(&axis);
        if (std::abs(big - 1.0) > 1e-15)
            return std::nullopt;
        if (h.normal[axis] > 0)
            hi[axis] = std::min(hi[axis], h.offset);
        else
            lo[axis] = std::max(lo[axis], -h.offset);
    }
    if (!lo.allFinite() || !hi.allFinite() || ((hi - lo).array() <= 0.0).any())
        return std::nullopt;
    return Box{lo, hi};
}

/// Volume of P cap (x - P) without boundedness checks on P.
inline double omega_polytope_unchecked(const std::vector<Halfspace>& unit_hs, int dim, const Vec& x)
{
    std::vector<Halfspace> both = unit_hs;
    for (const auto& h : unit_hs)
        both.push_back({-h.normal, h.offset - h.normal.dot(x)});
    both = normalized_unique(both);
    return volume_from_vertices(dim, both, enumerate_vertices_raw(dim, both));
}

inline double omega_polytope_exact(const HPolytope& p, const Vec& x)
{
    require(x.size() == p.dim, ErrorCode::dimension_mismatch, "point length");
    require(p.dim <= 3, ErrorCode::unsupported, "exact polytope omega restricted to dim <= 3");
    require(is_bounded(p), ErrorCode::unbounded, "polytope is unbounded");
    return omega_polytope_unchecked(normalized_unique(p.halfspaces), p.dim, x);
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

inline Box inflated(const Box& b, double factor = 1.0 + 1e-12)
{
    const Vec c = b.center();
    const Vec half = 0.5 * (b.hi - b.lo) * factor;
    return Box{c - half, c + half};
}

/// Hit-ratio estimate of m(body cap (x - body)) over the bounding box of the body.
inline Estimate omega_mc(const ConvexBody& body, const Vec& x, std::size_t samples, std::uint64_t seed)
{
    require(x.size() == body.dim(), ErrorCode::dimension_mismatch, "point length");
    require(samples > 0, ErrorCode::precondition, "need at least one sample");
    const Box box = inflated(bounding_box(body));
    const int n = body.dim();
    const auto hits = map_chunks<std::size_t>(samples, 1u << 14, [&](std::size_t begin, std::size_t end) {
        std::size_t h = 0;
        Vec z(n);
        for (std::size_t k = begin; k < end; ++k) {
            SampleStream rng(seed, k);
            for (int i = 0; i < n; ++i)
                z[i] = rng.uniform(box.lo[i], box.hi[i]);
            if (membership(body, z) && membership(body, Vec(x - z)))
                ++h;
        }
        return h;
    });
    const double p = static_cast<double>(std::accumulate(hits.begin(), hits.end(), std::size_t{0})) / static_cast<double>(samples);
    const double vol = box.volume();
    return {vol * p, vol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

// ---------------------------------------------------------------------------
// evaluator

enum class OmegaMode { exact_ball, exact_box_product, exact_polytope, exact_composite, monte_carlo };

inline const char* to_string(OmegaMode m)
{
    switch (m) {
    case OmegaMode::exact_ball: return "exact_ball";
    case OmegaMode::exact_box_product: return "exact_box_product";
    case OmegaMode::exact_polytope: return "exact_polytope";
    case OmegaMode::exact_composite: return "exact_composite";
    case OmegaMode::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

/// omega of a body by the fastest exact path available; throws `unsupported`
/// for polytopes above dim 3.
class OmegaEvaluator {
public:
    explicit OmegaEvaluator(ConvexBody body) : body_(std::move(body)) { mode_ = prepare(); }

    OmegaEvaluator(ConvexBody body, OmegaMode mode, std::size_t samples = 100000, std::uint64_t seed = 0)
        : body_(std::move(body)), samples_(samples), seed_(seed)
    {
        if (mode == OmegaMode::monte_carlo) {
            mode_ = mode;
            return;
        }
        const OmegaMode natural = prepare();
        require(natural == mode || (mode == OmegaMode::exact_polytope && natural == OmegaMode::exact_box_product), ErrorCode::unsupported,
                std::string("mode ") + to_string(mode) + " does not fit this body");
        mode_ = mode;
        if (mode == OmegaMode::exact_polytope)
            box_.reset();
    }

    OmegaMode mode() const noexcept { return mode_; }
    const ConvexBody& body() const noexcept { return body_; }
    int dim() const noexcept { return body_.dim(); }

    double operator()(const Vec& x) const
    {
        require(x.size() == body_.dim(), ErrorCode::dimension_mismatch, "point length");
        switch (mode_) {
        case OmegaMode::exact_ball: {
            const auto* b = body_.as<Ball>();
            return omega_ball_radial(body_.dim(), b->radius, (x - 2.0 * b->center).norm());
        }
        case OmegaMode::exact_box_product:
            return omega_box(box_->lo, box_->hi, x);
        case OmegaMode::exact_polytope:
            return omega_polytope_unchecked(unit_hs_, body_.dim(), x);
        case OmegaMode::exact_composite:
            return composite(x);
        case OmegaMode::monte_carlo:
            return omega_mc(body_, x, samples_, seed_).value;
        }
        return 0.0;
    }

private:
    OmegaMode prepare()
    {
        if (body_.as<Ball>())
            return OmegaMode::exact_ball;
        if (const auto* h = body_.as<HPolytope>()) {
            unit_hs_ = normalized_unique(h->halfspaces);
            if ((box_ = as_axis_box(*h)))
                return OmegaMode::exact_box_product;
            require(h->dim <= 3, ErrorCode::unsupported, "exact polytope omega restricted to dim <= 3");
            require(is_bounded(*h), ErrorCode::unbounded, "polytope is unbounded");
            return OmegaMode::exact_polytope;
        }
        if (const auto* v = body_.as<VPolytope>()) {
            unit_hs_ = v->facets;
            if ((box_ = as_axis_box(HPolytope{v->dim, v->facets})))
                return OmegaMode::exact_box_product;
            return OmegaMode::exact_polytope;
        }
        if (const auto* p = body_.as<Product>()) {
            bool boxes = true;
            for (const auto& f : p->factors) {
                parts_.emplace_back(f);
                boxes = boxes && parts_.back().mode() == OmegaMode::exact_box_product;
            }
            if (boxes) {
                box_ = bounding_box(body_);
                parts_.clear();
                return OmegaMode::exact_box_product;
            }
            return OmegaMode::exact_composite;
        }
        const auto* a = body_.as<AffineImage>();
        parts_.emplace_back(*a->base);
        det_ = std::abs(a->matrix.determinant());
        inverse_ = a->matrix.inverse();
        return OmegaMode::exact_composite;
    }

    double composite(const Vec& x) const
    {
        if (const auto* a = body_.as<AffineImage>())
            return det_ * parts_.front()(Vec(inverse_ * (x - 2.0 * a->shift)));
        double w = 1.0;
        Eigen::Index at = 0;
        for (const auto& part : parts_) {
            w *= part(Vec(x.segment(at, part.dim())));
            at += part.dim();
            if (w == 0.0)
                return 0.0;
        }
        return w;
    }

    ConvexBody body_;
    OmegaMode mode_ = OmegaMode::monte_carlo;
    std::size_t samples_ = 100000;
    std::uint64_t seed_ = 0;
    std::optional<Box> box_;
    std::vector<Halfspace> unit_hs_;
    std::vector<OmegaEvaluator> parts_;
    double det_ = 1.0;
    Mat inverse_;
};

inline double omega_exact(const ConvexBody& body, const Vec& x) { return OmegaEvaluator(body)(x); }

/// Bounding box of 2*body.
inline Box doubled_box(const ConvexBody& body)
{
    const Box b = bounding_box(body);
    return Box{2.0 * b.lo, 2.0 * b.hi};
}

// ---------------------------------------------------------------------------
// sublevel sets

struct SublevelEstimate {
    std::vector<double> t_values;
    std::vector<double> measures;
    std::vector<double> stderrs;
    double fitted_exponent = 0.0;
    double fit_residual = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// m({x in 2 body : omega(x) < t}) on a geometric t grid, and the log-log slope.
/// One set of sample points serves every t, so measures are nondecreasing in t.
inline SublevelEstimate sublevel_fit(const ConvexBody& body, double t_min, double t_max, int count, std::size_t samples, std::uint64_t seed)
{
    require(count >= 5, ErrorCode::precondition, "sublevel fit needs at least 5 t values");
    SublevelEstimate est;
    est.t_values = geometric_grid(t_min, t_max, count);
    est.samples = samples;
    est.seed = seed;
    const auto& ts = est.t_values;

    if (body.dim() == 1) {
        const Box b = bounding_box(body);
        const double len = b.hi[0] - b.lo[0];
        for (double t : ts) {
            est.measures.push_back(2.0 * std::min(t, len));
            est.stderrs.push_back(0.0);
        }
    } else {
        require(samples > 0, ErrorCode::precondition, "need at least one sample");
        const OmegaEvaluator omega(body);
        const Box box = inflated(doubled_box(body));
        const int n = body.dim();
        using Counts = std::vector<std::size_t>;
        const auto partial = map_chunks<Counts>(samples, 1u << 14, [&](std::size_t begin, std::size_t end) {
            Counts c(ts.size(), 0);
            Vec x(n);
            for (std::size_t k = begin; k < end; ++k) {
                SampleStream rng(seed, k);
                for (int i = 0; i < n; ++i)
                    x[i] = rng.uniform(box.lo[i], box.hi[i]);
                const double w = omega(x);
                if (w <= 0.0)
                    continue;
                for (std::size_t j = 0; j < ts.size(); ++j)
                    if (w < ts[j])
                        ++c[j];
            }
            return c;
        });
        const double vol = box.volume();
        for (std::size_t j = 0; j < ts.size(); ++j) {
            std::size_t hits = 0;
            for (const auto& c : partial)
                hits += c[j];
            const double p = static_cast<double>(hits) / static_cast<double>(samples);
            est.measures.push_back(vol * p);
            est.stderrs.push_back(vol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)));
        }
    }

    std::vector<double> fx, fy;
    for (std::size_t j = 0; j < ts.size(); ++j)
        if (est.measures[j] > 0.0) {
            fx.push_back(ts[j]);
            fy.push_back(est.measures[j]);
        }
    require(fx.size() >= 5, ErrorCode::budget_exceeded, "too few nonzero sublevel measures; raise samples or t_min");
    const LineFit f = fit_loglog(fx, fy);
    est.fitted_exponent = f.slope;
    est.fit_residual = f.residual;
    return est;
}

inline std::string sublevel_csv(const SublevelEstimate& e)
{
    std::ostringstream os;
    os.precision(17);
    os << "t,measure,stderr\n";
    for (std::size_t j = 0; j < e.t_values.size(); ++j)
        os << e.t_values[j] << ',' << e.measures[j] << ',' << e.stderrs[j] << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// integrability of omega^{-d}

/// Midpoint sums of omega^{-d} at spacings h, h/2, h/4, ...; nodes with omega = 0 are
/// skipped. Balls use the radial reduction int_0^{2r} n kappa_n s^{n-1} omega(s)^{-d} ds
/// on a midpoint grid in s (default 100000 points); other bodies use the tensor grid over
/// the box of 2*body (default 200 points per axis). base_points = 0 picks the default.
inline std::vector<double> omega_inverse_integral(const ConvexBody& body, double d, int levels = 3, int base_points = 0)
{
    require(levels >= 1 && base_points >= 0, ErrorCode::precondition, "need at least one level");
    std::vector<double> out;
    if (const auto* ball = body.as<Ball>()) {
        const int n = body.dim();
        const double surface = n * unit_ball_volume(n);
        const double r = ball->radius;
        int points = base_points > 0 ? base_points : 100000;
        for (int level = 0; level < levels; ++level, points *= 2) {
            const GridSpec spec(make_vec({0.0}), make_vec({2.0 * r}), {points});
            out.push_back(spec.cell_volume() * grid_sum(spec, [&](const Vec& s) {
                const double v = omega_ball_radial(n, r, s[0]);
                return v > 0.0 ? surface * std::pow(s[0], n - 1) * std::pow(v, -d) : 0.0;
            }));
        }
        return out;
    }
    const OmegaEvaluator omega(body);
    const Box box = doubled_box(body);
    GridSpec spec(box.lo, box.hi, std::vector<int>(static_cast<std::size_t>(body.dim()), base_points > 0 ? base_points : 200));
    for (int level = 0; level < levels; ++level) {
        out.push_back(spec.cell_volume() * grid_sum(spec, [&](const Vec& x) {
            const double v = omega(x);
            return v > 0.0 ? std::pow(v, -d) : 0.0;
        }));
        spec = spec.refined(2);
    }
    return out;
}

} // namespace pwlab

#endif // PWLAB_OMEGA_HPP

#ifndef PWLAB_FOURIER_HPP
#define PWLAB_FOURIER_HPP

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fftw3.h>

#include "geometry.hpp"
#include "grid.hpp"

namespace pwlab {

using cplx = std::complex<double>;
using FrequencyFn = std::function<cplx(const Vec&)>;

// ---------------------------------------------------------------------------
// the bump profile

inline double smooth_step(double u)
{
    auto g = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    const double a = g(u);
    const double b = g(1.0 - u);
    return a / (a + b);
}

/// Radial profile: 1 on |x| <= 1/2, 0 on |x| >= 1, smooth in between.
inline double bump_profile(double radius) { return smooth_step(2.0 * (1.0 - radius)); }

inline double bump_hat(const Vec& x) { return bump_profile(x.norm()); }

/// bump_hat((x - center)/radius) times a complex amplitude.
struct BumpSymbol {
    Vec center;
    double radius = 1.0;
    cplx amplitude{1.0, 0.0};

    cplx operator()(const Vec& x) const
    {
        const double rho = (x - center).norm() / radius;
        return rho >= 1.0 ? cplx{} : amplitude * bump_profile(rho);
    }

    Ball support() const { return Ball{center, radius}; }
};

// ---------------------------------------------------------------------------
// grid functions

enum class Side { frequency, space };

struct GridFunction {
    GridSpec spec;
    std::vector<cplx> values;
    Side side = Side::frequency;
    std::optional<ConvexBody> support;

    /// Samples fn at the midpoint nodes. A declared support is checked: values at
    /// nodes outside it must vanish to 1e-14.
    static GridFunction sample(const GridSpec& spec, const FrequencyFn& fn, Side side = Side::frequency,
                               std::optional<ConvexBody> support = std::nullopt)
    {
        GridFunction g{spec, std::vector<cplx>(spec.size()), side, std::move(support)};
        Vec x;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            spec.node(k, x);
            const cplx v = fn(x);
            require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::non_finite, "non-finite grid value");
            if (g.support && !membership(*g.support, x))
                require(std::abs(v) <= 1e-14, ErrorCode::precondition, "frequency data does not vanish outside its declared support");
            g.values[k] = v;
        }
        return g;
    }

    int dim() const { return spec.dim(); }

    /// Multilinear interpolation of the samples; zero outside the node hull.
    cplx interpolate(const Vec& x) const
    {
        const int n = dim();
        std::vector<int> base(static_cast<std::size_t>(n));
        std::vector<double> frac(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const int p = spec.points[static_cast<std::size_t>(i)];
            double u = (x[i] - spec.lower[i]) / spec.spacing(i) - 0.5;
            if (u < -1e-9 || u > p - 1 + 1e-9)
                return {};
            u = std::clamp(u, 0.0, static_cast<double>(p - 1));
            int b = static_cast<int>(std::floor(u));
            b = std::min(b, std::max(p - 2, 0));
            base[static_cast<std::size_t>(i)] = b;
            frac[static_cast<std::size_t>(i)] = p == 1 ? 0.0 : u - b;
        }
        cplx acc{};
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            double w = 1.0;
            std::size_t flat = 0;
            bool ok = true;
            for (int i = 0; i < n; ++i) {
                const bool up = (mask >> i) & 1u;
                const int idx = base[static_cast<std::size_t>(i)] + (up ? 1 : 0);
                const int p = spec.points[static_cast<std::size_t>(i)];
                if (idx >= p) {
                    ok = false;
                    break;
                }
                w *= up ? frac[static_cast<std::size_t>(i)] : 1.0 - frac[static_cast<std::size_t>(i)];
                flat = flat * static_cast<std::size_t>(p) + static_cast<std::size_t>(idx);
            }
            if (ok && w != 0.0)
                acc += w * values[flat];
        }
        return acc;
    }

    std::string csv() const
    {
        std::ostringstream os;
        os.precision(17);
        os << "node,re,im\n";
        for (std::size_t k = 0; k < values.size(); ++k)
            os << k << ',' << values[k].real() << ',' << values[k].imag() << '\n';
        return os.str();
    }
};

/// Midpoint rule; compensated, order fixed by the grid.
template <class F>
double quad_integral(F&& fn, const GridSpec& spec)
{
    return spec.cell_volume() * grid_sum(spec, std::forward<F>(fn));
}

/// f_r with hat{f_r}(x) = hat{f}((x - 2(1 - r) z)/r), resampled on the same grid.
inline GridFunction dilate_toward(const GridFunction& fhat, const Vec& z, double r)
{
    require(r > 0.0 && r < 1.0 + 1e-15, ErrorCode::out_of_range, "r must lie in (0, 1)");
    require(z.size() == fhat.dim(), ErrorCode::dimension_mismatch, "z length");
    require(fhat.side == Side::frequency, ErrorCode::precondition, "dilation acts on frequency data");
    const Vec shift = 2.0 * (1.0 - r) * z;
    GridFunction out{fhat.spec, std::vector<cplx>(fhat.spec.size()), Side::frequency, std::nullopt};
    if (fhat.support)
        out.support = ConvexBody::affine_image(*fhat.support, r * Mat::Identity(fhat.dim(), fhat.dim()), shift);
    Vec x;
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        fhat.spec.node(k, x);
        out.values[k] = fhat.interpolate(Vec((x - shift) / r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// spatial L1 norms by fast synthesis

struct SynthesisOptions {
    int max_doublings = 4;
    double increment_tolerance = 0.005;
    std::size_t max_fft_points = std::size_t{1} << 24;
    bool throw_on_budget = true;
};

struct SynthesisResult {
    double l1 = 0.0;
    double tail_estimate = 0.0;
    double halfwidth = 0.0;
    int doublings = 0;
    std::vector<int> fft_size;
    std::vector<double> shells; // |f| mass in [-L,L]^n, then in each doubling shell
};

namespace detail {

inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)))
    {
        require(data != nullptr, ErrorCode::budget_exceeded, "FFT buffer allocation failed");
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

inline int next_pow2(double v)
{
    int k = 1;
    while (k < v)
        k *= 2;
    return k;
}

} // namespace detail

/// |f| on one period of the discrete transform of fhat, where
/// f(t) = sum_k fhat(x_k) e^{2 pi i <x_k, t>} h^n. Nodes are t_j = (j + 1/2 - K/2) dt per
/// axis with dt = 1/(K h) and K the smallest power of two with K >= points and dt <= dt_target.
struct SynthesizedModulus {
    std::vector<int> ks;
    std::vector<double> dts;
    std::vector<double> modulus; // row-major over the K^n nodes
};

inline SynthesizedModulus synthesize_modulus(const GridFunction& fhat, double dt_target, std::size_t max_points = std::size_t{1} << 24)
{
    require(fhat.side == Side::frequency, ErrorCode::precondition, "synthesis needs frequency data");
    require(dt_target > 0.0, ErrorCode::precondition, "spatial spacing must be positive");
    const GridSpec& spec = fhat.spec;
    const int n = spec.dim();
    for (const auto& v : fhat.values)
        require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::non_finite, "non-finite frequency data");

    SynthesizedModulus out;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) {
        const double h = spec.spacing(i);
        const int k = detail::next_pow2(std::max<double>(spec.points[static_cast<std::size_t>(i)], std::ceil(1.0 / (h * dt_target) - 1e-9)));
        out.ks.push_back(k);
        out.dts.push_back(1.0 / (k * h));
        total *= static_cast<std::size_t>(k);
        require(total <= max_points, ErrorCode::budget_exceeded, "synthesis grid exceeds the point budget");
    }

    detail::FftwBuffer buf(total);
    for (std::size_t j = 0; j < total; ++j)
        buf.data[j][0] = buf.data[j][1] = 0.0;
    // fhat(x_k) (-1)^k e^{i pi k/K} per axis at index k; the remaining phases depend on j only
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (std::size_t flat = 0; flat < spec.size(); ++flat) {
        std::size_t rem = flat;
        for (int i = n - 1; i >= 0; --i) {
            const auto p = static_cast<std::size_t>(spec.points[static_cast<std::size_t>(i)]);
            idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % p);
            rem /= p;
        }
        cplx v = fhat.values[flat];
        std::size_t at = 0;
        for (int i = 0; i < n; ++i) {
            const int k = idx[static_cast<std::size_t>(i)];
            const int kk = out.ks[static_cast<std::size_t>(i)];
            v *= std::polar((k % 2) ? -1.0 : 1.0, pi * k / kk);
            at = at * static_cast<std::size_t>(kk) + static_cast<std::size_t>(k);
        }
        buf.data[at][0] = v.real();
        buf.data[at][1] = v.imag();
    }
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_plan plan = fftw_plan_dft(n, out.ks.data(), buf.data, buf.data, FFTW_BACKWARD, FFTW_ESTIMATE);
        require(plan != nullptr, ErrorCode::budget_exceeded, "FFT planning failed");
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    const double weight = spec.cell_volume();
    out.modulus.resize(total);
    for (std::size_t j = 0; j < total; ++j) {
        out.modulus[j] = std::hypot(buf.data[j][0], buf.data[j][1]) * weight;
        require(std::isfinite(out.modulus[j]), ErrorCode::non_finite, "non-finite synthesized value");
    }
    return out;
}

/// Spatial L1 norm: int |f| over [-L, L]^n on nodes with dt <= 2L/m; L doubles until the
/// increment falls below the tolerance. The last increment is the tail estimate.
inline SynthesisResult synthesize_l1(const GridFunction& fhat, double halfwidth, int points, const SynthesisOptions& opt = {})
{
    require(halfwidth > 0.0 && points >= 2, ErrorCode::precondition, "need a positive box and at least 2 points");
    const int n = fhat.dim();
    const auto syn = synthesize_modulus(fhat, 2.0 * halfwidth / points, opt.max_fft_points);

    double cell = 1.0;
    double max_half = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        cell *= syn.dts[static_cast<std::size_t>(i)];
        max_half = std::min(max_half, 0.5 * syn.ks[static_cast<std::size_t>(i)] * syn.dts[static_cast<std::size_t>(i)]);
    }
    // bin b holds nodes whose cells first fit inside [-L 2^b, L 2^b]^n
    const int bins = opt.max_doublings + 2;
    std::vector<CompensatedSum> mass(static_cast<std::size_t>(bins));
    for (std::size_t flat = 0; flat < syn.modulus.size(); ++flat) {
        std::size_t rem = flat;
        double need = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            const auto kk = static_cast<std::size_t>(syn.ks[static_cast<std::size_t>(i)]);
            const double j = static_cast<double>(rem % kk);
            rem /= kk;
            need = std::max(need, (std::abs(j + 0.5 - 0.5 * static_cast<double>(kk)) + 0.5) * syn.dts[static_cast<std::size_t>(i)]);
        }
        int b = 0;
        while (b < bins - 1 && need > halfwidth * std::ldexp(1.0, b) * (1.0 + 1e-12))
            ++b;
        mass[static_cast<std::size_t>(b)] += syn.modulus[flat] * cell;
    }

    SynthesisResult res;
    res.fft_size = syn.ks;
    for (const auto& m : mass)
        res.shells.push_back(m.value());
    double acc = res.shells[0];
    double half = halfwidth;
    require(half <= max_half * (1.0 + 1e-12), ErrorCode::budget_exceeded, "box exceeds the synthesis period");
    for (int d = 1; d <= opt.max_doublings; ++d) {
        if (2.0 * half > max_half * (1.0 + 1e-12))
            break;
        const double inc = res.shells[static_cast<std::size_t>(d)];
        acc += inc;
        half *= 2.0;
        res.doublings = d;
        res.tail_estimate = inc;
        res.l1 = acc;
        res.halfwidth = half;
        if (inc < opt.increment_tolerance * acc)
            return res;
    }
    if (opt.throw_on_budget)
        throw Error(ErrorCode::budget_exceeded, "box-integral increment stayed above tolerance after the allowed doublings");
    return res;
}

/// max |f| over the synthesis period at spacing <= dt_target.
inline double synthesize_max_abs(const GridFunction& fhat, double dt_target)
{
    const auto syn = synthesize_modulus(fhat, dt_target);
    return *std::max_element(syn.modulus.begin(), syn.modulus.end());
}

} // namespace pwlab

#endif // PWLAB_FOURIER_HPP

#ifndef PWLAB_HANKEL_HPP
#define PWLAB_HANKEL_HPP

#include <pwlab/fourier.hpp>
#include <pwlab/omega.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <utility>
#include <vector>

namespace pwlab {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// p' with 1/p + 1/p' = 1; p = 1 gives infinity.
inline double conjugate_exponent(double p)
{
    require(p >= 1.0, ErrorCode::out_of_range, "Schatten exponent must be >= 1");
    if (p == 1.0)
        return infinity;
    if (std::isinf(p))
        return 1.0;
    return p / (p - 1.0);
}

inline double schatten_norm(const std::vector<double>& sv, double p)
{
    require(p >= 1.0, ErrorCode::out_of_range, "Schatten exponent must be >= 1");
    double top = 0.0;
    for (double s : sv)
        top = std::max(top, std::abs(s));
    if (std::isinf(p) || top == 0.0)
        return top;
    // scaled to avoid overflow for large p
    CompensatedSum acc;
    for (double s : sv)
        acc += std::pow(std::abs(s) / top, p);
    return top * std::pow(acc.value(), 1.0 / p);
}

/// A[i][j] = fhat(x_i + x_j) h^n over the grid nodes strictly inside omega.
class HankelMatrix {
public:
    static constexpr std::size_t max_size = 4000;

    HankelMatrix(const ConvexBody& omega, const GridSpec& grid, const FrequencyFn& symbol)
        : weight_(grid.cell_volume())
    {
        require(grid.dim() == omega.dim(), ErrorCode::dimension_mismatch, "grid and domain dimensions differ");
        Vec x;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            grid.node(k, x);
            if (membership(omega, x))
                nodes_.push_back(x);
        }
        const auto m = nodes_.size();
        require(m <= max_size, ErrorCode::budget_exceeded, "Hankel matrix larger than the supported size");
        a_.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        // rows in fixed chunks; each entry written once, so the result is thread-independent
        map_chunks<int>(m, 16, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i)
                for (std::size_t j = i; j < m; ++j) {
                    const cplx v = symbol(Vec(nodes_[i] + nodes_[j]));
                    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::non_finite, "non-finite symbol value");
                    a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v * weight_;
                }
            return 0;
        });
        for (Eigen::Index i = 0; i < a_.rows(); ++i)
            for (Eigen::Index j = 0; j < i; ++j)
                a_(i, j) = a_(j, i);
    }

    const std::vector<Vec>& nodes() const noexcept { return nodes_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return a_; }
    double weight() const noexcept { return weight_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    double frobenius() const { return a_.norm(); }

    /// Nonincreasing singular values, computed once. Rows that vanish identically are
    /// dropped first (they only contribute zeros); a real matrix is symmetric, so its
    /// singular values are the absolute eigenvalues.
    const std::vector<double>& singular_values() const
    {
        std::call_once(once_, [this] {
            std::vector<Eigen::Index> live;
            for (Eigen::Index i = 0; i < a_.rows(); ++i)
                if (a_.row(i).cwiseAbs().maxCoeff() > 0.0)
                    live.push_back(i);
            const auto k = static_cast<Eigen::Index>(live.size());
            Eigen::MatrixXcd sub(k, k);
            for (Eigen::Index r = 0; r < k; ++r)
                for (Eigen::Index c = 0; c < k; ++c)
                    sub(r, c) = a_(live[static_cast<std::size_t>(r)], live[static_cast<std::size_t>(c)]);
            std::vector<double> sv;
            if (k > 0) {
                if (sub.imag().cwiseAbs().maxCoeff() == 0.0) {
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub.real(), Eigen::EigenvaluesOnly);
                    require(es.info() == Eigen::Success, ErrorCode::non_finite, "eigensolver failed");
                    for (Eigen::Index i = 0; i < k; ++i)
                        sv.push_back(std::abs(es.eigenvalues()[i]));
                } else {
                    Eigen::BDCSVD<Eigen::MatrixXcd> svd(sub);
                    for (Eigen::Index i = 0; i < k; ++i)
                        sv.push_back(svd.singularValues()[i]);
                }
            }
            sv.resize(nodes_.size(), 0.0);
            std::sort(sv.begin(), sv.end(), std::greater<>());
            sv_ = std::move(sv);
        });
        return sv_;
    }

private:
    std::vector<Vec> nodes_;
    Eigen::MatrixXcd a_;
    double weight_;
    mutable std::once_flag once_;
    mutable std::vector<double> sv_;
};

/// Grid over the box of 2 omega with the spacing of grid (for integrals against omega).
inline GridSpec doubled_grid(const ConvexBody& omega, const GridSpec& grid)
{
    const Box b = doubled_box(omega);
    std::vector<int> pts;
    for (int i = 0; i < grid.dim(); ++i)
        pts.push_back(std::max(1, static_cast<int>(std::lround((b.hi[i] - b.lo[i]) / grid.spacing(i)))));
    return GridSpec(b.lo, b.hi, pts);
}

struct HsCheck {
    double frobenius = 0.0;
    double integral = 0.0;
    double rel_err = 0.0;
};

/// Both sides of ||H||_{S^2} = ||fhat sqrt(omega)||_{L^2}. The discrete side is summed
/// directly, so grids beyond the matrix size limit are fine.
inline HsCheck hs_identity_check(const ConvexBody& omega, const FrequencyFn& fhat, const GridSpec& grid)
{
    std::vector<Vec> nodes;
    Vec x;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        grid.node(k, x);
        if (membership(omega, x))
            nodes.push_back(x);
    }
    const double w = grid.cell_volume();
    const auto partial = map_chunks<double>(nodes.size(), 16, [&](std::size_t begin, std::size_t end) {
        CompensatedSum s;
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = 0; j < nodes.size(); ++j)
                s += std::norm(fhat(Vec(nodes[i] + nodes[j])));
        return s.value();
    });
    CompensatedSum total;
    for (double v : partial)
        total += v;

    const OmegaEvaluator om(omega);
    const double sq = quad_integral([&](const Vec& y) { return std::norm(fhat(y)) * om(y); }, doubled_grid(omega, grid));
    HsCheck out;
    out.frobenius = w * std::sqrt(total.value());
    out.integral = std::sqrt(sq);
    out.rel_err = out.integral > 0.0 ? std::abs(out.frobenius - out.integral) / out.integral : std::abs(out.frobenius);
    return out;
}

struct RussoCheck {
    double lhs = 0.0;        // discrete Schatten norm
    double mixed = 0.0;      // discrete ||K||_{p',p}
    double continuum = 0.0;  // ||fhat omega^{1/p}||_{L^{p'}}
    bool holds = false;      // lhs <= mixed (1 + 1e-9)
    bool continuum_holds = false;
};

/// Mixed norm with inner exponent p' over x (first index) and outer p over y, weights h^n.
/// Here the kernel is symmetric, so K and its adjoint have the same mixed norm.
inline double discrete_mixed_norm(const HankelMatrix& h, double p)
{
    const double q = conjugate_exponent(p);
    const auto& a = h.matrix();
    const double w = h.weight();
    CompensatedSum outer;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        CompensatedSum inner;
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            inner += std::pow(std::abs(a(i, j)) / w, q) * w;
        outer += std::pow(inner.value(), p / q) * w;
    }
    return std::pow(outer.value(), 1.0 / p);
}

inline RussoCheck russo_bound_check(const ConvexBody& omega, const FrequencyFn& fhat, const GridSpec& grid, double p)
{
    require(p > 2.0, ErrorCode::out_of_range, "the mixed-norm bound needs p > 2");
    const HankelMatrix h(omega, grid, fhat);
    RussoCheck out;
    out.lhs = schatten_norm(h.singular_values(), p);
    out.mixed = discrete_mixed_norm(h, p);
    const double q = conjugate_exponent(p);
    const OmegaEvaluator om(omega);
    const double integral = quad_integral(
        [&](const Vec& y) {
            const double f = std::abs(fhat(y));
            return f == 0.0 ? 0.0 : std::pow(f, q) * std::pow(om(y), q / p);
        },
        doubled_grid(omega, grid));
    out.continuum = std::pow(integral, 1.0 / q);
    out.holds = out.lhs <= out.mixed * (1.0 + 1e-9);
    out.continuum_holds = out.lhs <= out.continuum * (1.0 + 1e-9);
    return out;
}

/// A symbol whose frequency data vanishes outside a ball.
struct SupportedSymbol {
    FrequencyFn fn;
    Ball support;
};

inline SupportedSymbol supported(const BumpSymbol& b) { return {b, b.support()}; }

/// One to three modulated bumps inside the disc of radius 2, random amplitudes and phases.
inline FrequencyFn random_symbol(std::uint64_t seed)
{
    SampleStream rng(seed, 0);
    const int terms = 1 + static_cast<int>(rng.next_u64() % 3);
    std::vector<std::pair<BumpSymbol, cplx>> parts;
    std::vector<Vec> freqs;
    for (int t = 0; t < terms; ++t) {
        const double radius = rng.uniform(0.2, 0.9);
        const double rho = rng.uniform(0.0, 2.0 - radius);
        const double angle = rng.uniform(0.0, 2 * pi);
        parts.push_back({BumpSymbol{make_vec({rho * std::cos(angle), rho * std::sin(angle)}), radius},
                         std::polar(rng.uniform(0.2, 1.0), rng.uniform(0.0, 2 * pi))});
        freqs.push_back(make_vec({rng.normal(), rng.normal()}));
    }
    return [parts, freqs](const Vec& x) {
        cplx v{};
        for (std::size_t k = 0; k < parts.size(); ++k)
            v += parts[k].second * parts[k].first(x) * std::polar(1.0, 2 * pi * freqs[k].dot(x));
        return v;
    };
}

/// z in D = omega cap (supp - omega), i.e. some w in omega has z + w in the open support.
inline bool in_interaction_region(const ConvexBody& omega, const Ball& support, const Vec& z)
{
    return membership(omega, z) && distance_to_body(omega, Vec(support.center - z)) < support.radius;
}

/// Counts samples of D_i (rejection from a box around it) that also lie in D_j.
inline std::size_t interaction_overlap(const ConvexBody& omega, const Ball& si, const Ball& sj, std::size_t samples, std::uint64_t seed)
{
    const Box ob = bounding_box(omega);
    // D_i lies in omega and in (c_i - omega) + B(0, R_i)
    const Vec reach = Vec::Constant(omega.dim(), si.radius);
    const Box box{ob.lo.cwiseMax(si.center - ob.hi - reach), ob.hi.cwiseMin(si.center - ob.lo + reach)};
    if ((box.hi - box.lo).minCoeff() <= 0.0)
        return 0;
    SampleStream rng(seed, 0);
    std::size_t accepted = 0, common = 0, tries = 0;
    const std::size_t max_tries = samples * 10000;
    Vec z(omega.dim());
    while (accepted < samples && tries < max_tries) {
        ++tries;
        for (int k = 0; k < z.size(); ++k)
            z[k] = rng.uniform(box.lo[k], box.hi[k]);
        if (!in_interaction_region(omega, si, z))
            continue;
        ++accepted;
        if (in_interaction_region(omega, sj, z))
            ++common;
    }
    return common;
}

struct OrthogonalSumCheck {
    bool matches = false;
    std::size_t compared = 0;   // singular values above the floor
    double max_rel_diff = 0.0;
};

/// Singular values of H_{sum phi_i} against the union of those of H_{phi_i}.
inline OrthogonalSumCheck orthogonal_sum_check(const ConvexBody& omega, const std::vector<SupportedSymbol>& symbols,
                                              const GridSpec& grid, std::uint64_t seed = 1, std::size_t samples = 10000)
{
    require(!symbols.empty(), ErrorCode::precondition, "no symbols");
    for (std::size_t i = 0; i < symbols.size(); ++i)
        for (std::size_t j = 0; j < symbols.size(); ++j)
            if (i != j)
                require(interaction_overlap(omega, symbols[i].support, symbols[j].support, samples, mix64(seed + 7919 * i + j)) == 0,
                        ErrorCode::precondition, "interaction regions of two symbols overlap");

    const FrequencyFn sum = [&](const Vec& x) {
        cplx v{};
        for (const auto& s : symbols)
            v += s.fn(x);
        return v;
    };
    const auto whole = HankelMatrix(omega, grid, sum).singular_values();
    std::vector<double> parts;
    for (const auto& s : symbols) {
        const auto sv = HankelMatrix(omega, grid, s.fn).singular_values();
        parts.insert(parts.end(), sv.begin(), sv.end());
    }
    std::sort(parts.begin(), parts.end(), std::greater<>());
    const double top = std::max(whole.empty() ? 0.0 : whole.front(), parts.empty() ? 0.0 : parts.front());
    const double floor = 1e-12 * top;
    const auto above = [&](const std::vector<double>& v) {
        return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](double s) { return s > floor; }));
    };

    OrthogonalSumCheck out;
    const std::size_t nw = above(whole), np = above(parts);
    out.compared = std::min(nw, np);
    for (std::size_t k = 0; k < out.compared; ++k)
        out.max_rel_diff = std::max(out.max_rel_diff, std::abs(whole[k] - parts[k]) / parts[k]);
    out.matches = nw == np && out.max_rel_diff <= 1e-6;
    return out;
}

struct SymbolBoundCheck {
    double sigma_max = 0.0;
    double sup = 0.0;
    bool holds = false;
};

/// sigma_max(A) <= 1.05 sup|phi|, with sup|phi| supplied from spatial samples.
inline SymbolBoundCheck symbol_bound_check(const ConvexBody& omega, double sup_phi, const FrequencyFn& fhat, const GridSpec& grid)
{
    const HankelMatrix h(omega, grid, fhat);
    SymbolBoundCheck out;
    out.sigma_max = h.singular_values().empty() ? 0.0 : h.singular_values().front();
    out.sup = sup_phi;
    out.holds = out.sigma_max <= 1.05 * sup_phi + 1e-300;
    return out;
}

// singular-value dump: uint64 count then float64 values, little-endian

inline void write_singular_values(const std::string& path, const std::vector<double>& sv)
{
    static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::io, "cannot open " + path);
    const std::uint64_t n = sv.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(sv.data()), static_cast<std::streamsize>(sv.size() * sizeof(double)));
    require(static_cast<bool>(out), ErrorCode::io, "write failed for " + path);
}

inline std::vector<double> read_singular_values(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open " + path);
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    require(static_cast<bool>(in) && n < (std::uint64_t{1} << 32), ErrorCode::parse, "bad singular-value header");
    std::vector<double> sv(n);
    in.read(reinterpret_cast<char*>(sv.data()), static_cast<std::streamsize>(n * sizeof(double)));
    require(static_cast<bool>(in), ErrorCode::parse, "truncated singular-value file");
    return sv;
}

} // namespace pwlab

#endif // PWLAB_HANKEL_HPP

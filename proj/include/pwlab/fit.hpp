#ifndef PWLAB_FIT_HPP
#define PWLAB_FIT_HPP

#include <cmath>
#include <vector>

#include "core.hpp"

namespace pwlab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // root-mean-square of y - (slope x + intercept)
    std::size_t points = 0;
};

/// Unweighted least squares y ~ slope*x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size(), ErrorCode::dimension_mismatch, "fit inputs differ in length");
    require(x.size() >= 2, ErrorCode::precondition, "need at least two points to fit a line");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorCode::degenerate, "abscissae are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    f.points = x.size();
    return f;
}

/// Slope of log y against log x; all inputs must be positive.
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::precondition, "log-log fit needs positive data");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return fit_line(lx, ly);
}

/// count values geometrically spaced from lo to hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, int count)
{
    require(lo > 0.0 && hi > lo && count >= 2, ErrorCode::precondition, "geometric grid needs 0 < lo < hi and count >= 2");
    std::vector<double> out;
    const double q = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i)
        out.push_back(i == count - 1 ? hi : lo * std::exp(q * i));
    return out;
}

} // namespace pwlab

#endif // PWLAB_FIT_HPP

#ifndef PWLAB_CORE_HPP
#define PWLAB_CORE_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pwlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
    dimension_mismatch,
    unbounded,
    degenerate,
    not_interior,
    not_a_vertex,
    out_of_range,
    singular,
    precondition,
    budget_exceeded,
    unsupported,
    parse,
    io,
    non_finite,
};

inline const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::unbounded: return "unbounded";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::not_interior: return "not_interior";
    case ErrorCode::not_a_vertex: return "not_a_vertex";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::singular: return "singular";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::non_finite: return "non_finite";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what)
{
    if (!condition)
        throw Error(code, what);
}

/// Fixed absolute tolerances shared by the geometry kernels.
namespace tol {
inline constexpr double dedup = 1e-9;     // vertex identity
inline constexpr double active = 1e-9;    // facet activity / feasibility
inline constexpr double affine = 1e-10;   // affine-independence determinants
inline constexpr double certificate = 1e-10;
} // namespace tol

inline constexpr double pi = std::numbers::pi;

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n)
{
    return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

inline Vec make_vec(std::initializer_list<double> values)
{
    Vec v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values)
        v[i++] = x;
    return v;
}

inline Vec to_vec(std::span<const double> values)
{
    Vec v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = values[i];
    return v;
}

inline std::vector<double> to_std(const Vec& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

/// Neumaier compensated accumulator. Summation order is the caller's.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace pwlab

#endif // PWLAB_CORE_HPP

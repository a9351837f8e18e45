#ifndef PWLAB_REPORT_HPP
#define PWLAB_REPORT_HPP

#include <pwlab/hardy.hpp>
#include <pwlab/io.hpp>
#include <pwlab/nehari.hpp>
#include <pwlab/simplicial.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace pwlab {

// NaN has no JSON spelling; it becomes null
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v)
        a.push_back(number(x));
    return a;
}

inline json to_json(const std::vector<Vec>& pts)
{
    json a = json::array();
    for (const auto& p : pts)
        a.push_back(to_json(p));
    return a;
}

inline json to_json(const Mat& m)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        a.push_back(to_json(Vec(m.row(i).transpose())));
    return a;
}

inline json to_json(const LineFit& f)
{
    return {{"slope", number(f.slope)}, {"intercept", number(f.intercept)}, {"residual", number(f.residual)}, {"points", f.points}};
}

inline json to_json(const GridSpec& g)
{
    return {{"lower", to_json(g.lower)}, {"upper", to_json(g.upper)}, {"points", g.points}};
}

inline json to_json(const Calibration& c)
{
    return {{"eps0", c.eps0},
            {"disc_threshold", c.disc_threshold},
            {"C", c.c},
            {"C1", c.c1},
            {"C2", c.c2},
            {"safety", c.safety},
            {"seed", c.seed},
            {"samples", c.samples},
            {"bisection_steps", c.bisection_steps}};
}

inline Calibration calibration_from_json(const json& j)
{
    require(j.is_object(), ErrorCode::parse, "calibration block must be an object");
    Calibration c;
    try {
        c.eps0 = j.at("eps0").get<double>();
        c.disc_threshold = j.at("disc_threshold").get<double>();
        c.c = j.at("C").get<double>();
        c.c1 = j.at("C1").get<double>();
        c.c2 = j.at("C2").get<double>();
        c.safety = j.value("safety", c.safety);
        c.seed = j.value("seed", c.seed);
        c.samples = j.value("samples", c.samples);
        c.bisection_steps = j.value("bisection_steps", c.bisection_steps);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("calibration block: ") + e.what());
    }
    require(c.c > 0 && c.c1 > 0 && c.c2 > 0 && c.eps0 > 0, ErrorCode::parse, "calibration constants must be positive");
    return c;
}

inline json to_json(const SublevelEstimate& e)
{
    json rows = json::array();
    for (std::size_t i = 0; i < e.t_values.size(); ++i)
        rows.push_back({{"t", e.t_values[i]}, {"measure", e.measures[i]}, {"stderr", e.stderrs[i]}});
    return {{"exponent", number(e.fitted_exponent)}, {"residual", number(e.fit_residual)}, {"samples", e.samples}, {"seed", e.seed}, {"rows", rows}};
}

inline json to_json(const NehariRow& r)
{
    return {{"eps", r.eps},
            {"N", r.n},
            {"r", r.r},
            {"min_distance", r.min_distance},
            {"numerator", r.numerator},
            {"psi_l1", r.psi_l1},
            {"psi_stderr", r.psi_stderr},
            {"psi_tail", r.psi_tail},
            {"proxy", r.proxy},
            {"ratio", r.ratio},
            {"a_max", r.a_max},
            {"a_bound", r.a_bound},
            {"negation_bound", r.negation_bound},
            {"checks_ok", r.checks_ok}};
}

inline json to_json(const SweepReport& s)
{
    json rows = json::array();
    for (const auto& r : s.rows)
        rows.push_back(to_json(r));
    return {{"p", s.p},
            {"slope", number(s.fit.slope)},
            {"fit", to_json(s.fit)},
            {"a_max", s.a_max},
            {"orthogonal_sum_ok", s.orthogonal_sum_ok},
            {"orthogonal_sum_max_rel_diff", s.orthogonal_sum_max_rel_diff},
            {"rows", rows}};
}

inline json to_json(const HardyReport& r)
{
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"t", row.scale}, {"ratio", row.ratio}});
    return {{"fit", to_json(r.fit)}, {"max_over_min", r.max_over_min}, {"rows", rows}};
}

inline json to_json(const IntegrabilityRow& r)
{
    return {{"d", r.d},
            {"method", r.method},
            {"corner_slope", number(r.corner_slope)},
            {"corner_max_over_min", number(r.corner_max_over_min)},
            {"integrals", to_json(r.integrals)},
            {"last_change", number(r.last_change)},
            {"verdict", to_string(r.verdict)}};
}

inline json to_json(const SimplicialApprox& a, int dim)
{
    const auto& q = a.perturbation.points;
    const Hull hull = convex_hull(q, dim);
    json facets = json::array();
    for (std::size_t f = 0; f < hull.facets.size(); ++f)
        facets.push_back({{"normal", to_json(hull.facets[f].normal)}, {"offset", hull.facets[f].offset}, {"vertices", hull.incidence[f]}});
    json certs = json::array();
    for (const auto& c : a.certificates)
        certs.push_back({{"target", c.target_index}, {"rho", to_json(c.rho)}, {"residual", c.residual}});
    return {{"eps", a.eps},
            {"vertices_P", to_json(a.vertices)},
            {"vertices_Q", to_json(q)},
            {"anchors", to_json(a.perturbation.anchors)},
            {"lambda", to_json(a.perturbation.lambda)},
            {"mu", to_json(a.perturbation.mu)},
            {"jitter_retries", a.perturbation.retries},
            {"facets", facets},
            {"certificates", certs},
            {"containment_margin", a.containment_margin},
            {"max_distance", a.max_distance},
            {"max_reconstruction_error", a.max_reconstruction_error},
            {"checks", {{"contains_P", a.contains_p}, {"within_eps", a.within_eps}, {"simplicial", a.simplicial}}}};
}

// ---------------------------------------------------------------------------
// CSV mirrors

inline std::string csv_number(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string csv(const SweepReport& s)
{
    std::string out = "eps,N,r,numerator,psi_l1,psi_stderr,proxy,ratio,a_max,a_bound,negation_bound,checks_ok\n";
    for (const auto& r : s.rows)
        out += csv_number(r.eps) + "," + std::to_string(r.n) + "," + csv_number(r.r) + "," + csv_number(r.numerator) + "," +
               csv_number(r.psi_l1) + "," + csv_number(r.psi_stderr) + "," + csv_number(r.proxy) + "," + csv_number(r.ratio) + "," +
               csv_number(r.a_max) + "," + csv_number(r.a_bound) + "," + csv_number(r.negation_bound) + "," + (r.checks_ok ? "1" : "0") + "\n";
    return out;
}

inline std::string csv(const HardyReport& r)
{
    std::string out = "t,ratio\n";
    for (const auto& row : r.rows)
        out += csv_number(row.scale) + "," + csv_number(row.ratio) + "\n";
    return out;
}

} // namespace pwlab

#endif // PWLAB_REPORT_HPP

#ifndef PWLAB_CLI_HPP
#define PWLAB_CLI_HPP

#include <pwlab/report.hpp>
#include <pwlab/verify.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace pwlab {

/// Bad flags, unknown bodies, unreadable or malformed input files.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int assertion = 1;
inline constexpr int usage = 2;
} // namespace exit_code

inline const std::vector<std::string>& builtin_body_names()
{
    static const std::vector<std::string> names{"ball2", "ball3", "square", "cube", "triangle", "pyramid(alpha,beta[,n])", "halfline-model"};
    return names;
}

/// Builtins, or a path to a polytope JSON file.
inline ConvexBody parse_body(const std::string& spec)
{
    const auto box01 = [](int n) {
        std::vector<Halfspace> hs;
        for (int i = 0; i < n; ++i) {
            Vec a = Vec::Zero(n);
            a[i] = 1.0;
            hs.push_back({a, 1.0});
            hs.push_back({-a, 0.0});
        }
        return ConvexBody::hpolytope(n, hs);
    };
    if (spec == "ball2")
        return ConvexBody::ball(Vec::Zero(2), 1.0);
    if (spec == "ball3")
        return ConvexBody::ball(Vec::Zero(3), 1.0);
    if (spec == "square")
        return box01(2);
    if (spec == "cube")
        return box01(3);
    if (spec == "triangle")
        return ConvexBody::vpolytope({make_vec({0, 0}), make_vec({1, 0}), make_vec({0, 1})});
    // the truncated half-line [0, 1]; its omega is the tent x -> (1 - |x - 1|)_+
    if (spec == "halfline-model")
        return box01(1);
    static const std::regex pyramid(R"(pyramid\(\s*([^,\s]+)\s*,\s*([^,\s]+)\s*(?:,\s*([23])\s*)?\))");
    std::smatch m;
    if (std::regex_match(spec, m, pyramid)) {
        try {
            const double a = std::stod(m[1]), b = std::stod(m[2]);
            const int n = m[3].matched ? std::stoi(m[3]) : 2;
            return Pyramid{a, b, n}.body();
        } catch (const std::logic_error&) {
            throw UsageError("bad pyramid parameters in " + spec);
        }
    }
    if (!std::filesystem::exists(spec))
        throw UsageError("unknown body '" + spec + "' (not a builtin and no such file)");
    try {
        return polytope_from_json(read_json_file(spec));
    } catch (const Error& e) {
        throw UsageError("malformed body file " + spec + ": " + e.what());
    }
}

namespace cli_detail {

inline void emit(const std::optional<std::string>& path, const std::string& text)
{
    if (path)
        write_text_file(*path, text);
}

inline std::string fixed6(double v)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

inline json args_json(const std::vector<std::string>& args)
{
    json a = json::array();
    for (const auto& s : args)
        a.push_back(s);
    return a;
}

} // namespace cli_detail

/// Parses argv, dispatches to a subcommand and returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    using cli_detail::emit;
    using cli_detail::fixed6;

    CLI::App app{"Paley-Wiener Hankel and Hardy numerical laboratory", "pwlab"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::vector<std::string> raw(argv + 1, argv + argc);

    // shared option storage; each subcommand binds what it needs
    std::uint64_t seed = 1;
    std::string body_spec = "square";
    std::optional<std::string> out_path, csv_path;
    int exit_status = exit_code::ok;

    const auto config = [&](const std::string& command, json params) {
        return json{{"command", command}, {"argv", cli_detail::args_json(raw)}, {"seed", seed}, {"params", std::move(params)}};
    };

    // omega
    auto* omega_cmd = app.add_subcommand("omega", "evaluate m(B cap (x - B)) at a point");
    std::vector<double> point;
    std::size_t mc_samples = 0;
    omega_cmd->add_option("--body", body_spec, "builtin name or polytope JSON file")->required();
    omega_cmd->add_option("--point", point, "comma separated coordinates")->required()->delimiter(',');
    omega_cmd->add_option("--mc", mc_samples, "use Monte Carlo with this many samples");
    omega_cmd->add_option("--seed", seed);
    omega_cmd->add_option("--out", out_path, "JSON report");

    // sublevel
    auto* sub_cmd = app.add_subcommand("sublevel", "fit the exponent of m({omega < t})");
    double t_min = 1e-4, t_max = 1e-2;
    int t_count = 5;
    std::size_t sub_samples = 1000000;
    sub_cmd->add_option("--body", body_spec)->required();
    sub_cmd->add_option("--tmin", t_min);
    sub_cmd->add_option("--tmax", t_max);
    sub_cmd->add_option("--count", t_count);
    sub_cmd->add_option("--samples", sub_samples);
    sub_cmd->add_option("--seed", seed);
    sub_cmd->add_option("--out", out_path);
    sub_cmd->add_option("--csv", csv_path);

    // calibrate
    auto* cal_cmd = app.add_subcommand("calibrate", "calibrate the disc constants C, C1, C2");
    double eps0 = 0.5;
    std::size_t cal_samples = 100000;
    std::uint64_t cal_seed = 20240611;
    cal_cmd->add_option("--eps0", eps0);
    cal_cmd->add_option("--samples", cal_samples);
    cal_cmd->add_option("--seed", cal_seed);
    cal_cmd->add_option("--out", out_path);

    // nehari-sweep
    auto* neh_cmd = app.add_subcommand("nehari-sweep", "boundary bump sweep on the disc and log-log slope");
    NehariConfig ncfg;
    std::optional<std::string> cal_file;
    int orth_grid = 50;
    neh_cmd->add_option("--p", ncfg.p)->required();
    neh_cmd->add_option("--eps", ncfg.epsilons)->delimiter(',');
    neh_cmd->add_option("--samples", ncfg.mc_samples, "Monte Carlo samples for ||psi||_1");
    neh_cmd->add_option("--angular", ncfg.angular_nodes);
    neh_cmd->add_option("--orthogonal-grid", orth_grid);
    neh_cmd->add_option("--calibration", cal_file, "JSON file with a calibration block");
    neh_cmd->add_option("--seed", seed);
    neh_cmd->add_option("--out", out_path);
    neh_cmd->add_option("--csv", csv_path);

    // hardy
    auto* hardy_cmd = app.add_subcommand("hardy", "Hardy-type ratios");
    std::vector<double> ds{1.0};
    std::string family = "corner_bumps";
    std::vector<double> ts;
    int tent_n = 0;
    std::size_t trials = 1000;
    hardy_cmd->add_option("--body", body_spec);
    hardy_cmd->add_option("--d", ds)->delimiter(',');
    hardy_cmd->add_option("--family", family)->check(CLI::IsMember({"tent_product", "halfline_product", "corner_bumps", "integrability"}));
    hardy_cmd->add_option("--t", ts, "corner family parameters")->delimiter(',');
    hardy_cmd->add_option("--n", tent_n, "tent dimension (default: body dimension)");
    hardy_cmd->add_option("--trials", trials, "random half-line trials");
    hardy_cmd->add_option("--seed", seed);
    hardy_cmd->add_option("--out", out_path);
    hardy_cmd->add_option("--csv", csv_path);

    // simplicial
    auto* simp_cmd = app.add_subcommand("simplicial", "nested simplicial approximations of a polytope");
    std::string poly_spec;
    std::vector<double> eps_list;
    bool recenter = false;
    simp_cmd->add_option("--poly", poly_spec, "builtin name or polytope JSON file")->required();
    simp_cmd->add_option("--eps", eps_list)->required()->delimiter(',');
    simp_cmd->add_flag("--recenter", recenter, "translate so the vertex centroid is the origin");
    simp_cmd->add_option("--seed", seed);
    simp_cmd->add_option("--out", out_path);

    // verify
    auto* ver_cmd = app.add_subcommand("verify", "run property suites");
    std::string suite = "all";
    ver_cmd->add_option("--suite", suite)->check(CLI::IsMember(verify_suite_names()));
    ver_cmd->add_option("--seed", seed);
    ver_cmd->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for options\n";
        return exit_code::usage;
    }

    try {
        if (omega_cmd->parsed()) {
            const ConvexBody body = parse_body(body_spec);
            if (static_cast<int>(point.size()) != body.dim())
                throw UsageError("--point has " + std::to_string(point.size()) + " coordinates, body has dimension " + std::to_string(body.dim()));
            const Vec x = to_vec(point);
            json res;
            if (mc_samples > 0) {
                const auto est = omega_mc(body, x, mc_samples, seed);
                out << fixed6(est.value) << " +- " << fixed6(est.stderr_) << "\n";
                res = {{"mode", "monte_carlo"}, {"value", est.value}, {"stderr", est.stderr_}};
            } else {
                const OmegaEvaluator w(body);
                const double v = w(x);
                out << fixed6(v) << "\n";
                res = {{"mode", to_string(w.mode())}, {"value", v}};
            }
            emit(out_path, dump({{"config", config("omega", {{"body", body_spec}, {"point", point}, {"mc_samples", mc_samples}})}, {"result", res}}));
        } else if (sub_cmd->parsed()) {
            const ConvexBody body = parse_body(body_spec);
            const auto est = sublevel_fit(body, t_min, t_max, t_count, sub_samples, seed);
            out << "exponent " << est.fitted_exponent << " residual " << est.fit_residual << "\n";
            emit(out_path, dump({{"config", config("sublevel", {{"body", body_spec}, {"tmin", t_min}, {"tmax", t_max}, {"count", t_count}, {"samples", sub_samples}})},
                                 {"result", to_json(est)}}));
            emit(csv_path, sublevel_csv(est));
        } else if (cal_cmd->parsed()) {
            seed = cal_seed;
            const auto cal = calibrate(eps0, cal_samples, cal_seed);
            const std::string text = dump({{"config", config("calibrate", {{"eps0", eps0}, {"samples", cal_samples}})}, {"calibration", to_json(cal)}});
            out << text;
            emit(out_path, text);
        } else if (neh_cmd->parsed()) {
            if (cal_file) {
                json j;
                try {
                    j = read_json_file(*cal_file);
                } catch (const Error& e) {
                    throw UsageError(e.what());
                }
                try {
                    ncfg.cal = calibration_from_json(j.contains("calibration") ? j["calibration"] : j);
                } catch (const Error& e) {
                    throw UsageError(std::string("malformed calibration file: ") + e.what());
                }
            } else {
                ncfg.cal = calibrate();
            }
            ncfg.seed = seed;
            const auto rep = sweep_and_fit(ncfg, orth_grid);
            bool rows_ok = rep.orthogonal_sum_ok;
            for (const auto& r : rep.rows)
                rows_ok = rows_ok && r.checks_ok;
            out << "p " << rep.p << " slope " << rep.fit.slope << " over " << rep.rows.size() << " rows"
                << (rows_ok ? "" : " (row checks FAILED)") << "\n";
            json params{{"p", ncfg.p},
                        {"eps", ncfg.epsilons},
                        {"mc_samples", ncfg.mc_samples},
                        {"overlap_samples", ncfg.overlap_samples},
                        {"angular_nodes", ncfg.angular_nodes},
                        {"orthogonal_grid", to_json(GridSpec::cube(2, -1, 1, orth_grid))},
                        {"radial_table", {{"step", default_radial_transform().step()}, {"extent", default_radial_transform().extent()}}}};
            emit(out_path, dump({{"config", config("nehari-sweep", params)}, {"calibration", to_json(ncfg.cal)}, {"result", to_json(rep)}}));
            emit(csv_path, csv(rep));
            if (!rows_ok)
                exit_status = exit_code::assertion;
        } else if (hardy_cmd->parsed()) {
            const ConvexBody body = parse_body(body_spec);
            if (ts.empty())
                ts = geometric_grid(1e-3, 1e-1, 7);
            json params{{"body", body_spec}, {"family", family}, {"d", ds}};
            json res;
            std::string table;
            if (family == "tent_product") {
                const int n = tent_n > 0 ? tent_n : body.dim();
                params["n"] = n;
                res = json::array();
                for (double d : ds) {
                    const auto t = tent_ratio(n, d);
                    res.push_back({{"d", d}, {"integral", t.integral}, {"l1", t.l1}, {"ratio", t.ratio}});
                    out << "d " << d << " ratio " << t.ratio << "\n";
                }
            } else if (family == "halfline_product") {
                params["trials"] = trials;
                double worst = 0;
                std::size_t above_two = 0;
                table = "index,ratio\n";
                for (std::size_t k = 0; k < trials; ++k) {
                    const auto r = random_halfline_trial(seed, k);
                    worst = std::max(worst, r.ratio);
                    above_two += r.ratio >= 2.0;
                    table += std::to_string(k) + "," + csv_number(r.ratio) + "\n";
                }
                const bool ok = worst <= pi * 1.02;
                res = {{"max_ratio", worst}, {"trials_at_least_2", above_two}, {"bound", pi * 1.02}, {"bound_holds", ok}};
                out << "max ratio " << worst << " over " << trials << " trials, " << above_two << " at least 2\n";
                if (!ok)
                    exit_status = exit_code::assertion;
            } else if (family == "corner_bumps") {
                params["t"] = ts;
                params["volume_normalized"] = true;
                res = json::array();
                const auto unit = unit_volume(body);
                for (double d : ds) {
                    const auto rep = corner_family(unit, d, ts);
                    res.push_back({{"d", d}, {"report", to_json(rep)}});
                    out << "d " << d << " slope " << rep.fit.slope << " max/min " << rep.max_over_min << "\n";
                    if (table.empty())
                        table = "d,t,ratio\n";
                    for (const auto& row : rep.rows)
                        table += csv_number(d) + "," + csv_number(row.scale) + "," + csv_number(row.ratio) + "\n";
                }
            } else {
                params["t"] = ts;
                res = json::array();
                for (const auto& row : adjusted_integrability_report(body, ds, ts)) {
                    res.push_back(to_json(row));
                    out << "d " << row.d << " " << to_string(row.verdict) << " (" << row.method << ")\n";
                }
            }
            emit(out_path, dump({{"config", config("hardy", params)}, {"result", res}}));
            if (!table.empty())
                emit(csv_path, table);
        } else if (simp_cmd->parsed()) {
            ConvexBody body = parse_body(poly_spec);
            if (!body.is_polytope())
                throw UsageError("simplicial needs a polytope");
            Vec shift = Vec::Zero(body.dim());
            if (recenter) {
                auto verts = vertices_of(body);
                for (const auto& v : verts)
                    shift -= v / static_cast<double>(verts.size());
                for (auto& v : verts)
                    v += shift;
                body = ConvexBody::vpolytope(verts);
            }
            const auto seq = simplicial_sequence(body, eps_list, seed);
            json approx = json::array();
            bool ok = true;
            for (const auto& a : seq.approximations) {
                approx.push_back(to_json(a, body.dim()));
                ok = ok && a.contains_p && a.within_eps && a.simplicial && a.max_reconstruction_error <= 1e-8;
                out << "eps " << a.eps << " contains_P " << a.contains_p << " within_eps " << a.within_eps << " simplicial " << a.simplicial
                    << " margin " << a.containment_margin << "\n";
            }
            const auto dual = dual_pipeline_check(seq.approximations.back().perturbation.points, body.dim());
            ok = ok && dual.q_simplicial && dual.dual_simple;
            for (double m : seq.nesting_margins)
                ok = ok && m > 1e-10;
            out << "dual simple " << dual.dual_simple << ", lambda halvings " << seq.halvings << "\n";
            json params{{"poly", poly_spec}, {"eps", eps_list}, {"recenter", recenter}, {"shift", to_json(shift)}};
            emit(out_path, dump({{"config", config("simplicial", params)},
                                 {"result",
                                  {{"approximations", approx},
                                   {"nesting_margins", seq.nesting_margins},
                                   {"lambda_halvings", seq.halvings},
                                   {"dual", {{"q_simplicial", dual.q_simplicial}, {"dual_simple", dual.dual_simple}, {"facet_counts", dual.facet_counts}}}}}}));
            if (!ok)
                exit_status = exit_code::assertion;
        } else if (ver_cmd->parsed()) {
            const auto lines = run_verify_suite(suite, seed);
            json res = json::array();
            std::size_t failed = 0;
            for (const auto& l : lines) {
                out << (l.ok ? "PASS " : "FAIL ") << l.suite << "/" << l.name << "  " << l.detail << "\n";
                failed += !l.ok;
                res.push_back({{"suite", l.suite}, {"name", l.name}, {"ok", l.ok}, {"detail", l.detail}});
            }
            out << lines.size() - failed << "/" << lines.size() << " checks passed\n";
            emit(out_path, dump({{"config", config("verify", {{"suite", suite}})}, {"result", res}}));
            if (failed > 0)
                exit_status = exit_code::assertion;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::io || e.code() == ErrorCode::parse ? exit_code::usage : exit_code::assertion;
    }
    return exit_status;
}

} // namespace pwlab

#endif // PWLAB_CLI_HPP

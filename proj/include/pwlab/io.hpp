#ifndef PWLAB_IO_HPP
#define PWLAB_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geometry.hpp"

namespace pwlab {

using json = nlohmann::ordered_json;

inline json to_json(const Vec& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v[i]);
    return a;
}

inline Vec vec_from_json(const json& j, int dim)
{
    require(j.is_array(), ErrorCode::parse, "expected a numeric array");
    require(static_cast<int>(j.size()) == dim, ErrorCode::dimension_mismatch, "array length does not match dim");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) {
        require(j[static_cast<std::size_t>(i)].is_number(), ErrorCode::parse, "expected a number");
        v[i] = j[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

/// {"dim": n, "halfspaces": [{"normal": [...], "offset": b}]} or {"dim": n, "vertices": [[...]]}
inline json polytope_to_json(const ConvexBody& body)
{
    json j;
    j["dim"] = body.dim();
    if (const auto* h = body.as<HPolytope>()) {
        json hs = json::array();
        for (const auto& s : h->halfspaces)
            hs.push_back({{"normal", to_json(s.normal)}, {"offset", s.offset}});
        j["halfspaces"] = std::move(hs);
    } else if (const auto* v = body.as<VPolytope>()) {
        json vs = json::array();
        for (const auto& p : v->vertices)
            vs.push_back(to_json(p));
        j["vertices"] = std::move(vs);
    } else {
        throw Error(ErrorCode::unsupported, "only polytopes serialize to the polytope schema");
    }
    return j;
}

inline ConvexBody polytope_from_json(const json& j)
{
    require(j.is_object() && j.contains("dim") && j["dim"].is_number_integer(), ErrorCode::parse, "missing integer \"dim\"");
    const int dim = j["dim"].get<int>();
    require(dim >= 1, ErrorCode::parse, "dim must be positive");
    if (j.contains("halfspaces")) {
        require(j["halfspaces"].is_array(), ErrorCode::parse, "\"halfspaces\" must be an array");
        std::vector<Halfspace> hs;
        for (const auto& h : j["halfspaces"]) {
            require(h.contains("normal") && h.contains("offset") && h["offset"].is_number(), ErrorCode::parse, "halfspace needs normal and offset");
            hs.push_back({vec_from_json(h["normal"], dim), h["offset"].get<double>()});
        }
        return ConvexBody::hpolytope(dim, std::move(hs));
    }
    if (j.contains("vertices")) {
        require(j["vertices"].is_array(), ErrorCode::parse, "\"vertices\" must be an array");
        std::vector<Vec> vs;
        for (const auto& v : j["vertices"])
            vs.push_back(vec_from_json(v, dim));
        return ConvexBody::vpolytope(std::move(vs));
    }
    throw Error(ErrorCode::parse, "polytope needs \"halfspaces\" or \"vertices\"");
}

inline json parse_json_text(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, e.what());
    }
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::io, "cannot write " + path);
    out << text;
}

/// Doubles are written in shortest round-trip form, so reading back is exact.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace pwlab

#endif // PWLAB_IO_HPP

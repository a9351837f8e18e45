#ifndef PWLAB_GEOMETRY_HPP
#define PWLAB_GEOMETRY_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <variant>
#include <vector>

#include "core.hpp"
#include "random.hpp"

namespace pwlab {

/// The closed halfspace <normal, x> <= offset; bodies use its interior.
struct Halfspace {
    Vec normal;
    double offset = 0.0;
};

struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const { return (hi - lo).prod(); }
    Vec center() const { return 0.5 * (lo + hi); }
};

struct Ball {
    Vec center;
    double radius = 1.0;
};

struct HPolytope {
    int dim = 0;
    std::vector<Halfspace> halfspaces;
};

/// Vertex form. `facets` and `incidence` are the hull computed at construction
/// (dim <= 3); `vertices` keeps the caller's points, including non-extreme ones.
struct VPolytope {
    int dim = 0;
    std::vector<Vec> vertices;
    std::vector<Halfspace> facets;
    std::vector<std::vector<int>> incidence;
};

class ConvexBody;

struct Product {
    std::vector<ConvexBody> factors;
};

/// x -> matrix * x + shift applied to `base`.
struct AffineImage {
    std::shared_ptr<const ConvexBody> base;
    Mat matrix;
    Vec shift;
};

// ---------------------------------------------------------------------------
// small combinatorial / linear helpers

template <class F>
void for_each_combination(int m, int k, F&& fn)
{
    if (k < 0 || k > m)
        return;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        fn(static_cast<const std::vector<int>&>(idx));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i)
            --i;
        if (i < 0)
            return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

/// Solves the square system if it is well conditioned.
inline std::optional<Vec> solve_square(const Mat& a, const Vec& b, double rank_threshold = 1e-12)
{
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(rank_threshold);
    if (lu.rank() < a.rows())
        return std::nullopt;
    return Vec(lu.solve(b));
}

inline Halfspace normalized(const Halfspace& h)
{
    const double n = h.normal.norm();
    require(n > 0.0, ErrorCode::degenerate, "halfspace with zero normal");
    return {h.normal / n, h.offset / n};
}

/// Unit normals, duplicate planes removed (first occurrence kept).
inline std::vector<Halfspace> normalized_unique(const std::vector<Halfspace>& hs)
{
    std::vector<Halfspace> out;
    for (const auto& h : hs) {
        Halfspace u = normalized(h);
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Halfspace& o) {
            return (o.normal - u.normal).norm() <= tol::dedup && std::abs(o.offset - u.offset) <= tol::dedup;
        });
        if (!dup)
            out.push_back(std::move(u));
    }
    return out;
}

inline void push_unique(std::vector<Vec>& pts, const Vec& p, double tolerance = tol::dedup)
{
    for (const auto& q : pts)
        if ((q - p).norm() <= tolerance)
            return;
    pts.push_back(p);
}

// ---------------------------------------------------------------------------
// hull of a point set in dimension <= 3 (brute force over facet candidates)

struct Hull {
    std::vector<Halfspace> facets;            // unit normals, outward
    std::vector<std::vector<int>> incidence;  // point indices on each facet
    std::vector<int> extreme;                 // indices of extreme points
};

inline Vec facet_normal(const std::vector<Vec>& pts, const std::vector<int>& idx, int dim)
{
    if (dim == 1)
        return make_vec({1.0});
    if (dim == 2) {
        const Vec e = pts[static_cast<std::size_t>(idx[1])] - pts[static_cast<std::size_t>(idx[0])];
        return make_vec({-e[1], e[0]});
    }
    const Eigen::Vector3d a = pts[static_cast<std::size_t>(idx[1])] - pts[static_cast<std::size_t>(idx[0])];
    const Eigen::Vector3d b = pts[static_cast<std::size_t>(idx[2])] - pts[static_cast<std::size_t>(idx[0])];
    return Vec(a.cross(b));
}

inline Hull convex_hull(const std::vector<Vec>& pts, int dim)
{
    require(dim >= 1 && dim <= 3, ErrorCode::unsupported, "hull enumeration restricted to dim <= 3");
    require(static_cast<int>(pts.size()) >= dim + 1, ErrorCode::degenerate, "too few points for a full-dimensional hull");
    for (const auto& p : pts)
        require(p.size() == dim, ErrorCode::dimension_mismatch, "hull point dimension");

    double scale = 0.0;
    for (const auto& p : pts)
        scale = std::max(scale, p.cwiseAbs().maxCoeff());
    scale = std::max(scale, 1.0);

    Hull hull;
    const int m = static_cast<int>(pts.size());
    auto consider = [&](const Vec& raw_normal, const Vec& anchor) {
        const double len = raw_normal.norm();
        if (len <= 1e-12 * scale * scale)
            return;
        Vec n = raw_normal / len;
        double off = n.dot(anchor);
        bool all_below = true, all_above = true;
        for (const auto& p : pts) {
            const double s = n.dot(p) - off;
            if (s > tol::active)
                all_below = false;
            if (s < -tol::active)
                all_above = false;
        }
        if (!all_below && !all_above)
            return;
        if (!all_below) {
            n = -n;
            off = -off;
        }
        for (const auto& f : hull.facets)
            if ((f.normal - n).norm() <= tol::dedup && std::abs(f.offset - off) <= tol::dedup)
                return;
        std::vector<int> inc;
        for (int i = 0; i < m; ++i)
            if (std::abs(n.dot(pts[static_cast<std::size_t>(i)]) - off) <= tol::active)
                inc.push_back(i);
        if (static_cast<int>(inc.size()) < dim)
            return;
        hull.facets.push_back({n, off});
        hull.incidence.push_back(std::move(inc));
    };

    if (dim == 1) {
        consider(make_vec({1.0}), pts[0]);
        consider(make_vec({-1.0}), pts[0]);
        for (const auto& p : pts) {
            consider(make_vec({1.0}), p);
            consider(make_vec({-1.0}), p);
        }
    } else {
        for_each_combination(m, dim, [&](const std::vector<int>& idx) {
            consider(facet_normal(pts, idx, dim), pts[static_cast<std::size_t>(idx[0])]);
        });
    }
    require(static_cast<int>(hull.facets.size()) >= dim + 1, ErrorCode::degenerate, "point set has empty interior");

    // A point is extreme iff it is the unique solution of its incident facet planes.
    for (int i = 0; i < m; ++i) {
        std::vector<int> on;
        for (std::size_t f = 0; f < hull.incidence.size(); ++f)
            if (std::find(hull.incidence[f].begin(), hull.incidence[f].end(), i) != hull.incidence[f].end())
                on.push_back(static_cast<int>(f));
        if (static_cast<int>(on.size()) < dim)
            continue;
        Mat a(static_cast<Eigen::Index>(on.size()), dim);
        for (std::size_t r = 0; r < on.size(); ++r)
            a.row(static_cast<Eigen::Index>(r)) = hull.facets[static_cast<std::size_t>(on[r])].normal.transpose();
        Eigen::FullPivLU<Mat> lu(a);
        lu.setThreshold(1e-9);
        if (lu.rank() == dim) {
            bool dup = false;
            for (int e : hull.extreme)
                if ((pts[static_cast<std::size_t>(e)] - pts[static_cast<std::size_t>(i)]).norm() <= tol::dedup)
                    dup = true;
            if (!dup)
                hull.extreme.push_back(i);
        }
    }
    return hull;
}

// ---------------------------------------------------------------------------
// the tagged body

class ConvexBody {
public:
    using Rep = std::variant<Ball, HPolytope, VPolytope, Product, AffineImage>;

    static ConvexBody ball(Vec center, double radius)
    {
        require(radius > 0.0 && std::isfinite(radius), ErrorCode::precondition, "ball radius must be positive");
        require(center.size() >= 1, ErrorCode::dimension_mismatch, "ball center must be non-empty");
        const int dim = static_cast<int>(center.size());
        return ConvexBody(Ball{std::move(center), radius}, dim);
    }

    static ConvexBody hpolytope(int dim, std::vector<Halfspace> halfspaces)
    {
        require(dim >= 1, ErrorCode::dimension_mismatch, "dimension must be positive");
        require(!halfspaces.empty(), ErrorCode::unbounded, "no halfspaces");
        for (const auto& h : halfspaces) {
            require(h.normal.size() == dim, ErrorCode::dimension_mismatch, "halfspace normal length");
            require(h.normal.norm() > 0.0, ErrorCode::degenerate, "zero halfspace normal");
        }
        return ConvexBody(HPolytope{dim, std::move(halfspaces)}, dim);
    }

    static ConvexBody vpolytope(std::vector<Vec> vertices)
    {
        require(!vertices.empty(), ErrorCode::degenerate, "no vertices");
        const int dim = static_cast<int>(vertices.front().size());
        for (const auto& v : vertices)
            require(v.size() == dim, ErrorCode::dimension_mismatch, "vertex length");
        Hull hull = convex_hull(vertices, dim);
        return ConvexBody(VPolytope{dim, std::move(vertices), std::move(hull.facets), std::move(hull.incidence)}, dim);
    }

    static ConvexBody product(std::vector<ConvexBody> factors)
    {
        require(!factors.empty(), ErrorCode::degenerate, "empty product");
        int dim = 0;
        for (const auto& f : factors)
            dim += f.dim();
        return ConvexBody(Product{std::move(factors)}, dim);
    }

    static ConvexBody affine_image(ConvexBody base, Mat matrix, Vec shift)
    {
        const int dim = base.dim();
        require(matrix.rows() == dim && matrix.cols() == dim, ErrorCode::dimension_mismatch, "affine matrix shape");
        require(shift.size() == dim, ErrorCode::dimension_mismatch, "affine shift length");
        require(std::abs(matrix.determinant()) > 1e-14, ErrorCode::singular, "affine matrix must be invertible");
        return ConvexBody(AffineImage{std::make_shared<const ConvexBody>(std::move(base)), std::move(matrix), std::move(shift)}, dim);
    }

    int dim() const noexcept { return dim_; }
    const Rep& rep() const noexcept { return rep_; }

    template <class T>
    const T* as() const noexcept
    {
        return std::get_if<T>(&rep_);
    }

    bool is_polytope() const noexcept { return as<HPolytope>() || as<VPolytope>(); }

private:
    ConvexBody(Rep rep, int dim) : rep_(std::move(rep)), dim_(dim) {}

    Rep rep_;
    int dim_;
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// membership and boxes

/// Open-set membership: strict inequalities everywhere.
inline bool membership(const ConvexBody& body, const Vec& x)
{
    require(x.size() == body.dim(), ErrorCode::dimension_mismatch, "membership point length");
    return std::visit(overloaded{
                          [&](const Ball& b) { return (x - b.center).squaredNorm() < b.radius * b.radius; },
                          [&](const HPolytope& p) {
                              return std::all_of(p.halfspaces.begin(), p.halfspaces.end(),
                                                 [&](const Halfspace& h) { return h.normal.dot(x) < h.offset; });
                          },
                          [&](const VPolytope& p) {
                              return std::all_of(p.facets.begin(), p.facets.end(),
                                                 [&](const Halfspace& h) { return h.normal.dot(x) < h.offset; });
                          },
                          [&](const Product& p) {
                              Eigen::Index at = 0;
                              for (const auto& f : p.factors) {
                                  if (!membership(f, x.segment(at, f.dim())))
                                      return false;
                                  at += f.dim();
                              }
                              return true;
                          },
                          [&](const AffineImage& a) {
                              return membership(*a.base, Vec(a.matrix.partialPivLu().solve(x - a.shift)));
                          },
                      },
                      body.rep());
}

std::vector<Vec> vertex_enumerate(const HPolytope& p);

inline Box bounding_box(const ConvexBody& body);

inline Box box_of_points(const std::vector<Vec>& pts)
{
    Box b{pts.front(), pts.front()};
    for (const auto& p : pts) {
        b.lo = b.lo.cwiseMin(p);
        b.hi = b.hi.cwiseMax(p);
    }
    return b;
}

inline Box bounding_box(const ConvexBody& body)
{
    return std::visit(overloaded{
                          [](const Ball& b) {
                              return Box{b.center.array() - b.radius, b.center.array() + b.radius};
                          },
                          [](const HPolytope& p) { return box_of_points(vertex_enumerate(p)); },
                          [](const VPolytope& p) { return box_of_points(p.vertices); },
                          [&](const Product& p) {
                              Box out{Vec(body.dim()), Vec(body.dim())};
                              Eigen::Index at = 0;
                              for (const auto& f : p.factors) {
                                  const Box fb = bounding_box(f);
                                  out.lo.segment(at, f.dim()) = fb.lo;
                                  out.hi.segment(at, f.dim()) = fb.hi;
                                  at += f.dim();
                              }
                              return out;
                          },
                          [&](const AffineImage& a) {
                              const Box bb = bounding_box(*a.base);
                              const int n = body.dim();
                              std::vector<Vec> corners;
                              for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                                  Vec c(n);
                                  for (int i = 0; i < n; ++i)
                                      c[i] = (mask >> i) & 1u ? bb.hi[i] : bb.lo[i];
                                  corners.push_back(a.matrix * c + a.shift);
                              }
                              return box_of_points(corners);
                          },
                      },
                      body.rep());
}

// ---------------------------------------------------------------------------
// vertex enumeration

/// All vertices of {<a_i,x> <= b_i}; empty when the set has no vertex. Never throws
/// on degenerate input, so it can be used on intersections that may be empty.
inline std::vector<Vec> enumerate_vertices_raw(int dim, const std::vector<Halfspace>& hs)
{
    require(dim >= 1 && dim <= 3, ErrorCode::unsupported, "vertex enumeration restricted to dim <= 3");
    std::vector<Vec> out;
    const int m = static_cast<int>(hs.size());
    Mat a(dim, dim);
    Vec b(dim);
    for_each_combination(m, dim, [&](const std::vector<int>& idx) {
        for (int r = 0; r < dim; ++r) {
            a.row(r) = hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].normal.transpose();
            b[r] = hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].offset;
        }
        const auto v = solve_square(a, b);
        if (!v)
            return;
        for (const auto& h : hs)
            if (h.normal.dot(*v) > h.offset + tol::active)
                return;
        push_unique(out, *v);
    });
    return out;
}

/// Boundedness: the recession cone {A d <= 0} must be {0}.
inline bool is_bounded(const HPolytope& p)
{
    std::vector<Halfspace> cone;
    for (const auto& h : normalized_unique(p.halfspaces))
        cone.push_back({h.normal, 0.0});
    for (int i = 0; i < p.dim; ++i) {
        Vec e = Vec::Zero(p.dim);
        e[i] = 1.0;
        cone.push_back({e, 1.0});
        cone.push_back({-e, 1.0});
    }
    for (const auto& v : enumerate_vertices_raw(p.dim, cone))
        if (v.norm() > 1e-7)
            return false;
    return true;
}

/// Largest inscribed ball of an H-polytope.
struct InscribedBall {
    Vec center;
    double radius = 0.0;
};

/// Chebyshev ball by exhaustive search over the vertices of the (dim+1)-variable LP
/// max r s.t. <a_i,c> + r|a_i| <= b_i, r >= 0. Returns radius <= 0 on empty interior.
inline InscribedBall chebyshev_ball_raw(const HPolytope& p)
{
    const int n = p.dim;
    std::vector<Halfspace> rows;
    for (const auto& h : normalized_unique(p.halfspaces)) {
        Vec a(n + 1);
        a.head(n) = h.normal;
        a[n] = 1.0;
        rows.push_back({a, h.offset});
    }
    Vec neg_r = Vec::Zero(n + 1);
    neg_r[n] = -1.0;
    rows.push_back({neg_r, 0.0});

    InscribedBall best{Vec::Zero(n), -1.0};
    const int m = static_cast<int>(rows.size());
    Mat a(n + 1, n + 1);
    Vec b(n + 1);
    for_each_combination(m, n + 1, [&](const std::vector<int>& idx) {
        for (int r = 0; r <= n; ++r) {
            a.row(r) = rows[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].normal.transpose();
            b[r] = rows[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].offset;
        }
        const auto z = solve_square(a, b);
        if (!z)
            return;
        for (const auto& row : rows)
            if (row.normal.dot(*z) > row.offset + tol::active)
                return;
        if ((*z)[n] > best.radius + 1e-14)
            best = {z->head(n), (*z)[n]};
    });
    return best;
}

inline InscribedBall chebyshev_ball(const HPolytope& p)
{
    require(p.dim <= 3, ErrorCode::unsupported, "chebyshev ball restricted to dim <= 3");
    InscribedBall ball = chebyshev_ball_raw(p);
    require(ball.radius > 1e-12, ErrorCode::degenerate, "polytope has empty interior");
    return ball;
}

inline std::vector<Vec> vertex_enumerate(const HPolytope& p)
{
    require(p.dim >= 1 && p.dim <= 3, ErrorCode::unsupported, "vertex enumeration restricted to dim <= 3");
    const auto hs = normalized_unique(p.halfspaces);
    require(is_bounded(p), ErrorCode::unbounded, "polytope is unbounded");
    auto verts = enumerate_vertices_raw(p.dim, hs);
    require(static_cast<int>(verts.size()) >= p.dim + 1, ErrorCode::degenerate, "polytope has empty interior");
    require(chebyshev_ball_raw(p).radius > 1e-12, ErrorCode::degenerate, "polytope has empty interior");
    for (const auto& v : verts)
        require(v.allFinite(), ErrorCode::unbounded, "non-finite vertex");
    return verts;
}

inline InscribedBall chebyshev_ball(const ConvexBody& body)
{
    const auto* h = body.as<HPolytope>();
    require(h != nullptr, ErrorCode::unsupported, "chebyshev ball needs an H-polytope");
    return chebyshev_ball(*h);
}

// ---------------------------------------------------------------------------
// conversions and volume

inline HPolytope to_hpolytope(const ConvexBody& body)
{
    if (const auto* h = body.as<HPolytope>())
        return HPolytope{h->dim, normalized_unique(h->halfspaces)};
    if (const auto* v = body.as<VPolytope>())
        return HPolytope{v->dim, v->facets};
    throw Error(ErrorCode::unsupported, "body is not a polytope");
}

/// Extreme points of a polytope body.
inline std::vector<Vec> vertices_of(const ConvexBody& body)
{
    if (const auto* h = body.as<HPolytope>())
        return vertex_enumerate(*h);
    if (const auto* v = body.as<VPolytope>()) {
        const Hull hull = convex_hull(v->vertices, v->dim);
        std::vector<Vec> out;
        for (int i : hull.extreme)
            out.push_back(v->vertices[static_cast<std::size_t>(i)]);
        return out;
    }
    throw Error(ErrorCode::unsupported, "body is not a polytope");
}

/// Area of a convex polygon given its vertices in any order.
inline double polygon_area(const std::vector<Eigen::Vector2d>& pts)
{
    if (pts.size() < 3)
        return 0.0;
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& p : pts)
        c += p;
    c /= static_cast<double>(pts.size());
    std::vector<std::pair<double, Eigen::Vector2d>> ordered;
    for (const auto& p : pts)
        ordered.emplace_back(std::atan2(p[1] - c[1], p[0] - c[0]), p);
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    double twice = 0.0;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const auto& p = ordered[i].second;
        const auto& q = ordered[(i + 1) % ordered.size()].second;
        twice += p[0] * q[1] - p[1] * q[0];
    }
    return 0.5 * std::abs(twice);
}

/// Volume of {<a_i,x> <= b_i} given its (deduplicated) vertex list; 0 when degenerate.
inline double volume_from_vertices(int dim, const std::vector<Halfspace>& unit_hs, const std::vector<Vec>& verts)
{
    if (static_cast<int>(verts.size()) < dim + 1)
        return 0.0;
    if (dim == 1) {
        double lo = verts.front()[0], hi = lo;
        for (const auto& v : verts) {
            lo = std::min(lo, v[0]);
            hi = std::max(hi, v[0]);
        }
        return hi - lo;
    }
    if (dim == 2) {
        std::vector<Eigen::Vector2d> pts;
        for (const auto& v : verts)
            pts.emplace_back(v[0], v[1]);
        return polygon_area(pts);
    }
    Vec c = Vec::Zero(dim);
    for (const auto& v : verts)
        c += v;
    c /= static_cast<double>(verts.size());
    CompensatedSum vol;
    for (const auto& h : unit_hs) {
        std::vector<Vec> on;
        for (const auto& v : verts)
            if (std::abs(h.normal.dot(v) - h.offset) <= tol::active)
                on.push_back(v);
        if (on.size() < 3)
            continue;
        // orthonormal basis of the facet plane
        Eigen::Vector3d n = h.normal;
        Eigen::Vector3d u = std::abs(n[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
        u = (u - u.dot(n) * n).normalized();
        const Eigen::Vector3d w = n.cross(u);
        std::vector<Eigen::Vector2d> flat;
        for (const auto& v : on)
            flat.emplace_back(u.dot(Eigen::Vector3d(v)), w.dot(Eigen::Vector3d(v)));
        const double height = h.offset - h.normal.dot(c);
        vol += height * polygon_area(flat) / 3.0;
    }
    return vol.value();
}

inline double polytope_volume(const HPolytope& p)
{
    const auto hs = normalized_unique(p.halfspaces);
    return volume_from_vertices(p.dim, hs, enumerate_vertices_raw(p.dim, hs));
}

inline double volume(const ConvexBody& body)
{
    return std::visit(overloaded{
                          [&](const Ball& b) { return unit_ball_volume(body.dim()) * std::pow(b.radius, body.dim()); },
                          [](const HPolytope& p) {
                              require(is_bounded(p), ErrorCode::unbounded, "polytope is unbounded");
                              return polytope_volume(p);
                          },
                          [](const VPolytope& p) {
                              HPolytope h{p.dim, p.facets};
                              return polytope_volume(h);
                          },
                          [](const Product& p) {
                              double v = 1.0;
                              for (const auto& f : p.factors)
                                  v *= volume(f);
                              return v;
                          },
                          [](const AffineImage& a) { return std::abs(a.matrix.determinant()) * volume(*a.base); },
                      },
                      body.rep());
}

// ---------------------------------------------------------------------------
// polar duality

/// Polar body of a polytope with the origin in its interior.
inline ConvexBody polar_dual(const ConvexBody& body)
{
    require(body.dim() <= 3, ErrorCode::unsupported, "polar duality restricted to dim <= 3");
    if (const auto* h = body.as<HPolytope>()) {
        require(is_bounded(*h), ErrorCode::unbounded, "polytope is unbounded");
        std::vector<Vec> pts;
        for (const auto& u : normalized_unique(h->halfspaces)) {
            require(u.offset > tol::active, ErrorCode::not_interior, "origin is not interior to the polytope");
            pts.push_back(u.normal / u.offset);
        }
        return ConvexBody::vpolytope(std::move(pts));
    }
    if (const auto* v = body.as<VPolytope>()) {
        for (const auto& f : v->facets)
            require(f.offset > tol::active, ErrorCode::not_interior, "origin is not interior to the polytope");
        std::vector<Halfspace> hs;
        for (const auto& p : v->vertices)
            if (p.norm() > 0.0)
                hs.push_back({p, 1.0});
        return ConvexBody::hpolytope(v->dim, std::move(hs));
    }
    throw Error(ErrorCode::unsupported, "polar dual needs a polytope");
}

/// True when both point sets agree as multisets within `tolerance`.
inline bool same_point_set(const std::vector<Vec>& a, const std::vector<Vec>& b, double tolerance = tol::dedup)
{
    if (a.size() != b.size())
        return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& p : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!used[j] && (p - b[j]).norm() <= tolerance) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// support cones

class SupportCone {
public:
    SupportCone(Vec apex, std::vector<Vec> generators) : apex_(std::move(apex)), generators_(std::move(generators)) {}

    const Vec& apex() const noexcept { return apex_; }
    const std::vector<Vec>& generators() const noexcept { return generators_; }

    /// Membership by Caratheodory: d is a nonnegative combination of at most dim
    /// linearly independent generators.
    bool contains(const Vec& d) const
    {
        const int n = static_cast<int>(apex_.size());
        require(d.size() == n, ErrorCode::dimension_mismatch, "direction length");
        if (d.norm() == 0.0)
            return true;
        const int m = static_cast<int>(generators_.size());
        bool found = false;
        for (int k = 1; k <= std::min(n, m) && !found; ++k) {
            for_each_combination(m, k, [&](const std::vector<int>& idx) {
                if (found)
                    return;
                Mat g(n, k);
                for (int j = 0; j < k; ++j)
                    g.col(j) = generators_[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
                Eigen::ColPivHouseholderQR<Mat> qr(g);
                qr.setThreshold(1e-10);
                if (qr.rank() < k)
                    return;
                const Vec c = qr.solve(d);
                if ((g * c - d).norm() > 1e-9 * (1.0 + d.norm()))
                    return;
                if (c.minCoeff() >= -1e-12)
                    found = true;
            });
        }
        return found;
    }

private:
    Vec apex_;
    std::vector<Vec> generators_;
};

inline SupportCone support_cone(const ConvexBody& body, const Vec& vertex)
{
    require(vertex.size() == body.dim(), ErrorCode::dimension_mismatch, "vertex length");
    const auto verts = vertices_of(body);
    const auto it = std::find_if(verts.begin(), verts.end(), [&](const Vec& v) { return (v - vertex).norm() <= tol::dedup; });
    require(it != verts.end(), ErrorCode::not_a_vertex, "point is not a vertex of the polytope");
    std::vector<Vec> gens;
    for (const auto& v : verts)
        if (&v != &*it)
            gens.push_back(v - *it);
    return SupportCone(*it, std::move(gens));
}

// ---------------------------------------------------------------------------
// distance from a point to a body (used for Minkowski-difference membership)

inline double distance_to_polytope(const std::vector<Halfspace>& unit_hs, int dim, const Vec& p)
{
    const bool inside = std::all_of(unit_hs.begin(), unit_hs.end(), [&](const Halfspace& h) { return h.normal.dot(p) <= h.offset; });
    if (inside)
        return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const int m = static_cast<int>(unit_hs.size());
    for (int k = 1; k <= dim; ++k) {
        for_each_combination(m, k, [&](const std::vector<int>& idx) {
            Mat a(k, dim);
            Vec b(k);
            for (int r = 0; r < k; ++r) {
                a.row(r) = unit_hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].normal.transpose();
                b[r] = unit_hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])].offset;
            }
            const auto lam = solve_square(Mat(a * a.transpose()), Vec(a * p - b));
            if (!lam)
                return;
            const Vec y = p - a.transpose() * *lam;
            for (const auto& h : unit_hs)
                if (h.normal.dot(y) > h.offset + tol::active)
                    return;
            best = std::min(best, (p - y).norm());
        });
    }
    return best;
}

inline double distance_to_body(const ConvexBody& body, const Vec& p)
{
    require(p.size() == body.dim(), ErrorCode::dimension_mismatch, "point length");
    if (const auto* b = body.as<Ball>())
        return std::max(0.0, (p - b->center).norm() - b->radius);
    if (body.is_polytope()) {
        const HPolytope h = to_hpolytope(body);
        return distance_to_polytope(normalized_unique(h.halfspaces), h.dim, p);
    }
    throw Error(ErrorCode::unsupported, "distance needs a ball or a polytope");
}

// ---------------------------------------------------------------------------
// the pyramid T(alpha, beta) and its inscribed balls

struct Pyramid {
    double alpha = 1.0;
    double beta = 1.0;
    int dim = 2;

    /// {|x_i| < alpha - (alpha/beta) x_n for i < n, 0 < x_n < beta}
    HPolytope hpolytope() const
    {
        require(alpha > 0.0 && beta > 0.0, ErrorCode::precondition, "pyramid parameters must be positive");
        require(dim >= 2, ErrorCode::dimension_mismatch, "pyramid needs dim >= 2");
        HPolytope p{dim, {}};
        Vec base = Vec::Zero(dim);
        base[dim - 1] = -1.0;
        p.halfspaces.push_back({base, 0.0});
        for (int i = 0; i < dim - 1; ++i) {
            for (double sign : {1.0, -1.0}) {
                Vec a = Vec::Zero(dim);
                a[i] = sign;
                a[dim - 1] = alpha / beta;
                p.halfspaces.push_back({a, alpha});
            }
        }
        return p;
    }

    ConvexBody body() const { return ConvexBody::hpolytope(dim, hpolytope().halfspaces); }

    std::vector<Vec> vertices() const
    {
        std::vector<Vec> out;
        for (std::uint32_t mask = 0; mask < (1u << (dim - 1)); ++mask) {
            Vec v = Vec::Zero(dim);
            for (int i = 0; i < dim - 1; ++i)
                v[i] = (mask >> i) & 1u ? alpha : -alpha;
            out.push_back(v);
        }
        Vec apex = Vec::Zero(dim);
        apex[dim - 1] = beta;
        out.push_back(apex);
        return out;
    }

    /// Radius of the ball centred at height t on the axis that stays inside.
    double axis_ball_radius(double t) const { return alpha / std::sqrt(alpha * alpha + beta * beta) * (beta - t); }
};

/// Exact check that B((0,..,0,t), alpha(beta-t)/sqrt(alpha^2+beta^2)) sits inside T(alpha,beta).
inline bool pyramid_ball_check(double alpha, double beta, double t, int dim = 2)
{
    require(alpha > 0.0 && beta > 0.0, ErrorCode::precondition, "pyramid parameters must be positive");
    require(t > beta / 2.0 && t < beta, ErrorCode::out_of_range, "t must lie in (beta/2, beta)");
    const Pyramid pyr{alpha, beta, dim};
    const double radius = pyr.axis_ball_radius(t);
    Vec c = Vec::Zero(dim);
    c[dim - 1] = t;
    for (const auto& h : pyr.hpolytope().halfspaces) {
        const double dist = (h.offset - h.normal.dot(c)) / h.normal.norm();
        if (dist < radius - 1e-12)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// boundary containment near the unit sphere

/// Axis-aligned box of B(0,1) cap B(s e1, R) in dimension n.
inline Box ball_lens_box(int n, double s, double radius)
{
    Box box{Vec::Zero(n), Vec::Zero(n)};
    const double lo1 = std::max(-1.0, s - radius);
    const double hi1 = std::min(1.0, s + radius);
    double half = 0.0;
    if (0.0 >= lo1 && 0.0 <= hi1 && s * s + 1.0 < radius * radius)
        half = std::max(half, 1.0);
    if (s >= lo1 && s <= hi1 && s * s + radius * radius < 1.0)
        half = std::max(half, radius);
    const double corner_x = (1.0 + s * s - radius * radius) / (2.0 * s);
    if (corner_x >= lo1 && corner_x <= hi1 && std::abs(corner_x) <= 1.0)
        half = std::max(half, std::sqrt(1.0 - corner_x * corner_x));
    box.lo.setConstant(-half);
    box.hi.setConstant(half);
    box.lo[0] = lo1;
    box.hi[0] = hi1;
    return box;
}

/// Samples (2 closedB((1-C eps^2)x, C eps^2) - B(0,1)) cap B(0,1) with x = e1 and
/// counts points outside B(x, eps). Draws are uniform on that intersection.
inline std::size_t disc_containment_check(double c, double eps, std::size_t samples, std::uint64_t seed, int dim = 2)
{
    require(c > 0.0, ErrorCode::precondition, "C must be positive");
    require(eps > 0.0 && eps < 1.0, ErrorCode::out_of_range, "eps must lie in (0,1)");
    require(dim >= 1, ErrorCode::dimension_mismatch, "dimension must be positive");
    const double delta = c * eps * eps;
    const double s = 2.0 * (1.0 - delta);
    const double radius = 2.0 * delta + 1.0;
    const Box box = ball_lens_box(dim, s, radius);
    if (!(box.hi[0] > box.lo[0]))
        return 0;
    const auto counts = map_chunks<std::size_t>(samples, 1u << 14, [&](std::size_t begin, std::size_t end) {
        std::size_t bad = 0;
        Vec z(dim);
        for (std::size_t k = begin; k < end; ++k) {
            SampleStream rng(seed, k);
            for (int attempt = 0; attempt < 100000; ++attempt) {
                for (int i = 0; i < dim; ++i)
                    z[i] = rng.uniform(box.lo[i], box.hi[i]);
                const double r0 = z.squaredNorm();
                z[0] -= s;
                const double r1 = z.squaredNorm();
                z[0] += s;
                if (r0 < 1.0 && r1 < radius * radius)
                    break;
            }
            z[0] -= 1.0;
            if (z.squaredNorm() >= eps * eps)
                ++bad;
        }
        return bad;
    });
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

/// Largest containment constant for boundary discs of the unit sphere, solved in
/// closed form from the lens corner: 4 delta/(2 - delta) = eps^2 with delta = 2 C eps^2.
inline double disc_constant_closed_form(double eps) { return 1.0 / (4.0 + eps * eps); }

// ---------------------------------------------------------------------------
// the linear certificate (I + L - M^T L) rho = e_target

struct CertificateSystem {
    Vec lambda;
    Mat mu;
    Vec rho;
    int target_index = 0;
    double residual = 0.0;
};

inline CertificateSystem solve_certificate(const Vec& lambda, const Mat& mu, int target)
{
    const Eigen::Index k = lambda.size();
    require(k >= 1, ErrorCode::dimension_mismatch, "empty certificate");
    require(mu.rows() == k && mu.cols() == k, ErrorCode::dimension_mismatch, "mu must be k x k");
    require(target >= 0 && target < k, ErrorCode::out_of_range, "target index");
    require(lambda.minCoeff() >= 0.0, ErrorCode::precondition, "lambda must be nonnegative");
    require(mu.minCoeff() > 0.0, ErrorCode::precondition, "mu entries must be positive");
    for (Eigen::Index i = 0; i < k; ++i)
        require(std::abs(mu.row(i).sum() - 1.0) <= 1e-12, ErrorCode::precondition, "mu must be row-stochastic");
    require(static_cast<double>(k) * lambda.maxCoeff() < 1.0, ErrorCode::singular, "k * max lambda >= 1");

    const Mat lam = lambda.asDiagonal();
    const Mat system = Mat::Identity(k, k) + lam - mu.transpose() * lam;
    Vec e = Vec::Zero(k);
    e[target] = 1.0;
    Eigen::FullPivLU<Mat> lu(system);
    require(lu.isInvertible(), ErrorCode::singular, "certificate system is singular");
    CertificateSystem cert{lambda, mu, lu.solve(e), target, 0.0};
    cert.residual = (system * cert.rho - e).lpNorm<Eigen::Infinity>();
    require(cert.residual <= tol::certificate, ErrorCode::singular, "certificate residual too large");
    require(std::abs(cert.rho.sum() - 1.0) <= tol::certificate, ErrorCode::precondition, "certificate weights do not sum to one");
    const bool strict = lambda.minCoeff() > 0.0;
    for (Eigen::Index i = 0; i < k; ++i)
        require(strict ? cert.rho[i] > 0.0 : cert.rho[i] >= -tol::certificate, ErrorCode::precondition, "certificate weight not positive");
    return cert;
}

} // namespace pwlab

#endif // PWLAB_GEOMETRY_HPP

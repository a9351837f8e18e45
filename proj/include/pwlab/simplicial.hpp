#ifndef PWLAB_SIMPLICIAL_HPP
#define PWLAB_SIMPLICIAL_HPP

#include <pwlab/geometry.hpp>
#include <pwlab/random.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace pwlab {

// ---------------------------------------------------------------------------
// combinatorial type

/// Every facet of conv(points) carries exactly dim of the points.
inline bool is_simplicial(const std::vector<Vec>& pts, int dim)
{
    const Hull hull = convex_hull(pts, dim);
    return std::all_of(hull.incidence.begin(), hull.incidence.end(), [&](const auto& inc) { return static_cast<int>(inc.size()) == dim; });
}

/// Number of facets through each vertex.
inline std::vector<int> vertex_facet_counts(const HPolytope& p)
{
    const auto hs = normalized_unique(p.halfspaces);
    std::vector<int> counts;
    for (const auto& v : vertex_enumerate(p)) {
        int c = 0;
        for (const auto& h : hs)
            if (std::abs(h.normal.dot(v) - h.offset) <= tol::active)
                ++c;
        counts.push_back(c);
    }
    return counts;
}

/// Every vertex lies on exactly dim facets.
inline bool is_simple(const HPolytope& p)
{
    const auto counts = vertex_facet_counts(p);
    return std::all_of(counts.begin(), counts.end(), [&](int c) { return c == p.dim; });
}

/// Smallest facet slack of the points against conv(q); positive means strictly inside.
inline double containment_margin(const std::vector<Vec>& points, const std::vector<Vec>& q, int dim)
{
    const Hull hull = convex_hull(q, dim);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& p : points)
        for (const auto& f : hull.facets)
            margin = std::min(margin, f.offset - f.normal.dot(p));
    return margin;
}

inline bool verify_strict_containment(const ConvexBody& p, const std::vector<Vec>& q)
{
    return containment_margin(vertices_of(p), q, p.dim()) > 1e-10;
}

// ---------------------------------------------------------------------------
// the perturbation

struct Perturbation {
    std::vector<Vec> points;     // y_{x_i}
    std::vector<Vec> anchors;    // y_i in P
    Vec lambda;
    Mat mu;                      // y_i = sum_j mu_ij x_j
    int retries = 0;
};

/// Smallest |det| of the edge matrices over all (dim+1)-subsets.
inline double min_simplex_determinant(const std::vector<Vec>& pts, int dim)
{
    double best = std::numeric_limits<double>::infinity();
    for_each_combination(static_cast<int>(pts.size()), dim + 1, [&](const std::vector<int>& idx) {
        Mat e(dim, dim);
        for (int j = 0; j < dim; ++j)
            e.col(j) = pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(j + 1)])] - pts[static_cast<std::size_t>(idx[0])];
        best = std::min(best, std::abs(e.determinant()));
    });
    return best;
}

/// Barycentric weights of y in the vertices: uniform 1/k plus the minimum-norm
/// correction c with sum c_j x_j = y - g and sum c_j = 0.
inline Vec centroid_weights(const std::vector<Vec>& verts, const Vec& y)
{
    const int k = static_cast<int>(verts.size());
    const int n = static_cast<int>(y.size());
    Mat a(n + 1, k);
    Vec g = Vec::Zero(n);
    for (int j = 0; j < k; ++j) {
        a.block(0, j, n, 1) = verts[static_cast<std::size_t>(j)];
        a(n, j) = 1.0;
        g += verts[static_cast<std::size_t>(j)] / k;
    }
    Vec rhs(n + 1);
    rhs << y - g, 0.0;
    Vec w = Vec::Constant(k, 1.0 / k) + a.completeOrthogonalDecomposition().solve(rhs);
    return w / w.sum();
}

/// y_{x_i} = x_i - lambda (y_i - x_i), y_i a jittered centroid with positive weights and
/// lambda = min(1/(2k), eps / (2 max|x_i - g|)) scaled by lambda_scale. Jitter is redrawn
/// until every (dim+1)-subset of the result is affinely independent.
inline Perturbation perturb_vertices(const ConvexBody& p, double eps, std::uint64_t seed, double lambda_scale = 1.0)
{
    const int n = p.dim();
    require(n >= 1 && n <= 3, ErrorCode::unsupported, "the pipeline runs in dimension <= 3");
    require(eps > 0.0, ErrorCode::out_of_range, "eps must be positive");
    require(membership(p, Vec::Zero(n)), ErrorCode::not_interior, "origin must be interior to P");
    const auto verts = vertices_of(p);
    const int k = static_cast<int>(verts.size());
    Vec g = Vec::Zero(n);
    for (const auto& v : verts)
        g += v / k;
    double spread = 0.0;
    for (const auto& v : verts)
        spread = std::max(spread, (v - g).norm());
    const double lam = lambda_scale * std::min(1.0 / (2.0 * k), eps / (2.0 * spread));
    // jitter radius: a tenth of the distance from g to the boundary
    const double room = 0.1 * std::max(0.0, -std::invoke([&] {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& h : normalized_unique(to_hpolytope(p).halfspaces))
            worst = std::max(worst, h.normal.dot(g) - h.offset);
        return worst;
    }));

    Perturbation out;
    out.lambda = Vec::Constant(k, lam);
    out.mu.resize(k, k);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        out.retries = attempt;
        out.points.clear();
        out.anchors.clear();
        bool positive = true;
        for (int i = 0; i < k; ++i) {
            SampleStream rng(seed, static_cast<std::uint64_t>(attempt) * 1024 + static_cast<std::uint64_t>(i));
            Vec dir(n);
            for (int c = 0; c < n; ++c)
                dir[c] = rng.normal();
            const Vec y = g + room * std::pow(rng.uniform(), 1.0 / n) * dir.normalized();
            const Vec w = centroid_weights(verts, y);
            positive = positive && w.minCoeff() > 0.0;
            out.mu.row(i) = w.transpose();
            out.anchors.push_back(y);
            const Vec& x = verts[static_cast<std::size_t>(i)];
            out.points.push_back(x - lam * (y - x));
        }
        if (positive && (k <= n || min_simplex_determinant(out.points, n) > tol::affine))
            return out;
    }
    throw Error(ErrorCode::budget_exceeded, "jitter budget exhausted before general position was reached");
}

// ---------------------------------------------------------------------------
// approximations

struct SimplicialApprox {
    double eps = 0;
    std::vector<Vec> vertices;       // vertices of P
    Perturbation perturbation;
    std::vector<CertificateSystem> certificates;
    double containment_margin = 0;   // min slack of P's vertices against Q
    double max_distance = 0;         // max distance of Q's vertices to P
    bool contains_p = false;
    bool within_eps = false;
    bool simplicial = false;
    double max_reconstruction_error = 0;
};

inline SimplicialApprox simplicial_approx(const ConvexBody& p, double eps, std::uint64_t seed, double lambda_scale = 1.0)
{
    SimplicialApprox a;
    a.eps = eps;
    a.vertices = vertices_of(p);
    a.perturbation = perturb_vertices(p, eps, seed, lambda_scale);
    const auto& q = a.perturbation.points;
    const int n = p.dim();
    a.containment_margin = containment_margin(a.vertices, q, n);
    a.contains_p = a.containment_margin > 1e-10;
    for (const auto& y : q)
        a.max_distance = std::max(a.max_distance, distance_to_body(p, y));
    a.within_eps = a.max_distance <= eps;
    a.simplicial = is_simplicial(q, n);
    for (int t = 0; t < static_cast<int>(a.vertices.size()); ++t) {
        auto cert = solve_certificate(a.perturbation.lambda, a.perturbation.mu, t);
        Vec rebuilt = Vec::Zero(n);
        for (std::size_t i = 0; i < q.size(); ++i)
            rebuilt += cert.rho[static_cast<Eigen::Index>(i)] * q[i];
        a.max_reconstruction_error = std::max(a.max_reconstruction_error, (rebuilt - a.vertices[static_cast<std::size_t>(t)]).norm());
        a.certificates.push_back(std::move(cert));
    }
    return a;
}

struct SimplicialSequence {
    std::vector<SimplicialApprox> approximations;
    std::vector<double> nesting_margins;  // Q_{j+1} inside Q_j
    int halvings = 0;
};

/// Nested Q_eps for decreasing eps. One seed throughout, so each vertex moves along a fixed
/// ray; a nesting failure halves every lambda and retries.
inline SimplicialSequence simplicial_sequence(const ConvexBody& p, std::vector<double> eps_list, std::uint64_t seed = 1)
{
    require(!eps_list.empty(), ErrorCode::precondition, "empty eps list");
    std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
    double scale = 1.0;
    for (int halving = 0; halving < 20; ++halving, scale *= 0.5) {
        SimplicialSequence seq;
        seq.halvings = halving;
        bool nested = true;
        for (double eps : eps_list) {
            seq.approximations.push_back(simplicial_approx(p, eps, seed, scale));
            const auto sz = seq.approximations.size();
            if (sz >= 2) {
                const double m = containment_margin(seq.approximations[sz - 1].perturbation.points,
                                                    seq.approximations[sz - 2].perturbation.points, p.dim());
                seq.nesting_margins.push_back(m);
                nested = nested && m > 1e-10;
            }
        }
        if (nested)
            return seq;
    }
    throw Error(ErrorCode::precondition, "nesting still violated after repeated lambda halving");
}

// ---------------------------------------------------------------------------
// polar duality bridge

struct DualCheck {
    bool q_simplicial = false;
    bool dual_simple = false;
    std::vector<int> facet_counts;  // facets through each vertex of the dual
};

/// Q* of a simplicial Q has every vertex on exactly dim facets.
inline DualCheck dual_pipeline_check(const std::vector<Vec>& q, int dim)
{
    DualCheck out;
    out.q_simplicial = is_simplicial(q, dim);
    const ConvexBody qb = ConvexBody::vpolytope(q);
    require(membership(qb, Vec::Zero(dim)), ErrorCode::not_interior, "origin is not interior after perturbation");
    const HPolytope dual = to_hpolytope(polar_dual(qb));
    out.facet_counts = vertex_facet_counts(dual);
    out.dual_simple = std::all_of(out.facet_counts.begin(), out.facet_counts.end(), [&](int c) { return c == dim; });
    return out;
}

inline DualCheck dual_pipeline_check(const ConvexBody& p, double eps, std::uint64_t seed = 1)
{
    return dual_pipeline_check(perturb_vertices(p, eps, seed).points, p.dim());
}

} // namespace pwlab

#endif // PWLAB_SIMPLICIAL_HPP

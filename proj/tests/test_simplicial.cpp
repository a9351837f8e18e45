#include <gtest/gtest.h>

#include <pwlab/simplicial.hpp>

using namespace pwlab;

namespace {

ConvexBody cube3()
{
    std::vector<Halfspace> hs;
    for (int i = 0; i < 3; ++i)
        for (double s : {1.0, -1.0}) {
            Vec n = Vec::Zero(3);
            n[i] = s;
            hs.push_back({n, 1.0});
        }
    return ConvexBody::hpolytope(3, hs);
}

ConvexBody square2()
{
    return ConvexBody::vpolytope({make_vec({1, 1}), make_vec({-1, 1}), make_vec({-1, -1}), make_vec({1, -1})});
}

// square pyramid shifted so the vertex centroid is the origin
ConvexBody pyramid3()
{
    std::vector<Vec> v{make_vec({1, 1, 0}), make_vec({-1, 1, 0}), make_vec({-1, -1, 0}), make_vec({1, -1, 0}), make_vec({0, 0, 1.5})};
    Vec g = Vec::Zero(3);
    for (const auto& x : v)
        g += x / 5.0;
    for (auto& x : v)
        x -= g;
    return ConvexBody::vpolytope(v);
}

ConvexBody octahedron()
{
    std::vector<Vec> v;
    for (int i = 0; i < 3; ++i)
        for (double s : {1.0, -1.0}) {
            Vec e = Vec::Zero(3);
            e[i] = s;
            v.push_back(e);
        }
    return ConvexBody::vpolytope(v);
}

} // namespace

TEST(Simplicial, TypePredicates)
{
    EXPECT_FALSE(is_simplicial(vertices_of(cube3()), 3));
    EXPECT_TRUE(is_simplicial(vertices_of(octahedron()), 3));
    EXPECT_TRUE(is_simplicial(vertices_of(square2()), 2));
    EXPECT_TRUE(is_simple(to_hpolytope(cube3())));
    EXPECT_FALSE(is_simple(to_hpolytope(octahedron())));
    EXPECT_FALSE(is_simple(to_hpolytope(pyramid3())));  // apex on four facets
}

TEST(Simplicial, PerturbationInvariants)
{
    for (const auto& body : {square2(), cube3(), pyramid3(), octahedron()}) {
        for (double eps : {0.3, 0.05, 1e-3}) {
            const auto a = simplicial_approx(body, eps, 5);
            EXPECT_TRUE(a.contains_p) << "margin " << a.containment_margin;
            EXPECT_TRUE(a.within_eps) << a.max_distance << " vs " << eps;
            EXPECT_TRUE(a.simplicial);
            EXPECT_LE(a.max_reconstruction_error, 1e-8);
            const auto& pert = a.perturbation;
            EXPECT_GT(pert.mu.minCoeff(), 0.0);
            for (int i = 0; i < pert.mu.rows(); ++i) {
                EXPECT_NEAR(pert.mu.row(i).sum(), 1.0, 1e-12);
                Vec y = Vec::Zero(body.dim());
                for (int j = 0; j < pert.mu.cols(); ++j)
                    y += pert.mu(i, j) * a.vertices[static_cast<std::size_t>(j)];
                EXPECT_NEAR((y - pert.anchors[static_cast<std::size_t>(i)]).norm(), 0.0, 1e-12);
            }
            for (const auto& c : a.certificates) {
                EXPECT_GT(c.rho.minCoeff(), 0.0);
                EXPECT_NEAR(c.rho.sum(), 1.0, 1e-10);
            }
        }
    }
}

TEST(Simplicial, Determinism)
{
    const auto a = perturb_vertices(cube3(), 0.1, 17);
    const auto b = perturb_vertices(cube3(), 0.1, 17);
    for (std::size_t i = 0; i < a.points.size(); ++i)
        EXPECT_EQ(a.points[i], b.points[i]);
    const auto c = perturb_vertices(cube3(), 0.1, 18);
    EXPECT_NE(a.points[0], c.points[0]);
}

TEST(Simplicial, NestedSequence)
{
    for (const auto& body : {cube3(), pyramid3()}) {
        const auto seq = simplicial_sequence(body, {0.01, 0.2, 0.05, 0.1});
        ASSERT_EQ(seq.approximations.size(), 4u);
        EXPECT_DOUBLE_EQ(seq.approximations.front().eps, 0.2);
        EXPECT_EQ(seq.nesting_margins.size(), 3u);
        for (double m : seq.nesting_margins)
            EXPECT_GT(m, 1e-10);
        for (const auto& a : seq.approximations)
            EXPECT_TRUE(a.contains_p && a.within_eps && a.simplicial);
    }
}

TEST(Simplicial, Preconditions)
{
    const auto shifted = ConvexBody::vpolytope({make_vec({1, 1}), make_vec({2, 1}), make_vec({1, 2})});
    EXPECT_THROW(perturb_vertices(shifted, 0.1, 1), Error);
    EXPECT_THROW(perturb_vertices(square2(), 0.0, 1), Error);
    EXPECT_THROW(simplicial_sequence(square2(), {}), Error);
    // containment fails when Q is P itself
    EXPECT_FALSE(verify_strict_containment(square2(), vertices_of(square2())));
}

TEST(Duality, SimplicialToSimple)
{
    for (const auto& body : {cube3(), pyramid3(), octahedron(), square2()}) {
        const auto d = dual_pipeline_check(body, 0.05, 3);
        EXPECT_TRUE(d.q_simplicial);
        EXPECT_TRUE(d.dual_simple);
        EXPECT_FALSE(d.facet_counts.empty());
    }
    // the simplex is both; the cube dualizes to the octahedron which is not simple
    const auto cube_dual = to_hpolytope(polar_dual(cube3()));
    EXPECT_FALSE(is_simple(cube_dual));
    const auto tet = ConvexBody::vpolytope({make_vec({1, 1, 1}), make_vec({1, -1, -1}), make_vec({-1, 1, -1}), make_vec({-1, -1, 1})});
    EXPECT_TRUE(is_simplicial(vertices_of(tet), 3));
    EXPECT_TRUE(is_simple(to_hpolytope(polar_dual(tet))));
}

TEST(Duality, InvolutionOnRandomTriangles)
{
    for (std::uint64_t k = 0; k < 50; ++k) {
        SampleStream rng(8, k);
        std::vector<Vec> v;
        for (int i = 0; i < 3; ++i) {
            const double ang = 2 * pi * (i + rng.uniform(-0.3, 0.3)) / 3.0;
            const double r = rng.uniform(0.5, 2.0);
            v.push_back(make_vec({r * std::cos(ang), r * std::sin(ang)}));
        }
        const auto t = ConvexBody::vpolytope(v);
        if (!membership(t, Vec::Zero(2)))
            continue;
        EXPECT_TRUE(same_point_set(vertices_of(polar_dual(polar_dual(t))), v, 1e-9));
    }
}

#include "sphereproj/pointsets.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sphereproj;

namespace {

const double pi = std::numbers::pi;
const SpherePoint north{0.0, 0.0, 1.0}, south{0.0, 0.0, -1.0};

struct Band {
    double lo = 1e300, hi = 0.0;
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double spread() const { return hi / lo; }
};

} // namespace

TEST(Spiral, EndpointsAndNorms) {
    const auto two = spiral_points(2);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two.points[0], south);
    EXPECT_EQ(two.points[1], north);
    EXPECT_EQ(two.label, "spiral-2");

    const auto s = spiral_points(1001);
    EXPECT_EQ(s.points.front(), south);
    EXPECT_EQ(s.points.back(), north);
    for (const auto& p : s.points) {
        double r = 0.0;
        for (double c : p.coords()) r += c * c;
        EXPECT_NEAR(r, 1.0, 1e-12);
    }
    EXPECT_THROW(spiral_points(1), DomainError);
}

TEST(Spiral, QuasiUniformSeparation) {
    Band b;
    for (std::size_t M : {500u, 2000u, 8000u}) b.add(separation(spiral_points(M).points) * std::sqrt(M));
    EXPECT_LE(b.spread(), 1.5) << b.lo << " " << b.hi;
}

TEST(MeshNorm, Examples) {
    const auto s = spiral_points(300);
    EXPECT_EQ(mesh_norm(s.points, EvaluationSet({s.points[4], s.points[100]}, "subset")), 0.0);
    EXPECT_DOUBLE_EQ(mesh_norm(std::vector{north}, EvaluationSet({south}, "s")), pi);
    EXPECT_NEAR(mesh_norm(std::vector{north, south}, EvaluationSet({SpherePoint({1.0, 0.0, 0.0})}, "e")), pi / 2,
                1e-15);
    EXPECT_THROW(mesh_norm(std::vector<SpherePoint>{}, s), DomainError);
}

TEST(MeshNorm, DecreasesWhenEvalShrinks) {
    const auto nodes = tensor_gl_rule(8).nodes();
    const auto big = spiral_points(4000);
    const EvaluationSet small(std::vector(big.points.begin(), big.points.begin() + 1000), "head");
    EXPECT_LE(mesh_norm(nodes, small), mesh_norm(nodes, big));
}

TEST(Separation, Examples) {
    EXPECT_DOUBLE_EQ(separation(std::vector{north, south}), pi);
    EXPECT_EQ(separation(std::vector{north, SpherePoint({1.0, 0.0, 0.0}), north}), 0.0);
    EXPECT_THROW(separation(std::vector{north}), DomainError);
}

TEST(Separation, SweepMatchesAllPairs) {
    for (std::size_t M : {50u, 777u, 3001u}) {
        const auto pts = spiral_points(M).points;
        EXPECT_EQ(separation(pts, 0), separation(pts, M)) << M;
    }
    for (int n : {3, 12, 25}) {
        const auto pts = tensor_gl_rule(n).nodes();
        EXPECT_EQ(separation(pts, 0), separation(pts, pts.size())) << n;
    }
    Rng rng(21);
    std::vector<SpherePoint> random;
    for (int i = 0; i < 1500; ++i) random.push_back(random_sphere_point(rng));
    random.push_back(random[77]);
    EXPECT_EQ(separation(random, 0), 0.0);
    random.pop_back();
    EXPECT_EQ(separation(random, 0), separation(random, random.size()));
}

TEST(TensorNodes, MeshNormAndSeparationScaling) {
    Band delta, gamma;
    double first_ratio = 0.0, last_ratio = 0.0;
    for (int n = 5; n <= 50; n += 5) {
        const auto rule = tensor_gl_rule(n);
        const auto eval = spiral_points(16 * rule.size());
        const auto s = mesh_stats(rule.nodes(), eval);
        EXPECT_LE(s.separation, 2 * s.mesh_norm);
        delta.add(s.mesh_norm * n);
        gamma.add(s.separation * n * n);
        if (n == 5) first_ratio = s.mesh_ratio;
        last_ratio = s.mesh_ratio;
    }
    EXPECT_LE(delta.spread(), 1.6);
    EXPECT_LE(gamma.spread(), 1.6);
    EXPECT_GE(last_ratio, 2 * first_ratio);
}

TEST(CapCount, Examples) {
    EXPECT_EQ(cap_count_certificate(std::vector{north}, 3, EvaluationSet({north}, "n")), 1u);
    EXPECT_EQ(cap_count(std::vector{north}, 0.0, std::vector{north}), 1u);
    const auto s = spiral_points(100).points;
    EXPECT_EQ(cap_count(s, 0.0, s), 1u);
    EXPECT_EQ(cap_count(s, pi, std::vector{north}), 100u);
    EXPECT_THROW(cap_count_certificate(s, 0, spiral_points(10)), DomainError);
}

TEST(CapCount, SpiralBoundedTensorGrows) {
    std::size_t spiral_max = 0, tensor_prev = 0, tensor10 = 0, tensor40 = 0;
    for (int n = 10; n <= 40; n += 10) {
        const auto rule = tensor_gl_rule(n);
        const auto eval = spiral_points(4 * rule.size());
        const auto spiral = spiral_points(rule.size()).points;
        spiral_max = std::max(spiral_max, cap_count_certificate(spiral, n, eval));
        const auto t = cap_count_certificate(rule.nodes(), n, eval);
        EXPECT_GT(t, tensor_prev) << n;
        tensor_prev = t;
        if (n == 10) tensor10 = t;
        if (n == 40) tensor40 = t;
    }
    EXPECT_LE(spiral_max, 12u);
    EXPECT_GE(tensor40, 2 * tensor10);
}

TEST(WeightRatio, Examples) {
    EXPECT_DOUBLE_EQ(weight_ratio_certificate(std::vector{4.0, 1.0}), 4.0);
    EXPECT_DOUBLE_EQ(weight_ratio_certificate(std::vector{1.0, 4.0}), 4.0);
    EXPECT_DOUBLE_EQ(weight_ratio_certificate(std::vector(10, 0.3)), 1.0);
    EXPECT_THROW(weight_ratio_certificate(std::vector{1.0, 0.0}), InvariantViolation);
    EXPECT_THROW(weight_ratio_certificate(std::vector{1.0, -2.0}), InvariantViolation);
    Band b;
    for (int n = 5; n <= 50; n += 5) {
        const double r = weight_ratio_certificate(tensor_gl_rule(n));
        EXPECT_LE(r, 4.0) << n;
        b.add(r);
    }
    EXPECT_LE(b.spread(), 2.0);
}

TEST(MeshStats, CsvAndFields) {
    const auto s = mesh_stats(std::vector{north, south}, EvaluationSet({SpherePoint({1.0, 0.0, 0.0})}, "e"));
    EXPECT_EQ(s.N, 2u);
    EXPECT_NEAR(s.mesh_ratio, 0.5, 1e-15);
    EXPECT_EQ(s.eval_size, 1u);
    EXPECT_EQ(std::string(MeshStats::csv_header), "N,delta,gamma,ratio,eval_size");

    const auto rule = tensor_gl_rule(10);
    const auto cert = certify(rule, 10, spiral_points(4 * rule.size()));
    EXPECT_GE(cert.cap_count_sup, 1u);
    EXPECT_GE(cert.weight_ratio_max, 1.0);
    EXPECT_EQ(cert.csv_row().rfind("10,242,", 0), 0u) << cert.csv_row();
}

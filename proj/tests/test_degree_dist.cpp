#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cpldpc/degree_dist.hpp"
#include "cpldpc/rng.hpp"

using namespace cpldpc;

namespace {

DegreeDistribution random_distribution(Rng& rng, int max_degree = 12) {
    std::vector<double> c(static_cast<std::size_t>(max_degree), 0.0);
    const int terms = 1 + static_cast<int>(rng.below(4));
    double sum = 0.0;
    for (int t = 0; t < terms; ++t) {
        const std::size_t d = rng.below(static_cast<std::uint64_t>(max_degree));
        const double w = 0.05 + rng.real();
        c[d] += w;
        sum += w;
    }
    for (double& w : c) w /= sum;
    return DegreeDistribution(c);
}

// Simpson quadrature of eval over [0, x], independent integration route.
double integral_of_eval(const DegreeDistribution& d, double x, int panels = 4000) {
    const double h = x / panels;
    double acc = d.eval(0.0) + d.eval(x);
    for (int i = 1; i < panels; ++i) acc += d.eval(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("eval matches the generating polynomial") {
    const auto x2 = DegreeDistribution::regular(3);  // lambda(x) = x^2
    CHECK(x2.eval(1.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(x2.eval(0.0) == 0.0);
    const DegreeDistribution mixed({0.5, 0.5});  // 0.5 + 0.5 x
    CHECK(mixed.eval(0.5) == Catch::Approx(0.75).margin(1e-15));
    CHECK_THROWS_AS(x2.eval(1.5), config_error);
    CHECK_THROWS_AS(x2.eval(-0.1), config_error);
}

TEST_CASE("derivative_at power rule and linear cases") {
    const auto x5 = DegreeDistribution::regular(6);  // rho(x) = x^5
    CHECK(x5.derivative_at(1.0) == Catch::Approx(5.0).margin(1e-12));
    const auto x2 = DegreeDistribution::regular(3);
    CHECK(x2.derivative_at(0.0) == 0.0);
    const DegreeDistribution mixed({0.5, 0.5});
    CHECK(mixed.derivative_at(0.0) == Catch::Approx(0.5).margin(1e-15));
    CHECK(mixed.derivative_at(0.73) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("derivative agrees with central finite differences") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = random_distribution(rng);
        for (double x = 0.01; x < 0.995; x += 0.07) {
            const double h = 1e-6;
            const double fd = (d.eval(x + h) - d.eval(x - h)) / (2.0 * h);
            CHECK(d.derivative_at(x) == Catch::Approx(fd).margin(1e-6));
        }
    }
}

TEST_CASE("node_perspective is the normalized integral") {
    const auto edge_x2 = DegreeDistribution::regular(3);
    const auto node = edge_x2.node_perspective();  // x^3
    CHECK(node.eval(0.5) == Catch::Approx(0.125).margin(1e-15));
    CHECK(node.eval(1.0) == Catch::Approx(1.0).margin(1e-13));

    const auto edge_x = DegreeDistribution::regular(2);
    CHECK(edge_x.node_perspective().eval(0.7) == Catch::Approx(0.49).margin(1e-15));

    // 0.5 + 0.5x -> (0.5x + 0.25x^2) / 0.75, cross-checked by quadrature.
    const DegreeDistribution mixed({0.5, 0.5});
    const auto nodem = mixed.node_perspective();
    for (double x = 0.0; x <= 1.0; x += 0.125) {
        const double expected = (0.5 * x + 0.25 * x * x) / 0.75;
        CHECK(nodem.eval(x) == Catch::Approx(expected).margin(1e-12));
        const double quad = integral_of_eval(mixed, 1.0) > 0.0
                                ? integral_of_eval(mixed, x) / integral_of_eval(mixed, 1.0)
                                : 0.0;
        CHECK(nodem.eval(x) == Catch::Approx(quad).margin(1e-9));
    }
}

TEST_CASE("node_perspective output is normalized for random inputs") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = random_distribution(rng);
        CHECK(d.eval(1.0) == Catch::Approx(1.0).margin(1e-12));
        CHECK(d.node_perspective().eval(1.0) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("average_degree closed forms") {
    CHECK(DegreeDistribution::regular(6).average_degree() == 6.0);
    CHECK(DegreeDistribution::regular(3).average_degree() == 3.0);
    // 0.5x + 0.5x^2: 1 / (0.5/2 + 0.5/3) = 2.4
    const DegreeDistribution mixed({0.0, 0.5, 0.5});
    CHECK(mixed.average_degree() == Catch::Approx(2.4).margin(1e-12));
}

TEST_CASE("regular distributions have exactly integral average degree") {
    for (int k = 1; k <= 100; ++k)
        CHECK(DegreeDistribution::regular(k).average_degree() == static_cast<double>(k));
}

TEST_CASE("design_rate standard pairs") {
    const auto l3 = DegreeDistribution::regular(3);
    const auto r6 = DegreeDistribution::regular(6);
    CHECK(design_rate(l3, r6) == Catch::Approx(0.5).margin(1e-15));
    CHECK(design_rate(DegreeDistribution::regular(2), DegreeDistribution::regular(4)) ==
          Catch::Approx(0.5).margin(1e-15));
    CHECK(design_rate(l3, DegreeDistribution::regular(9)) ==
          Catch::Approx(2.0 / 3.0).margin(1e-15));
    CHECK_THROWS_AS(design_rate(r6, l3), config_error);  // negative rate
}

TEST_CASE("construction validates and renormalizes") {
    CHECK_THROWS_AS(DegreeDistribution({-0.1, 1.1}), config_error);
    CHECK_THROWS_AS(DegreeDistribution({0.0, 0.0}), config_error);
    CHECK_THROWS_AS(DegreeDistribution({0.4, 0.4}), config_error);  // sums to 0.8
    CHECK_THROWS_AS(DegreeDistribution(std::vector<double>(101, 0.0)), config_error);

    // A small drift is silently renormalized.
    const DegreeDistribution drift({0.5 + 4e-10, 0.5});
    CHECK(drift.eval(1.0) == Catch::Approx(1.0).margin(1e-12));

    const auto from_map = DegreeDistribution::from_map({{3, 1.0}});
    CHECK(from_map == DegreeDistribution::regular(3));
    CHECK_THROWS_AS(DegreeDistribution::from_map({{0, 1.0}}), config_error);
    CHECK_THROWS_AS(DegreeDistribution::from_map({{101, 1.0}}), config_error);
}

#include <doctest.h>

#include "czlab/decomp.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace czlab;

namespace {

GridFunction indicator(const Grid& g, double a, double b, double value = 1.0) {
    return sample_function(g, [a, b, value](double x, double) {
        return x >= a && x < b ? value : 0.0;
    });
}

void check_reconstruction(const GridFunction& phi, const GridFunction& good,
                          const std::vector<BadPart>& parts) {
    double scale = 0.0;
    for (double v : phi.values) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
        double sum = good.values[i];
        for (const auto& b : parts) sum += b.part.values[i];
        CHECK(std::fabs(sum - phi.values[i]) <= 1e-12 * std::max(scale, 1.0));
    }
}

} // namespace

TEST_CASE("cz_decompose: zero input") {
    Grid g(1, 2.0, 16);
    WeightedMeasure leb = WeightedMeasure::lebesgue(g);
    auto d = cz_decompose(GridFunction(g, 0.0), leb, 1.0);
    CHECK(d.bad_parts.empty());
    for (double v : d.good.values) CHECK(v == 0.0);
    CHECK(d.all_pass());
}

TEST_CASE("cz_decompose: hand-executed stopping time") {
    Grid g(1, 2.0, 16);
    WeightedMeasure leb = WeightedMeasure::lebesgue(g);
    GridFunction phi = indicator(g, 0.0, 0.5, 2.0);
    auto d = cz_decompose(phi, leb, 0.5);

    REQUIRE(d.bad_parts.size() == 1);
    Cube q = d.bad_parts[0].cube.to_cube(g);
    CHECK(q.center[0] == doctest::Approx(0.5));
    CHECK(q.side == doctest::Approx(1.0));

    // b = +1 on [0, 1/2), -1 on [1/2, 1); g = 1 on [0,1)
    for (int i = 0; i < 16; ++i) {
        double x = g.axis_center(i);
        double b = d.bad_parts[0].part.values[i];
        double good = d.good.values[i];
        if (x > 0.0 && x < 0.5) {
            CHECK(b == doctest::Approx(1.0));
            CHECK(good == doctest::Approx(1.0));
        } else if (x > 0.5 && x < 1.0) {
            CHECK(b == doctest::Approx(-1.0));
            CHECK(good == doctest::Approx(1.0));
        } else {
            CHECK(b == 0.0);
            CHECK(good == 0.0);
        }
    }
    CHECK(d.all_pass());
    // ||g||_inf = 1 meets the dyadic bound 2^n [nu] height = 2*1*0.5 with equality
    CHECK(d.properties[0].achieved == doctest::Approx(1.0));
    CHECK(d.properties[0].bound == doctest::Approx(1.0));
    check_reconstruction(phi, d.good, d.bad_parts);
}

TEST_CASE("cz_decompose: flat indicator gives a vanishing bad part") {
    Grid g(1, 2.0, 16);
    WeightedMeasure leb = WeightedMeasure::lebesgue(g);
    GridFunction phi = indicator(g, 0.0, 1.0);
    auto d = cz_decompose(phi, leb, 0.5);
    REQUIRE(d.bad_parts.size() == 1);
    CHECK(d.bad_parts[0].cube.to_cube(g).side == doctest::Approx(1.0));
    for (double v : d.bad_parts[0].part.values) CHECK(std::fabs(v) <= 1e-14);
    for (int i = 0; i < 16; ++i)
        CHECK(d.good.values[i] == doctest::Approx(phi.values[i]));
    CHECK(d.all_pass());
}

TEST_CASE("cz_decompose: root rejection when the height is unreachable") {
    Grid g(1, 1.0, 16);
    WeightedMeasure leb = WeightedMeasure::lebesgue(g);
    GridFunction phi = indicator(g, -1.0, 1.0);
    // box average of |phi| is 1, so height 0.1 admits no root
    CHECK_THROWS_AS(cz_decompose(phi, leb, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(cz_decompose(phi, leb, 0.0), std::invalid_argument);
}

TEST_CASE("cz_decompose: randomized property suite") {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> hdist(1.1, 4.0);
    for (int trial = 0; trial < 25; ++trial) {
        Grid g(1, 2.0, 128);
        GridFunction phi(g, 0.0);
        auto vals = oracle::random_values(64, 3100 + trial);
        for (int i = 0; i < 64; ++i) phi.values[32 + i] = vals[i];
        WeightedMeasure nu(
            GridFunction(g, oracle::random_values(128, 3600 + trial, 0.2, 2.0)));
        double l1 = lp_norm(phi, nu, 1.0);
        double total = integrate(GridFunction(g, 1.0), nu);
        double height = hdist(rng) * l1 / total;
        auto d = cz_decompose(phi, nu, height);
        CHECK(d.all_pass());
        check_reconstruction(phi, d.good, d.bad_parts);
    }
    // a 2D case
    Grid g2(2, 1.0, 32);
    GridFunction phi2(g2, 0.0);
    for (int iy = 8; iy < 24; ++iy)
        for (int ix = 8; ix < 24; ++ix)
            phi2.values[g2.flat_index(ix, iy)] = 1.0 + 0.5 * ((ix + iy) % 3);
    WeightedMeasure nu2(GridFunction(g2, oracle::random_values(1024, 4141, 0.3, 2.0)));
    double l1 = lp_norm(phi2, nu2, 1.0);
    double total = integrate(GridFunction(g2, 1.0), nu2);
    auto d2 = cz_decompose(phi2, nu2, 2.0 * l1 / total);
    CHECK(d2.all_pass());
    check_reconstruction(phi2, d2.good, d2.bad_parts);
}

TEST_CASE("ntv_decompose: zero input and non-triviality rejection") {
    Grid g(1, 4.0, 64);
    WeightedMeasure leb = WeightedMeasure::lebesgue(g);
    auto d = ntv_decompose(GridFunction(g, 0.0), leb, 0.5, 1);
    CHECK(d.omega.empty());
    CHECK(d.bad_parts.empty());
    for (double v : d.good.values) CHECK(v == 0.0);

    // nu(box) = 8 <= t^{-1} for t = 0.1
    GridFunction phi = indicator(g, 0.0, 1.0);
    CHECK_THROWS_AS(ntv_decompose(phi, leb, 0.1, 1), std::invalid_argument);
    GridFunction neg(g, -1.0);
    CHECK_THROWS_AS(ntv_decompose(neg, leb, 0.5, 1), std::invalid_argument);
}

TEST_CASE("ntv_decompose: indicator level set matches the hand computation") {
    Grid g(1, 4.0, 512);
    WeightedMeasure leb = WeightedMeasure::lebesgue(g);
    GridFunction phi = indicator(g, 0.0, 1.0);
    auto d = ntv_decompose(phi, leb, 0.5, 1);  // t^{1/m} = 1/2

    // Omega = {M 1_{[0,1)} > 1/2} = (-1, 2)
    double h = g.cell_width();
    double lo = 4.0, hi = -4.0;
    for (int i = 0; i < 512; ++i)
        if (d.omega.member[i]) {
            lo = std::min(lo, g.axis_left(i));
            hi = std::max(hi, g.axis_left(i) + h);
        }
    CHECK(lo == doctest::Approx(-1.0).epsilon(2.0 * h));
    CHECK(hi == doctest::Approx(2.0).epsilon(2.0 * h));
    double omega_nu = 0.0;
    for (int i = 0; i < 512; ++i)
        if (d.omega.member[i]) omega_nu += h;
    CHECK(omega_nu == doctest::Approx(3.0).epsilon(0.01));

    CHECK(d.all_pass());
    check_reconstruction(phi, d.good, d.bad_parts);

    // property (1) is exact: max g <= t^{1/m}
    double gmax = 0.0;
    for (double v : d.good.values) gmax = std::max(gmax, v);
    CHECK(gmax <= 0.5);

    // E-cubes: measure identity and containment
    REQUIRE(d.e_cubes.size() == d.bad_parts.size());
    for (std::size_t j = 0; j < d.e_cubes.size(); ++j) {
        const Cube& e = d.e_cubes[j];
        Cube q = d.bad_parts[j].cube.to_cube(g);
        CHECK(e.side <= q.side * (1.0 + 1e-12));
        CHECK(e.center[0] == doctest::Approx(q.center[0]));
    }
}

TEST_CASE("ntv_decompose: randomized property suite with weights") {
    for (int trial = 0; trial < 10; ++trial) {
        Grid g(1, 4.0, 256);
        GridFunction phi(g, 0.0);
        auto vals = oracle::random_values(64, 5100 + trial, 0.0, 2.0);
        for (int i = 0; i < 64; ++i) phi.values[96 + i] = vals[i];
        WeightedMeasure nu(
            GridFunction(g, oracle::random_values(256, 5600 + trial, 0.3, 2.0)));
        double l1 = lp_norm(phi, nu, 1.0);
        double total = integrate(GridFunction(g, 1.0), nu);
        double t_root = 4.0 * l1 / total;
        auto d = ntv_decompose(phi, nu, t_root * t_root, 2);
        CHECK(d.all_pass());
        check_reconstruction(phi, d.good, d.bad_parts);
        for (std::size_t j = 0; j < d.e_cubes.size(); ++j) {
            const Cube& e = d.e_cubes[j];
            if (e.side == 0.0) continue;
            double target = 0.0;
            {
                const auto& b = d.bad_parts[j];
                double vol = g.cell_volume();
                for (int dx = 0; dx < b.cube.len; ++dx) {
                    std::size_t idx = g.flat_index(b.cube.lo[0] + dx, 0);
                    target += std::fabs(b.part.values[idx]) * nu.density.values[idx] * vol;
                }
                target *= std::pow(17.0, -1.0) / d.nu_a1 / d.t_root;
            }
            CHECK(cube_measure(e, nu) == doctest::Approx(target).epsilon(1e-8));
        }
    }
}

TEST_CASE("ntv_decompose in 2D uses the all-squares family") {
    Grid g(2, 2.0, 32);
    GridFunction phi(g, 0.0);
    for (int iy = 12; iy < 20; ++iy)
        for (int ix = 12; ix < 20; ++ix) phi.values[g.flat_index(ix, iy)] = 2.0;
    WeightedMeasure nu(GridFunction(g, oracle::random_values(1024, 808, 0.4, 1.6)));
    double l1 = lp_norm(phi, nu, 1.0);
    double total = integrate(GridFunction(g, 1.0), nu);
    double t_root = 4.0 * l1 / total;
    auto d = ntv_decompose(phi, nu, t_root * t_root, 2);
    CHECK(d.family.kind == FamilyKind::AllSquares2D);
    CHECK(d.all_pass());
    check_reconstruction(phi, d.good, d.bad_parts);
}

TEST_CASE("construct_e_cubes: bisection against the fractional measure") {
    // solve cube_measure(Q(1, r), mu) = 0.3 for mu with density sqrt|x|
    Grid g(1, 4.0, 4096);
    WeightedMeasure mu(sample_function(g, [](double x, double) {
        return std::sqrt(std::fabs(x)) + 1e-12;
    }));
    double lo = 0.0, hi = 1.0, target = 0.3;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (cube_measure(Cube{1, {1.0, 0.0}, mid}, mu) < target) lo = mid;
        else hi = mid;
    }
    CHECK(cube_measure(Cube{1, {1.0, 0.0}, hi}, mu) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("decomposition reports serialize") {
    Grid g(1, 2.0, 32);
    WeightedMeasure leb = WeightedMeasure::lebesgue(g);
    GridFunction phi = indicator(g, 0.0, 0.5, 2.0);
    auto cz = cz_decompose(phi, leb, 0.5);
    std::string j = cz.report_json();
    CHECK(j.find("calderon_zygmund") != std::string::npos);
    CHECK(j.find("properties") != std::string::npos);

    auto ntv = ntv_decompose(phi, leb, 0.5, 1);
    std::string j2 = ntv.report_json();
    CHECK(j2.find("nazarov_treil_volberg") != std::string::npos);
    CHECK(j2.find("e_cubes") != std::string::npos);
}

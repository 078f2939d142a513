#include <doctest.h>

#include <cmath>
#include <random>

#include "cst/error.hpp"
#include "cst/geometry.hpp"

using namespace cst;

namespace {

void check_vec(Vec3 a, Vec3 b, double tol = 1e-14) {
    CHECK(std::abs(a.x - b.x) <= tol);
    CHECK(std::abs(a.y - b.y) <= tol);
    CHECK(std::abs(a.z - b.z) <= tol);
}

}  // namespace

TEST_CASE("detector position on the sphere") {
    check_vec(detector_position({0, 0}, 1), {0, 0, 1});
    check_vec(detector_position({0, pi / 2}, 0.125), {0.125, 0, 0});
    check_vec(detector_position({pi / 2, pi / 2}, 1), {0, 1, 0});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const DetectorAngles a{2 * pi * u(rng), pi * u(rng)};
        CHECK(norm(detector_position(a, 0.7)) == doctest::Approx(0.7).epsilon(1e-15));
        const Vec3 axis = detector_rotation(a) * Vec3{0, 0, 1};
        check_vec(axis, (1 / 0.7) * detector_position(a, 0.7));
    }
}

TEST_CASE("rotations are proper and orthogonal") {
    check_vec(rotation_y(pi / 2) * Vec3{0, 0, 1}, {1, 0, 0});
    check_vec(rotation_z(pi / 2) * Vec3{1, 0, 0}, {0, 1, 0});
    const Mat3 id = rotation_z(0);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(id(r, c) == (r == c ? 1.0 : 0.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int i = 0; i < 50; ++i) {
        const Mat3 m = detector_rotation({u(rng), u(rng) / 2});
        const Mat3 g = m.transposed() * m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) CHECK(std::abs(g(r, c) - (r == c ? 1.0 : 0.0)) < 1e-14);
        CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("radial profile") {
    const double w = 3 * pi / 4;
    CHECK(radial_profile(w, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(radial_profile(w, w - pi / 2, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(radial_profile(w, 2 * w - pi, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(radial_profile(w, 2 * w - pi + 1e-3, 1), DomainError);
    CHECK_THROWS_AS(radial_profile(w, -1e-3, 1), DomainError);
    CHECK_THROWS_AS(radial_profile(pi / 3, 0, 1), DomainError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 200; ++i) {
        const double omega = pi / 2 + (pi / 2) * (0.001 + 0.998 * u(rng));
        const double gamma = (2 * omega - pi) * u(rng);
        const double r = radial_profile(omega, gamma, 0.125);
        CHECK(r >= 0.125 * (1 - 1e-15));
        CHECK(r <= 0.125 / std::sin(omega) * (1 + 1e-15));
    }
}

TEST_CASE("torus points in both parametrizations") {
    check_vec(torus_point_omega(3 * pi / 4, {0, 0}, 0, 0, 1), {0, 0, 1});
    check_vec(torus_point_omega(3 * pi / 4, {0, pi / 2}, 0, 0, 1), {1, 0, 0});
    const double R = 0.125;
    CHECK(norm(torus_point_p(2 * R, {0, 0}, 0, 0, R)) == doctest::Approx(R).epsilon(1e-14));
    CHECK(norm(torus_point_p(2 * R, {0, 0}, std::acos(0.5), 0, R)) == doctest::Approx(2 * R).epsilon(1e-14));
    CHECK_THROWS_AS(torus_point_p(R, {0, 0}, 0, 0, R), DomainError);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const double omega = pi / 2 + (pi / 2) * (0.01 + 0.98 * u(rng));
        const double gamma = (2 * omega - pi) * u(rng);
        const double psi = 2 * pi * u(rng);
        const DetectorAngles a{2 * pi * u(rng), pi * u(rng)};
        const Vec3 x = torus_point_omega(omega, a, gamma, psi, R);
        CHECK(norm(x) == doctest::Approx(radial_profile(omega, gamma, R)).epsilon(1e-14));
        const double p = omega_to_p(omega, R);
        const Vec3 y = torus_point_p(p, a, gamma, psi, R);
        CHECK(norm(y) == doctest::Approx(norm(x)).epsilon(1e-12));
        check_vec(x, y, 1e-12);
        // endpoints lie on the detector sphere
        CHECK(norm(torus_point_p(p, a, 0, psi, R)) == doctest::Approx(R).epsilon(1e-14));
        CHECK(norm(torus_point_p(p, a, 2 * std::acos(R / p), psi, R)) == doctest::Approx(R).epsilon(1e-12));
    }
}

TEST_CASE("omega and p conversions") {
    CHECK(omega_to_p(5 * pi / 6, 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(omega_to_p(pi / 2 + 1e-9, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(omega_to_p(pi / 3, 1), DomainError);
    CHECK_THROWS_AS(p_to_omega(0.5, 1), DomainError);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 50; ++i) {
        const double omega = pi / 2 + (pi / 2) * (0.001 + 0.998 * u(rng));
        CHECK(p_to_omega(omega_to_p(omega, 0.125), 0.125) == doctest::Approx(omega).epsilon(1e-12));
    }
}

TEST_CASE("Compton energy") {
    CHECK(compton_energy(0, 200) == doctest::Approx(200));
    CHECK(compton_energy(pi / 2, 511) == doctest::Approx(255.5).epsilon(1e-14));
    CHECK(compton_energy(pi, 511) == doctest::Approx(511.0 / 3).epsilon(1e-14));
}

TEST_CASE("scan configuration invariants") {
    ScanConfig c;
    CHECK_NOTHROW(c.validate());
    ScanConfig bad = c;
    bad.N_alpha = 2 * c.N;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.r_m = 0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.r_M_star = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.N_r = c.N_p + 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.lambda = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    const auto r = radial_nodes(0.125, 3.6, 64);
    REQUIRE(r.size() == 65);
    CHECK(r.front() == 0.125);
    CHECK(r.back() == 3.6);
    const auto p = p_grid(c);
    REQUIRE(p.size() == static_cast<std::size_t>(c.N_p));
    CHECK(p.front() == doctest::Approx(0.125 + (3.6 - 0.125) / 64));
}
